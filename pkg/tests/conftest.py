import sys
from pathlib import Path

import pytest

import paraffine as pa

sys.path.insert(0, str(Path(__file__).parent))  # make oracles importable


@pytest.fixture(scope="session")
def gallery_oracles():
    return {name: pa.gallery(name) for name in pa.GALLERY_NAMES}


@pytest.fixture(scope="session")
def gallery_reports(gallery_oracles):
    """Classification reports for every gallery item, shared across tests."""
    return {name: pa.classify(oracle) for name, oracle in gallery_oracles.items()}
