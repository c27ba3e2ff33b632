"""Induced almost paracontact structure and its compatibility identities."""

import numpy as np
import pytest

import paraffine as pa
from paraffine.errors import DegenerateD, NotJTangent, ZeroScale, ZNotInD
from paraffine.jets import Jet3, Jet3Vec4
from paraffine.paracontact import (
    _split_distribution,
    induce,
    induce_with_derivatives,
    null_verdict,
    structure_residuals,
    transform_structure,
)
from oracles import fd_field_derivative

from test_jets import jet_of_poly, random_poly


def _axioms(pc, atol=1e-12):
    np.testing.assert_allclose(
        pc.phi @ pc.phi, np.eye(3) - np.outer(pc.xi, pc.eta), atol=atol
    )
    assert pc.eta @ pc.xi == pytest.approx(1.0, abs=atol)
    np.testing.assert_allclose(pc.phi @ pc.xi, 0.0, atol=atol)
    np.testing.assert_allclose(pc.eta @ pc.phi, 0.0, atol=atol)
    # generators span the two eigenplanes inside ker(eta)
    np.testing.assert_allclose(pc.phi @ pc.dplus, pc.dplus, atol=atol)
    np.testing.assert_allclose(pc.phi @ pc.dminus, -pc.dminus, atol=atol)
    assert abs(pc.eta @ pc.dplus) < atol
    assert abs(pc.eta @ pc.dminus) < atol
    assert pc.dplus.max() == pytest.approx(1.0)
    assert pc.dminus.max() == pytest.approx(1.0)


def test_identity_frame_structure():
    """F = Id makes every quantity hand-computable."""
    pc = induce(np.eye(4))
    np.testing.assert_allclose(pc.xi, [0.0, 1.0, 0.0])
    np.testing.assert_allclose(pc.eta, [0.0, 1.0, 0.0])
    np.testing.assert_allclose(pc.phi, [[0, 0, 1], [0, 0, 0], [1, 0, 0]])
    np.testing.assert_allclose(pc.dplus, [1.0, 0.0, 1.0])
    # the raw eigenvector (1, 0, -1) is normalised by its first largest entry
    np.testing.assert_allclose(pc.dminus, [1.0, 0.0, -1.0])
    assert pc.defect == 0.0
    _axioms(pc)


def test_gallery_structures_satisfy_the_axioms(gallery_oracles):
    rng = np.random.default_rng(30)
    for oracle in gallery_oracles.values():
        for _ in range(6):
            p = tuple(rng.uniform(-1, 1, 3))
            data = pa.decompose(*oracle.jet_at(*p), p)
            pc = induce(data.frame)
            assert pc.defect < 1e-12
            _axioms(pc, atol=1e-10)


def test_gallery_null_directions(gallery_oracles):
    expectations = {
        "ex41": (True, False),
        "ex42": (False, True),
        "ex43": (True, True),
        "ex53_f1": (True, False),
        "ex53_f2": (False, True),
    }
    rng = np.random.default_rng(31)
    for name, oracle in gallery_oracles.items():
        p = tuple(rng.uniform(-1, 1, 3))
        data = pa.decompose(*oracle.jet_at(*p), p)
        pc = induce(data.frame)
        nv = null_verdict(pc, data.h)
        assert (nv.dplus_null, nv.dminus_null) == expectations[name]


def test_nonnull_generator_values(gallery_oracles):
    """The non-null eigenplane carries h(v, v) = 1/32 for the reference
    scaling of the generator; our generators are rescaled, so compare the
    intrinsic sign instead and the exact value via the reference field."""
    rng = np.random.default_rng(32)
    for name, key in (("ex53_f1", "Dminus"), ("ex53_f2", "Dplus")):
        oracle = pa.gallery(name)
        for _ in range(5):
            p = tuple(rng.uniform(-1, 1, 3))
            x, y, z = p
            ref = (x * x, 0.25, x) if key == "Dminus" else (0.25, y * y, -y)
            data = pa.decompose(*oracle.jet_at(*p), p)
            v = np.array(ref)
            assert float(v @ data.h @ v) == pytest.approx(1.0 / 32.0, abs=1e-12)


def test_not_j_tangent_raises():
    # a graph immersion with slope in y: J C = (0, 1, 0, 0) sticks out
    X = Jet3.coordinate(0, 0.2)
    Y = Jet3.coordinate(1, 0.1)
    Z = Jet3.coordinate(2, -0.3)
    f_jet = Jet3Vec4.from_components([X, Y, Z, Y * Y])
    c_jet = Jet3Vec4.from_components([Jet3.constant(0.0)] * 3 + [Jet3.constant(1.0)])
    data = pa.decompose(f_jet, c_jet, (0.2, 0.1, -0.3))
    with pytest.raises(NotJTangent) as info:
        induce(data.frame)
    assert info.value.defect > 0.1


def test_induce_rejects_bad_shape():
    with pytest.raises(ValueError):
        induce(np.eye(3))


def test_degenerate_split_requires_nonzero_eta():
    with pytest.raises(DegenerateD):
        _split_distribution(np.zeros(3), np.eye(3))


def test_null_verdict_rejects_zero_metric():
    pc = induce(np.eye(4))
    with pytest.raises(DegenerateD):
        null_verdict(pc, np.zeros((3, 3)))


def test_structure_identities_on_gallery(gallery_oracles):
    rng = np.random.default_rng(33)
    for oracle in gallery_oracles.values():
        for _ in range(5):
            p = tuple(rng.uniform(-1, 1, 3))
            res = structure_residuals(*oracle.jet_at(*p), p)
            assert res.max() < 1e-10


def test_structure_derivatives_match_finite_differences(gallery_oracles):
    rng = np.random.default_rng(34)
    for oracle in gallery_oracles.values():
        p = tuple(rng.uniform(-0.8, 0.8, 3))
        pc, dxi, deta, dphi = induce_with_derivatives(*oracle.jet_at(*p), p)

        def field(attr):
            def fn(x, y, z):
                data = pa.decompose(*oracle.jet_at(x, y, z), (x, y, z))
                return getattr(induce(data.frame), attr)
            return fn

        np.testing.assert_allclose(dxi, fd_field_derivative(field("xi"), p), atol=1e-6)
        np.testing.assert_allclose(deta, fd_field_derivative(field("eta"), p), atol=1e-6)
        np.testing.assert_allclose(dphi, fd_field_derivative(field("phi"), p), atol=1e-6)


# ---------------------------------------------------------------------------
# transversal changes of the structure
# ---------------------------------------------------------------------------


def _collinear(v, w, tol=1e-9):
    return np.linalg.norm(np.cross(v, w)) <= tol * np.linalg.norm(v) * np.linalg.norm(w)


def test_transform_matches_recomputation(gallery_oracles):
    rng = np.random.default_rng(35)
    for oracle in gallery_oracles.values():
        for _ in range(6):
            p = tuple(rng.uniform(-0.9, 0.9, 3))
            data = pa.decompose(*oracle.jet_at(*p), p)
            pc = induce(data.frame)

            scale = float(rng.uniform(0.4, 2.0) * rng.choice([-1.0, 1.0]))
            a, b = rng.uniform(-1.0, 1.0, 2)
            Z = a * pc.dplus + b * pc.dminus

            predicted = transform_structure(pc, scale, Z)

            frame = data.frame.copy()
            frame[:, 3] = scale * frame[:, 3] + frame[:, :3] @ Z
            recomputed = induce(frame)

            np.testing.assert_allclose(predicted.xi, recomputed.xi, atol=1e-10)
            np.testing.assert_allclose(predicted.eta, recomputed.eta, atol=1e-10)
            np.testing.assert_allclose(predicted.phi, recomputed.phi, atol=1e-10)
            # eigenplanes are unchanged as sets: generators stay collinear
            assert _collinear(pc.dplus, recomputed.dplus)
            assert _collinear(pc.dminus, recomputed.dminus)


def test_transform_requires_shift_in_distribution():
    pc = induce(np.eye(4))
    with pytest.raises(ZNotInD):
        transform_structure(pc, 1.0, pc.xi)


def test_transform_rejects_zero_scale():
    pc = induce(np.eye(4))
    with pytest.raises(ZeroScale):
        transform_structure(pc, 0.0, np.zeros(3))


def test_transformed_structure_still_satisfies_axioms():
    rng = np.random.default_rng(36)
    oracle = pa.gallery("ex42")
    p = (0.2, 0.5, -0.1)
    data = pa.decompose(*oracle.jet_at(*p), p)
    pc = induce(data.frame)
    for _ in range(10):
        scale = float(rng.uniform(0.3, 3.0))
        Z = rng.uniform(-1, 1) * pc.dplus + rng.uniform(-1, 1) * pc.dminus
        out = transform_structure(pc, scale, Z)
        np.testing.assert_allclose(
            out.phi @ out.phi, np.eye(3) - np.outer(out.xi, out.eta), atol=1e-12
        )
        assert out.eta @ out.xi == pytest.approx(1.0, abs=1e-12)
        np.testing.assert_allclose(out.phi @ out.xi, 0.0, atol=1e-12)
