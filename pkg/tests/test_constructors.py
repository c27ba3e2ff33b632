"""Construction of the two immersion families and the built-in gallery."""

import logging

import numpy as np
import pytest

import paraffine as pa
from paraffine.constructors import (
    CentroAffineSpec,
    SphereSpec,
    build_centroaffine,
    build_sphere,
    embed_curve,
    gallery,
    hyperbolic_solution,
    lambda_from_E,
    random_centroaffine_spec,
    random_sphere_spec,
    scaled_transversal,
)
from paraffine.errors import DegenerateCurveData
from paraffine.exprlang import CurveSpec
from paraffine.paracomplex import swap_pairs
from oracles import central_diff, second_diff


# ---------------------------------------------------------------------------
# generating maps, assembled independently with plain numpy
# ---------------------------------------------------------------------------


def _g_ex41(x, y):
    return x * np.array([y, -1.0, y, -1.0]) + np.array([1.0, y, 0.0, 0.0])


def _g_ex42(x, y):
    return y * np.array([x, -1.0, -x, 1.0]) + np.array([1.0, x, 0.0, 0.0])


def _g_ex43(x, y):
    gamma1 = np.array([0.5 - x, 0.5 + x, -(0.5 - x), -(0.5 + x)])
    gamma2 = np.array([x + 0.25, x - 0.25, x + 0.75, x - 0.75])
    return y * gamma1 + gamma2


def _g_ex53_f1(x, y):
    return (
        x * np.array([1.0, y, 1.0, y])
        + 0.25 * np.array([0.0, 1.0, 0.0, 1.0])
        + np.array([np.cos(y), np.sin(y), -np.cos(y), -np.sin(y)])
    )


def _g_ex53_f2(x, y):
    return (
        y * np.array([1.0, x, -1.0, -x])
        + 0.25 * np.array([0.0, 1.0, 0.0, -1.0])
        + np.array([np.cos(x), np.sin(x), np.cos(x), np.sin(x)])
    )


_G_MAPS = {
    "ex41": _g_ex41,
    "ex42": _g_ex42,
    "ex43": _g_ex43,
    "ex53_f1": _g_ex53_f1,
    "ex53_f2": _g_ex53_f2,
}


def test_gallery_matches_reference_assembly(gallery_oracles):
    rng = np.random.default_rng(40)
    for name, oracle in gallery_oracles.items():
        g = _G_MAPS[name]
        for _ in range(10):
            x, y, z = rng.uniform(-1, 1, 3)
            np.testing.assert_allclose(
                oracle.value(x, y, z), hyperbolic_solution(g(x, y), z), atol=1e-13
            )


def test_gallery_transversal_is_scaled_position(gallery_oracles):
    for name, oracle in gallery_oracles.items():
        f_jet, c_jet = oracle.jet_at(0.3, -0.2, 0.5)
        np.testing.assert_allclose(c_jet.c, -oracle.lam * f_jet.c, atol=1e-14)


def test_gallery_names_and_provenance(gallery_oracles):
    assert pa.GALLERY_NAMES == ("ex41", "ex42", "ex43", "ex53_f1", "ex53_f2")
    for name, oracle in gallery_oracles.items():
        assert oracle.provenance["gallery"] == name


def test_unknown_gallery_name():
    with pytest.raises(KeyError) as info:
        gallery("ex99")
    assert "ex41" in str(info.value)


def test_jet_oracle_is_pure(gallery_oracles):
    oracle = gallery_oracles["ex53_f1"]
    a1, c1 = oracle.jet_at(0.1, 0.2, 0.3)
    a2, c2 = oracle.jet_at(0.1, 0.2, 0.3)
    np.testing.assert_array_equal(a1.c, a2.c)
    np.testing.assert_array_equal(c1.c, c2.c)


def test_jets_match_finite_differences_of_values(gallery_oracles):
    rng = np.random.default_rng(41)
    for oracle in gallery_oracles.values():
        p = tuple(rng.uniform(-0.7, 0.7, 3))
        f_jet, _ = oracle.jet_at(*p)
        fn = oracle.value
        for i in range(3):
            e = [0, 0, 0]
            e[i] = 1
            np.testing.assert_allclose(
                f_jet.partial(*e), central_diff(fn, p, i, 1e-4), atol=1e-6
            )
            for j in range(i, 3):
                e2 = list(e)
                e2[j] += 1
                np.testing.assert_allclose(
                    f_jet.partial(*e2), second_diff(fn, p, i, j, 1e-4), atol=1e-5
                )


def test_hyperbolic_flow_solves_the_transport_equation():
    """F(z) = J v cosh z - v sinh z satisfies F' = -J F, F(0) = J v."""
    rng = np.random.default_rng(42)
    worst = 0.0
    for _ in range(300):
        v = rng.uniform(-2, 2, 4)
        z = rng.uniform(-2, 2)
        analytic = swap_pairs(v) * np.sinh(z) - v * np.cosh(z)
        residual = np.abs(analytic + swap_pairs(hyperbolic_solution(v, z))).max()
        worst = max(worst, residual / max(1.0, np.abs(v).max() * np.cosh(z)))
        np.testing.assert_allclose(hyperbolic_solution(v, 0.0), swap_pairs(v), atol=1e-15)
    assert worst < 1e-14


def test_embed_curve_eigenplanes():
    alpha = CurveSpec(["cos(t)", "t^2"])
    for sign in (+1, -1):
        curve = embed_curve(alpha, sign)
        v = curve.eval(0.37)
        np.testing.assert_allclose(swap_pairs(v), sign * v, atol=1e-15)


# ---------------------------------------------------------------------------
# validation and error paths
# ---------------------------------------------------------------------------


def test_centroaffine_rejects_collapsed_curves():
    spec = CentroAffineSpec(
        variant="Dplus", alpha=("t", "-1"), gamma2=("t", "-1", "t", "-1")
    )
    with pytest.raises(DegenerateCurveData) as info:
        build_centroaffine(spec)
    assert "parameter" in str(info.value)


def test_sphere_rejects_vanishing_curve_determinant():
    # a constant alpha has det[alpha, alpha'] identically zero
    spec = SphereSpec(
        variant="Dplus", alpha=("1", "2"), beta=("cos(t)", "sin(t)"), A=("0",), E=0.25
    )
    with pytest.raises(DegenerateCurveData):
        build_sphere(spec)


def test_sphere_rejects_sign_change():
    spec = SphereSpec(
        variant="Dminus", alpha=("1", "t^2"), beta=("cos(t)", "sin(t)"), A=("0",), E=0.25
    )
    with pytest.raises(DegenerateCurveData):
        build_sphere(spec)


def test_bad_variant_and_dimensions():
    with pytest.raises(ValueError):
        build_centroaffine(CentroAffineSpec("D+", ("t", "-1"), ("1", "t", "0", "0")))
    with pytest.raises(ValueError):
        build_centroaffine(CentroAffineSpec("Dplus", ("t",), ("1", "t", "0", "0")))
    with pytest.raises(ValueError):
        build_centroaffine(CentroAffineSpec("Dplus", ("t", "-1"), ("1", "t")))
    with pytest.raises(ValueError):
        build_sphere(SphereSpec("Dplus", ("1", "t"), ("cos(t)", "sin(t)"), ("0",), E=0.0))
    with pytest.raises(ValueError):
        build_sphere(
            SphereSpec("Dplus", ("1", "t"), ("cos(t)", "sin(t)"), ("0",), E=0.25,
                       lambda_sign=2)
        )


def test_lambda_from_E():
    assert lambda_from_E(0.25) == pytest.approx(1.0, rel=1e-14)
    assert lambda_from_E(0.25, -1) == pytest.approx(-1.0, rel=1e-14)
    for E in (0.1, 0.7, 3.0):
        lam = lambda_from_E(E)
        assert abs(lam) ** 5 * (4.0 * E) ** 4 == pytest.approx(1.0, rel=1e-12)


def test_scaled_transversal():
    oracle = gallery("ex41")
    doubled = scaled_transversal(oracle, 2.0)
    _, c0 = oracle.jet_at(0.1, 0.2, 0.3)
    f1, c1 = doubled.jet_at(0.1, 0.2, 0.3)
    np.testing.assert_allclose(c1.c, 2.0 * c0.c)
    np.testing.assert_allclose(f1.c, oracle.jet_at(0.1, 0.2, 0.3)[0].c)
    assert doubled.lam == 2.0 * oracle.lam
    assert doubled.provenance["transversal_scale"] == 2.0
    with pytest.raises(ValueError):
        scaled_transversal(oracle, 0.0)


def test_clip_box():
    spec = CentroAffineSpec(
        "Dplus", ("t", "-1"), ("1", "t", "0", "0"), domain=(-0.5, 0.25)
    )
    oracle = build_centroaffine(spec)
    box = oracle.clip_box(((-1, 1), (-1, 1), (-1, 1)))
    assert box[0] == (-1.0, 1.0)
    assert box[1] == (-0.5, 0.25)
    assert box[2] == (-1.0, 1.0)
    with pytest.raises(ValueError):
        oracle.clip_box(((-1, 1), (0.5, 1.0), (-1, 1)))


# ---------------------------------------------------------------------------
# random spec generators
# ---------------------------------------------------------------------------


def test_random_centroaffine_specs_build(caplog):
    rng = np.random.default_rng(43)
    stats = {}
    with caplog.at_level(logging.INFO, logger="paraffine.constructors"):
        for _ in range(20):
            spec = random_centroaffine_spec(rng, stats)
            oracle = build_centroaffine(spec)
            assert oracle.provenance["det_rel_min"] > 1e-10
            assert np.isfinite(oracle.value(0.1, 0.0, -0.2)).all()
    assert stats["accepted"] == 20
    assert stats["rejected"] >= 0


def test_random_sphere_specs_build():
    rng = np.random.default_rng(44)
    stats = {}
    for _ in range(20):
        spec = random_sphere_spec(rng, stats)
        oracle = build_sphere(spec)
        assert abs(oracle.lam) ** 5 * (4.0 * abs(spec.E)) ** 4 == pytest.approx(1.0, rel=1e-10)
        assert np.isfinite(oracle.value(0.2, -0.1, 0.4)).all()
    assert stats["accepted"] == 20


def test_random_streams_are_reproducible():
    a = random_centroaffine_spec(np.random.default_rng(7))
    b = random_centroaffine_spec(np.random.default_rng(7))
    assert a == b
    c = random_sphere_spec(np.random.default_rng(7))
    d = random_sphere_spec(np.random.default_rng(7))
    assert c == d
