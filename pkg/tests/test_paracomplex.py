"""The pair-swap involution of R^4 and the 4x4 determinant helper."""

import numpy as np
import pytest

from paraffine.jets import Jet3, Jet3Vec4
from paraffine.paracomplex import det4, eigen_embed, swap_pairs, swap_pairs_jet


def test_swap_is_a_traceless_involution():
    rng = np.random.default_rng(10)
    for _ in range(50):
        v = rng.standard_normal(4)
        np.testing.assert_allclose(swap_pairs(swap_pairs(v)), v)
    J = np.column_stack([swap_pairs(e) for e in np.eye(4)])
    assert np.trace(J) == 0.0
    np.testing.assert_allclose(J @ J, np.eye(4))


def test_swap_exchanges_planes():
    np.testing.assert_allclose(swap_pairs(np.array([1.0, 2.0, 3.0, 4.0])), [3.0, 4.0, 1.0, 2.0])


def test_swap_matrix_argument():
    rng = np.random.default_rng(11)
    M = rng.standard_normal((4, 3))
    out = swap_pairs(M)
    for k in range(3):
        np.testing.assert_allclose(out[:, k], swap_pairs(M[:, k]))


def test_eigen_embeddings():
    rng = np.random.default_rng(12)
    for sign in (+1, -1):
        for _ in range(20):
            p = rng.standard_normal(2)
            v = eigen_embed(p, sign)
            np.testing.assert_allclose(swap_pairs(v), sign * v)


def test_swap_jet_matches_vector_swap():
    rng = np.random.default_rng(13)
    v = Jet3Vec4(rng.standard_normal((4, 20)))
    s = swap_pairs_jet(v)
    np.testing.assert_allclose(s.value(), swap_pairs(v.value()))
    np.testing.assert_allclose(s.partial(1, 1, 0), swap_pairs(v.partial(1, 1, 0)))


def test_det4_against_numpy():
    rng = np.random.default_rng(14)
    for _ in range(1000):
        M = rng.uniform(-2, 2, (4, 4))
        assert det4(M[:, 0], M[:, 1], M[:, 2], M[:, 3]) == pytest.approx(
            np.linalg.det(M), rel=1e-9, abs=1e-12
        )


def test_det4_alternating_and_identity():
    e = np.eye(4)
    assert det4(e[0], e[1], e[2], e[3]) == 1.0
    assert det4(e[1], e[0], e[2], e[3]) == -1.0
    assert det4(e[0], e[0], e[2], e[3]) == 0.0


def test_swap_in_two_slots_flips_determinant_sign():
    """det[Jv1, v2, v3, Jv3] = -det[v1, Jv2, v3, Jv3] on arbitrary vectors."""
    rng = np.random.default_rng(15)
    worst = 0.0
    for _ in range(1000):
        v1, v2, v3 = rng.uniform(-2, 2, (3, 4))
        lhs = det4(swap_pairs(v1), v2, v3, swap_pairs(v3))
        rhs = -det4(v1, swap_pairs(v2), v3, swap_pairs(v3))
        scale = max(np.abs([lhs, rhs]).max(), 1.0)
        worst = max(worst, abs(lhs - rhs) / scale)
    assert worst < 1e-12


def test_hyperbolic_frame_volume_reduces_to_curve_data():
    """For f = Jg cosh z - g sinh z (g independent of z),

        det[f_x, f_y, f_z, f] = det[g_x, g_y, g, Jg]

    holds pointwise for arbitrary values of (g, g_x, g_y, z).
    """
    rng = np.random.default_rng(16)
    worst = 0.0
    for _ in range(1000):
        g, gx, gy = rng.uniform(-2, 2, (3, 4))
        z = rng.uniform(-2, 2)
        ch, sh = np.cosh(z), np.sinh(z)
        f = swap_pairs(g) * ch - g * sh
        fx = swap_pairs(gx) * ch - gx * sh
        fy = swap_pairs(gy) * ch - gy * sh
        fz = swap_pairs(g) * sh - g * ch
        lhs = det4(fx, fy, fz, f)
        rhs = det4(gx, gy, g, swap_pairs(g))
        scale = max(abs(rhs), 1.0)
        worst = max(worst, abs(lhs - rhs) / scale)
    assert worst < 1e-10
