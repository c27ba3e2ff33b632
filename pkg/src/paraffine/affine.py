"""Induced affine structure of a hypersurface immersion with a transversal field.

Given the 3-jet of an immersion f: R^3 -> R^4 and the 2-jet of a transversal
field C along it, the ambient directional derivatives split against the
moving frame [f_x, f_y, f_z, C]:

    d_i d_j f = sum_l Gamma^l_ij f_l + h_ij C          (structure of f)
    d_i C     = -sum_l S^l_i f_l + tau_i C             (structure of C)

Solving these 4x4 linear systems yields the induced connection Gamma, the
second fundamental form h, the shape operator S and the transversal 1-form
tau.  First derivatives of all four are propagated through the same solves
(differentiate F u = r to get F du = dr - dF u), which gives the curvature
tensor, the covariant derivative of h and the residuals of the integrability
equations without any finite differencing.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import SingularFrame, ZeroScale
from .jets import Jet3Vec4
from .paracomplex import det4

# symmetric index pairs in the order used for the second-derivative solves
_PAIRS = ((0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2))
_PAIR_SLOT = {p: k for k, p in enumerate(_PAIRS)}
_PAIR_SLOT.update({(j, i): k for (i, j), k in list(_PAIR_SLOT.items())})

COND_LIMIT = 1e12


@dataclass
class AffineData:
    """Pointwise induced data: metric h, shape operator S, 1-form tau,
    connection coefficients Gamma[i, j, l] (coefficient of d_l in the
    covariant derivative of d_j along d_i), the frame used and its condition
    number, plus the worst relative residual of the frame solves."""

    h: np.ndarray
    S: np.ndarray
    tau: np.ndarray
    Gamma: np.ndarray
    frame: np.ndarray
    cond: float
    solve_residual: float


@dataclass
class DerivedTensors:
    """First-derivative level data at a point.

    nabla_h[i, j, k] is the covariant derivative (nabla_i h)(d_j, d_k);
    R[i, j, k, l] is the coefficient of d_l in R(d_i, d_j) d_k; theta is the
    transversal volume det[f_x, f_y, f_z, C]; omega_h = |det h|^(1/2).  The
    raw coordinate derivatives dh, dGamma, dS, dtau (first index = direction)
    are kept for the integrability residuals and for derivative cross-checks.
    """

    nabla_h: np.ndarray
    R: np.ndarray
    theta: float
    omega_h: float
    dh: np.ndarray
    dGamma: np.ndarray
    dS: np.ndarray
    dtau: np.ndarray


class FundamentalResiduals(NamedTuple):
    gauss: float
    codazzi_h: float
    codazzi_shape: float
    ricci: float

    def max(self) -> float:
        return max(self)


def _basis(i: int) -> tuple[int, int, int]:
    e = [0, 0, 0]
    e[i] = 1
    return tuple(e)


def _multi(*axes: int) -> tuple[int, int, int]:
    m = [0, 0, 0]
    for a in axes:
        m[a] += 1
    return tuple(m)


def _frame_of(f_jet: Jet3Vec4, c_jet: Jet3Vec4) -> np.ndarray:
    F = np.empty((4, 4))
    for i in range(3):
        F[:, i] = f_jet.partial(*_basis(i))
    F[:, 3] = c_jet.value()
    return F


def _frame_partials(f_jet: Jet3Vec4, c_jet: Jet3Vec4) -> np.ndarray:
    dF = np.empty((3, 4, 4))
    for i in range(3):
        for j in range(3):
            dF[i][:, j] = f_jet.partial(*_multi(i, j))
        dF[i][:, 3] = c_jet.partial(*_basis(i))
    return dF


def _checked_frame(F: np.ndarray, point, cond_limit: float) -> float:
    cond = float(np.linalg.cond(F))
    if not np.isfinite(cond) or cond > cond_limit:
        raise SingularFrame(point if point is not None else (np.nan,) * 3, cond)
    return cond


def _solve_residual(F, U, R) -> float:
    gap = np.abs(F @ U - R).max()
    return float(gap / max(1.0, np.abs(R).max()))


def _structure_solves(f_jet, c_jet, point, cond_limit):
    """Frame, condition number and the two first-level solves (U for the
    second derivatives of f, W for the first derivatives of C)."""
    F = _frame_of(f_jet, c_jet)
    cond = _checked_frame(F, point, cond_limit)
    rhs_f = np.column_stack([f_jet.partial(*_multi(i, j)) for (i, j) in _PAIRS])
    rhs_c = np.column_stack([c_jet.partial(*_basis(i)) for i in range(3)])
    U = np.linalg.solve(F, rhs_f)
    W = np.linalg.solve(F, rhs_c)
    resid = max(_solve_residual(F, U, rhs_f), _solve_residual(F, W, rhs_c))
    return F, cond, U, W, resid


def _unpack(U: np.ndarray, W: np.ndarray):
    h = np.empty((3, 3))
    Gamma = np.empty((3, 3, 3))
    for (i, j), k in list(zip(_PAIRS, range(6))):
        h[i, j] = h[j, i] = U[3, k]
        Gamma[i, j, :] = Gamma[j, i, :] = U[:3, k]
    S = -W[:3, :].copy()
    tau = W[3, :].copy()
    return h, S, tau, Gamma


def decompose(
    f_jet: Jet3Vec4, c_jet: Jet3Vec4, point=None, cond_limit: float = COND_LIMIT
) -> AffineData:
    """Solve the structure equations at one point.

    Mixed partials of a jet are stored once, so h and Gamma come out exactly
    symmetric; no post-hoc symmetrisation is needed.
    """
    F, cond, U, W, resid = _structure_solves(f_jet, c_jet, point, cond_limit)
    h, S, tau, Gamma = _unpack(U, W)
    return AffineData(h=h, S=S, tau=tau, Gamma=Gamma, frame=F, cond=cond, solve_residual=resid)


def full_structure(
    f_jet: Jet3Vec4, c_jet: Jet3Vec4, point=None, cond_limit: float = COND_LIMIT
) -> tuple[AffineData, DerivedTensors]:
    """Pointwise data plus its first derivatives, curvature and volume forms."""
    F, cond, U, W, resid = _structure_solves(f_jet, c_jet, point, cond_limit)
    h, S, tau, Gamma = _unpack(U, W)
    dF = _frame_partials(f_jet, c_jet)

    dh = np.empty((3, 3, 3))
    dGamma = np.empty((3, 3, 3, 3))
    dS = np.empty((3, 3, 3))
    dtau = np.empty((3, 3))
    for i in range(3):
        rhs_f = np.column_stack([f_jet.partial(*_multi(i, j, k)) for (j, k) in _PAIRS])
        rhs_c = np.column_stack([c_jet.partial(*_multi(i, j)) for j in range(3)])
        dU = np.linalg.solve(F, rhs_f - dF[i] @ U)
        dW = np.linalg.solve(F, rhs_c - dF[i] @ W)
        for (j, k), m in zip(_PAIRS, range(6)):
            dh[i, j, k] = dh[i, k, j] = dU[3, m]
            dGamma[i, j, k, :] = dGamma[i, k, j, :] = dU[:3, m]
        dS[i] = -dW[:3, :]
        dtau[i] = dW[3, :]

    nabla_h = (
        dh - np.einsum("ijl,lk->ijk", Gamma, h) - np.einsum("ikl,jl->ijk", Gamma, h)
    )
    R = (
        np.einsum("ijkl->ijkl", dGamma)
        - np.einsum("jikl->ijkl", dGamma)
        + np.einsum("jkm,iml->ijkl", Gamma, Gamma)
        - np.einsum("ikm,jml->ijkl", Gamma, Gamma)
    )
    theta = det4(F[:, 0], F[:, 1], F[:, 2], F[:, 3])
    omega_h = float(np.sqrt(abs(np.linalg.det(h))))

    data = AffineData(h=h, S=S, tau=tau, Gamma=Gamma, frame=F, cond=cond, solve_residual=resid)
    tensors = DerivedTensors(
        nabla_h=nabla_h, R=R, theta=theta, omega_h=omega_h,
        dh=dh, dGamma=dGamma, dS=dS, dtau=dtau,
    )
    return data, tensors


def derived(f_jet: Jet3Vec4, c_jet: Jet3Vec4, point=None) -> DerivedTensors:
    return full_structure(f_jet, c_jet, point)[1]


def fundamental_residuals(data: AffineData, tensors: DerivedTensors) -> FundamentalResiduals:
    """Scale-normalised max-norm residuals of the four integrability equations.

    Gauss:      R(X,Y)Z = h(Y,Z) SX - h(X,Z) SY
    Codazzi-h:  (nabla_X h)(Y,Z) + tau(X) h(Y,Z)  symmetric in X,Y
    Codazzi-S:  (nabla_X S)(Y) - tau(X) SY        symmetric in X,Y
    Ricci:      h(X, SY) - h(SX, Y) = 2 dtau(X,Y) = X(tau(Y)) - Y(tau(X))

    Each residual is divided by max(1, magnitude of the terms entering the
    identity), so the float-noise floor does not grow with the tensor scale
    and a fixed tolerance is meaningful for arbitrarily scaled inputs.
    """
    h, S, tau, Gamma = data.h, data.S, data.tau, data.Gamma

    hs_outer = np.einsum("jk,li->ijkl", h, S)
    gauss = tensors.R - (hs_outer - hs_outer.transpose(1, 0, 2, 3))
    gauss_scale = max(1.0, float(np.abs(tensors.R).max()), float(np.abs(hs_outer).max()))
    gauss_max = float(np.abs(gauss).max()) / gauss_scale

    codh = tensors.nabla_h + np.einsum("i,jk->ijk", tau, h)
    codh_scale = max(1.0, float(np.abs(codh).max()))
    codh_max = float(np.abs(codh - codh.transpose(1, 0, 2)).max()) / codh_scale

    # (nabla_i S)^l_j = d_i S^l_j + Gamma^l_im S^m_j - Gamma^m_ij S^l_m
    covS = (
        tensors.dS
        + np.einsum("iml,mj->ilj", Gamma, S)
        - np.einsum("ijm,lm->ilj", Gamma, S)
    )
    cods = covS - np.einsum("i,lj->ilj", tau, S)
    cods_scale = max(1.0, float(np.abs(cods).max()))
    cods_max = float(np.abs(cods - cods.transpose(2, 1, 0)).max()) / cods_scale

    hs = h @ S  # hs[i, j] = h(d_i, S d_j)
    ricci = (hs - hs.T) - (tensors.dtau - tensors.dtau.T)
    ricci_scale = max(1.0, float(np.abs(hs).max()), float(np.abs(tensors.dtau).max()))
    ricci_max = float(np.abs(ricci).max()) / ricci_scale

    return FundamentalResiduals(gauss_max, codh_max, cods_max, ricci_max)


def change_transversal(
    data: AffineData,
    scale: float,
    shift: np.ndarray,
    dscale: np.ndarray | None = None,
    dshift: np.ndarray | None = None,
) -> AffineData:
    """Induced data for the transversal field scale*C + f_*(shift).

    ``dscale`` holds the coordinate partials of the scale function (3,),
    ``dshift`` those of the shift field, ``dshift[i, l] = d_i shift^l``
    (3, 3).  Omitted derivatives are treated as zero (constant change).
    """
    scale = float(scale)
    if scale == 0.0:
        raise ZeroScale("transversal scale function vanishes")
    Z = np.asarray(shift, dtype=float).reshape(3)
    dscale = np.zeros(3) if dscale is None else np.asarray(dscale, dtype=float).reshape(3)
    dshift = (
        np.zeros((3, 3)) if dshift is None else np.asarray(dshift, dtype=float).reshape(3, 3)
    )

    h, S, tau, Gamma = data.h, data.S, data.tau, data.Gamma
    h_new = h / scale
    Gamma_new = Gamma - np.einsum("ij,l->ijl", h, Z) / scale
    tau_new = tau + (h @ Z) / scale + dscale / scale
    # nabla_i Z^l with the original connection
    covZ = dshift + np.einsum("ijl,j->il", Gamma, Z)
    S_new = scale * S - covZ.T + np.einsum("i,l->li", tau_new, Z)

    frame = data.frame.copy()
    frame[:, 3] = scale * data.frame[:, 3] + data.frame[:, :3] @ Z
    cond = float(np.linalg.cond(frame))
    return AffineData(
        h=h_new,
        S=S_new,
        tau=tau_new,
        Gamma=Gamma_new,
        frame=frame,
        cond=cond,
        solve_residual=data.solve_residual,
    )
