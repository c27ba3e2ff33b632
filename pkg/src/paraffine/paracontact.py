"""Almost paracontact structure induced on the hypersurface.

When the ambient involution J maps the transversal field C into the tangent
bundle, the triple

    xi  = tangent coordinates of J C
    eta = 1-form with eta(xi) = 1 vanishing on the invariant distribution
    phi = tangent endomorphism acting as J on the distribution, phi(xi) = 0

is an almost paracontact structure: phi^2 = Id - eta (x) xi.  The invariant
distribution D = ker(eta) is J-invariant of dimension 2 and splits into the
+1 / -1 eigenplanes of phi, each spanned by one generator.

All decompositions run against the frame [f_x, f_y, f_z, C]: writing
J f_i = T^k_i f_k + c_i C gives eta ~ c (normalised) and phi ~ T corrected
by its value on xi.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np

from .errors import DegenerateD, NotJTangent, SingularFrame, ZeroScale, ZNotInD
from .affine import decompose, full_structure, _frame_partials, _basis
from .jets import Jet3Vec4
from .paracomplex import swap_pairs

J_TANGENT_TOL = 1e-8
_DEGENERATE_TOL = 1e-10


@dataclass
class ParacontactData:
    """Pointwise structure (xi, eta, phi) plus the distribution generators.

    ``dplus`` and ``dminus`` span the +1 and -1 eigenplanes of phi restricted
    to ker(eta); both are normalised so their largest-magnitude coordinate
    equals +1 (first such coordinate on ties).  ``defect`` is the relative
    transversal component of J C (zero when C is exactly J-tangent).
    """

    xi: np.ndarray
    eta: np.ndarray
    phi: np.ndarray
    dplus: np.ndarray
    dminus: np.ndarray
    defect: float


class StructureResiduals(NamedTuple):
    """Max-norm residuals of the six compatibility identities tying
    (phi, xi, eta) to the induced data (nabla, h, S, tau)."""

    eta_nabla: float
    phi_nabla: float
    eta_skew: float
    phi_skew: float
    eta_nabla_xi: float
    eta_shape: float

    def max(self) -> float:
        return max(self)


def _normalize_generator(v: np.ndarray) -> np.ndarray:
    idx = int(np.argmax(np.abs(v)))
    pivot = v[idx]
    if pivot == 0.0:
        raise DegenerateD("eigenplane generator vanished")
    return v / pivot


def _split_distribution(eta: np.ndarray, phi: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Generators of the phi-eigenplanes inside ker(eta), deterministically.

    The kernel basis comes from dropping the largest-|eta| coordinate
    (smallest index on ties); applying Id +/- phi to it lands in the
    respective eigenplane, and the larger of the two images is kept.
    """
    pivot = int(np.argmax(np.abs(eta)))
    if eta[pivot] == 0.0:
        raise DegenerateD("eta vanished, invariant distribution undefined")
    basis = []
    for k in range(3):
        if k == pivot:
            continue
        u = np.zeros(3)
        u[k] = 1.0
        u[pivot] = -eta[k] / eta[pivot]
        basis.append(u)

    def eigen_generator(sign: int) -> np.ndarray:
        images = [u + sign * (phi @ u) for u in basis]
        norms = [np.abs(p).max() for p in images]
        best = int(np.argmax(norms))
        if norms[best] < _DEGENERATE_TOL * max(1.0, np.abs(phi).max()):
            raise DegenerateD("phi eigenplane collapsed on the distribution")
        return _normalize_generator(images[best])

    return eigen_generator(+1), eigen_generator(-1)


def _structure_from_solves(a: np.ndarray, M: np.ndarray, defect_tol: float):
    """Build (xi, eta, phi, defect) from the frame coordinates of J C (a)
    and of J f_i (columns of M)."""
    xi = a[:3].copy()
    defect = float(abs(a[3]))
    if defect > defect_tol:
        raise NotJTangent(defect, defect_tol)
    T = M[:3, :]
    c = M[3, :]
    s = float(c @ xi)
    if abs(s) < _DEGENERATE_TOL:
        raise DegenerateD("eta(xi) ~ 0, cannot normalise the structure 1-form")
    eta = c / s
    phi = T - np.outer(T @ xi, eta)
    return xi, eta, phi, defect


def induce(frame: np.ndarray, defect_tol: float = J_TANGENT_TOL) -> ParacontactData:
    """Induced structure from a pointwise frame [f_x, f_y, f_z, C].

    Raises NotJTangent when J C sticks out of the tangent plane by more than
    ``defect_tol`` (the defect is relative by construction, since J preserves
    norms and the comparison happens in frame coordinates), DegenerateD when
    the distribution or the eigensplit collapses, SingularFrame for an
    unusable frame.
    """
    F = np.asarray(frame, dtype=float)
    if F.shape != (4, 4):
        raise ValueError(f"expected a 4x4 frame, got {F.shape}")
    cond = float(np.linalg.cond(F))
    if not np.isfinite(cond) or cond > 1e12:
        raise SingularFrame((np.nan,) * 3, cond)
    a = np.linalg.solve(F, swap_pairs(F[:, 3]))
    M = np.linalg.solve(F, swap_pairs(F[:, :3]))
    xi, eta, phi, defect = _structure_from_solves(a, M, defect_tol)
    dplus, dminus = _split_distribution(eta, phi)
    return ParacontactData(xi=xi, eta=eta, phi=phi, dplus=dplus, dminus=dminus, defect=defect)


def induce_with_derivatives(
    f_jet: Jet3Vec4, c_jet: Jet3Vec4, point=None, defect_tol: float = J_TANGENT_TOL
):
    """Structure plus its coordinate derivatives (dxi[i], deta[i], dphi[i]).

    Differentiates the frame solves: if F u = r then F du = dr - dF u.
    Returns (ParacontactData, dxi (3,3), deta (3,3), dphi (3,3,3)) with the
    first index the derivative direction.
    """
    data = decompose(f_jet, c_jet, point)
    F = data.frame
    dF = _frame_partials(f_jet, c_jet)

    a = np.linalg.solve(F, swap_pairs(F[:, 3]))
    M = np.linalg.solve(F, swap_pairs(F[:, :3]))
    xi, eta, phi, defect = _structure_from_solves(a, M, defect_tol)
    s = float(M[3, :] @ xi)

    dxi = np.empty((3, 3))
    deta = np.empty((3, 3))
    dphi = np.empty((3, 3, 3))
    for i in range(3):
        da = np.linalg.solve(F, swap_pairs(c_jet.partial(*_basis(i))) - dF[i] @ a)
        rhs = swap_pairs(dF[i][:, :3])
        dM = np.linalg.solve(F, rhs - dF[i] @ M)
        dxi_i = da[:3]
        dc = dM[3, :]
        dT = dM[:3, :]
        ds = float(dc @ xi + M[3, :] @ dxi_i)
        deta_i = (dc * s - M[3, :] * ds) / s**2
        dTxi = dT @ xi + M[:3, :] @ dxi_i
        dphi_i = dT - np.outer(dTxi, eta) - np.outer(M[:3, :] @ xi, deta_i)
        dxi[i] = dxi_i
        deta[i] = deta_i
        dphi[i] = dphi_i

    dplus, dminus = _split_distribution(eta, phi)
    pc = ParacontactData(xi=xi, eta=eta, phi=phi, dplus=dplus, dminus=dminus, defect=defect)
    return pc, dxi, deta, dphi


class NullVerdict(NamedTuple):
    dplus_null: bool
    dminus_null: bool
    h_dplus: float
    h_dminus: float


def null_verdict(pc: ParacontactData, h: np.ndarray, tol: float = 1e-8) -> NullVerdict:
    """Whether each eigenplane generator is a null direction of h.

    The comparison is relative to the largest entry of h; the raw values
    h(v, v) for the two normalised generators are reported alongside.
    """
    scale = float(np.abs(h).max())
    if scale == 0.0:
        raise DegenerateD("metric vanished, null directions undefined")
    hp = float(pc.dplus @ h @ pc.dplus)
    hm = float(pc.dminus @ h @ pc.dminus)
    return NullVerdict(abs(hp) <= tol * scale, abs(hm) <= tol * scale, hp, hm)


def structure_residuals(
    f_jet: Jet3Vec4, c_jet: Jet3Vec4, point=None, defect_tol: float = J_TANGENT_TOL
) -> StructureResiduals:
    """Residuals of the six identities coupling the paracontact structure to
    the induced affine data, all evaluated on the coordinate fields:

      (1) eta(nabla_X Y)  = h(X, phi Y) + X(eta(Y)) + eta(Y) tau(X)
      (2) phi(nabla_X Y)  = nabla_X(phi Y) - eta(Y) S X - h(X, Y) xi
      (3) 0 = h(X, phi Y) - h(Y, phi X) + X(eta(Y)) - Y(eta(X))
                + eta(Y) tau(X) - eta(X) tau(Y)
      (4) 0 = nabla_X(phi Y) - nabla_Y(phi X) - phi([X, Y])
                + eta(X) S Y - eta(Y) S X
      (5) eta(nabla_X xi) = tau(X)
      (6) eta(S X)        = -h(X, xi)

    Coordinate fields commute, so nabla_X(phi Y) has components
    d_i(phi^m_j) + phi^l_j Gamma^m_il and phi([X, Y]) drops out of (4).
    """
    data, _tensors = full_structure(f_jet, c_jet, point)
    pc, dxi, deta, dphi = induce_with_derivatives(f_jet, c_jet, point, defect_tol)
    h, S, tau, Gamma = data.h, data.S, data.tau, data.Gamma
    xi, eta, phi = pc.xi, pc.eta, pc.phi

    h_phi = h @ phi  # h_phi[i, j] = h(d_i, phi d_j)
    eta_gamma = np.einsum("ijl,l->ij", Gamma, eta)
    r1 = eta_gamma - (h_phi + deta + np.einsum("j,i->ij", eta, tau))
    r1_max = float(np.abs(r1).max())

    # nabla_i (phi d_j) as the (m, i, j) array
    nabla_phi = np.einsum("imj->mij", dphi) + np.einsum("lj,ilm->mij", phi, Gamma)
    phi_gamma = np.einsum("ml,ijl->mij", phi, Gamma)
    r2 = nabla_phi - phi_gamma - np.einsum("j,mi->mij", eta, S) - np.einsum("ij,m->mij", h, xi)
    r2_max = float(np.abs(r2).max())

    skew = h_phi + deta + np.einsum("j,i->ij", eta, tau)
    r3 = skew - skew.T
    r3_max = float(np.abs(r3).max())

    r4 = (
        nabla_phi
        - nabla_phi.transpose(0, 2, 1)
        + np.einsum("i,mj->mij", eta, S)
        - np.einsum("j,mi->mij", eta, S)
    )
    r4_max = float(np.abs(r4).max())

    nabla_xi = dxi + np.einsum("l,ilm->im", xi, Gamma)
    r5 = nabla_xi @ eta - tau
    r5_max = float(np.abs(r5).max())

    r6 = eta @ S + h @ xi
    r6_max = float(np.abs(r6).max())

    return StructureResiduals(r1_max, r2_max, r3_max, r4_max, r5_max, r6_max)


def transform_structure(
    pc: ParacontactData, scale: float, shift: np.ndarray
) -> ParacontactData:
    """Structure induced by the transversal change scale*C + f_*(shift),
    for a shift inside the invariant distribution:

        xi'  = scale * xi + phi(shift)
        eta' = eta / scale
        phi' = phi - eta (x) shift / scale
    """
    scale = float(scale)
    if scale == 0.0:
        raise ZeroScale("structure scale vanishes")
    Z = np.asarray(shift, dtype=float).reshape(3)
    eta_z = float(pc.eta @ Z)
    if abs(eta_z) > 1e-10 * max(1.0, np.abs(Z).max() * np.abs(pc.eta).max()):
        raise ZNotInD(eta_z)
    xi_new = scale * pc.xi + pc.phi @ Z
    eta_new = pc.eta / scale
    phi_new = pc.phi - np.outer(Z, pc.eta) / scale
    return replace(pc, xi=xi_new, eta=eta_new, phi=phi_new)
