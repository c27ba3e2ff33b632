"""Truncated derivative arithmetic for maps of three variables.

A third-order jet stores the raw partial derivatives of a smooth function
of (x, y, z) through total order 3: one coefficient per multi-index
(a, b, c) with a + b + c <= 3, i.e. 20 numbers.  Coefficients are plain
derivative values, NOT Taylor coefficients, so no factorials appear in the
accessors; products use the general Leibniz rule and compositions with a
univariate function use its derivatives through order 3.

Everything the affine machinery consumes (immersion values, frames, second
and third partials) is assembled from these jets, which keeps the whole
pipeline free of finite differencing.  Within the truncation order the
arithmetic is exact: a product of two exact jets is the exact jet of the
product function.
"""

from __future__ import annotations

from math import comb
from typing import Sequence

import numpy as np

MAX_ORDER = 3
NVARS = 3

# graded lexicographic enumeration of the multi-indices
MULTI_INDICES: tuple[tuple[int, int, int], ...] = tuple(
    (a, b, c)
    for order in range(MAX_ORDER + 1)
    for a in range(order, -1, -1)
    for b in range(order - a, -1, -1)
    for c in [order - a - b]
)
N_COEFFS = len(MULTI_INDICES)  # 20

_SLOT: dict[tuple[int, int, int], int] = {m: i for i, m in enumerate(MULTI_INDICES)}


def slot(multi: tuple[int, int, int]) -> int:
    """Coefficient index of a multi-index (a, b, c)."""
    return _SLOT[multi]


def _leibniz_table() -> np.ndarray:
    """T[m, n, p] such that (fg)_m = sum_{n,p} T[m,n,p] f_n g_p.

    For mu = nu + rho the entry is the product of binomials
    C(mu_i, nu_i); everything else is zero.
    """
    table = np.zeros((N_COEFFS, N_COEFFS, N_COEFFS))
    for m, mu in enumerate(MULTI_INDICES):
        for n, nu in enumerate(MULTI_INDICES):
            rho = (mu[0] - nu[0], mu[1] - nu[1], mu[2] - nu[2])
            if min(rho) < 0:
                continue
            p = _SLOT[rho]
            table[m, n, p] = comb(mu[0], nu[0]) * comb(mu[1], nu[1]) * comb(mu[2], nu[2])
    return table


_LEIBNIZ = _leibniz_table()


class Jet3:
    """Scalar third-order jet: 20 raw partial derivatives of f(x, y, z)."""

    __slots__ = ("c",)

    def __init__(self, coefficients):
        c = np.asarray(coefficients, dtype=float)
        if c.shape != (N_COEFFS,):
            raise ValueError(f"expected {N_COEFFS} coefficients, got shape {c.shape}")
        self.c = c

    @classmethod
    def constant(cls, value: float) -> "Jet3":
        c = np.zeros(N_COEFFS)
        c[0] = value
        return cls(c)

    @classmethod
    def coordinate(cls, axis: int, value: float) -> "Jet3":
        """The jet of the coordinate function x, y or z at the given value."""
        c = np.zeros(N_COEFFS)
        c[0] = value
        unit = [0, 0, 0]
        unit[axis] = 1
        c[_SLOT[tuple(unit)]] = 1.0
        return cls(c)

    @classmethod
    def from_univariate(cls, derivative_values: Sequence[float], axis: int) -> "Jet3":
        """Jet of g(x_axis) given [g, g', g'', g'''] at the base point."""
        vals = list(derivative_values)
        if len(vals) < MAX_ORDER + 1:
            raise ValueError("need derivative values through order 3")
        c = np.zeros(N_COEFFS)
        for k in range(MAX_ORDER + 1):
            multi = [0, 0, 0]
            multi[axis] = k
            c[_SLOT[tuple(multi)]] = vals[k]
        return cls(c)

    @property
    def value(self) -> float:
        return float(self.c[0])

    def partial(self, a: int, b: int, c: int) -> float:
        """The raw partial derivative d^(a+b+c) f / dx^a dy^b dz^c."""
        return float(self.c[_SLOT[(a, b, c)]])

    def gradient(self) -> np.ndarray:
        return np.array([self.partial(1, 0, 0), self.partial(0, 1, 0), self.partial(0, 0, 1)])

    def __add__(self, other):
        if isinstance(other, Jet3):
            return Jet3(self.c + other.c)
        if isinstance(other, (int, float)):
            c = self.c.copy()
            c[0] += other
            return Jet3(c)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Jet3):
            return Jet3(self.c - other.c)
        if isinstance(other, (int, float)):
            c = self.c.copy()
            c[0] -= other
            return Jet3(c)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return Jet3(-self.c)

    def __mul__(self, other):
        if isinstance(other, Jet3):
            return Jet3(np.einsum("mnp,n,p->m", _LEIBNIZ, self.c, other.c))
        if isinstance(other, (int, float)):
            return Jet3(self.c * other)
        if isinstance(other, Jet3Vec4):
            return other.scaled(self)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float)):
            return Jet3(self.c * other)
        return NotImplemented

    def compose(self, derivatives: Sequence[float]) -> "Jet3":
        """Jet of phi(f) given [phi, phi', phi'', phi'''] at f's value.

        Implemented as the cubic Taylor polynomial of phi in w = f - f(p0),
        evaluated with jet arithmetic; since w vanishes at the base point the
        discarded remainder contributes nothing through order 3.
        """
        d0, d1, d2, d3 = (float(v) for v in derivatives[:4])
        w = Jet3(self.c.copy())
        w.c[0] = 0.0
        acc = Jet3.constant(d3 / 6.0)
        acc = acc * w + (d2 / 2.0)
        acc = acc * w + d1
        acc = acc * w + d0
        return acc

    def __repr__(self) -> str:
        return f"Jet3(value={self.value:.6g})"


def cosh_jet(j: Jet3) -> Jet3:
    u = j.value
    return j.compose([np.cosh(u), np.sinh(u), np.cosh(u), np.sinh(u)])


def sinh_jet(j: Jet3) -> Jet3:
    u = j.value
    return j.compose([np.sinh(u), np.cosh(u), np.sinh(u), np.cosh(u)])


def exp_jet(j: Jet3) -> Jet3:
    e = np.exp(j.value)
    return j.compose([e, e, e, e])


def power_jet(j: Jet3, p: float) -> Jet3:
    """Jet of f**p for real p; requires a strictly positive base value."""
    u = j.value
    if u <= 0.0:
        raise ValueError(f"power_jet needs a positive base value, got {u:.6g}")
    return j.compose(
        [u**p, p * u ** (p - 1), p * (p - 1) * u ** (p - 2), p * (p - 1) * (p - 2) * u ** (p - 3)]
    )


class Jet3Vec4:
    """An R^4-valued third-order jet: four scalar jets stacked as a (4, 20) array."""

    __slots__ = ("c",)

    def __init__(self, coefficients):
        c = np.asarray(coefficients, dtype=float)
        if c.shape != (4, N_COEFFS):
            raise ValueError(f"expected shape (4, {N_COEFFS}), got {c.shape}")
        self.c = c

    @classmethod
    def from_components(cls, components: Sequence[Jet3]) -> "Jet3Vec4":
        if len(components) != 4:
            raise ValueError("need exactly 4 components")
        return cls(np.stack([j.c for j in components]))

    def component(self, i: int) -> Jet3:
        return Jet3(self.c[i].copy())

    def value(self) -> np.ndarray:
        return self.c[:, 0].copy()

    def partial(self, a: int, b: int, c: int) -> np.ndarray:
        return self.c[:, _SLOT[(a, b, c)]].copy()

    def scaled(self, factor: Jet3) -> "Jet3Vec4":
        return Jet3Vec4(np.einsum("mnp,kn,p->km", _LEIBNIZ, self.c, factor.c))

    def __add__(self, other):
        if isinstance(other, Jet3Vec4):
            return Jet3Vec4(self.c + other.c)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, Jet3Vec4):
            return Jet3Vec4(self.c - other.c)
        return NotImplemented

    def __neg__(self):
        return Jet3Vec4(-self.c)

    def __mul__(self, other):
        if isinstance(other, Jet3):
            return self.scaled(other)
        if isinstance(other, (int, float)):
            return Jet3Vec4(self.c * other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float)):
            return Jet3Vec4(self.c * other)
        return NotImplemented

    def __repr__(self) -> str:
        return f"Jet3Vec4(value={self.value()})"


def shift(j: Jet3, axis: int) -> Jet3:
    """Jet of the partial derivative of f along ``axis``.

    The result is only trustworthy through order 2 (the order-3 slots of the
    input carry no order-4 information); its order-3 coefficients are zeroed.
    """
    c = np.zeros(N_COEFFS)
    unit = [0, 0, 0]
    unit[axis] = 1
    for i, mu in enumerate(MULTI_INDICES):
        if sum(mu) > MAX_ORDER - 1:
            continue
        shifted = (mu[0] + unit[0], mu[1] + unit[1], mu[2] + unit[2])
        c[i] = j.c[_SLOT[shifted]]
    return Jet3(c)


def shift_vec(j: Jet3Vec4, axis: int) -> Jet3Vec4:
    return Jet3Vec4.from_components([shift(j.component(i), axis) for i in range(4)])


def lift_curve(curve, axis: int, t: float, order: int = MAX_ORDER) -> list[Jet3]:
    """Lift a symbolic curve into per-component jets along one coordinate axis.

    ``curve`` is any object with ``derivatives(t, order) -> (order+1, dim)``
    (a :class:`paraffine.exprlang.CurveSpec` in practice).  Each component
    becomes the jet of a function depending on the single coordinate ``axis``.
    """
    table = curve.derivatives(t, order)
    return [Jet3.from_univariate(table[:, k], axis) for k in range(table.shape[1])]


def lift_vec4(curve, axis: int, t: float) -> Jet3Vec4:
    comps = lift_curve(curve, axis, t)
    if len(comps) != 4:
        raise ValueError(f"curve has dimension {len(comps)}, expected 4")
    return Jet3Vec4.from_components(comps)
