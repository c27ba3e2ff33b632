"""Constructors for hypersurfaces with a para-complex-tangent transversal field.

Both families below produce immersions of the hyperbolic-cylinder shape

    f(x, y, z) = J g(x, y) cosh z - g(x, y) sinh z

over a generating map g built from input curves:

* centro-affine family (transversal field C = -f), one eigencurve and one
  free curve:

    Dplus :  g(x, y) = x * (alpha, alpha)(y) + gamma2(y)
    Dminus:  g(x, y) = y * (alpha, -alpha)(x) + gamma2(x)

  valid while det[gamma1, gamma2', gamma2, J gamma2] stays away from zero;
  the named eigenplane of the induced structure is then a null direction.

* hypersphere family (C = -lambda f), two planar curves, a free function A
  and a nonzero constant E:

    Dplus :  g = (x + A(y)) (alpha, alpha)(y) + B(y) (alpha', alpha')(y)
                 + (beta, -beta)(y)
    Dminus:  g = (y + A(x)) (alpha, -alpha)(x) + B(x) (alpha', -alpha')(x)
                 + (beta, beta)(x)

  with B = E / sqrt(|det[alpha, alpha'] det[beta, beta']|) and
  |lambda| = (4^4 E^4)^(-1/5); the result is a proper affine hypersphere
  whose declared eigenplane is a null direction.

Constructed oracles hand out exact third-order jets of f (and second-order
of C) assembled from symbolic curve derivatives, so every downstream tensor
is obtained without finite differencing.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import exprlang
from .errors import DegenerateCurveData
from .exprlang import CurveSpec, Neg
from .jets import Jet3, Jet3Vec4, cosh_jet, sinh_jet, lift_vec4, lift_curve, power_jet
from .paracomplex import det4, swap_pairs, swap_pairs_jet

log = logging.getLogger(__name__)

VARIANTS = ("Dplus", "Dminus")
DEFAULT_VALIDATION_SAMPLES = 64
_DET_RTOL = 1e-10


def _as_curve(value, dim: int, name: str) -> CurveSpec:
    curve = value if isinstance(value, CurveSpec) else CurveSpec(value)
    if curve.dim != dim:
        raise ValueError(f"{name} must have {dim} components, got {curve.dim}")
    return curve


def _check_variant(variant: str) -> int:
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")
    return +1 if variant == "Dplus" else -1


def embed_curve(alpha: CurveSpec, sign: int) -> CurveSpec:
    """Planar curve -> eigencurve (alpha, alpha) or (alpha, -alpha) of the swap."""
    a1, a2 = alpha.components
    if sign == +1:
        return CurveSpec((a1, a2, a1, a2))
    return CurveSpec((a1, a2, Neg(a1), Neg(a2)))


@dataclass(frozen=True)
class CentroAffineSpec:
    """Input data for the centro-affine family (curves as exprs in t)."""

    variant: str
    alpha: CurveSpec
    gamma2: CurveSpec
    domain: tuple[float, float] = (-1.0, 1.0)


@dataclass(frozen=True)
class SphereSpec:
    """Input data for the affine-hypersphere family."""

    variant: str
    alpha: CurveSpec
    beta: CurveSpec
    A: CurveSpec
    E: float
    lambda_sign: int = +1
    domain: tuple[float, float] = (-1.0, 1.0)


class ImmersionOracle:
    """Supplies exact jets of a constructed immersion and its transversal field.

    ``jet_at(x, y, z)`` returns the order-3 jet of f and an (order >= 2) jet
    of C.  ``param_axis`` is the coordinate fed to the generating curves (1
    for Dplus constructions, 0 for Dminus); the curve domain constrains that
    coordinate only.  ``lam`` is the shape-operator multiplier (S = lam * Id
    for every construction here).  ``provenance`` round-trips the inputs.
    """

    def __init__(self, jet_fn, lam, param_axis, domain, provenance):
        self._jet_fn = jet_fn
        self.lam = float(lam)
        self.param_axis = int(param_axis)
        self.domain = (float(domain[0]), float(domain[1]))
        self.provenance = dict(provenance)

    def jet_at(self, x: float, y: float, z: float) -> tuple[Jet3Vec4, Jet3Vec4]:
        return self._jet_fn(float(x), float(y), float(z))

    def value(self, x, y, z) -> np.ndarray:
        return self.jet_at(x, y, z)[0].value()

    def frame(self, x, y, z) -> np.ndarray:
        f_jet, c_jet = self.jet_at(x, y, z)
        F = np.empty((4, 4))
        F[:, 0] = f_jet.partial(1, 0, 0)
        F[:, 1] = f_jet.partial(0, 1, 0)
        F[:, 2] = f_jet.partial(0, 0, 1)
        F[:, 3] = c_jet.value()
        return F

    def clip_box(self, box) -> list[tuple[float, float]]:
        """Intersect a classification box with the curve-parameter domain."""
        clipped = [tuple(map(float, interval)) for interval in box]
        lo, hi = self.domain
        a, b = clipped[self.param_axis]
        clipped[self.param_axis] = (max(a, lo), min(b, hi))
        if clipped[self.param_axis][0] > clipped[self.param_axis][1]:
            raise ValueError("classification box does not meet the oracle domain")
        return clipped


def scaled_transversal(oracle: ImmersionOracle, factor: float) -> ImmersionOracle:
    """Same immersion with transversal field scaled by a nonzero constant."""
    factor = float(factor)
    if factor == 0.0:
        raise ValueError("transversal scale must be nonzero")

    def jet_fn(x, y, z):
        f_jet, c_jet = oracle.jet_at(x, y, z)
        return f_jet, Jet3Vec4(c_jet.c * factor)

    provenance = dict(oracle.provenance)
    provenance["transversal_scale"] = factor * provenance.get("transversal_scale", 1.0)
    return ImmersionOracle(
        jet_fn, oracle.lam * factor, oracle.param_axis, oracle.domain, provenance
    )


def _domain_samples(domain, samples: int) -> np.ndarray:
    lo, hi = float(domain[0]), float(domain[1])
    if not lo < hi:
        raise ValueError(f"domain must be a nontrivial interval, got ({lo}, {hi})")
    return np.linspace(lo, hi, int(samples))


def _hadamard(*vectors) -> float:
    scale = 1.0
    for v in vectors:
        scale *= max(float(np.linalg.norm(v)), 1e-300)
    return scale


def _centro_validation(gamma1: CurveSpec, gamma2: CurveSpec, domain, samples, margin):
    """Smallest relative det[gamma1, gamma2', gamma2, J gamma2] over the domain."""
    gamma2_d = gamma2.derivative()
    worst = np.inf
    for t in _domain_samples(domain, samples):
        g1 = gamma1.eval(t)
        g2 = gamma2.eval(t)
        g2p = gamma2_d.eval(t)
        jg2 = swap_pairs(g2)
        det = det4(g1, g2p, g2, jg2)
        rel = abs(det) / _hadamard(g1, g2p, g2, jg2)
        if rel <= margin:
            raise DegenerateCurveData(
                "det[gamma1, gamma2', gamma2, J gamma2] vanishes", t
            )
        worst = min(worst, rel)
    return worst


def build_centroaffine(
    spec: CentroAffineSpec,
    samples: int = DEFAULT_VALIDATION_SAMPLES,
    margin: float = _DET_RTOL,
) -> ImmersionOracle:
    """Validate a centro-affine spec and return its jet oracle (C = -f)."""
    sign = _check_variant(spec.variant)
    alpha = _as_curve(spec.alpha, 2, "alpha")
    gamma2 = _as_curve(spec.gamma2, 4, "gamma2")
    gamma1 = embed_curve(alpha, sign)
    det_min = _centro_validation(gamma1, gamma2, spec.domain, samples, margin)

    param_axis = 1 if sign == +1 else 0
    mult_axis = 1 - param_axis
    cache: dict[float, tuple[Jet3Vec4, Jet3Vec4]] = {}

    def curve_jets(t: float):
        got = cache.get(t)
        if got is None:
            got = (lift_vec4(gamma1, param_axis, t), lift_vec4(gamma2, param_axis, t))
            cache[t] = got
        return got

    def jet_fn(x, y, z):
        t = y if param_axis == 1 else x
        m = x if param_axis == 1 else y
        G1, G2 = curve_jets(t)
        g = Jet3.coordinate(mult_axis, m) * G1 + G2
        zj = Jet3.coordinate(2, z)
        f_jet = swap_pairs_jet(g) * cosh_jet(zj) - g * sinh_jet(zj)
        c_jet = Jet3Vec4(-f_jet.c)
        return f_jet, c_jet

    provenance = {
        "construction": "centroaffine",
        "variant": spec.variant,
        "alpha": list(alpha.sources),
        "gamma2": list(gamma2.sources),
        "domain": [spec.domain[0], spec.domain[1]],
        "lambda": 1.0,
        "det_rel_min": float(det_min),
    }
    return ImmersionOracle(jet_fn, 1.0, param_axis, spec.domain, provenance)


def _sphere_validation(alpha: CurveSpec, beta: CurveSpec, domain, samples, margin):
    """Relative size and sign of det[alpha, alpha'] * det[beta, beta']."""
    alpha_d = alpha.derivative()
    beta_d = beta.derivative()
    worst = np.inf
    sign = 0.0
    for t in _domain_samples(domain, samples):
        a, ap = alpha.eval(t), alpha_d.eval(t)
        b, bp = beta.eval(t), beta_d.eval(t)
        prod = (a[0] * ap[1] - a[1] * ap[0]) * (b[0] * bp[1] - b[1] * bp[0])
        rel = abs(prod) / _hadamard(a, ap, b, bp)
        if rel <= margin:
            raise DegenerateCurveData(
                "det[alpha, alpha'] * det[beta, beta'] vanishes", t
            )
        if sign == 0.0:
            sign = np.sign(prod)
        elif np.sign(prod) != sign:
            raise DegenerateCurveData(
                "det[alpha, alpha'] * det[beta, beta'] changes sign", t
            )
        worst = min(worst, rel)
    return worst, sign


def lambda_from_E(E: float, lambda_sign: int = +1) -> float:
    """Shape multiplier of the hypersphere family: |lambda| = (4^4 E^4)^(-1/5)."""
    if E == 0.0:
        raise ValueError("E must be a nonzero constant")
    if lambda_sign not in (+1, -1):
        raise ValueError(f"lambda_sign must be +1 or -1, got {lambda_sign}")
    return lambda_sign * (4.0 * abs(float(E))) ** (-0.8)


def build_sphere(
    spec: SphereSpec,
    samples: int = DEFAULT_VALIDATION_SAMPLES,
    margin: float = _DET_RTOL,
) -> ImmersionOracle:
    """Validate a hypersphere spec and return its jet oracle (C = -lambda f)."""
    sign = _check_variant(spec.variant)
    alpha = _as_curve(spec.alpha, 2, "alpha")
    beta = _as_curve(spec.beta, 2, "beta")
    A = _as_curve(spec.A, 1, "A")
    lam = lambda_from_E(spec.E, spec.lambda_sign)
    E = float(spec.E)

    det_min, rad_sign = _sphere_validation(alpha, beta, spec.domain, samples, margin)
    gamma1 = embed_curve(alpha, sign)
    gamma1_d = gamma1.derivative()
    gamma2 = embed_curve(beta, -sign)

    param_axis = 1 if sign == +1 else 0
    mult_axis = 1 - param_axis
    alpha_d = alpha.derivative()
    beta_d = beta.derivative()
    b_values = []
    for t in _domain_samples(spec.domain, samples):
        a, ap = alpha.eval(t), alpha_d.eval(t)
        b, bp = beta.eval(t), beta_d.eval(t)
        prod = (a[0] * ap[1] - a[1] * ap[0]) * (b[0] * bp[1] - b[1] * bp[0])
        b_values.append(E / np.sqrt(abs(prod)))
    cache: dict[float, tuple] = {}

    def curve_jets(t: float):
        got = cache.get(t)
        if got is None:
            G1 = lift_vec4(gamma1, param_axis, t)
            G1d = lift_vec4(gamma1_d, param_axis, t)
            G2 = lift_vec4(gamma2, param_axis, t)
            Aj = lift_curve(A, param_axis, t)[0]
            a1, a2 = lift_curve(alpha, param_axis, t)
            da1, da2 = lift_curve(alpha_d, param_axis, t)
            b1, b2 = lift_curve(beta, param_axis, t)
            db1, db2 = lift_curve(beta_d, param_axis, t)
            radicand = (a1 * da2 - a2 * da1) * (b1 * db2 - b2 * db1)
            Bj = E * power_jet(rad_sign * radicand, -0.5)
            got = (G1, G1d, G2, Aj, Bj)
            cache[t] = got
        return got

    def jet_fn(x, y, z):
        t = y if param_axis == 1 else x
        m = x if param_axis == 1 else y
        G1, G1d, G2, Aj, Bj = curve_jets(t)
        coef = Jet3.coordinate(mult_axis, m) + Aj
        g = coef * G1 + Bj * G1d + G2
        zj = Jet3.coordinate(2, z)
        f_jet = swap_pairs_jet(g) * cosh_jet(zj) - g * sinh_jet(zj)
        c_jet = Jet3Vec4(f_jet.c * (-lam))
        return f_jet, c_jet

    provenance = {
        "construction": "sphere",
        "variant": spec.variant,
        "alpha": list(alpha.sources),
        "beta": list(beta.sources),
        "A": list(A.sources),
        "E": E,
        "lambda_sign": int(spec.lambda_sign),
        "lambda": lam,
        "domain": [spec.domain[0], spec.domain[1]],
        "det_rel_min": float(det_min),
        "B_range": [float(min(b_values)), float(max(b_values))],
    }
    return ImmersionOracle(jet_fn, lam, param_axis, spec.domain, provenance)


def hyperbolic_solution(v: np.ndarray, z: float) -> np.ndarray:
    """The solution J v cosh z - v sinh z of F' = -J F with F(0) = J v."""
    v = np.asarray(v, dtype=float)
    return swap_pairs(v) * np.cosh(z) - v * np.sinh(z)


# --------------------------------------------------------------------------
# built-in gallery
# --------------------------------------------------------------------------

GALLERY_NAMES = ("ex41", "ex42", "ex43", "ex53_f1", "ex53_f2")

_GALLERY_SPECS: dict[str, Callable[[], ImmersionOracle]] = {
    "ex41": lambda: build_centroaffine(
        CentroAffineSpec("Dplus", CurveSpec(["t", "-1"]), CurveSpec(["1", "t", "0", "0"]))
    ),
    "ex42": lambda: build_centroaffine(
        CentroAffineSpec("Dminus", CurveSpec(["t", "-1"]), CurveSpec(["1", "t", "0", "0"]))
    ),
    "ex43": lambda: build_centroaffine(
        CentroAffineSpec(
            "Dminus",
            CurveSpec(["0.5 - t", "0.5 + t"]),
            CurveSpec(["t + 0.25", "t - 0.25", "t + 0.75", "t - 0.75"]),
        )
    ),
    "ex53_f1": lambda: build_sphere(
        SphereSpec(
            "Dplus", CurveSpec(["1", "t"]), CurveSpec(["cos(t)", "sin(t)"]),
            CurveSpec(["0"]), E=0.25,
        )
    ),
    "ex53_f2": lambda: build_sphere(
        SphereSpec(
            "Dminus", CurveSpec(["1", "t"]), CurveSpec(["cos(t)", "sin(t)"]),
            CurveSpec(["0"]), E=0.25,
        )
    ),
}


def gallery(name: str) -> ImmersionOracle:
    """One of the built-in reference immersions with known closed-form data."""
    try:
        factory = _GALLERY_SPECS[name]
    except KeyError:
        raise KeyError(
            f"unknown gallery item {name!r}; available: {', '.join(GALLERY_NAMES)}"
        ) from None
    oracle = factory()
    oracle.provenance["gallery"] = name
    return oracle


# --------------------------------------------------------------------------
# random specs for property tests
# --------------------------------------------------------------------------

GENERATOR_MARGIN = 1e-3


def _fmt(value: float) -> str:
    return repr(round(float(value), 4))


def _random_coeff(rng, lo=0.3, hi=1.6) -> float:
    return float(rng.uniform(lo, hi) * rng.choice([-1.0, 1.0]))


def _random_planar_curve(rng) -> CurveSpec:
    kind = rng.choice(["harmonic", "affine", "parabola"])
    if kind == "harmonic":
        a, b = _random_coeff(rng), _random_coeff(rng)
        w = float(rng.uniform(0.5, 2.0))
        p = float(rng.uniform(0.0, 3.0))
        return CurveSpec(
            [f"{_fmt(a)}*cos({_fmt(w)}*t + {_fmt(p)})", f"{_fmt(b)}*sin({_fmt(w)}*t + {_fmt(p)})"]
        )
    if kind == "affine":
        a, b = _random_coeff(rng), _random_coeff(rng)
        c = float(rng.uniform(-1.0, 1.0))
        return CurveSpec([_fmt(a), f"{_fmt(b)}*t + {_fmt(c)}"])
    a, b = _random_coeff(rng), _random_coeff(rng)
    c, d = float(rng.uniform(-1.0, 1.0)), float(rng.uniform(-1.0, 1.0))
    return CurveSpec([f"{_fmt(a)} + {_fmt(c)}*t", f"{_fmt(b)}*t^2 + {_fmt(d)}*t + {_fmt(a)}"])


def _random_scalar_source(rng) -> str:
    kind = rng.choice(["poly", "harmonic"])
    if kind == "poly":
        a, b, c = (float(rng.uniform(-1.2, 1.2)) for _ in range(3))
        return f"{_fmt(a)}*t^2 + {_fmt(b)}*t + {_fmt(c)}"
    a, b = _random_coeff(rng, 0.2, 1.2), _random_coeff(rng, 0.2, 1.2)
    w = float(rng.uniform(0.5, 2.0))
    c = float(rng.uniform(-0.8, 0.8))
    return f"{_fmt(a)}*cos({_fmt(w)}*t) + {_fmt(b)}*sin({_fmt(w)}*t) + {_fmt(c)}"


def random_centroaffine_spec(rng, stats: dict | None = None) -> CentroAffineSpec:
    """Draw a valid random CentroAffineSpec; rejections are logged and counted.

    The validity margin is far above the constructor threshold so the
    accepted specs stay well-conditioned for float64 classification.
    """
    rejected = 0
    while True:
        spec = CentroAffineSpec(
            variant=str(rng.choice(VARIANTS)),
            alpha=_random_planar_curve(rng),
            gamma2=CurveSpec([_random_scalar_source(rng) for _ in range(4)]),
        )
        try:
            build_centroaffine(spec, margin=GENERATOR_MARGIN)
        except DegenerateCurveData as exc:
            rejected += 1
            log.info("rejected centro-affine spec: %s", exc)
            continue
        if stats is not None:
            stats["rejected"] = stats.get("rejected", 0) + rejected
            stats["accepted"] = stats.get("accepted", 0) + 1
        return spec


def random_sphere_spec(rng, stats: dict | None = None) -> SphereSpec:
    """Draw a valid random SphereSpec; rejections are logged and counted."""
    rejected = 0
    while True:
        a_choice = rng.choice(["0", "poly", "harmonic"])
        if a_choice == "0":
            a_src = "0"
        elif a_choice == "poly":
            a_src = f"{_fmt(rng.uniform(-0.8, 0.8))}*t + {_fmt(rng.uniform(-0.5, 0.5))}"
        else:
            a_src = f"{_fmt(_random_coeff(rng, 0.2, 0.8))}*sin(t)"
        spec = SphereSpec(
            variant=str(rng.choice(VARIANTS)),
            alpha=_random_planar_curve(rng),
            beta=_random_planar_curve(rng),
            A=CurveSpec([a_src]),
            E=_random_coeff(rng, 0.15, 1.2),
            lambda_sign=int(rng.choice([-1, 1])),
        )
        try:
            build_sphere(spec, margin=GENERATOR_MARGIN)
        except DegenerateCurveData as exc:
            rejected += 1
            log.info("rejected sphere spec: %s", exc)
            continue
        if stats is not None:
            stats["rejected"] = stats.get("rejected", 0) + rejected
            stats["accepted"] = stats.get("accepted", 0) + 1
        return spec
