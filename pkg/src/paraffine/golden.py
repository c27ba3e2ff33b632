"""Embedded expectations for the built-in gallery and the verify logic.

Each gallery item ships with closed-form expectations: the volume forms,
the full metric matrix, the expected verdict pattern and a reference vector
field spanning the relevant eigenplane together with its h(v, v) value.
``verify_example`` recomputes everything on a grid and reports one line per
checked field.

The printed source for the first two items is internally inconsistent about
the sign of the (1,2) metric entry (the displayed matrices are asymmetric);
the magnitude is unambiguous and the sign used here (negative) is the one a
derivative cross-check of the constructed immersions produces.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .affine import full_structure
from .classify import GridSpec, Tolerances, classify
from .constructors import gallery
from .paracontact import induce

VALUE_RTOL = 1e-9
VALUE_ATOL = 1e-9


def _h_ex41(x, y, z):
    q = y * y + 1.0
    return np.array(
        [
            [0.0, -1.0 / q, 0.0],
            [-1.0 / q, 0.0, (2.0 * x + y) / q],
            [0.0, (2.0 * x + y) / q, -1.0],
        ]
    )


def _h_ex42(x, y, z):
    q = x * x + 1.0
    return np.array(
        [
            [0.0, -1.0 / q, -(x + 2.0 * y) / q],
            [-1.0 / q, 0.0, 0.0],
            [-(x + 2.0 * y) / q, 0.0, -1.0],
        ]
    )


def _h_ex43(x, y, z):
    return np.array([[0.0, -2.0, -4.0 * y], [-2.0, 0.0, 0.0], [-4.0 * y, 0.0, -1.0]])


def _h_ex53_f1(x, y, z):
    return np.array([[0.0, -2.0, 0.0], [-2.0, 0.5, 4.0 * x], [0.0, 4.0 * x, -1.0]])


def _h_ex53_f2(x, y, z):
    return np.array([[0.5, -2.0, -4.0 * y], [-2.0, 0.0, 0.0], [-4.0 * y, 0.0, -1.0]])


@dataclass(frozen=True)
class ReferenceVector:
    """A vector field spanning one eigenplane, with its expected h(v, v)."""

    eigenplane: str  # "Dplus" or "Dminus"
    field: callable
    h_value: callable


@dataclass(frozen=True)
class GoldenItem:
    theta: callable
    omega_h: callable
    h: callable
    abs_slots: tuple  # metric slots compared in magnitude only
    verdicts: dict
    references: tuple


def _verdicts(**overrides) -> dict:
    base = {
        "is_immersion": True,
        "is_transversal": True,
        "is_J_tangent": True,
        "is_centroaffine": True,
        "is_equiaffine": True,
        "is_blaschke": False,
        "is_hypersphere": False,
        "is_hyperquadric": False,
        "null_Dplus": False,
        "null_Dminus": False,
    }
    base.update(overrides)
    return base


GOLDEN: dict[str, GoldenItem] = {
    "ex41": GoldenItem(
        theta=lambda x, y, z: y * y + 1.0,
        omega_h=lambda x, y, z: 1.0 / (y * y + 1.0),
        h=_h_ex41,
        abs_slots=((0, 1), (1, 0)),
        verdicts=_verdicts(null_Dplus=True),
        references=(
            ReferenceVector("Dplus", lambda x, y, z: np.array([1.0, 0.0, 0.0]),
                            lambda x, y, z: 0.0),
        ),
    ),
    "ex42": GoldenItem(
        theta=lambda x, y, z: x * x + 1.0,
        omega_h=lambda x, y, z: 1.0 / (x * x + 1.0),
        h=_h_ex42,
        abs_slots=((0, 1), (1, 0)),
        verdicts=_verdicts(null_Dminus=True),
        references=(
            ReferenceVector("Dminus", lambda x, y, z: np.array([0.0, 1.0, 0.0]),
                            lambda x, y, z: 0.0),
        ),
    ),
    "ex43": GoldenItem(
        theta=lambda x, y, z: 2.0,
        omega_h=lambda x, y, z: 2.0,
        h=_h_ex43,
        abs_slots=(),
        verdicts=_verdicts(
            is_blaschke=True,
            is_hypersphere=True,
            is_hyperquadric=True,
            null_Dplus=True,
            null_Dminus=True,
        ),
        references=(
            ReferenceVector("Dminus", lambda x, y, z: np.array([0.0, 1.0, 0.0]),
                            lambda x, y, z: 0.0),
            ReferenceVector("Dplus", lambda x, y, z: np.array([0.25, y * y, -y]),
                            lambda x, y, z: 0.0),
        ),
    ),
    "ex53_f1": GoldenItem(
        theta=lambda x, y, z: 2.0,
        omega_h=lambda x, y, z: 2.0,
        h=_h_ex53_f1,
        abs_slots=(),
        verdicts=_verdicts(is_blaschke=True, is_hypersphere=True, null_Dplus=True),
        references=(
            ReferenceVector("Dplus", lambda x, y, z: np.array([1.0, 0.0, 0.0]),
                            lambda x, y, z: 0.0),
            ReferenceVector("Dminus", lambda x, y, z: np.array([x * x, 0.25, x]),
                            lambda x, y, z: 1.0 / 32.0),
        ),
    ),
    "ex53_f2": GoldenItem(
        theta=lambda x, y, z: 2.0,
        omega_h=lambda x, y, z: 2.0,
        h=_h_ex53_f2,
        abs_slots=(),
        verdicts=_verdicts(is_blaschke=True, is_hypersphere=True, null_Dminus=True),
        references=(
            ReferenceVector("Dminus", lambda x, y, z: np.array([0.0, 1.0, 0.0]),
                            lambda x, y, z: 0.0),
            ReferenceVector("Dplus", lambda x, y, z: np.array([0.25, y * y, -y]),
                            lambda x, y, z: 1.0 / 32.0),
        ),
    ),
}


@dataclass
class VerifyResult:
    name: str
    ok: bool
    lines: list
    report: object


def _collinear_gap(v: np.ndarray, w: np.ndarray) -> float:
    """Relative size of the component of w orthogonal-in-coordinates to v."""
    cross = np.cross(v, w)
    return float(np.linalg.norm(cross) / max(np.linalg.norm(v) * np.linalg.norm(w), 1e-300))


def verify_example(
    name: str, grid: GridSpec | None = None, tol: Tolerances | None = None
) -> VerifyResult:
    """Check one gallery item against its embedded expectations.

    Returns per-field lines ('ok'/'FAIL' with worst deviations over the grid)
    plus the underlying classification report.
    """
    golden = GOLDEN[name]  # KeyError -> unknown name, caller maps to usage error
    oracle = gallery(name)
    tol = tol or Tolerances()
    if grid is None:
        grid = GridSpec(box=tuple(oracle.clip_box(((-1, 1), (-1, 1), (-1, 1)))))
    report = classify(oracle, grid, tol)

    lines = []
    failures = 0

    def check(label, worst, limit, detail=""):
        nonlocal failures
        good = worst <= limit
        failures += 0 if good else 1
        status = "ok  " if good else "FAIL"
        suffix = f" {detail}" if detail else ""
        lines.append(f"{status} {label}: worst deviation {worst:.3e} (limit {limit:.1e}){suffix}")

    theta_dev = omega_dev = h_exact_dev = h_abs_dev = 0.0
    ref_value_dev = [0.0] * len(golden.references)
    ref_align_dev = [0.0] * len(golden.references)
    for p in grid.points():
        f_jet, c_jet = oracle.jet_at(*p)
        data, tensors = full_structure(f_jet, c_jet, p)
        x, y, z = p
        expected_theta = golden.theta(x, y, z)
        expected_omega = golden.omega_h(x, y, z)
        theta_dev = max(
            theta_dev, abs(tensors.theta - expected_theta) / max(abs(expected_theta), 1e-300)
        )
        omega_dev = max(
            omega_dev, abs(tensors.omega_h - expected_omega) / max(abs(expected_omega), 1e-300)
        )
        expected_h = golden.h(x, y, z)
        for i in range(3):
            for j in range(3):
                gap = abs(data.h[i, j] - expected_h[i, j])
                if (i, j) in golden.abs_slots:
                    h_abs_dev = max(h_abs_dev, abs(abs(data.h[i, j]) - abs(expected_h[i, j])))
                else:
                    h_exact_dev = max(h_exact_dev, gap)
        pc = induce(data.frame, tol.j_tangent)
        for k, ref in enumerate(golden.references):
            v = ref.field(x, y, z)
            expected_value = ref.h_value(x, y, z)
            actual = float(v @ data.h @ v)
            ref_value_dev[k] = max(ref_value_dev[k], abs(actual - expected_value))
            generator = pc.dplus if ref.eigenplane == "Dplus" else pc.dminus
            ref_align_dev[k] = max(ref_align_dev[k], _collinear_gap(v, generator))

    check("theta", theta_dev, VALUE_RTOL, "(relative)")
    check("omega_h", omega_dev, VALUE_RTOL, "(relative)")
    check("h entries (signed)", h_exact_dev, VALUE_ATOL)
    if golden.abs_slots:
        check("h entries (magnitude-only slots)", h_abs_dev, VALUE_ATOL)
    for k, ref in enumerate(golden.references):
        x0, y0, z0 = grid.points()[0]
        expected0 = ref.h_value(x0, y0, z0)
        check(
            f"h(v, v) on the {ref.eigenplane} reference field",
            ref_value_dev[k],
            VALUE_ATOL,
            f"(expected {expected0:.6g} at the first grid point)",
        )
        check(
            f"{ref.eigenplane} generator alignment",
            ref_align_dev[k],
            1e-8,
        )

    for key, expected in golden.verdicts.items():
        actual = report.verdicts[key]
        good = actual == expected
        failures += 0 if good else 1
        status = "ok  " if good else "FAIL"
        lines.append(f"{status} verdict {key}: expected {expected}, got {actual}")

    gate_good = report.gate_ok
    failures += 0 if gate_good else 1
    lines.append(("ok  " if gate_good else "FAIL") + " consistency gate")

    return VerifyResult(name=name, ok=failures == 0, lines=lines, report=report)
