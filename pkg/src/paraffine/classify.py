"""Grid-based classification of an immersion oracle.

Every verdict is a numerical certificate over a sampled grid: the induced
tensors are computed pointwise from exact jets and compared against the
defining property at the configured tolerances.  The report embeds the grid,
the tolerances, aggregate residuals, per-point profile series and any
per-point failures, and its JSON form is bit-deterministic for a fixed
oracle and configuration.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields, replace
from typing import Optional

import numpy as np

from .affine import full_structure, fundamental_residuals
from .errors import DegenerateD, NotJTangent, SingularFrame
from .paracontact import induce, null_verdict

SCHEMA_VERSION = 1

VERDICT_KEYS = (
    "is_immersion",
    "is_transversal",
    "is_J_tangent",
    "is_centroaffine",
    "is_equiaffine",
    "is_blaschke",
    "is_hypersphere",
    "is_hyperquadric",
    "null_Dplus",
    "null_Dminus",
)


@dataclass(frozen=True)
class Tolerances:
    """All classification tolerances in one place; reports embed them."""

    frame_cond: float = 1e12
    identity: float = 1e-8
    null: float = 1e-8
    j_tangent: float = 1e-8

    def updated(self, **overrides) -> "Tolerances":
        names = {f.name for f in fields(self)}
        unknown = set(overrides) - names
        if unknown:
            raise ValueError(
                f"unknown tolerance keys {sorted(unknown)}; valid: {sorted(names)}"
            )
        return replace(self, **{k: float(v) for k, v in overrides.items()})

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass(frozen=True)
class GridSpec:
    box: tuple[tuple[float, float], ...] = ((-1.0, 1.0), (-1.0, 1.0), (-1.0, 1.0))
    shape: tuple[int, int, int] = (5, 5, 5)

    def points(self) -> list[tuple[float, float, float]]:
        axes = [np.linspace(lo, hi, n) for (lo, hi), n in zip(self.box, self.shape)]
        return [
            (float(x), float(y), float(z))
            for x in axes[0]
            for y in axes[1]
            for z in axes[2]
        ]


@dataclass
class ClassificationReport:
    provenance: dict
    tolerances: Tolerances
    grid: GridSpec
    verdicts: dict
    residuals: dict
    profiles: dict
    lambda_fit: Optional[float]
    gate_ok: bool
    errors: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "provenance": self.provenance,
            "tolerances": self.tolerances.as_dict(),
            "grid": {
                "box": [list(interval) for interval in self.grid.box],
                "shape": list(self.grid.shape),
                "points": [list(p) for p in self.grid.points()],
            },
            "verdicts": dict(self.verdicts),
            "residuals": dict(self.residuals),
            "profiles": {k: list(v) for k, v in self.profiles.items()},
            "lambda_fit": self.lambda_fit,
            "gate_ok": self.gate_ok,
            "errors": list(self.errors),
        }


class _Worst:
    """Tracks the largest value fed to it (0.0 when nothing was)."""

    def __init__(self):
        self.value = 0.0

    def feed(self, v: float):
        if v > self.value:
            self.value = float(v)


def classify(
    oracle,
    grid: GridSpec | None = None,
    tol: Tolerances | None = None,
) -> ClassificationReport:
    """Classify an immersion oracle over a grid.

    Per-point SingularFrame / NotJTangent / DegenerateD failures are recorded
    in ``errors`` with the offending point; the report is still produced but
    every verdict is then false (the certificate is incomplete).  The
    consistency gate cross-checks the verdict pattern against the structure
    theory: for an immersion in the centro-affine normalisation (C = -f,
    which is what ``is_centroaffine`` certifies) with a J-tangent transversal
    field, both eigenplanes null must come with hypersphere + hyperquadric,
    and a hyperquadric must have both eigenplanes null.
    """
    tol = tol or Tolerances()
    if grid is None:
        box = ((-1.0, 1.0), (-1.0, 1.0), (-1.0, 1.0))
        if hasattr(oracle, "clip_box"):
            box = tuple(oracle.clip_box(box))
        grid = GridSpec(box=box)
    points = grid.points()

    errors: list[dict] = []
    cond_max = _Worst()
    solve_resid = _Worst()
    sigma_ratio_min = np.inf
    defect_max = _Worst()
    phi_sq_max = _Worst()
    eta_xi_max = _Worst()
    tau_max = _Worst()
    volume_gap = _Worst()
    nabla_h_max = _Worst()
    h_scale_max = _Worst()
    null_plus = _Worst()
    null_minus = _Worst()
    centro_resid = _Worst()
    gauss = _Worst()
    codazzi_h = _Worst()
    codazzi_shape = _Worst()
    ricci = _Worst()
    lambdas: list[float] = []
    centro_lambdas: list[float] = []
    shape_rows: list[np.ndarray] = []
    profiles = {
        "theta": [],
        "omega_h": [],
        "tau": [],
        "h_dplus": [],
        "h_dminus": [],
        "centro_residual": [],
    }

    def record_error(point, exc):
        errors.append(
            {
                "point": [float(v) for v in point],
                "error": type(exc).__name__,
                "detail": str(exc),
            }
        )

    for p in points:
        try:
            f_jet, c_jet = oracle.jet_at(*p)
            data, tensors = full_structure(f_jet, c_jet, p, tol.frame_cond)
        except SingularFrame as exc:
            record_error(p, exc)
            for key in profiles:
                profiles[key].append(None)
            continue

        cond_max.feed(data.cond)
        solve_resid.feed(data.solve_residual)
        sigmas = np.linalg.svd(data.frame[:, :3], compute_uv=False)
        sigma_ratio_min = min(sigma_ratio_min, float(sigmas[-1] / sigmas[0]))

        h_scale = float(np.abs(data.h).max())
        h_scale_max.feed(h_scale)
        tau_point = float(np.abs(data.tau).max())
        tau_max.feed(tau_point)
        gap = abs(abs(tensors.theta) - tensors.omega_h) / max(tensors.omega_h, 1e-300)
        volume_gap.feed(gap)
        nabla_h_max.feed(float(np.abs(tensors.nabla_h).max()))

        lam_p = float(np.trace(data.S) / 3.0)
        lambdas.append(lam_p)
        shape_rows.append(data.S.copy())

        fr = fundamental_residuals(data, tensors)
        gauss.feed(fr.gauss)
        codazzi_h.feed(fr.codazzi_h)
        codazzi_shape.feed(fr.codazzi_shape)
        ricci.feed(fr.ricci)

        f_val = f_jet.value()
        c_val = c_jet.value()
        # fitted proportionality factor C ~ -lam_c f, kept as a diagnostic
        # (guarded: the image may legitimately pass through the origin)
        lam_c = -float(c_val @ f_val) / max(float(f_val @ f_val), 1e-300)
        centro_lambdas.append(lam_c)
        # the centro-affine verdict demands the strict normalisation C = -f
        c_gap = float(np.abs(c_val + f_val).max() / max(np.abs(c_val).max(), 1e-300))
        centro_resid.feed(c_gap)

        profiles["theta"].append(tensors.theta)
        profiles["omega_h"].append(tensors.omega_h)
        profiles["tau"].append(tau_point)
        profiles["centro_residual"].append(c_gap)

        try:
            pc = induce(data.frame, tol.j_tangent)
        except (NotJTangent, DegenerateD) as exc:
            record_error(p, exc)
            profiles["h_dplus"].append(None)
            profiles["h_dminus"].append(None)
            continue
        defect_max.feed(pc.defect)
        phi_sq = pc.phi @ pc.phi - (np.eye(3) - np.outer(pc.xi, pc.eta))
        phi_sq_max.feed(float(np.abs(phi_sq).max()))
        eta_xi_max.feed(abs(float(pc.eta @ pc.xi) - 1.0))
        nv = null_verdict(pc, data.h, tol.null)
        scale = max(h_scale, 1e-300)
        null_plus.feed(abs(nv.h_dplus) / scale)
        null_minus.feed(abs(nv.h_dminus) / scale)
        profiles["h_dplus"].append(nv.h_dplus)
        profiles["h_dminus"].append(nv.h_dminus)

    lambda_fit = float(np.mean(lambdas)) if lambdas else None
    lambda_spread = float(np.max(lambdas) - np.min(lambdas)) if lambdas else np.inf
    shape_dev = (
        max(float(np.abs(S - lambda_fit * np.eye(3)).max()) for S in shape_rows)
        if shape_rows
        else np.inf
    )
    centro_spread = (
        float(np.max(centro_lambdas) - np.min(centro_lambdas)) if centro_lambdas else np.inf
    )

    clean = not errors
    verdicts = {
        "is_immersion": clean and sigma_ratio_min >= 1.0 / tol.frame_cond,
        "is_transversal": clean and cond_max.value <= tol.frame_cond,
        "is_J_tangent": clean and defect_max.value <= tol.j_tangent,
        "is_centroaffine": clean and centro_resid.value <= tol.identity,
        "is_equiaffine": clean and tau_max.value <= tol.identity,
        "is_blaschke": False,
        "is_hypersphere": False,
        "is_hyperquadric": clean
        and nabla_h_max.value <= tol.identity * max(1.0, h_scale_max.value),
        "null_Dplus": clean and null_plus.value <= tol.null,
        "null_Dminus": clean and null_minus.value <= tol.null,
    }
    verdicts["is_blaschke"] = verdicts["is_equiaffine"] and volume_gap.value <= tol.identity
    verdicts["is_hypersphere"] = (
        verdicts["is_blaschke"]
        and shape_dev <= tol.identity
        and lambda_spread <= tol.identity
    )

    gate_ok = True
    if verdicts["is_centroaffine"] and verdicts["is_J_tangent"]:
        both_null = verdicts["null_Dplus"] and verdicts["null_Dminus"]
        if both_null and not (verdicts["is_hypersphere"] and verdicts["is_hyperquadric"]):
            gate_ok = False
        if verdicts["is_hyperquadric"] and not both_null:
            gate_ok = False

    residuals = {
        "frame_cond_max": cond_max.value,
        "solve_residual_max": solve_resid.value,
        "immersion_sigma_ratio_min": float(sigma_ratio_min if points else np.inf),
        "j_tangency_defect_max": defect_max.value,
        "paracontact_phi_sq_max": phi_sq_max.value,
        "paracontact_eta_xi_max": eta_xi_max.value,
        "tau_max": tau_max.value,
        "volume_gap_rel_max": volume_gap.value,
        "shape_deviation_max": float(shape_dev),
        "lambda_spread": float(lambda_spread),
        "centroaffine_residual_max": centro_resid.value,
        "centroaffine_lambda_spread": float(centro_spread),
        "nabla_h_max": nabla_h_max.value,
        "null_dplus_rel_max": null_plus.value,
        "null_dminus_rel_max": null_minus.value,
        "gauss_max": gauss.value,
        "codazzi_h_max": codazzi_h.value,
        "codazzi_shape_max": codazzi_shape.value,
        "ricci_max": ricci.value,
        "h_scale_max": h_scale_max.value,
    }

    return ClassificationReport(
        provenance=dict(getattr(oracle, "provenance", {})),
        tolerances=tol,
        grid=grid,
        verdicts=verdicts,
        residuals=residuals,
        profiles=profiles,
        lambda_fit=lambda_fit,
        gate_ok=gate_ok,
        errors=errors,
    )
