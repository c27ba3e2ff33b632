"""Serialization and figure rendering for classification and sampling output.

Two delimited formats are supported everywhere:

* JSON -- a single object with ``schema_version`` at the top.
* CSV  -- classification reports flatten to ``section,name,value`` rows;
  per-point tables use one row per grid point with a fixed column order.

Figures are opt-in and rendered with the non-interactive Agg backend so the
report path never needs a display.
"""

from __future__ import annotations

import csv
import io
import json

import numpy as np

from .affine import full_structure
from .classify import ClassificationReport, GridSpec

SAMPLE_COLUMNS = ("x", "y", "z", "f1", "f2", "f3", "f4")
TABLE_COLUMNS = SAMPLE_COLUMNS + (
    "h11", "h12", "h13", "h22", "h23", "h33",
    "S11", "S12", "S13", "S21", "S22", "S23", "S31", "S32", "S33",
    "tau1", "tau2", "tau3",
    "theta", "omega_h",
)


def report_json(report: ClassificationReport) -> str:
    return json.dumps(report.to_dict(), indent=2, sort_keys=False)


def report_csv(report: ClassificationReport) -> str:
    d = report.to_dict()
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["section", "name", "value"])
    writer.writerow(["meta", "schema_version", d["schema_version"]])
    writer.writerow(["meta", "provenance", json.dumps(d["provenance"], sort_keys=True)])
    writer.writerow(["meta", "grid_shape", "x".join(str(n) for n in d["grid"]["shape"])])
    writer.writerow(["meta", "grid_box", json.dumps(d["grid"]["box"])])
    for key, value in d["tolerances"].items():
        writer.writerow(["tolerance", key, repr(value)])
    for key, value in d["verdicts"].items():
        writer.writerow(["verdict", key, "true" if value else "false"])
    for key, value in d["residuals"].items():
        writer.writerow(["residual", key, repr(value)])
    writer.writerow(["meta", "lambda_fit", repr(d["lambda_fit"])])
    writer.writerow(["meta", "gate_ok", "true" if d["gate_ok"] else "false"])
    writer.writerow(["meta", "error_count", len(d["errors"])])
    for err in d["errors"]:
        writer.writerow(["error", json.dumps(err["point"]), f"{err['error']}: {err['detail']}"])
    return buf.getvalue()


def _sample_row(oracle, point, values_only: bool):
    f_jet, c_jet = oracle.jet_at(*point)
    if values_only:
        return list(point) + [float(v) for v in f_jet.value()]
    data, tensors = full_structure(f_jet, c_jet, point)
    row = list(point) + [float(v) for v in f_jet.value()]
    row += [data.h[i, j] for i, j in ((0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2))]
    row += [data.S[l, i] for l in range(3) for i in range(3)]
    row += list(data.tau)
    row += [tensors.theta, tensors.omega_h]
    return [float(v) for v in row]


def sample_rows(oracle, grid: GridSpec, values_only: bool = False) -> list:
    """Evaluate the immersion (and, unless values_only, its induced data) on a grid."""
    return [_sample_row(oracle, p, values_only) for p in grid.points()]


def table_json(oracle, grid: GridSpec, kind: str, values_only: bool = False) -> str:
    columns = SAMPLE_COLUMNS if values_only else TABLE_COLUMNS
    rows = sample_rows(oracle, grid, values_only)
    payload = {
        "schema_version": 1,
        "kind": kind,
        "provenance": oracle.provenance,
        "grid": {"box": [list(b) for b in grid.box], "shape": list(grid.shape)},
        "columns": list(columns),
        "rows": rows,
    }
    return json.dumps(payload, indent=2)


def table_csv(oracle, grid: GridSpec, values_only: bool = False) -> str:
    columns = SAMPLE_COLUMNS if values_only else TABLE_COLUMNS
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in sample_rows(oracle, grid, values_only):
        writer.writerow([repr(v) for v in row])
    return buf.getvalue()


def _use_agg():
    import matplotlib

    matplotlib.use("Agg", force=False)
    import matplotlib.pyplot as plt

    return plt


def render_report_figures(report: ClassificationReport, base: str) -> list:
    """Render residual and profile diagnostics next to a report.

    ``base`` is the output path without extension; returns the written paths.
    """
    plt = _use_agg()
    paths = []

    residuals = {k: v for k, v in report.residuals.items() if v is not None}
    fig, ax = plt.subplots(figsize=(7, 0.35 * len(residuals) + 1.5))
    names = list(residuals)
    values = [max(residuals[k], 1e-18) for k in names]
    ax.barh(range(len(names)), values, color="#35608d")
    ax.set_yticks(range(len(names)), names, fontsize=7)
    ax.set_xscale("log")
    ax.axvline(report.tolerances.identity, color="#b02a2a", linestyle="--", linewidth=1)
    ax.set_xlabel("worst value over the grid (log scale)")
    ax.set_title("classification residuals")
    fig.tight_layout()
    path = f"{base}_residuals.png"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    paths.append(path)

    profile_keys = [k for k, series in report.profiles.items() if any(v is not None for v in series)]
    if profile_keys:
        fig, axes = plt.subplots(len(profile_keys), 1, figsize=(7, 1.6 * len(profile_keys)),
                                 sharex=True, squeeze=False)
        for ax, key in zip(axes[:, 0], profile_keys):
            series = report.profiles[key]
            xs = [i for i, v in enumerate(series) if v is not None]
            ys = [series[i] for i in xs]
            ax.plot(xs, ys, linewidth=1, color="#35608d")
            ax.set_ylabel(key, fontsize=8)
        axes[-1, 0].set_xlabel("grid point index")
        fig.suptitle("per-point profiles")
        fig.tight_layout()
        path = f"{base}_profiles.png"
        fig.savefig(path, dpi=120)
        plt.close(fig)
        paths.append(path)
    return paths


def render_table_figures(oracle, grid: GridSpec, base: str) -> list:
    """Render the volume-form profiles of a sampled immersion."""
    plt = _use_agg()
    rows = sample_rows(oracle, grid, values_only=False)
    theta_col = TABLE_COLUMNS.index("theta")
    omega_col = TABLE_COLUMNS.index("omega_h")
    theta = [row[theta_col] for row in rows]
    omega = [row[omega_col] for row in rows]
    fig, ax = plt.subplots(figsize=(7, 3))
    ax.plot(theta, label="theta", linewidth=1)
    ax.plot(omega, label="omega_h", linewidth=1)
    ax.plot(np.abs(theta), label="|theta|", linewidth=1, linestyle=":")
    ax.set_xlabel("grid point index")
    ax.legend(fontsize=8)
    ax.set_title("volume forms along the sample grid")
    fig.tight_layout()
    path = f"{base}_volume.png"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return [path]
