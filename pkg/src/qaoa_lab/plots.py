"""Static SVG figures from sweep records."""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .amplitude import symmetry_image  # noqa: E402
from .concentration import concentration_points, fit_scaling  # noqa: E402
from .errors import FitError  # noqa: E402

KINDS = ("angles", "branches", "scaling")

# fixed ids and no date stamp, so the same data gives the same bytes
_RC = {"svg.hashsalt": "qaoa-lab", "svg.fonttype": "path", "path.simplify": False}


def _angles(ax_beta, ax_gamma, records, layer):
    n = np.array([r.n for r in records])
    k = (records[0].p if layer is None else layer) - 1
    ax_beta.plot(n, [r.params.betas[k] for r in records], "o", color="tab:orange",
                 label=rf"$\beta_{k + 1}$ (numerical)")
    ax_gamma.plot(n, [r.params.gammas[k] for r in records], "o", color="tab:blue",
                  label=rf"$\gamma_{k + 1}$ (numerical)")
    grid = np.linspace(n.min(), n.max(), 200) if n.size > 1 else n.astype(float)
    ax_beta.plot(grid, math.pi / (grid + 4), "-", color="tab:orange", label=r"$\pi/(n+4)$")
    ax_gamma.plot(grid, math.pi * (grid + 2) / (grid + 4), "-", color="tab:blue",
                  label=r"$\pi(n+2)/(n+4)$")
    ax_beta.set_ylabel("beta")
    ax_gamma.set_ylabel("gamma")
    ax_gamma.set_xlabel("n (qubits)")
    ax_beta.legend()
    ax_gamma.legend()


def _branches(ax, records):
    for branch, color in (("canonical", "tab:blue"), ("mirrored", "tab:orange")):
        xs, ys = [], []
        for rec in records:
            here = rec.params if rec.result.branch == branch else symmetry_image(rec.params)
            xs.extend(here.betas)
            ys.extend(here.gammas)
        ax.plot(xs, ys, "o", ms=4, color=color, label=f"{branch} branch")
    ax.set_xlim(0, math.pi)
    ax.set_ylim(0, 2 * math.pi)
    ax.set_xlabel("beta_k")
    ax.set_ylabel("gamma_k")
    ax.legend()


def _scaling(ax, records):
    by_depth: dict[int, list] = {}
    for rec in records:
        by_depth.setdefault(rec.p, []).append(rec)
    plotted = False
    for p, recs in sorted(by_depth.items()):
        points = concentration_points(recs)
        if not points:
            continue
        n = np.array([pt.n for pt in points], dtype=float)
        d = np.array([pt.delta_sq for pt in points])
        ax.loglog(n, d, "o", label=f"p={p}")
        plotted = True
        try:
            fit = fit_scaling(points)
        except FitError:
            continue
        ax.loglog(n, fit.prefactor * n**fit.exponent, "-",
                  label=f"p={p} fit: slope {fit.exponent:.3f}")
    if not plotted:
        n = np.array([r.n for r in records], dtype=float)
        ax.loglog(n, np.full_like(n, np.nan), "o")
    ax.set_xlabel("n (qubits)")
    ax.set_ylabel("squared parameter distance to n+1")
    if plotted:
        ax.legend()


def emit_plot(records, kind: str, path, layer: int | None = None) -> Path:
    """Write an SVG of ``kind`` ('angles', 'branches' or 'scaling') to ``path``."""
    records = sorted(records, key=lambda r: (r.p, r.n))
    if not records:
        raise ValueError("no records to plot")
    if kind not in KINDS:
        raise ValueError(f"unknown plot kind {kind!r}; expected one of {KINDS}")
    path = Path(path)
    with plt.rc_context(_RC):
        if kind == "angles":
            fig, (ax_b, ax_g) = plt.subplots(2, 1, sharex=True, figsize=(6, 6))
            _angles(ax_b, ax_g, records, layer)
        else:
            fig, ax = plt.subplots(figsize=(6, 5))
            if kind == "branches":
                _branches(ax, records)
            else:
                _scaling(ax, records)
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
    return path
