"""Figure rendering for reports and simulations (matplotlib, Agg backend).

Two figures are supported: the oracle growth curve (log-log L against n,
with budget/infinite samples marked), and for two-dimensional inputs the
per-component effect geometry: short-cycle effect vectors, the covering
hyperplane and its normal.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .analyzer import AnalysisResult
from .core import Vass
from .increments import compute_inc
from .oracle import EXACT, OracleResult


class PlotError(RuntimeError):
    code = "plot"


def plot_growth(result: OracleResult, path: str, title: str = "oracle growth") -> None:
    exact = [(e.n, e.value) for e in result.entries if e.status == EXACT and e.value]
    other = [e for e in result.entries if e.status != EXACT]
    fig, ax = plt.subplots(figsize=(5.5, 4))
    if exact:
        xs, ys = zip(*exact)
        ax.plot(xs, ys, "o-", color="tab:blue", label="exact L(n)")
        ax.set_xscale("log", base=2)
        ax.set_yscale("log", base=2)
    for e in other:
        ax.axvline(e.n, color="tab:red" if e.status == "infinite" else "tab:orange",
                   linestyle="--", alpha=0.6)
        ax.text(e.n, 1, e.status, rotation=90, fontsize=8,
                color="tab:red" if e.status == "infinite" else "tab:orange")
    ax.set_xlabel("n (max initial counter)")
    ax.set_ylabel("L(n)")
    ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    if exact:
        ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_geometry(vass: Vass, result: AnalysisResult, path: str) -> None:
    """Per-component effect geometry; two-dimensional inputs only."""
    if vass.dimension != 2:
        raise PlotError(
            f"effect-geometry plots need dimension 2, input has {vass.dimension}"
        )
    sccs = result.sccs
    fig, axes = plt.subplots(1, len(sccs), figsize=(4.2 * len(sccs), 4.2), squeeze=False)
    for ax, scc in zip(axes[0], sccs):
        sub = vass.restrict(scc.states)
        effects = compute_inc(sub).sorted_effects()
        lim = max([2] + [abs(x) for e in effects for x in e]) + 1
        for e in effects:
            ax.annotate(
                "", xy=e, xytext=(0, 0),
                arrowprops=dict(arrowstyle="->", color="tab:red", lw=1.6),
            )
            ax.annotate(str(e), xy=e, fontsize=7, color="tab:red")
        verdict = scc.verdict
        normal: Optional[tuple] = None
        if verdict.category is not None:
            normal = verdict.category.evidence_normal()
        if normal is not None:
            nx, ny = (float(Fraction(x)) for x in normal)
            scale = lim * 0.7 / max(abs(nx), abs(ny), 1e-9)
            ax.annotate(
                "", xy=(nx * scale, ny * scale), xytext=(0, 0),
                arrowprops=dict(arrowstyle="->", color="tab:blue", lw=2.0),
            )
            # covering hyperplane: the line orthogonal to the normal
            hx, hy = -ny, nx
            hscale = lim / max(abs(hx), abs(hy), 1e-9)
            ax.plot(
                [-hx * hscale, hx * hscale], [-hy * hscale, hy * hscale],
                color="tab:green", linestyle="--", lw=1.2,
            )
        ax.set_xlim(-lim, lim)
        ax.set_ylim(-lim, lim)
        ax.axhline(0, color="gray", lw=0.5)
        ax.axvline(0, color="gray", lw=0.5)
        ax.set_aspect("equal")
        ax.grid(True, alpha=0.25)
        ax.set_title(
            "{" + ",".join(scc.states) + "}: " + verdict.describe(), fontsize=9
        )
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
