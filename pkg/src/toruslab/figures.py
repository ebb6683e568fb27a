"""Figure rendering for reports and tables.

Rendered next to the delimited output when --figures is passed: a check
summary bar, a structure-constant class heatmap (which scalar class each
(sigma, tau) product carries), and a rank-2 support scatter.  Everything
goes through the Agg backend so the CLI stays headless.
"""

from __future__ import annotations

from typing import Optional

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
from matplotlib.colors import ListedColormap

from .config import Instance
from .report import CheckResult


def render_check_summary(results: list[CheckResult], path: str) -> None:
    """Horizontal bar per check: green pass, olive window-verified, red fail."""
    names = [r.name for r in results]
    colors = {"pass": "#2a9d38", "window-verified": "#7aa638", "fail": "#c03324"}
    fig, ax = plt.subplots(figsize=(7, 0.42 * len(results) + 1.2))
    ax.barh(range(len(results)), [1] * len(results),
            color=[colors[r.status] for r in results])
    ax.set_yticks(range(len(results)))
    ax.set_yticklabels(names, fontsize=8)
    ax.invert_yaxis()
    ax.set_xticks([])
    for i, r in enumerate(results):
        ax.text(0.02, i, r.status, va="center", fontsize=8, color="white")
    ax.set_title("verification checks")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def _coeff_class(text: str) -> int:
    # 0 zero, 1 one, 2 minus-one, 3 w-monomial, 4 other
    if text == "0":
        return 0
    if text == "1":
        return 1
    if text == "-1":
        return 2
    if "w" in text:
        return 3
    return 4


def render_structure_heatmap(rows: list[dict], path: str, title: str = "") -> None:
    """Class heatmap of the structure constants over (sigma, tau) order."""
    sigmas = sorted({tuple(r["sigma"]) for r in rows})
    taus = sorted({tuple(r["tau"]) for r in rows})
    sigma_ix = {s: i for i, s in enumerate(sigmas)}
    tau_ix = {t: i for i, t in enumerate(taus)}
    grid = [[0 for _ in taus] for _ in sigmas]
    for r in rows:
        grid[sigma_ix[tuple(r["sigma"])]][tau_ix[tuple(r["tau"])]] = _coeff_class(r["coeff"])
    cmap = ListedColormap(["#f2f2f2", "#2456c0", "#c03324", "#2a9d38", "#e0a010"])
    fig, ax = plt.subplots(figsize=(6.4, 6))
    ax.imshow(grid, cmap=cmap, vmin=0, vmax=4, interpolation="nearest")
    ax.set_xlabel("tau (lexicographic)")
    ax.set_ylabel("sigma (lexicographic)")
    ax.set_title(title or "structure constant classes")
    handles = [plt.Rectangle((0, 0), 1, 1, color=c)
               for c in cmap.colors]
    ax.legend(handles, ["0", "1", "-1", "w-monomial", "other"],
              loc="upper left", bbox_to_anchor=(1.01, 1), fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def render_support_scatter(inst: Instance, bound: int, path: str) -> Optional[str]:
    """Rank-2 window scatter: support points filled, gaps hollow."""
    if inst.rank != 2 or inst.view is None:
        return None
    support = set(inst.view.support_window(bound))
    xs_in, ys_in, xs_out, ys_out = [], [], [], []
    for x in range(-bound, bound + 1):
        for y in range(-bound, bound + 1):
            if (x, y) in support:
                xs_in.append(x)
                ys_in.append(y)
            else:
                xs_out.append(x)
                ys_out.append(y)
    fig, ax = plt.subplots(figsize=(4.6, 4.6))
    ax.scatter(xs_in, ys_in, s=90, color="#2456c0", label="support")
    ax.scatter(xs_out, ys_out, s=90, facecolors="none", edgecolors="#9a9a9a", label="zero")
    ax.set_xticks(range(-bound, bound + 1))
    ax.set_yticks(range(-bound, bound + 1))
    ax.grid(alpha=0.25)
    ax.set_aspect("equal")
    ax.legend(fontsize=8)
    ax.set_title(f"graded support, window {bound}")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return path
