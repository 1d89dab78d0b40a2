"""Figure rendering for solve traces and benchmark tables.

Everything here writes PNG files with the non-interactive Agg backend; no
display is ever opened.  The CLI calls these when --figdir is given, placing
the figures alongside the CSV/JSON output.
"""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def render_trace_figures(figdir, records, stem: str = "trace") -> list:
    """Plot potential value and direction norm against the outer iteration.

    Returns the list of written file paths.
    """
    os.makedirs(figdir, exist_ok=True)
    outer = [r for r in records if r.phase == "outer"]
    written = []
    if not outer:
        return written
    ks = np.array([r.k for r in outer])
    f_mu = np.array([r.f_mu for r in outer])
    v_norm = np.array([r.v_norm_x for r in outer])

    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(ks, f_mu, lw=1.2)
    ax.set_xlabel("outer iteration k")
    ax.set_ylabel(r"$F_\mu(x^k)$")
    ax.set_title("potential decrease")
    ax.grid(True, alpha=0.3)
    path = os.path.join(figdir, f"{stem}_potential.png")
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    written.append(path)

    fig, ax = plt.subplots(figsize=(6, 4))
    pos = v_norm > 0
    if pos.any():
        ax.semilogy(ks[pos], v_norm[pos], lw=1.2)
    else:
        ax.plot(ks, v_norm, lw=1.2)
    ax.set_xlabel("outer iteration k")
    ax.set_ylabel(r"$\|v^k\|_{x^k}$")
    ax.set_title("direction norm")
    ax.grid(True, alpha=0.3, which="both")
    path = os.path.join(figdir, f"{stem}_vnorm.png")
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    written.append(path)
    return written


def render_bench_figure(figdir, rows, stem: str = "bench") -> list:
    """Log-log iterations against accuracy, one line per problem.

    rows: iterable of dicts with keys problem, eps, iterations.
    """
    os.makedirs(figdir, exist_ok=True)
    by_problem: dict = {}
    for row in rows:
        by_problem.setdefault(row["problem"], []).append(
            (float(row["eps"]), int(row["iterations"]))
        )
    if not by_problem:
        return []
    fig, ax = plt.subplots(figsize=(6, 4))
    for name, pts in sorted(by_problem.items()):
        pts.sort(reverse=True)
        eps = [p[0] for p in pts]
        its = [max(p[1], 1) for p in pts]
        ax.loglog(eps, its, "o-", label=name)
    ax.invert_xaxis()
    ax.set_xlabel(r"accuracy $\varepsilon$")
    ax.set_ylabel("iterations")
    ax.set_title("iteration count against accuracy")
    ax.grid(True, alpha=0.3, which="both")
    ax.legend(fontsize=8)
    path = os.path.join(figdir, f"{stem}_iters.png")
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    return [path]
