"""Optional figures (matplotlib, Agg backend)."""

from __future__ import annotations

import math
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .arith import DiscriminantPair  # noqa: E402


def _figure(width: float = 6.0):
    golden = (math.sqrt(5) - 1) / 2
    fig, ax = plt.subplots(figsize=(width, width * golden))
    ax.grid(True, alpha=0.3)
    return fig, ax


def plot_class_invariants(d: int, kind: str, prec: int, path: Path) -> Path:
    """Scatter of the roots of the class polynomial in the complex plane."""
    from .modeval import class_invariant, j_invariant, new_context
    from .quadratic import reduced_forms

    pts = []
    for f in reduced_forms(d):
        if kind == "weber":
            z = class_invariant(f, prec).value
        else:
            ctx = new_context(prec)
            z = j_invariant(ctx.mpc(-f.b, ctx.sqrt(-d)) / (2 * f.a), prec).value
        pts.append((float(z.real), float(z.imag)))
    fig, ax = _figure()
    ax.scatter([p[0] for p in pts], [p[1] for p in pts], s=36, color="k")
    ax.axhline(0, color="0.6", lw=0.8)
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    ax.set_title(f"{kind} class invariants, d = {d}")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def plot_worked_table(pair: DiscriminantPair, rows: Sequence, path: Path) -> Path:
    """log F(m) against a for the rows a^2 + 4m = D."""
    fig, ax = _figure()
    xs = [r.a for r in rows]
    ys = [math.log(r.values[0]) for r in rows]
    ax.bar(xs, ys, width=1.2, color="0.3")
    ax.set_xlabel("a")
    ax.set_ylabel("log F(m)")
    ax.set_title(f"a^2 + 4m = {pair.D}")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path
