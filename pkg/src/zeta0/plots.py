"""Optional figure for a computed table: the coefficients of w1*theta per row."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def plot_table(reports: Sequence[dict], path: str) -> None:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    rows = [r for r in reports if "error" not in r]
    fig, ax = plt.subplots(figsize=(max(6, 0.45 * len(rows)), 4))
    labels = ["1", "σ", "σ²"]
    markers = ["o", "s", "^"]
    xs = range(len(rows))
    for j in range(3):
        ys = [float(Fraction(r["diagnostics"]["theta"][j])) * r["diagnostics"]["tower"]["w1"]
              for r in rows]
        ax.scatter(xs, ys, marker=markers[j], label=f"coefficient of {labels[j]}")
    for x, r in zip(xs, rows):
        if r["condition_iv"]:
            ax.axvspan(x - 0.4, x + 0.4, color="0.9", zorder=0)
    ax.axhline(0, color="0.5", lw=0.5)
    ax.set_xticks(list(xs), [str(r["n"]) for r in rows], rotation=60)
    ax.set_xlabel("n (shaded: condition (iv) holds)")
    ax.set_ylabel("w1 θ(0), part multiplying (1 − τ)")
    ax.legend(fontsize="small")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
