"""Figure rendering for report outputs.

Pure file targets: the Agg backend is forced so report commands can render
alongside their CSV/JSON artifacts on headless machines.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

_FIG_KW = dict(figsize=(6.0, 4.5), dpi=150)


def _finish(fig, path: str | Path) -> Path:
    path = Path(path)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def plot_triples(rows, path: str | Path) -> Path:
    """Two-color scatter of triple legs, prime hypotenuses highlighted."""
    fig, ax = plt.subplots(**_FIG_KW)
    for marker, color, size in (("composite", "#b0b0b0", 4), ("prime", "#d62728", 9)):
        xs = [abs(r.triple.x) for r in rows if r.marker == marker]
        ys = [abs(r.triple.y) for r in rows if r.marker == marker]
        ax.scatter(xs, ys, s=size, c=color, label=marker, linewidths=0)
    ax.set_xlabel("|x|")
    ax.set_ylabel("|y|")
    ax.set_title("orbit triples by hypotenuse primality")
    ax.legend(loc="upper right", fontsize=8)
    return _finish(fig, path)


def plot_growth(counts: Sequence[tuple[float, int]], delta_hat: float, path: str | Path) -> Path:
    """Ball growth on log-log axes with the fitted power law."""
    ts = [t for t, _ in counts]
    ns = [n for _, n in counts]
    fig, ax = plt.subplots(**_FIG_KW)
    ax.loglog(ts, ns, "o-", label="N(T)")
    anchor = ns[0] / ts[0] ** (2 * delta_hat)
    ax.loglog(ts, [anchor * t ** (2 * delta_hat) for t in ts], "--",
              label=f"slope 2*{delta_hat:.3f}")
    ax.set_xlabel("T")
    ax.set_ylabel("ball count")
    ax.set_title("orbit ball growth")
    ax.legend(fontsize=8)
    return _finish(fig, path)


def plot_remainders(rows, path: str | Path) -> Path:
    """Remainder magnitude |r(q)| per admissible modulus."""
    qs = [row.q for row in rows]
    rs = [abs(float(row.remainder)) for row in rows]
    fig, ax = plt.subplots(**_FIG_KW)
    ax.bar([str(q) for q in qs], rs, color="#1f77b4")
    ax.set_xlabel("q")
    ax.set_ylabel("|remainder|")
    ax.set_title("congruence remainders")
    if len(qs) > 20:
        ax.tick_params(axis="x", labelsize=6, rotation=90)
    return _finish(fig, path)
