"""Figure rendering for the report-producing CLI commands.

Every renderer takes already-computed report data and writes a PNG next to
the delimited output; nothing here feeds back into verification.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def _finish(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_witness_gaps(rows, threshold: float, title: str, path):
    """Gap trajectory |P_n/Q_n - P_{n-1}/Q_{n-1}| with the certified floor."""
    ns = [r[0] for r in rows]
    gaps = [float(r[2]) for r in rows]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.semilogy(ns, gaps, "o-", ms=4, lw=1, label="approximant gap at y")
    ax.axhline(threshold, color="crimson", ls="--", lw=1.2,
               label=f"divergence threshold {threshold:g}")
    ax.set_xlabel("n")
    ax.set_ylabel("gap")
    ax.set_title(title)
    ax.legend()
    return _finish(fig, path)


def plot_schur_sweep(ms, diffs, classifications, title: str, path):
    """Agreement of the periodic-limit evaluation with the closed form."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    conv = [(m, float(d)) for m, d, c in zip(ms, diffs, classifications) if d is not None]
    if conv:
        xs, ys = zip(*conv)
        floor = 1e-60
        ax.semilogy(xs, [max(y, floor) for y in ys], "o", ms=5,
                    label="|periodic limit - closed form|")
    div = [m for m, d, c in zip(ms, diffs, classifications) if d is None]
    for m in div:
        ax.axvline(m, color="0.8", lw=1)
    if div:
        ax.plot([], [], color="0.8", lw=1, label="divergent orders (elliptic)")
    ax.set_xlabel("order m")
    ax.set_ylabel("difference")
    ax.set_title(title)
    ax.legend()
    return _finish(fig, path)


def plot_outside_limits(odd_diffs, even_diffs, title: str, path):
    """Odd/even approximant distances to their respective limits."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    floor = 1e-80

    def clipped(seq):
        return [max(float(v), floor) if v is not None else math.nan for v in seq]

    ax.semilogy(range(len(odd_diffs)), clipped(odd_diffs), lw=1.2,
                label="|odd approximant - 1/K(-1/q)|")
    ax.semilogy(range(len(even_diffs)), clipped(even_diffs), lw=1.2,
                label="|even approximant - K(1/q^4)/q|")
    ax.set_xlabel("j")
    ax.set_ylabel("difference")
    ax.set_title(title)
    ax.legend()
    return _finish(fig, path)


_CLASS_LEVELS = {
    "loxodromic": 0,
    "parabolic": 1,
    "terminating": 2,
    "elliptic": 3,
    "elliptic-degenerate": 4,
    "boundary": 5,
}


def plot_gg_classifications(entries, title: str, path):
    """Classification map of GG vs S2 per order, with conjecture exceptions."""
    fig, ax = plt.subplots(figsize=(8, 4.5))
    ms = [e.m for e in entries]
    gg_levels = [_CLASS_LEVELS.get(e.gg.kind, 5) for e in entries]
    s2_levels = [_CLASS_LEVELS.get(e.s2.kind, 5) for e in entries]
    ax.plot(ms, gg_levels, "s", ms=6, label="GG", alpha=0.75)
    ax.plot(ms, s2_levels, "o", ms=4, label="S2", alpha=0.75)
    for e in entries:
        if e.consistent is False:
            ax.axvline(e.m, color="crimson", lw=1, alpha=0.6)
    ax.set_yticks(sorted(_CLASS_LEVELS.values()))
    ax.set_yticklabels([k for k, _ in sorted(_CLASS_LEVELS.items(), key=lambda kv: kv[1])])
    ax.set_xlabel("order m")
    ax.set_title(title)
    ax.legend()
    return _finish(fig, path)
