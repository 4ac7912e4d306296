"""PNG figures written next to the CSV reports (non-interactive backend)."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def _save(fig, path: Path) -> Path:
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def counting_figure(Q: int, table: Sequence[tuple[int, int, int]], path: Path | str) -> Path:
    """C_Q(x) and C_Q(x)/x, confirmed count with the unresolved band on top."""
    xs = [r[0] for r in table]
    lo = [r[1] for r in table]
    hi = [r[1] + r[2] for r in table]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))
    ax1.step(xs, lo, where="post", label="confirmed")
    ax1.fill_between(xs, lo, hi, step="post", alpha=0.3, label="unresolved")
    ax1.set_xlabel("x")
    ax1.set_title(f"C_{Q}(x)")
    ax1.legend()
    ax2.plot(xs, [c / x for x, c in zip(xs, lo)], label="confirmed")
    ax2.plot(xs, [c / x for x, c in zip(xs, hi)], linestyle="--", label="upper")
    ax2.set_xlabel("x")
    ax2.set_title(f"C_{Q}(x)/x")
    ax2.legend()
    return _save(fig, Path(path))


def m_figure(a_values: Sequence[int], m_values: Sequence[int], averages: Sequence[float], path: Path | str) -> Path:
    """m(a_n) against n, and the running average A(x)."""
    n = list(range(1, len(m_values) + 1))
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))
    ax1.scatter(n, m_values, s=8)
    ax1.set_xlabel("n")
    ax1.set_title("m(a_n)")
    ax2.plot(n, averages)
    ax2.set_xlabel("x")
    ax2.set_title("A(x)")
    return _save(fig, Path(path))
