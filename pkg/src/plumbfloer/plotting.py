"""Matplotlib figures for the ``hf`` and ``sweep`` reports (Agg backend, files only)."""
from __future__ import annotations

from collections import Counter
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .fullpath import HFBasis  # noqa: E402
from .sweep import CaseResult  # noqa: E402


def _save(fig, directory, name) -> Path:
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    path = out / name
    # fixed metadata keeps repeated renders byte-stable
    fig.savefig(path, dpi=100, metadata={"Software": None})
    plt.close(fig)
    return path


def plot_hf(basis: HFBasis, directory, title: str = "") -> list[Path]:
    """Correction term per Spin^c class and the gradings of every class."""
    blocks = list(basis)
    xs = range(len(blocks))
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))
    ax1.bar(xs, [float(b.d) for b in blocks], color=["tab:red" if b.spinc.is_spin else "tab:blue" for b in blocks])
    ax1.set_xlabel("Spin^c class (canonical order)")
    ax1.set_ylabel("d")
    ax1.set_title("correction terms (red: spin)")
    for i, b in enumerate(blocks):
        ys = [float(c.maslov) for c in b.classes]
        ax2.scatter([i] * len(ys), ys, s=12, color="black")
    ax2.set_xlabel("Spin^c class (canonical order)")
    ax2.set_ylabel("Maslov grading")
    ax2.set_title("correctly-ending classes")
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    return [_save(fig, directory, "hf.png")]


def plot_sweep(results: Sequence[CaseResult], directory, title: str = "") -> list[Path]:
    """Histogram of the twisting parameter ``q`` (twist suite) or pass/fail counts."""
    fig, ax = plt.subplots(figsize=(6, 4))
    qs = [r.values[0] for r in results if r.suite == "twist" and r.values]
    if qs:
        counts = Counter(qs)
        keys = sorted(counts)
        ax.bar(keys, [counts[k] for k in keys])
        ax.set_xlabel("q = -tw")
        ax.set_ylabel("cases")
        ax.set_yscale("log")
    else:
        ok = sum(r.ok for r in results)
        ax.bar(["pass", "fail"], [ok, len(results) - ok], color=["tab:green", "tab:red"])
        ax.set_ylabel("cases")
    ax.set_title(title or "sweep")
    fig.tight_layout()
    return [_save(fig, directory, "sweep.png")]
