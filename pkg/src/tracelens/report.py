"""Figure rendering for the reporting subcommands.

matplotlib is imported lazily with the Agg backend so plain CLI runs never pay
the import or need a display; figures land as PNG files next to the delimited
output.
"""

from __future__ import annotations

import os
from typing import Sequence

from .error_model import ErrorTableRow
from .heavyhitters import MineResult
from .synth import BenchReport

os.environ.setdefault("MPLBACKEND", "Agg")


def _pyplot():
    import matplotlib.pyplot as plt

    return plt


def save_error_table_figure(rows: Sequence[ErrorTableRow], path: str) -> str:
    plt = _pyplot()
    cs = [r.C for r in rows]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.semilogy(cs, [r.fn_prob for r in rows], "o-", label="false negative")
    ax.semilogy(cs, [r.sfp_prob for r in rows], "s-", label="sig. false positive (strict)")
    ax.semilogy(
        cs,
        [r.sfp_prob_inclusive for r in rows],
        "s--",
        label="sig. false positive (inclusive)",
    )
    ax.set_xlabel("oversampling parameter C")
    ax.set_ylabel("probability")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_mine_figure(result: MineResult, path: str, *, top: int = 20) -> str:
    plt = _pyplot()
    rows = result.candidates[:top]
    fig, ax = plt.subplots(figsize=(7, max(2.5, 0.35 * len(rows) + 1.5)))
    names = ["-".join(map(str, r.trace)) for r in rows]
    values = [r.est_frequency for r in rows]
    ypos = range(len(rows))
    ax.barh(list(ypos), values, color="#4878a8")
    ax.set_yticks(list(ypos))
    ax.set_yticklabels(names, fontsize=8)
    ax.invert_yaxis()
    ax.set_xlabel("estimated frequency (sample count / p)")
    ax.axvline(result.epsilon, color="crimson", linestyle="--", label="threshold")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_bench_figure(report: BenchReport, path: str) -> str:
    plt = _pyplot()
    fig, (ax_items, ax_time) = plt.subplots(1, 2, figsize=(8, 3.5))
    ax_items.bar(
        ["enumerated", "sampled"],
        [report.enumerated_items, report.sampled_items],
        color=["#888888", "#4878a8"],
    )
    ax_items.set_ylabel("emitted items")
    ax_items.set_yscale("log")
    ax_items.set_title(f"items ratio {report.items_ratio:.1f}x")
    ax_time.bar(
        ["enumeration", "mining"],
        [report.enumeration_seconds, report.sampling_seconds],
        color=["#888888", "#4878a8"],
    )
    ax_time.set_ylabel("seconds")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
