"""Error probabilities of the sampling pipeline under the Poisson
approximation to the binomial sample-count distribution.

A trace at the threshold frequency epsilon collects Poisson(C) samples in
expectation and is missed when that count fails to exceed floor(C/2); a trace
at a quarter of the threshold collects Poisson(C/4) samples and is a
significantly-false positive when it does exceed it. Both threshold
conventions (strictly above floor(C/2), and at-or-above) are computed because
they differ for even C; the reporting pipeline uses the strict one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence


def _logaddexp(a: float, b: float) -> float:
    if a == float("-inf"):
        return b
    if b == float("-inf"):
        return a
    hi, lo = (a, b) if a >= b else (b, a)
    return hi + math.log1p(math.exp(lo - hi))


def poisson_tail(lam: float, j: int) -> float:
    """P(X <= j) for X ~ Poisson(lam), by log-space term accumulation.

    Absolute error stays below 1e-9 for lam up to a few hundred.
    """
    if lam <= 0:
        raise ValueError(f"lam must be positive, got {lam}")
    if j < 0:
        return 0.0
    log_lam = math.log(lam)
    log_term = -lam
    log_sum = log_term
    for i in range(1, j + 1):
        log_term += log_lam - math.log(i)
        log_sum = _logaddexp(log_sum, log_term)
    return min(1.0, math.exp(log_sum))


def false_negative_prob(oversampling: int) -> float:
    """Probability that a threshold-frequency trace gathers too few samples
    to be reported: P(Poisson(C) <= floor(C/2))."""
    if oversampling < 1:
        raise ValueError("C must be a positive integer")
    return poisson_tail(float(oversampling), oversampling // 2)


def sig_false_positive_prob(oversampling: int) -> float:
    """Probability that a quarter-threshold trace clears the report bar:
    P(Poisson(C/4) >= floor(C/2) + 1)."""
    if oversampling < 1:
        raise ValueError("C must be a positive integer")
    return 1.0 - poisson_tail(oversampling / 4.0, oversampling // 2)


def sig_false_positive_prob_inclusive(oversampling: int) -> float:
    """Same event under the at-or-above convention:
    P(Poisson(C/4) >= floor(C/2)). Differs from the strict form for even C."""
    if oversampling < 1:
        raise ValueError("C must be a positive integer")
    return 1.0 - poisson_tail(oversampling / 4.0, oversampling // 2 - 1)


@dataclass(frozen=True)
class ErrorTableRow:
    C: int
    fn_prob: float
    sfp_prob: float
    sfp_prob_inclusive: float


def error_table(oversampling_values: Sequence[int]) -> list[ErrorTableRow]:
    return [
        ErrorTableRow(
            C=c,
            fn_prob=false_negative_prob(c),
            sfp_prob=sig_false_positive_prob(c),
            sfp_prob_inclusive=sig_false_positive_prob_inclusive(c),
        )
        for c in oversampling_values
    ]


def recommend_C(delta: float, *, max_c: int = 1000) -> int:
    """Smallest C whose false-negative probability is at most delta.

    The scan is a plain upward sweep; the probability zigzags with the parity
    of floor(C/2), so the first qualifying C may be odd.
    """
    if not (0.0 < delta < 1.0):
        raise ValueError(f"delta must be in (0, 1), got {delta}")
    for c in range(1, max_c + 1):
        if false_negative_prob(c) <= delta:
            return c
    raise ValueError(f"no C up to {max_c} achieves delta={delta}")


def format_error_table(rows: Sequence[ErrorTableRow]) -> str:
    """Aligned text rendering with both false-positive conventions."""
    header = (
        f"{'C':>4}  {'FN P(N<=C/2)':>14}  {'SFP strict':>12}  {'SFP inclusive':>14}"
    )
    lines = [header, "-" * len(header)]
    for row in rows:
        lines.append(
            f"{row.C:>4}  {row.fn_prob:>14.3g}  {row.sfp_prob:>12.3g}  "
            f"{row.sfp_prob_inclusive:>14.3g}"
        )
    return "\n".join(lines)
