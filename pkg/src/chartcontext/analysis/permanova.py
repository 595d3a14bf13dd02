"""Permutational multivariate analysis of variance on a distance matrix,
with pairwise post-hoc tests under Holm's step-down correction.

One-way design: group labels are permuted uniformly across observations.
The p-value uses the inclusive convention p = (1 + #{F_perm >= F_obs}) /
(1 + n_perm), and permutations are drawn in one batch from the seeded
generator so results are bit-identical however the statistic evaluations
are scheduled.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .. import kernels
from .distance import DistanceMatrix
from .paths import AnalysisError


@dataclass(frozen=True)
class PermanovaResult:
    f_stat: float
    p_value: float
    n_perm: int
    seed: int
    n: int
    n_groups: int
    degenerate: bool
    ss_total: float
    ss_within: float
    ss_between: float


@dataclass(frozen=True)
class PairwiseResult:
    pair: tuple[str, str]
    f_stat: float
    p_raw: float
    p_adjusted: float
    n_perm: int
    seed: int
    degenerate: bool


def _f_statistic(ss_between: float, ss_within: float, a: int, n: int) -> float:
    # SS_within of zero means perfectly separated (or fully tied) groups;
    # the permutation count still yields a valid p for that flagged case.
    if ss_within == 0.0 or n == a:
        return np.inf
    return (ss_between / (a - 1)) / (ss_within / (n - a))


def _group_codes(labels) -> tuple[np.ndarray, tuple[str, ...]]:
    names = tuple(sorted(set(labels)))
    index = {g: k for k, g in enumerate(names)}
    return np.array([index[l] for l in labels], dtype=np.int64), names


def permanova(
    matrix: DistanceMatrix | np.ndarray,
    labels,
    n_perm: int = 999,
    seed: int = 0,
) -> PermanovaResult:
    """Pseudo-F test of group differences on a distance matrix.

    SS_total = (1/n) sum_{i<j} d_ij^2, SS_within pools (1/n_g)-weighted
    within-group pair sums, F = (SS_between/(a-1)) / (SS_within/(n-a)).
    """
    d = matrix.values if isinstance(matrix, DistanceMatrix) else np.asarray(matrix, dtype=np.float64)
    labels = list(labels)
    n = d.shape[0]
    if len(labels) != n:
        raise AnalysisError(f"{len(labels)} labels for a {n}x{n} matrix")
    codes, names = _group_codes(labels)
    a = len(names)
    if a < 2:
        raise AnalysisError("need at least 2 groups")
    if n < a:
        raise AnalysisError("need at least as many observations as groups")

    d2 = d * d
    ss_total = float(np.triu(d2, k=1).sum()) / n
    ss_within = float(kernels.ss_within_batch(d2, codes[None, :], a)[0])
    f_obs = _f_statistic(ss_total - ss_within, ss_within, a, n)

    rng = np.random.default_rng(seed)
    order = np.argsort(rng.random((n_perm, n)), axis=1)
    permuted = codes[order]
    ss_w = kernels.ss_within_batch(d2, permuted, a)
    ss_b = ss_total - ss_w
    with np.errstate(divide="ignore", invalid="ignore"):
        f_perm = np.where(
            (ss_w == 0.0) | (n == a),
            np.inf,
            (ss_b / (a - 1)) / np.where(ss_w == 0.0, 1.0, ss_w / max(n - a, 1)),
        )
    count = int(np.count_nonzero(f_perm >= f_obs))
    p = (1 + count) / (1 + n_perm)

    return PermanovaResult(
        f_stat=float(f_obs),
        p_value=p,
        n_perm=n_perm,
        seed=int(seed),
        n=n,
        n_groups=a,
        degenerate=ss_within == 0.0 or n == a,
        ss_total=ss_total,
        ss_within=ss_within,
        ss_between=ss_total - ss_within,
    )


def holm_adjust(p_values) -> list[float]:
    """Holm step-down adjustment, returned in the input order: sort p
    ascending, multiply rank i (1-based) by (m - i + 1), cap at 1, and
    enforce monotonicity."""
    p_values = list(p_values)
    m = len(p_values)
    order = sorted(range(m), key=lambda i: p_values[i])
    adjusted = [0.0] * m
    running = 0.0
    for rank, idx in enumerate(order):
        running = max(running, min(1.0, (m - rank) * p_values[idx]))
        adjusted[idx] = running
    return adjusted


def pairwise_permanova_holm(
    matrix: DistanceMatrix | np.ndarray,
    labels,
    n_perm: int = 999,
    seed: int = 0,
) -> list[PairwiseResult]:
    """One PERMANOVA per group pair on the corresponding sub-matrix, with
    Holm-adjusted p-values.  Each pair gets an independent seed stream
    derived from (seed, pair), so results do not depend on evaluation
    order; a single pair degenerates to one unadjusted test."""
    d = matrix.values if isinstance(matrix, DistanceMatrix) else np.asarray(matrix, dtype=np.float64)
    labels = list(labels)
    codes, names = _group_codes(labels)
    if len(names) < 2:
        raise AnalysisError("need at least 2 groups")

    partial = []
    for gi, gj in itertools.combinations(range(len(names)), 2):
        mask = (codes == gi) | (codes == gj)
        sub_d = d[np.ix_(mask, mask)]
        sub_labels = [labels[k] for k in range(len(labels)) if mask[k]]
        pair_seed = int(np.random.SeedSequence([int(seed), gi, gj]).generate_state(1)[0])
        res = permanova(sub_d, sub_labels, n_perm=n_perm, seed=pair_seed)
        partial.append(((names[gi], names[gj]), res))

    adjusted = holm_adjust([res.p_value for _, res in partial])
    return [
        PairwiseResult(
            pair=pair,
            f_stat=res.f_stat,
            p_raw=res.p_value,
            p_adjusted=adj,
            n_perm=res.n_perm,
            seed=res.seed,
            degenerate=res.degenerate,
        )
        for (pair, res), adj in zip(partial, adjusted)
    ]
