"""External clustering validity indices.

All scores are computed from the contingency table of the two labelings
and are therefore invariant to relabeling on either side.  Degenerate
cases follow fixed conventions: zero-entropy partitions give NMI 1 when
the two set partitions coincide and 0 otherwise, and the adjusted Rand
index of two trivial (zero-variance) partitions is 1 when they coincide
and 0 otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import InputError

__all__ = [
    "Contingency",
    "contingency",
    "hungarian_match",
    "accuracy",
    "nmi",
    "purity",
    "ari",
    "f_score",
]


@dataclass(frozen=True)
class Contingency:
    """Joint count table of a predicted and a reference labeling."""

    table: np.ndarray       # (n_pred_clusters, n_true_classes) int64
    pred_sizes: np.ndarray  # row sums
    true_sizes: np.ndarray  # column sums
    n: int


def _check_pair(pred, truth):
    pred = np.asarray(pred)
    truth = np.asarray(truth)
    if pred.ndim != 1 or truth.ndim != 1:
        raise InputError("labelings must be 1-d")
    if pred.size != truth.size:
        raise InputError(f"length mismatch: {pred.size} predictions, {truth.size} labels")
    if pred.size == 0:
        raise InputError("empty labelings")
    return pred, truth


def contingency(pred, truth) -> Contingency:
    pred, truth = _check_pair(pred, truth)
    _, pi = np.unique(pred, return_inverse=True)
    _, ti = np.unique(truth, return_inverse=True)
    cp = int(pi.max()) + 1
    ct = int(ti.max()) + 1
    table = np.bincount(pi * ct + ti, minlength=cp * ct).reshape(cp, ct)
    return Contingency(
        table=table.astype(np.int64),
        pred_sizes=table.sum(axis=1),
        true_sizes=table.sum(axis=0),
        n=int(pred.size),
    )


def hungarian_match(cost: np.ndarray) -> np.ndarray:
    """Permutation p minimizing sum_i cost[i, p[i]].

    Rectangular input is zero-padded to square first, so the returned
    permutation always has length max(cost.shape).
    """
    c = np.asarray(cost, dtype=float)
    if c.ndim != 2:
        raise InputError(f"hungarian_match expects a matrix, got ndim={c.ndim}")
    if not np.all(np.isfinite(c)):
        raise InputError("hungarian_match input contains non-finite entries")
    size = max(c.shape)
    padded = np.zeros((size, size))
    padded[: c.shape[0], : c.shape[1]] = c
    _, cols = linear_sum_assignment(padded)
    return cols


def _same_partition(pred, truth) -> bool:
    """True when the two labelings induce the same set partition."""
    seen_p: dict = {}
    seen_t: dict = {}
    for a, b in zip(pred.tolist(), truth.tolist()):
        if seen_p.setdefault(a, len(seen_p)) != seen_t.setdefault(b, len(seen_t)):
            return False
    return True


def accuracy(pred, truth) -> float:
    """Fraction correct under the best one-to-one cluster-to-class map."""
    ct = contingency(pred, truth)
    size = max(ct.table.shape)
    counts = np.zeros((size, size))
    counts[: ct.table.shape[0], : ct.table.shape[1]] = ct.table
    perm = hungarian_match(-counts)
    matched = counts[np.arange(size), perm].sum()
    return float(matched / ct.n)


def nmi(pred, truth) -> float:
    """Mutual information normalized by the geometric mean of entropies
    (natural logarithms)."""
    ct = contingency(pred, truth)
    pu = ct.pred_sizes / ct.n
    pv = ct.true_sizes / ct.n
    hu = float(-(pu * np.log(pu)).sum())
    hv = float(-(pv * np.log(pv)).sum())
    if hu == 0.0 or hv == 0.0:
        pred, truth = _check_pair(pred, truth)
        return 1.0 if _same_partition(pred, truth) else 0.0
    pij = ct.table / ct.n
    mask = pij > 0
    outer = np.outer(pu, pv)
    mi = float((pij[mask] * np.log(pij[mask] / outer[mask])).sum())
    return float(min(max(mi / np.sqrt(hu * hv), 0.0), 1.0))


def purity(pred, truth) -> float:
    """Mean over samples of the majority-class share of their cluster."""
    ct = contingency(pred, truth)
    return float(ct.table.max(axis=1).sum() / ct.n)


def _pair_count(x: np.ndarray) -> int:
    return int((x.astype(np.int64) * (x.astype(np.int64) - 1) // 2).sum())


def ari(pred, truth) -> float:
    """Adjusted Rand index via pair counting; range [-1, 1]."""
    ct = contingency(pred, truth)
    if ct.n < 2:
        return 1.0
    index = _pair_count(ct.table)
    sp = _pair_count(ct.pred_sizes)
    st = _pair_count(ct.true_sizes)
    total = ct.n * (ct.n - 1) // 2
    expected = sp * st / total
    maximum = (sp + st) / 2.0
    denom = maximum - expected
    if denom == 0.0:
        pred, truth = _check_pair(pred, truth)
        return 1.0 if _same_partition(pred, truth) else 0.0
    return float((index - expected) / denom)


def f_score(pred, truth) -> float:
    """Pairwise F1: harmonic mean of pair precision and recall.

    A labeling with no positive pairs on either side scores 0.
    """
    ct = contingency(pred, truth)
    tp = _pair_count(ct.table)
    pred_pairs = _pair_count(ct.pred_sizes)
    true_pairs = _pair_count(ct.true_sizes)
    precision = tp / pred_pairs if pred_pairs > 0 else 0.0
    recall = tp / true_pairs if true_pairs > 0 else 0.0
    if precision + recall == 0.0:
        return 0.0
    return float(2.0 * precision * recall / (precision + recall))
