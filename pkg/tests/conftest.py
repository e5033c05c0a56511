"""Shared test oracles: slow, independent reimplementations of the library's
numerical kernels used to cross-check the fast production code paths.

Every oracle here favors the most literal formulation available (explicit
loops, exhaustive enumeration, dictionary counting) over vectorized numpy so
that agreement between the two routes is meaningful evidence of correctness.
"""

from __future__ import annotations

import itertools
import math

import numpy as np


# ---------------------------------------------------------------------------
# linear algebra helpers


def random_orthonormal(rng: np.random.Generator, p: int, k: int) -> np.ndarray:
    """Random p x k matrix with orthonormal columns (QR of a Gaussian)."""
    q, _ = np.linalg.qr(rng.standard_normal((p, k)))
    return q[:, :k].copy()


def random_column_stochastic(rng: np.random.Generator, c: int, n: int) -> np.ndarray:
    """Random nonnegative matrix with unit column sums (normalized gammas)."""
    g = rng.gamma(shape=1.0, scale=1.0, size=(c, n))
    return g / g.sum(axis=0, keepdims=True)


# ---------------------------------------------------------------------------
# simplex projection oracle


def simplex_sort_oracle(g: np.ndarray) -> np.ndarray:
    """Projection of (g - mean(g) + 1/n) onto the probability simplex via the
    classical sort-and-clip routine, written scalar-by-scalar."""
    g = np.asarray(g, dtype=float)
    n = g.size
    v = g - g.mean() + 1.0 / n
    u = np.sort(v)[::-1]
    theta = 0.0
    for j in range(1, n + 1):
        candidate = (u[:j].sum() - 1.0) / j
        if u[j - 1] - candidate > 0:
            theta = candidate
    return np.maximum(v - theta, 0.0)


# ---------------------------------------------------------------------------
# slim tensor oracles (full-spectrum, loop-based)


def tnn_oracle(data: np.ndarray) -> float:
    """Tensor nuclear norm by the definition: FFT every mode-3 tube, then sum
    matrix nuclear norms of all n frontal slices of the spectrum."""
    k, m, n = data.shape
    spec = np.empty((k, m, n), dtype=complex)
    for i in range(k):
        for v in range(m):
            spec[i, v, :] = np.fft.fft(data[i, v, :])
    total = 0.0
    for j in range(n):
        total += float(np.linalg.svd(spec[:, :, j], compute_uv=False).sum())
    return total


def tubal_shrinkage_oracle(data: np.ndarray, rho: float) -> np.ndarray:
    """Per-slice complex singular value thresholding over the full FFT
    spectrum, inverted tube by tube; threshold is n * rho per slice."""
    k, m, n = data.shape
    spec = np.fft.fft(data, axis=2)
    out = np.empty_like(spec)
    for j in range(n):
        u, s, vh = np.linalg.svd(spec[:, :, j], full_matrices=False)
        s = np.maximum(s - n * rho, 0.0)
        out[:, :, j] = (u * s) @ vh
    inv = np.fft.ifft(out, axis=2)
    assert np.max(np.abs(inv.imag)) <= 1e-8 * (1.0 + np.max(np.abs(inv.real)))
    return np.ascontiguousarray(inv.real)


def matrix_svt_oracle(a: np.ndarray, tau: float) -> np.ndarray:
    """Plain matrix singular value thresholding."""
    u, s, vh = np.linalg.svd(a, full_matrices=False)
    return (u * np.maximum(s - tau, 0.0)) @ vh


# ---------------------------------------------------------------------------
# clustering metric oracles (dict counting / exhaustive enumeration)


def pair_confusion_oracle(pred, truth):
    """(ss, sd, ds, dd) over all unordered sample pairs, counted one by one:
    same/different in prediction crossed with same/different in truth."""
    pred = list(pred)
    truth = list(truth)
    ss = sd = ds = dd = 0
    for i in range(len(pred)):
        for j in range(i + 1, len(pred)):
            sp = pred[i] == pred[j]
            st = truth[i] == truth[j]
            if sp and st:
                ss += 1
            elif sp:
                sd += 1
            elif st:
                ds += 1
            else:
                dd += 1
    return ss, sd, ds, dd


def same_partition(pred, truth) -> bool:
    seen = {}
    for a, b in zip(pred, truth):
        if a in seen:
            if seen[a] != b:
                return False
        else:
            seen[a] = b
    return len(set(seen.values())) == len(seen)


def accuracy_oracle(pred, truth) -> float:
    """Best matched fraction over every injective cluster-to-class map,
    enumerated exhaustively (pad the smaller label set with dummies)."""
    pred = list(pred)
    truth = list(truth)
    pl = sorted(set(pred))
    tl = sorted(set(truth))
    size = max(len(pl), len(tl))
    pl = pl + [("pad-p", i) for i in range(size - len(pl))]
    tl = tl + [("pad-t", i) for i in range(size - len(tl))]
    best = 0
    for perm in itertools.permutations(range(size)):
        mapping = {pl[i]: tl[perm[i]] for i in range(size)}
        best = max(best, sum(1 for a, b in zip(pred, truth) if mapping[a] == b))
    return best / len(pred)


def ari_oracle(pred, truth) -> float:
    ss, sd, ds, dd = pair_confusion_oracle(pred, truth)
    total = ss + sd + ds + dd
    if total == 0:
        return 1.0
    same_p = ss + sd
    same_t = ss + ds
    expected = same_p * same_t / total
    maxim = (same_p + same_t) / 2.0
    if maxim == expected:
        return 1.0 if same_partition(pred, truth) else 0.0
    return (ss - expected) / (maxim - expected)


def f_score_oracle(pred, truth) -> float:
    ss, sd, ds, _ = pair_confusion_oracle(pred, truth)
    precision = ss / (ss + sd) if ss + sd > 0 else 0.0
    recall = ss / (ss + ds) if ss + ds > 0 else 0.0
    if precision + recall == 0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def nmi_oracle(pred, truth) -> float:
    """Mutual information over joint counts divided by the geometric mean of
    the marginal entropies, all from dictionaries and math.log."""
    pred = list(pred)
    truth = list(truth)
    n = len(pred)
    joint: dict = {}
    cp: dict = {}
    ct: dict = {}
    for a, b in zip(pred, truth):
        joint[(a, b)] = joint.get((a, b), 0) + 1
        cp[a] = cp.get(a, 0) + 1
        ct[b] = ct.get(b, 0) + 1
    hp = -sum((v / n) * math.log(v / n) for v in cp.values())
    ht = -sum((v / n) * math.log(v / n) for v in ct.values())
    if hp == 0.0 or ht == 0.0:
        return 1.0 if same_partition(pred, truth) else 0.0
    mi = 0.0
    for (a, b), v in joint.items():
        mi += (v / n) * math.log(n * v / (cp[a] * ct[b]))
    return min(1.0, max(0.0, mi / math.sqrt(hp * ht)))


def purity_oracle(pred, truth) -> float:
    groups: dict = {}
    for a, b in zip(pred, truth):
        groups.setdefault(a, []).append(b)
    hits = 0
    for members in groups.values():
        hits += max(members.count(t) for t in set(members))
    return hits / len(list(pred))


def hungarian_cost_oracle(cost: np.ndarray) -> float:
    """Minimum assignment cost of a square matrix by brute force."""
    cost = np.asarray(cost, dtype=float)
    n = cost.shape[0]
    best = math.inf
    for perm in itertools.permutations(range(n)):
        best = min(best, sum(cost[i, perm[i]] for i in range(n)))
    return best
