"""Alternating closed-form solver for the disentangled multi-view model.

Each view X^v (d_v x n) is factored as W^v (S^v + H^v) with a
column-orthonormal basis W^v and a latent representation split into a
sparse component S^v (elementwise l1 penalty, weight lambda1) and a
structured component H^v (spectral penalty on the stacked k x m x n
tensor, weight lambda2).  The H^v are tied across views to a shared
column-stochastic indicator Y through per-view rotations C^v (weight
lambda3).  Every block subproblem has an exact closed-form minimizer, so
the objective is non-increasing across updates.

Blocks are updated in the fixed order W, C, S, H, Y from an all-zero
state; the loop stops once the relative squared change of the indicator
falls to epsilon.

Variants drop one ingredient at a time: ``no_S`` pins S at zero,
``matrix_nuclear`` swaps the tensor spectral penalty for independent
per-view matrix nuclear norms, and ``no_Y`` drops the consensus coupling
(clustering then runs on the row-concatenated H^v).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from .data import MultiViewDataset
from .errors import InputError
from .linalg import procrustes_max_trace, soft_threshold, thin_svd
from .simplex import project_columns
from .slimtensor import stack_rotate, tensor_nuclear_norm, tubal_shrinkage, unstack

__all__ = [
    "VARIANTS",
    "Hyperparams",
    "SolverState",
    "TraceRecord",
    "objective",
    "variant_objective",
    "update_W",
    "update_C",
    "update_S",
    "update_H",
    "update_Y",
    "fit",
    "fit_variant",
    "clustering_embedding",
    "constraint_violations",
]

VARIANTS = ("full", "no_S", "matrix_nuclear", "no_Y")


@dataclass(frozen=True)
class Hyperparams:
    """Solver knobs; ``k=None`` resolves to the dataset's class count."""

    lambda1: float = 1.0
    lambda2: float = 0.01
    lambda3: float = 1e-4
    k: int | None = None
    epsilon: float = 1e-4
    max_iter: int = 100
    seed: int = 0
    variant: str = "full"

    def __post_init__(self):
        for nm in ("lambda1", "lambda2", "lambda3"):
            val = getattr(self, nm)
            if not np.isfinite(val) or val < 0:
                raise InputError(f"{nm} must be a finite nonnegative number, got {val}")
        if self.k is not None and self.k < 1:
            raise InputError(f"k must be >= 1, got {self.k}")
        if not (self.epsilon > 0):
            raise InputError(f"epsilon must be > 0, got {self.epsilon}")
        if self.max_iter < 1:
            raise InputError(f"max_iter must be >= 1, got {self.max_iter}")
        if self.variant not in VARIANTS:
            raise InputError(f"unknown variant {self.variant!r}; expected one of {VARIANTS}")


@dataclass
class SolverState:
    """All block variables; lists hold one array per view."""

    W: list  # (d_v, k) column-orthonormal after each W update
    S: list  # (k, n) sparse components
    H: list  # (k, n) structured components
    C: list  # (k, k) rotations, orthonormal after each C update
    Y: np.ndarray  # (k, n) indicator, columns on the simplex after each Y update


@dataclass(frozen=True)
class TraceRecord:
    iter: int
    objective: float
    delta_y: float
    elapsed_ms: float


def _zero_state(ds: MultiViewDataset, k: int) -> SolverState:
    n = ds.n_samples
    return SolverState(
        W=[np.zeros((d, k)) for d in ds.dims],
        S=[np.zeros((k, n)) for _ in ds.views],
        H=[np.zeros((k, n)) for _ in ds.views],
        C=[np.zeros((k, k)) for _ in ds.views],
        Y=np.zeros((k, n)),
    )


def resolve_k(ds: MultiViewDataset, hp: Hyperparams) -> int:
    if hp.k is not None:
        k = hp.k
    elif ds.labels is not None:
        k = ds.n_classes
    else:
        raise InputError("k is unset and the dataset has no labels to infer it from")
    if k > min(ds.dims):
        raise InputError(f"k={k} exceeds the smallest view dimension {min(ds.dims)}")
    return k


def update_W(ds: MultiViewDataset, st: SolverState) -> list:
    """Per view, the orthonormal basis maximizing Tr(W.T X (S+H).T)."""
    return [
        procrustes_max_trace(x @ (s + h).T)
        for x, s, h in zip(ds.views, st.S, st.H)
    ]


def update_C(st: SolverState) -> list:
    """Per view, the rotation maximizing Tr(C.T H Y.T)."""
    return [procrustes_max_trace(h @ st.Y.T) for h in st.H]


def update_S(ds: MultiViewDataset, hp: Hyperparams, st: SolverState) -> list:
    """Exact prox step: shrink W.T X - H elementwise by lambda1 / 2."""
    gamma = hp.lambda1 / 2.0
    return [
        soft_threshold(w.T @ x - h, gamma)
        for w, x, h in zip(st.W, ds.views, st.H)
    ]


def _h_targets(ds: MultiViewDataset, hp: Hyperparams, st: SolverState) -> list:
    """Per-view quadratic centers of the H subproblem: the
    (lambda3-weighted) blend of the reconstruction residual and the
    rotated indicator."""
    lam3 = hp.lambda3
    blend = lam3 / (lam3 + 1.0)
    return [
        (w.T @ x - s) / (lam3 + 1.0) + blend * (c @ st.Y)
        for w, x, s, c in zip(st.W, ds.views, st.S, st.C)
    ]


def update_H(ds: MultiViewDataset, hp: Hyperparams, st: SolverState) -> list:
    """Exact prox step of the tensor spectral penalty at the blended target."""
    q = stack_rotate(_h_targets(ds, hp, st))
    rho = hp.lambda2 / (2.0 * (hp.lambda3 + 1.0))
    return unstack(tubal_shrinkage(q, rho))


def _update_H_matrix_nuclear(ds: MultiViewDataset, hp: Hyperparams, st: SolverState) -> list:
    """Variant H step: independent per-view singular value thresholding."""
    thr = hp.lambda2 / (2.0 * (hp.lambda3 + 1.0))
    out = []
    for q in _h_targets(ds, hp, st):
        f = thin_svd(q)
        out.append((f.U * np.maximum(f.sigma - thr, 0.0)) @ f.V.T)
    return out


def update_Y(st: SolverState) -> np.ndarray:
    """Column-wise simplex projection of the mean rotated representation."""
    m = len(st.H)
    f = st.C[0].T @ st.H[0]
    for c, h in zip(st.C[1:], st.H[1:]):
        f = f + c.T @ h
    return project_columns(f / m)


def _sq_norm(a: np.ndarray) -> float:
    return float(np.sum(a * a))


def objective(ds: MultiViewDataset, hp: Hyperparams, st: SolverState) -> float:
    """Full model objective: reconstruction + l1 + tensor spectral penalty
    + consensus alignment."""
    return variant_objective(ds, hp, st, "full")


def variant_objective(ds: MultiViewDataset, hp: Hyperparams, st: SolverState, variant: str) -> float:
    if variant not in VARIANTS:
        raise InputError(f"unknown variant {variant!r}")
    fidelity = sum(
        _sq_norm(x - w @ (s + h))
        for x, w, s, h in zip(ds.views, st.W, st.S, st.H)
    )
    total = fidelity
    if variant != "no_S":
        total += hp.lambda1 * sum(float(np.abs(s).sum()) for s in st.S)
    if variant == "matrix_nuclear":
        total += hp.lambda2 * sum(float(thin_svd(h).sigma.sum()) for h in st.H)
    else:
        total += hp.lambda2 * tensor_nuclear_norm(stack_rotate(st.H))
    if variant != "no_Y":
        total += hp.lambda3 * sum(
            _sq_norm(h - c @ st.Y) for h, c in zip(st.H, st.C)
        )
    return float(total)


def clustering_embedding(st: SolverState, variant: str = "full") -> np.ndarray:
    """Matrix handed to k-means: the indicator Y, or the row-concatenated
    structured components for the variant that never forms Y."""
    if variant == "no_Y":
        return np.concatenate(st.H, axis=0)
    return st.Y


def constraint_violations(st: SolverState) -> dict:
    """Worst-case deviations from the feasible set, for diagnostics."""
    eye_dev = lambda a: float(np.max(np.abs(a.T @ a - np.eye(a.shape[1]))))
    return {
        "w_orthonormality": max(eye_dev(w) for w in st.W),
        "c_orthonormality": max(eye_dev(c) for c in st.C),
        "y_column_sum": float(np.max(np.abs(st.Y.sum(axis=0) - 1.0))),
        "y_negativity": float(max(0.0, -st.Y.min())),
    }


def fit_variant(
    ds: MultiViewDataset,
    hp: Hyperparams,
    *,
    record_objective: bool = True,
    callback: Callable[[SolverState, TraceRecord], None] | None = None,
):
    """Run the alternating solver for hp.variant.

    Returns (state, trace).  The trace objective is the variant's own
    (reduced) objective; delta_y tracks the clustering embedding, which is
    Y except for ``no_Y`` where it is the concatenated H.  The convergence
    test is skipped on the first iteration (the previous embedding is the
    zero initialization).
    """
    variant = hp.variant
    k = resolve_k(ds, hp)
    st = _zero_state(ds, k)
    # the no_Y variant solves the model with the alignment term absent,
    # which is the lambda3 -> 0 limit of the H subproblem
    hp_h = replace(hp, lambda3=0.0) if variant == "no_Y" else hp
    h_step = _update_H_matrix_nuclear if variant == "matrix_nuclear" else update_H
    prev_embed = clustering_embedding(st, variant).copy()
    trace: list[TraceRecord] = []
    for t in range(1, hp.max_iter + 1):
        tic = time.perf_counter()
        st.W = update_W(ds, st)
        if variant != "no_Y":
            st.C = update_C(st)
        if variant != "no_S":
            st.S = update_S(ds, hp, st)
        st.H = h_step(ds, hp_h, st)
        if variant != "no_Y":
            st.Y = update_Y(st)
        embed = clustering_embedding(st, variant)
        prev_norm = _sq_norm(prev_embed)
        delta = _sq_norm(embed - prev_embed) / prev_norm if prev_norm > 0 else float("inf")
        obj = variant_objective(ds, hp, st, variant) if record_objective else float("nan")
        rec = TraceRecord(
            iter=t,
            objective=obj,
            delta_y=delta,
            elapsed_ms=(time.perf_counter() - tic) * 1e3,
        )
        trace.append(rec)
        if callback is not None:
            callback(st, rec)
        prev_embed = embed.copy()
        if t >= 2 and delta <= hp.epsilon:
            break
    return st, trace


def fit(
    ds: MultiViewDataset,
    hp: Hyperparams,
    *,
    record_objective: bool = True,
    callback: Callable[[SolverState, TraceRecord], None] | None = None,
):
    """Run the full model regardless of hp.variant (use fit_variant to
    dispatch on it)."""
    if hp.variant != "full":
        hp = replace(hp, variant="full")
    return fit_variant(ds, hp, record_objective=record_objective, callback=callback)
