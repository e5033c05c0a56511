"""Command-line entry point.

Subcommands: synth (write a synthetic dataset), fit (factorize and
cluster one dataset), eval (score a saved labeling against ground truth),
ablate (fit every model variant), bench (timing/memory scaling over
synthetic sizes).  Exit codes: 0 success, 2 invalid input, 3 numeric
failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
import tracemalloc
from dataclasses import replace
from itertools import product
from pathlib import Path

import numpy as np

from .data import (
    MultiViewDataset,
    NormalizationMode,
    SynthSpec,
    generate_synthetic,
    load_dataset,
    normalize,
    read_labels_csv,
    write_dataset,
    write_labels_csv,
    write_matrix_csv,
)
from .errors import InputError, NumericError
from .kmeans import KMeansConfig, kmeans
from .metrics import accuracy, ari, f_score, nmi, purity
from .solver import (
    VARIANTS,
    Hyperparams,
    clustering_embedding,
    fit_variant,
    resolve_k,
)

_METRICS = (
    ("acc", accuracy),
    ("nmi", nmi),
    ("purity", purity),
    ("ari", ari),
    ("fscore", f_score),
)

# built-in log ladder for the lambda1/lambda2 sweep (`ablate --grid default`)
TUNING_GRID = (1e-4, 5e-4, 1e-3, 5e-3, 1e-2, 5e-2, 1e-1, 5e-1, 1.0, 5.0)


def _int_list(text: str) -> list[int]:
    items = [t for t in text.split(",") if t.strip()]
    try:
        return [int(t) for t in items]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _float_list(text: str) -> list[float]:
    items = [t for t in text.split(",") if t.strip()]
    try:
        return [float(t) for t in items]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _add_hyperparam_flags(p: argparse.ArgumentParser) -> None:
    dflt = Hyperparams()
    p.add_argument("--lambda1", type=float, default=dflt.lambda1,
                   help=f"sparsity weight (default {dflt.lambda1})")
    p.add_argument("--lambda2", type=float, default=dflt.lambda2,
                   help=f"spectral penalty weight (default {dflt.lambda2})")
    p.add_argument("--lambda3", type=float, default=dflt.lambda3,
                   help=f"consensus alignment weight (default {dflt.lambda3})")
    p.add_argument("--k", type=int, default=None,
                   help="latent dimension (default: number of classes in the labels)")
    p.add_argument("--epsilon", type=float, default=dflt.epsilon,
                   help=f"relative-change stopping threshold (default {dflt.epsilon})")
    p.add_argument("--max-iter", type=int, default=dflt.max_iter,
                   help=f"iteration cap (default {dflt.max_iter})")
    p.add_argument("--seed", type=int, default=0, help="base random seed (default 0)")
    p.add_argument("--normalize", default=NormalizationMode.NONE.value,
                   choices=[m.value for m in NormalizationMode],
                   help="per-view normalization applied after loading (default none)")


def _add_synth_flags(p: argparse.ArgumentParser, with_n: bool = True) -> None:
    base = SynthSpec()
    if with_n:
        p.add_argument("--n", type=int, default=base.n,
                       help=f"number of samples (default {base.n})")
    p.add_argument("--c", type=int, default=base.c,
                   help=f"number of clusters (default {base.c})")
    p.add_argument("--m", type=int, default=base.m,
                   help=f"number of views (default {base.m})")
    p.add_argument("--dims", type=_int_list, default=list(base.dims),
                   help=f"comma-separated per-view dimensions (default "
                        f"{','.join(map(str, base.dims))})")
    p.add_argument("--noise-sigma", type=float, default=base.noise_sigma,
                   help=f"additive Gaussian noise level (default {base.noise_sigma})")
    p.add_argument("--corrupt-frac", type=float, default=base.corrupt_frac,
                   help=f"fraction of entries replaced by outliers (default "
                        f"{base.corrupt_frac})")


def _hyperparams_from_args(args, variant: str | None = None) -> Hyperparams:
    return Hyperparams(
        lambda1=args.lambda1,
        lambda2=args.lambda2,
        lambda3=args.lambda3,
        k=args.k,
        epsilon=args.epsilon,
        max_iter=args.max_iter,
        seed=args.seed,
        variant=variant if variant is not None else getattr(args, "variant", "full"),
    )


def _load_normalized(args) -> MultiViewDataset:
    return normalize(load_dataset(args.data), args.normalize)


def _cluster_count(ds: MultiViewDataset, hp: Hyperparams) -> int:
    if ds.labels is not None:
        return ds.n_classes
    return resolve_k(ds, hp)


def _run_pipeline(ds: MultiViewDataset, hp: Hyperparams, repeats: int):
    """Fit once (the solver is deterministic), cluster `repeats` times with
    distinct seeds, score each run against the labels when present."""
    if repeats < 1:
        raise InputError(f"repeats must be >= 1, got {repeats}")
    tic = time.perf_counter()
    st, trace = fit_variant(ds, hp)
    fit_seconds = time.perf_counter() - tic
    embed = clustering_embedding(st, hp.variant)
    clusters = _cluster_count(ds, hp)
    best_labels = None
    best_inertia = np.inf
    per_run: dict[str, list[float]] = {name: [] for name, _ in _METRICS}
    for r in range(repeats):
        pred, inertia = kmeans(embed, KMeansConfig(c=clusters, seed=hp.seed + r))
        if inertia < best_inertia:
            best_labels, best_inertia = pred, inertia
        if ds.labels is not None:
            for name, fn in _METRICS:
                per_run[name].append(fn(pred, ds.labels))
    scores = None
    if ds.labels is not None:
        scores = {
            name: {"mean": float(np.mean(vals)), "std": float(np.std(vals))}
            for name, vals in per_run.items()
        }
    return {
        "state": st,
        "trace": trace,
        "fit_seconds": fit_seconds,
        "embedding": embed,
        "labels": best_labels,
        "scores": scores,
        "k": resolve_k(ds, hp),
    }


def _metrics_payload(result, hp: Hyperparams) -> dict:
    empty = {"mean": None, "std": None}
    scores = result["scores"]
    payload = {}
    for name, _ in _METRICS:
        payload[name] = dict(scores[name]) if scores is not None else dict(empty)
    payload["iterations"] = len(result["trace"])
    payload["fit_seconds"] = result["fit_seconds"]
    payload["variant"] = hp.variant
    payload["hyperparams"] = {
        "lambda1": hp.lambda1,
        "lambda2": hp.lambda2,
        "lambda3": hp.lambda3,
        "k": result["k"],
        "epsilon": hp.epsilon,
        "max_iter": hp.max_iter,
        "seed": hp.seed,
    }
    return payload


def _write_json(path: Path, payload: dict) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def _write_trace(path: Path, trace) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("iter,objective,delta_y,elapsed_ms\n")
        for r in trace:
            fh.write(f"{r.iter},{r.objective:.17g},{r.delta_y:.17g},{r.elapsed_ms:.17g}\n")


def _write_fit_outputs(out: Path, result, hp: Hyperparams) -> dict:
    out.mkdir(parents=True, exist_ok=True)
    write_labels_csv(out / "labels.csv", result["labels"])
    write_matrix_csv(out / "embedding.csv", result["embedding"])
    _write_trace(out / "trace.csv", result["trace"])
    payload = _metrics_payload(result, hp)
    _write_json(out / "metrics.json", payload)
    return payload


def _summary_line(name: str, payload: dict) -> str:
    if payload["acc"]["mean"] is None:
        body = "no labels, metrics skipped"
    else:
        body = "  ".join(
            f"{key}={payload[key]['mean']:.4f}±{payload[key]['std']:.4f}"
            for key, _ in _METRICS
        )
    return (
        f"{name}: {body}  (iterations={payload['iterations']}, "
        f"fit_seconds={payload['fit_seconds']:.3f})"
    )


def cmd_synth(args) -> int:
    spec = SynthSpec(
        n=args.n,
        c=args.c,
        m=args.m,
        dims=tuple(args.dims),
        noise_sigma=args.noise_sigma,
        corrupt_frac=args.corrupt_frac,
        seed=args.seed,
    )
    ds = generate_synthetic(spec)
    manifest = write_dataset(ds, args.out)
    print(f"wrote {ds.name}: m={ds.n_views} views, n={ds.n_samples} samples, "
          f"dims={list(ds.dims)} -> {manifest}")
    return 0


def cmd_fit(args) -> int:
    ds = _load_normalized(args)
    hp = _hyperparams_from_args(args)
    result = _run_pipeline(ds, hp, args.repeats)
    payload = _write_fit_outputs(Path(args.out), result, hp)
    print(_summary_line(f"fit[{hp.variant}] {ds.name}", payload))
    return 0


def cmd_eval(args) -> int:
    ds = load_dataset(args.data)
    if ds.labels is None:
        raise InputError("eval needs a dataset with ground-truth labels")
    pred = read_labels_csv(args.pred)
    if pred.size != ds.n_samples:
        raise InputError(
            f"{args.pred}: {pred.size} predictions for {ds.n_samples} samples"
        )
    payload: dict = {}
    for name, fn in _METRICS:
        payload[name] = {"mean": float(fn(pred, ds.labels)), "std": 0.0}
    payload.update(
        {"iterations": None, "fit_seconds": None, "variant": None, "hyperparams": None}
    )
    if args.out is not None:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        _write_json(out / "metrics.json", payload)
    print("  ".join(f"{name}={payload[name]['mean']:.4f}" for name, _ in _METRICS))
    return 0


def _grid_values(spec: str) -> list[float]:
    if spec == "default":
        return list(TUNING_GRID)
    values = _float_list(spec)
    if not values:
        raise InputError("--grid needs at least one value")
    return values


def cmd_ablate(args) -> int:
    ds = _load_normalized(args)
    if ds.labels is None:
        raise InputError("ablate needs a dataset with ground-truth labels")
    grid = _grid_values(args.grid) if args.grid else None
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rows = []
    for variant in VARIANTS:
        hp = _hyperparams_from_args(args, variant=variant)
        if grid is None:
            result = _run_pipeline(ds, hp, args.repeats)
        else:
            result, hp = _best_grid_cell(ds, hp, grid, args.repeats)
        payload = _write_fit_outputs(out / variant, result, hp)
        rows.append((variant, payload))
        print(_summary_line(f"ablate[{variant}]", payload))
    with open(out / "ablation.csv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("variant," + ",".join(name for name, _ in _METRICS) + "\n")
        for variant, payload in rows:
            cells = ",".join(f"{payload[name]['mean']:.17g}" for name, _ in _METRICS)
            fh.write(f"{variant},{cells}\n")
    return 0


def _best_grid_cell(ds, hp: Hyperparams, grid: list[float], repeats: int):
    """Sweep (lambda1, lambda2) over grid x grid, keep the cell with the
    best mean accuracy (first cell on ties)."""
    best = None
    for l1, l2 in product(grid, grid):
        cell_hp = replace(hp, lambda1=l1, lambda2=l2)
        result = _run_pipeline(ds, cell_hp, repeats)
        score = result["scores"]["acc"]["mean"]
        if best is None or score > best[0]:
            best = (score, result, cell_hp)
    return best[1], best[2]


def cmd_bench(args) -> int:
    if not args.sizes:
        raise InputError("--sizes needs at least one value")
    if any(s < args.c for s in args.sizes):
        raise InputError(f"every size must be >= c={args.c}")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    hp = _hyperparams_from_args(args)
    if hp.k is None:
        hp = replace(hp, k=args.c)
    # warm-up outside the timed region: BLAS/FFT setup, code paths
    warm = generate_synthetic(
        SynthSpec(n=max(10 * args.c, 50), c=args.c, m=args.m, dims=tuple(args.dims),
                  noise_sigma=args.noise_sigma, corrupt_frac=args.corrupt_frac,
                  seed=args.seed)
    )
    fit_variant(normalize(warm, args.normalize), replace(hp, max_iter=2),
                record_objective=False)
    rows = []
    for n in args.sizes:
        spec = SynthSpec(n=n, c=args.c, m=args.m, dims=tuple(args.dims),
                         noise_sigma=args.noise_sigma,
                         corrupt_frac=args.corrupt_frac, seed=args.seed)
        tracemalloc.start()
        try:
            ds = normalize(generate_synthetic(spec), args.normalize)
            tic = time.perf_counter()
            st, trace = fit_variant(ds, hp, record_objective=False)
            fit_seconds = time.perf_counter() - tic
            peak_mb = tracemalloc.get_traced_memory()[1] / 2**20
        finally:
            tracemalloc.stop()
        row = {
            "n": n,
            "fit_seconds": fit_seconds,
            "peak_mb": peak_mb,
            "iterations": len(trace),
        }
        if args.include_kmeans:
            embed = clustering_embedding(st, hp.variant)
            tic = time.perf_counter()
            kmeans(embed, KMeansConfig(c=args.c, seed=hp.seed))
            row["kmeans_seconds"] = time.perf_counter() - tic
        rows.append(row)
        print(
            f"n={n}: fit_seconds={fit_seconds:.3f} peak_mb={peak_mb:.2f} "
            f"iterations={row['iterations']}"
            + (f" kmeans_seconds={row['kmeans_seconds']:.3f}"
               if args.include_kmeans else "")
        )
    header = ["n", "fit_seconds", "peak_mb", "iterations"]
    if args.include_kmeans:
        header.append("kmeans_seconds")
    with open(out / "timing.csv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(
                f"{row['n']},{row['fit_seconds']:.6f},{row['peak_mb']:.3f},"
                f"{row['iterations']}"
                + (f",{row['kmeans_seconds']:.6f}" if args.include_kmeans else "")
                + "\n"
            )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dstl",
        description="Disentangled slim-tensor learning for multi-view clustering.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="write a synthetic multi-view dataset")
    _add_synth_flags(p)
    p.add_argument("--seed", type=int, default=0, help="generator seed (default 0)")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("fit", help="factorize a dataset and cluster it")
    p.add_argument("--data", required=True, help="path to manifest.json")
    p.add_argument("--out", required=True, help="output directory")
    _add_hyperparam_flags(p)
    p.add_argument("--variant", default="full", choices=list(VARIANTS),
                   help="model variant (default full)")
    p.add_argument("--repeats", type=int, default=10,
                   help="clustering repetitions aggregated in metrics.json (default 10)")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("eval", help="score a saved labeling against ground truth")
    p.add_argument("--data", required=True, help="path to manifest.json (labels required)")
    p.add_argument("--pred", required=True, help="labels file to score")
    p.add_argument("--out", default=None, help="optional directory for metrics.json")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("ablate", help="fit every model variant and tabulate scores")
    p.add_argument("--data", required=True, help="path to manifest.json (labels required)")
    p.add_argument("--out", required=True, help="output directory")
    _add_hyperparam_flags(p)
    p.add_argument("--repeats", type=int, default=10,
                   help="clustering repetitions per variant (default 10)")
    p.add_argument("--grid", default=None,
                   help="sweep lambda1/lambda2 per variant: 'default' for the "
                        "built-in log ladder (1e-4 ... 5) or a comma-separated "
                        "list of values")
    p.set_defaults(func=cmd_ablate)

    p = sub.add_parser("bench", help="time the solver over synthetic sizes")
    p.add_argument("--sizes", type=_int_list, required=True,
                   help="comma-separated sample counts, e.g. 1000,2000,4000")
    p.add_argument("--out", required=True, help="output directory")
    _add_synth_flags(p, with_n=False)
    _add_hyperparam_flags(p)
    p.add_argument("--include-kmeans", action="store_true",
                   help="also run and time k-means per size (extra column)")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
