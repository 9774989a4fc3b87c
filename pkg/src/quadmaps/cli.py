"""Command-line surface: reproducible sampling, verification and statistics.

Every output starts with the run manifest (the exact knobs of the run), so
identical manifests give byte-identical outputs.  Exit codes: 0 success,
1 verification failure (a counterexample tree is dumped to stderr),
2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .bijection import (
    corner_data,
    corner_pair_bound_violations,
    quadrangulate,
    verify_root_distance,
)
from .errors import QuadmapsError
from .sampling import (
    SamplerConfig,
    enumerate_labeled_trees,
    sample_leaf_decreasing_tree,
    sample_nice_tree,
    sample_well_labeled_tree,
)
from .snake import (
    condition_min,
    exponent_fit,
    ks_statistic,
    label_scale_nice,
    label_scale_plain,
    reroot,
    sample_snake,
)
from .trees import ContourCoding, LabeledTree, classify, decode, encode

_SAMPLERS = {
    "nice": sample_nice_tree,
    "plain": sample_well_labeled_tree,
    "leafdec": sample_leaf_decreasing_tree,
}

_LABEL_SCALE = {"nice": label_scale_nice, "plain": label_scale_plain}


@dataclass(frozen=True)
class RunManifest:
    """Knobs of one run, recorded verbatim in every output header."""

    command: str
    n: Optional[int] = None
    count: Optional[int] = None
    seed: Optional[int] = None
    model: Optional[str] = None
    format: Optional[str] = None
    threads: Optional[int] = None
    output: Optional[str] = None

    def to_json(self) -> str:
        return json.dumps(asdict(self), separators=(",", ":"))


def _default_seed(value) -> int:
    if value is not None:
        return int(value)
    return int(os.environ.get("SEED", "0"))


def _emit(text: str, output: Optional[str]):
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _sample_stream(model: str, n: int, count: int, seed: int, stream: int,
                   budget: int):
    cfg = SamplerConfig(n=n, seed=seed, max_rejections=budget, stream_id=stream)
    rng = cfg.rng()
    sampler = _SAMPLERS[model]
    return [sampler(n, cfg, rng) for _ in range(count)]


def sample_trees(model: str, n: int, count: int, seed: int, threads: int = 1,
                 budget: int = 10 ** 6, stream_base: int = 0):
    """Draw ``count`` trees fanned out over ``threads`` deterministic streams.

    Stream ``k`` produces a fixed contiguous chunk, so the aggregate depends
    only on ``(seed, threads, count)``, never on scheduling.
    """
    if threads <= 1:
        return _sample_stream(model, n, count, seed, stream_base, budget)
    sizes = [count // threads + (1 if k < count % threads else 0)
             for k in range(threads)]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        chunks = list(
            ex.map(
                lambda k: _sample_stream(model, n, sizes[k], seed,
                                         stream_base + k, budget),
                range(threads),
            )
        )
    out = []
    for chunk in chunks:
        out.extend(chunk)
    return out


# ---------------------------------------------------------------------------
# commands

def _cmd_sample_tree(args) -> int:
    seed = _default_seed(args.seed)
    man = RunManifest("sample-tree", n=args.n, count=args.count, seed=seed,
                      model=args.model, format=args.format,
                      threads=args.threads, output=args.output)
    trees = sample_trees(args.model, args.n, args.count, seed, args.threads)
    if args.format == "json":
        body = json.dumps(
            {"manifest": json.loads(man.to_json()),
             "trees": [json.loads(t.to_json()) for t in trees]},
            separators=(",", ":"),
        ) + "\n"
    else:
        if args.count != 1:
            print("csv tree output supports --count 1 only", file=sys.stderr)
            return 2
        body = f"# {man.to_json()}\n" + encode(trees[0]).to_csv()
    _emit(body, args.output)
    return 0


def _cmd_sample_quad(args) -> int:
    seed = _default_seed(args.seed)
    man = RunManifest("sample-quad", n=args.n, count=args.count, seed=seed,
                      model=args.model, format="csv", threads=args.threads,
                      output=args.output)
    trees = sample_trees(args.model, args.n, args.count, seed, args.threads)
    blocks = [f"# {man.to_json()}\n"]
    for t in trees:
        blocks.append(quadrangulate(t).to_edge_csv())
    _emit("".join(blocks), args.output)
    return 0


def _cmd_enumerate(args) -> int:
    man = RunManifest("enumerate", n=args.n, format="json", output=args.output)
    trees = enumerate_labeled_trees(args.n, args.predicate)
    body = json.dumps(
        {"manifest": json.loads(man.to_json()),
         "predicate": args.predicate,
         "count": len(trees),
         "trees": [json.loads(t.to_json()) for t in trees]},
        separators=(",", ":"),
    ) + "\n"
    _emit(body, args.output)
    return 0


def _fail(name: str, lt: LabeledTree) -> int:
    print(f"verification failed: {name}", file=sys.stderr)
    print(lt.to_json(), file=sys.stderr)
    return 1


def _verify_one(lt: LabeledTree, check_bound: bool) -> Optional[str]:
    try:
        q = quadrangulate(lt)
    except QuadmapsError as exc:
        return f"structural invariants ({exc})"
    if not verify_root_distance(lt, q):
        return "root distance property"
    if (q.min_degree() >= 2) != classify(lt).nice_family:
        return "pendant-free characterization"
    if check_bound and corner_pair_bound_violations(lt, q):
        return "corner-pair distance bound"
    return None


def _cmd_verify(args) -> int:
    seed = _default_seed(args.seed)
    man = RunManifest("verify", n=args.n, seed=seed, model=args.model,
                      count=None if args.exhaustive else args.samples)
    if args.exhaustive:
        trees = enumerate_labeled_trees(args.n, "nonneg")
    else:
        trees = sample_trees(args.model, args.n, args.samples, seed)
    checked = 0
    for lt in trees:
        bad = _verify_one(lt, args.bound)
        if bad is not None:
            return _fail(bad, lt)
        checked += 1
    print(f"# {man.to_json()}")
    print(f"verified {checked} trees at n={args.n}: all checks passed")
    return 0


def _cmd_stats_scaling(args) -> int:
    seed = _default_seed(args.seed)
    models = args.models.split(",")
    ladder = [int(x) for x in args.ladder.split(",")]
    man = RunManifest("stats-scaling", seed=seed, model=args.models,
                      count=args.samples, threads=args.threads,
                      format=args.format, output=args.output)
    rows = []
    for mi, model in enumerate(models):
        for n in ladder:
            trees = sample_trees(model, n, args.samples, seed,
                                 args.threads, stream_base=1000 * n + 100 * mi)
            means = np.empty(len(trees))
            for i, lt in enumerate(trees):
                dist = quadrangulate(lt).bfs_distances(0)
                means[i] = dist[1:].mean()
            rows.append({
                "model": model,
                "n": n,
                "mean_distance": float(means.mean()),
                "sem": float(means.std(ddof=1) / np.sqrt(len(means))),
            })
    report = {"manifest": json.loads(man.to_json()), "rows": rows}
    if len(ladder) >= 2:
        for model in models:
            pts = [(r["n"], r["mean_distance"]) for r in rows if r["model"] == model]
            report[f"slope_{model}"] = exponent_fit(pts)
    if set(models) >= {"nice", "plain"}:
        nmax = max(ladder)
        mean_of = {
            (r["model"], r["n"]): r["mean_distance"] for r in rows
        }
        report["ratio_nice_plain_at_max"] = (
            mean_of[("nice", nmax)] / mean_of[("plain", nmax)]
        )
    if args.format == "csv":
        lines = [f"# {man.to_json()}", "model,n,mean_distance,sem"]
        lines += [
            f'{r["model"]},{r["n"]},{r["mean_distance"]!r},{r["sem"]!r}'
            for r in rows
        ]
        _emit("\n".join(lines) + "\n", args.output)
    else:
        _emit(json.dumps(report, separators=(",", ":")) + "\n", args.output)
    return 0


def _cmd_stats_two_point(args) -> int:
    seed = _default_seed(args.seed)
    man = RunManifest("stats-two-point", n=args.n, count=args.samples,
                      seed=seed, model=args.model, threads=args.threads,
                      output=args.output)
    n = args.n
    trees = sample_trees(args.model, n, args.samples, seed, args.threads)
    rng = np.random.default_rng([seed, 987654321])
    scale = _LABEL_SCALE[args.model](n)
    one_point = np.empty(len(trees))
    two_point = np.empty(len(trees))
    for i, lt in enumerate(trees):
        q = quadrangulate(lt)
        cv, _ = corner_data(lt)
        ci, cj, ck = rng.integers(0, 2 * n, size=3)
        one_point[i] = (q.bfs_distances(0)[cv[ci]]) * scale
        two_point[i] = (q.bfs_distances(cv[cj])[cv[ck]]) * scale
    ks = ks_statistic(one_point, two_point)
    report = {
        "manifest": json.loads(man.to_json()),
        "statistic": "ks_two_point_vs_one_point",
        "value": ks,
        "n": n,
        "samples": args.samples,
        "seed": seed,
    }
    _emit(json.dumps(report, separators=(",", ":")) + "\n", args.output)
    return 0


def _cmd_snake_sample(args) -> int:
    seed = _default_seed(args.seed)
    man = RunManifest("snake-sample", n=args.m, count=args.count, seed=seed,
                      model=args.kind, format="csv", output=args.output)
    rng = np.random.default_rng([seed, 0])
    blocks = [f"# {man.to_json()}\n"]
    for _ in range(args.count):
        if args.kind == "raw":
            p = sample_snake(args.m, rng)
        elif args.kind == "conditioned":
            p = condition_min(args.m, args.r, rng)
        else:
            p = reroot(sample_snake(args.m, rng))
        blocks.append(p.to_csv())
    _emit("".join(blocks), args.output)
    return 0


def _read_input(path: Optional[str]) -> str:
    if path in (None, "-"):
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _cmd_encode(args) -> int:
    lt = LabeledTree.from_json(_read_input(args.input))
    man = RunManifest("encode", n=lt.n, format="csv", output=args.output)
    _emit(f"# {man.to_json()}\n" + encode(lt).to_csv(), args.output)
    return 0


def _cmd_decode(args) -> int:
    coding = ContourCoding.from_csv(_read_input(args.input))
    lt = decode(coding)
    man = RunManifest("decode", n=lt.n, format="json", output=args.output)
    body = json.dumps(
        {"manifest": json.loads(man.to_json()), "tree": json.loads(lt.to_json())},
        separators=(",", ":"),
    ) + "\n"
    _emit(body, args.output)
    return 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="quadmaps",
        description="uniform quadrangulations, their tree encodings, and "
                    "scaling statistics",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def add_common(p, model=True, count=True):
        p.add_argument("--n", type=int, required=True)
        if count:
            p.add_argument("--count", type=int, default=1)
        p.add_argument("--seed", type=int, default=None,
                       help="defaults to the SEED environment variable, then 0")
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--output", default=None)
        if model:
            p.add_argument("--model", choices=sorted(_SAMPLERS), default="nice")

    p = sub.add_parser("sample-tree", help="draw labeled trees")
    add_common(p)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=_cmd_sample_tree)

    p = sub.add_parser("sample-quad", help="draw quadrangulations as edge lists")
    add_common(p)
    p.set_defaults(func=_cmd_sample_quad)

    p = sub.add_parser("enumerate", help="list all labeled trees of a family")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--predicate", default="all",
                   choices=["all", "nonneg", "leaf-decreasing", "root-event",
                            "nice"])
    p.add_argument("--output", default=None)
    p.set_defaults(func=_cmd_enumerate)

    p = sub.add_parser("verify", help="run the invariant suite")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--exhaustive", action="store_true")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--model", choices=sorted(_SAMPLERS), default="plain")
    p.add_argument("--no-bound", dest="bound", action="store_false",
                   help="skip the quadratic corner-pair bound check")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("stats-scaling",
                       help="mean root distance over an n-ladder and its "
                            "log-log slope")
    p.add_argument("--models", default="nice,plain")
    p.add_argument("--ladder", default="250,500,1000,2000,4000")
    p.add_argument("--samples", type=int, default=500)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--output", default=None)
    p.set_defaults(func=_cmd_stats_scaling)

    p = sub.add_parser("stats-two-point",
                       help="KS gap between root-to-corner and corner-to-"
                            "corner rescaled distances")
    add_common(p, count=False)
    p.add_argument("--samples", type=int, default=500)
    p.set_defaults(func=_cmd_stats_two_point)

    p = sub.add_parser("snake-sample", help="discrete snake paths as CSV")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--kind", choices=["raw", "conditioned", "rerooted"],
                   default="raw")
    p.add_argument("--r", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--output", default=None)
    p.set_defaults(func=_cmd_snake_sample)

    p = sub.add_parser("encode", help="tree JSON to contour CSV")
    p.add_argument("--input", default=None)
    p.add_argument("--output", default=None)
    p.set_defaults(func=_cmd_encode)

    p = sub.add_parser("decode", help="contour CSV to tree JSON")
    p.add_argument("--input", default=None)
    p.add_argument("--output", default=None)
    p.set_defaults(func=_cmd_decode)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except QuadmapsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
