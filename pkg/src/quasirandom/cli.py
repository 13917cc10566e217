"""``quasirandom`` command line.

Exit codes: 0 success, 2 usage or parameter error, 3 internal invariant
violation.  Every JSON report carries the tool version, the generator
version and the full parsed configuration.
"""

from __future__ import annotations

import argparse
import csv
import io as _io
import json
import sys
from pathlib import Path

from . import __version__
from . import experiments as ex
from ._exact import as_fraction
from .counting import count_homomorphisms, count_labeled_copies, count_partite
from .generators import (
    GENERATOR_VERSION,
    Blocks,
    WeightedTemplate,
    build_four_block_counterexample,
    check_seed,
    expand_template,
    gen_gnp,
)
from .graph import VertexSet
from .io import GraphFormatError, blocks_path, load_blocks, load_graph, save_graph
from .patterns import get_pattern
from .properties import defect_global, defect_hereditary, defect_ordered_partite, defect_partite
from .regularity import LOWER, UPPER, find_irregularity_witness, increment_driver
from .template import check_girth_vanishing, epsilon_polynomial

SCHEMA_PATH = Path(__file__).with_name("schemas") / "report.schema.json"


class UsageError(Exception):
    pass


def parse_vertices(text: str) -> VertexSet:
    """``"0-9,12,15-20"`` (inclusive ranges)."""
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part:
            lo, hi = part.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    return VertexSet.of(out)


def _floats(text: str) -> list[float]:
    return [float(as_fraction(x)) for x in text.split(",") if x.strip()]


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _config(args: argparse.Namespace, argv: list[str]) -> dict:
    cfg = {k: v for k, v in sorted(vars(args).items()) if k != "func"}
    cfg["argv"] = list(argv)
    return cfg


def _envelope(args, argv, command: str, result: dict, **extra) -> dict:
    return {
        "tool": "quasirandom",
        "version": __version__,
        "generator_version": GENERATOR_VERSION,
        "command": command,
        "config": _config(args, argv),
        "result": result,
        **extra,
    }


def _emit_json(args, report: dict) -> None:
    text = json.dumps(report, indent=2) + "\n"
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def _csv_text(columns, rows) -> str:
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    writer.writerows(rows)
    return buf.getvalue()


# ---------------------------------------------------------------------------
# subcommands


def cmd_gen(args, argv) -> int:
    if args.output is None:
        raise UsageError("gen needs -o PATH for the edge list")
    blocks = None
    if args.kind == "gnp":
        g = gen_gnp(args.n, args.p, args.seed)
        blocks = Blocks((tuple(range(args.n)),))
    elif args.kind == "template":
        weights = [as_fraction(x) for x in args.weights.split(",")]
        k = args.k
        if len(weights) != k * k:
            raise UsageError(f"--weights needs k*k = {k * k} values")
        sizes = tuple(_ints(args.sizes)) if args.sizes else ()
        t = WeightedTemplate(tuple(tuple(weights[i * k:(i + 1) * k]) for i in range(k)), sizes)
        g, blocks = expand_template(t, args.seed)
    else:
        g, blocks = build_four_block_counterexample(args.n, args.seed)
    save_graph(g, args.output)
    side = {**blocks.to_json(), "config": _config(args, argv), "version": __version__,
            "generator_version": GENERATOR_VERSION}
    blocks_path(args.output).write_text(json.dumps(side) + "\n")
    sys.stdout.write(json.dumps({"n": g.n, "m": g.edge_count, "path": args.output}) + "\n")
    return 0


def cmd_count(args, argv) -> int:
    g = load_graph(args.graph)
    h = get_pattern(args.pattern)
    result = {
        "pattern": h.label(),
        "n": g.n,
        "edges": g.edge_count,
        "labeled_copies": count_labeled_copies(h, g),
        "homomorphisms": count_homomorphisms(h, g),
    }
    if args.blocks:
        parts = load_blocks(args.blocks).as_sets()[: h.r]
        result["partite_averaged"] = count_partite(h, g, parts, "averaged")
    _emit(args, argv, "count", result)
    return 0


def _emit(args, argv, command, result) -> None:
    if args.format == "csv":
        row = [json.dumps(v) if isinstance(v, (dict, list)) else v for v in result.values()]
        text = _csv_text(list(result), [row])
        if args.output:
            Path(args.output).write_text(text)
        else:
            sys.stdout.write(text)
    else:
        _emit_json(args, _envelope(args, argv, command, result))


def cmd_defect(args, argv) -> int:
    g = load_graph(args.graph)
    h = get_pattern(args.pattern)
    p = as_fraction(args.p)
    mode = "exact" if args.exact else "sampled"
    opts = dict(samples=args.samples, seed=args.seed, local_search=args.local_search)
    if args.family == "P":
        rep = defect_global(g, h, p)
    elif args.family == "Pstar":
        rep = defect_hereditary(g, h, p, mode, **opts)
    elif args.family == "Q":
        rep = defect_partite(g, h, p, mode, **opts)
    else:
        perm = _ints(args.perm) if args.perm else None
        rep = defect_ordered_partite(g, h, p, perm, mode, **opts)
    _emit(args, argv, "defect", rep.to_json())
    return 0


def _pair_from(args):
    if args.blocks:
        blocks = load_blocks(args.blocks).as_sets()
        if len(blocks) < 2:
            raise UsageError("blocks sidecar needs at least two blocks")
        return blocks[0], blocks[1]
    if not (args.a and args.b):
        raise UsageError("give --a and --b, or --blocks")
    return parse_vertices(args.a), parse_vertices(args.b)


def cmd_regularity(args, argv) -> int:
    g = load_graph(args.graph)
    a, b = _pair_from(args)
    w = find_irregularity_witness(g, a, b, as_fraction(args.q), as_fraction(args.eps), args.direction,
                                  args.strategy, args.seed)
    result = {
        "witness": None if w is None else w.to_json(),
        "strategy": args.strategy,
        "proof_of_regularity": w is None and args.strategy == "exact",
    }
    _emit(args, argv, "regularity", result)
    return 0


def cmd_increment(args, argv) -> int:
    g = load_graph(args.graph)
    h = get_pattern(args.pattern)
    a, b = _pair_from(args)
    if a.size != b.size:
        k = min(a.size, b.size)
        a, b = VertexSet.of(a.to_list()[:k]), VertexSet.of(b.to_list()[:k])
    trace = increment_driver(
        g, h, as_fraction(args.p), a, b, args.max_iters, as_fraction(args.delta), args.seed,
        args.strategy, not args.no_enforce, as_fraction(args.c_prime),
    )
    if not trace.monotone():
        raise AssertionError("driver trace is not alpha-monotone")
    if args.trace:
        Path(args.trace).write_text(trace.to_jsonl())
    result = {
        "stop_reason": trace.stop_reason,
        "steps": len(trace.states) - 1,
        "size_floor": trace.size_floor,
        "trace": trace.records(),
        "endgame": None if trace.endgame is None else trace.endgame.to_json(g.n, h.r),
    }
    _emit_json(args, _envelope(args, argv, "increment", result))
    return 0


def cmd_polynomial(args, argv) -> int:
    h = get_pattern(args.pattern)
    p = as_fraction(args.p)
    if h.girth == float("inf"):
        poly = epsilon_polynomial(h, p)
        result = {"pattern": h.label(), "p": f"{p.numerator}/{p.denominator}",
                  "coeffs": [f"{c.numerator}/{c.denominator}" for c in poly.coeffs],
                  "girth": None, "first_nonzero": poly.first_nonzero(1)}
    else:
        rep = check_girth_vanishing(h, p)
        if not rep.vanishes:
            raise AssertionError(f"eps-coefficients below the girth do not vanish for {h.label()}")
        result = rep.to_json()
    _emit_json(args, _envelope(args, argv, "polynomial", result))
    return 0


def cmd_experiment(args, argv) -> int:
    name = args.name
    if name == "theorem1-scaling":
        res = ex.theorem1_scaling(args.p, args.n, _floats(args.eps), args.samples, args.seed,
                                  args.instances, args.local_search)
    elif name == "increment-trace":
        res = ex.increment_trace(args.n, as_fraction(args.p), as_fraction(args.alpha0), args.seed,
                                 args.instances, args.pattern, args.max_iters, args.enforce, args.q_samples,
                                 as_fraction(args.c_prime))
    elif name == "girth-vanishing":
        res = ex.girth_vanishing(args.pattern.split(","), as_fraction(args.p))
    elif name == "counterexample-separation":
        res = ex.counterexample_separation(args.n, args.seed, args.instances, args.samples,
                                           args.local_search)
    else:
        res = ex.split_concentration(args.n, args.seed, args.instances)
    report = _envelope(args, argv, "experiment", res.summary, experiment=res.to_json())
    csv_text = _csv_text(res.columns, res.rows)
    if args.output:
        base = Path(args.output)
        base.with_suffix(".csv").write_text(csv_text)
        base.with_suffix(".json").write_text(json.dumps(report, indent=2) + "\n")
        if res.traces:
            base.with_suffix(".trace.jsonl").write_text("".join(json.dumps(t) + "\n" for t in res.traces))
    elif args.format == "csv":
        sys.stdout.write(csv_text)
    else:
        sys.stdout.write(json.dumps(report, indent=2) + "\n")
    return 0


# ---------------------------------------------------------------------------
# parser


def _seed(text: str) -> int:
    try:
        return check_seed(int(text))
    except ValueError as err:
        raise argparse.ArgumentTypeError(str(err)) from None


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_seed, default=0, help="master seed (64-bit unsigned)")
    common.add_argument("--threads", type=_positive, default=1,
                        help="parallelism cap; computation is single-threaded, so output never depends on it")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("-o", "--output", default=None, help="output path (default: standard output)")

    parser = argparse.ArgumentParser(prog="quasirandom", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"quasirandom {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", parents=[common], help="generate a graph (edge list + blocks sidecar)")
    gen.add_argument("kind", choices=("gnp", "template", "counterexample"))
    gen.add_argument("-n", type=int, default=None)
    gen.add_argument("-p", type=float, default=0.5)
    gen.add_argument("-k", type=int, default=None)
    gen.add_argument("--weights", default=None, help="row-major k*k weights, comma separated")
    gen.add_argument("--sizes", default=None, help="block sizes, comma separated")
    gen.set_defaults(func=cmd_gen)

    cnt = sub.add_parser("count", parents=[common], help="count copies of a pattern")
    cnt.add_argument("graph")
    cnt.add_argument("--pattern", required=True)
    cnt.add_argument("--blocks", default=None, help="blocks sidecar for a partite count")
    cnt.set_defaults(func=cmd_count)

    dfc = sub.add_parser("defect", parents=[common], help="measure a P / P* / Q / R defect")
    dfc.add_argument("graph")
    dfc.add_argument("--family", choices=("P", "Pstar", "Q", "R"), required=True)
    dfc.add_argument("--pattern", required=True)
    dfc.add_argument("-p", required=True, help="reference density (float or num/den)")
    dfc.add_argument("--exact", action="store_true")
    dfc.add_argument("--samples", type=int, default=1000)
    dfc.add_argument("--local-search", action="store_true")
    dfc.add_argument("--perm", default=None, help="bijection for family R, e.g. 0,2,1")
    dfc.set_defaults(func=cmd_defect)

    reg = sub.add_parser("regularity", parents=[common], help="search for an irregularity witness")
    reg.add_argument("graph")
    reg.add_argument("--a", default=None, help="vertex list, e.g. 0-9,12")
    reg.add_argument("--b", default=None)
    reg.add_argument("--blocks", default=None, help="take A, B from the first two blocks")
    reg.add_argument("-q", required=True)
    reg.add_argument("--eps", required=True)
    reg.add_argument("--direction", choices=(LOWER, UPPER), default=LOWER)
    reg.add_argument("--strategy", choices=("auto", "exact", "hill-climb", "degree-split"), default="auto")
    reg.set_defaults(func=cmd_regularity)

    inc = sub.add_parser("increment", parents=[common], help="run the density-increment driver")
    inc.add_argument("graph")
    inc.add_argument("--pattern", default="K3")
    inc.add_argument("-p", required=True)
    inc.add_argument("--a", default=None)
    inc.add_argument("--b", default=None)
    inc.add_argument("--blocks", default=None)
    inc.add_argument("--max-iters", type=int, default=50)
    inc.add_argument("--delta", default="0", help="measured Q-defect")
    inc.add_argument("--strategy", choices=("auto", "exact", "hill-climb", "degree-split"), default="auto")
    inc.add_argument("--no-enforce", action="store_true", help="report but do not enforce step preconditions")
    inc.add_argument("--c-prime", default="1")
    inc.add_argument("--trace", default=None, help="write the JSONL trace here")
    inc.set_defaults(func=cmd_increment)

    poly = sub.add_parser("polynomial", parents=[common], help="exact eps-expansion of the two-block template")
    poly.add_argument("--pattern", required=True)
    poly.add_argument("-p", required=True, help="num/den")
    poly.set_defaults(func=cmd_polynomial)

    exp = sub.add_parser("experiment", parents=[common], help="run a scripted experiment")
    exp.add_argument("name", choices=ex.EXPERIMENTS)
    exp.add_argument("-n", type=int, default=None)
    exp.add_argument("-p", default="1/2")
    exp.add_argument("--eps", default="0.02,0.05,0.1")
    exp.add_argument("--samples", type=int, default=200)
    exp.add_argument("--instances", type=int, default=None)
    exp.add_argument("--local-search", action="store_true")
    exp.add_argument("--pattern", default=None)
    exp.add_argument("--alpha0", default="1/5")
    exp.add_argument("--max-iters", type=int, default=50)
    exp.add_argument("--enforce", action="store_true", help="enforce step preconditions (increment-trace)")
    exp.add_argument("--q-samples", type=int, default=16)
    exp.add_argument("--c-prime", default="1")
    exp.set_defaults(func=cmd_experiment)
    return parser


_EXPERIMENT_DEFAULTS = {
    "theorem1-scaling": {"n": 1024, "instances": 5},
    "increment-trace": {"n": 400, "instances": 1, "pattern": "K3"},
    "girth-vanishing": {"pattern": "C4,C6,C8,K33,K4"},
    "counterexample-separation": {"n": 64, "instances": 20},
    "split-concentration": {"n": 64, "instances": 100},
}


def _validate(args) -> None:
    if args.command == "gen":
        if args.kind in ("gnp", "counterexample") and args.n is None:
            raise UsageError(f"gen {args.kind} needs -n")
        if args.kind == "counterexample" and (args.n < 8 or args.n % 4):
            raise UsageError(f"counterexample needs n divisible by 4 and at least 8, got {args.n}")
        if args.kind == "gnp" and not 0 <= args.p <= 1:
            raise UsageError("-p must lie in [0, 1]")
        if args.kind == "template" and (args.k is None or args.weights is None):
            raise UsageError("gen template needs -k and --weights")
    if args.command == "experiment":
        for key, value in _EXPERIMENT_DEFAULTS[args.name].items():
            if getattr(args, key) is None:
                setattr(args, key, value)


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _validate(args)
        return args.func(args, argv)
    except (UsageError, GraphFormatError, ValueError, KeyError, FileNotFoundError) as err:
        msg = err.args[0] if isinstance(err, KeyError) and err.args else err
        print(f"quasirandom: error: {msg}", file=sys.stderr)
        return 2
    except AssertionError as err:
        print(f"quasirandom: invariant violation: {err}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
