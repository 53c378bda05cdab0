"""Command line front end.

Subcommands cover the whole pipeline: ``gen`` synthesises a standard
context, ``bases`` builds implication bases from a context, ``closure``
closes one attribute set (``--metrics`` adds the instrumentation
counters), ``check`` cross-validates the three bases of a context,
``bench`` runs the paired benchmark over a directory of contexts, and
``report`` aggregates a benchmark CSV.

``--seed`` before the subcommand sets a default seed for the seeded
subcommands; ``--verbose`` echoes progress detail to stderr.

Exit codes: 0 on success, 1 on a reported domain or I/O error, 2 on a
usage error.  Domain errors print ``error: <ClassName>: <message>`` to
stderr.
"""

from __future__ import annotations

import argparse
import hashlib
import sys
from pathlib import Path

from .bases import build_cdub, build_dbasis, build_dg, check_equiv, direct_witness
from .bench import (
    ALGORITHMS,
    METRIC_NAMES,
    WorkloadSpec,
    combo_label,
    metric_value,
    normalize,
    ranking,
    read_reports_csv,
    run_bench,
    size_ratio_report,
    write_reports_csv,
)
from .closure import oracle_closure
from .context import gen_synthetic, read_cxt, render_cxt, write_cxt
from .errors import ImplbaseError, InvalidCombo, IoError
from .sets import AttributeSet, BasisKind, read_basis, render_basis, write_basis

__version__ = "0.1.0"

_BUILDERS = {"cdub": build_cdub, "dbasis": build_dbasis, "dg": build_dg}
_DIRECT_KINDS = (BasisKind.CDUB, BasisKind.DBASIS)


def _source_hash() -> str:
    """Short digest over the package sources, so builds are tellable apart."""
    root = Path(__file__).resolve().parent
    digest = hashlib.sha256()
    for path in sorted(root.glob("*.py")):
        digest.update(path.name.encode())
        digest.update(path.read_bytes())
    return digest.hexdigest()[:8]


def version_string() -> str:
    return f"implbase {__version__}+{_source_hash()}"


def _parse_set(text: str, universe) -> AttributeSet:
    bits = 0
    for token in text.split():
        bits |= 1 << universe.resolve(token)
    return AttributeSet(universe, bits)


def _seed(args: argparse.Namespace) -> int:
    """Subcommand seed, falling back to the global one, then to 0."""
    if args.seed is not None:
        return args.seed
    if args.global_seed is not None:
        return args.global_seed
    return 0


def _note(args: argparse.Namespace, message: str) -> None:
    if args.verbose:
        print(message, file=sys.stderr)


def cmd_gen(args: argparse.Namespace) -> int:
    ctx = gen_synthetic(args.objects, args.attributes, args.density, _seed(args))
    _note(args, f"standard context: {ctx.objects} objects x {ctx.universe.size} attributes")
    if args.out is not None:
        write_cxt(ctx, args.out)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(render_cxt(ctx))
    return 0


def cmd_bases(args: argparse.Namespace) -> int:
    if args.kind == "all" and args.out is None:
        args.parser.error("--kind all writes three files and needs --out DIRECTORY")
    ctx = read_cxt(args.context)
    if args.kind == "all":
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        for kind, build in _BUILDERS.items():
            basis = build(ctx)
            _note(args, f"{kind}: {len(basis)} implications")
            target = outdir / f"{kind}.imp"
            write_basis(basis, target)
            print(f"wrote {target}")
        return 0
    basis = _BUILDERS[args.kind](ctx)
    _note(args, f"{args.kind}: {len(basis)} implications")
    if args.out is not None:
        write_basis(basis, args.out)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(render_basis(basis))
    return 0


def cmd_closure(args: argparse.Namespace) -> int:
    basis = read_basis(args.basis)
    _note(args, f"basis kind {basis.kind.value}, {len(basis)} implications")
    x = _parse_set(args.attrs, basis.universe)
    algorithm = args.algorithm
    if algorithm == "oracle":
        print(str(oracle_closure(x, basis)))
        return 0
    if algorithm.endswith("-direct") and basis.kind not in _DIRECT_KINDS:
        raise InvalidCombo(
            f"{algorithm} requires a cdub or dbasis, got a {basis.kind.value} basis"
        )
    result = ALGORITHMS[algorithm](x, basis)
    m = result.metrics
    print(str(result.closure))
    if args.metrics:
        print(
            f"deps={m.deps} attrib={m.attribute_ops} inner={m.inner_loops} "
            f"outer={m.outer_loops} time_ns={m.elapsed_ns}"
        )
    return 0


def cmd_check(args: argparse.Namespace) -> int:
    ctx = read_cxt(args.context)
    named = [(kind, build(ctx)) for kind, build in _BUILDERS.items()]
    universe = ctx.universe
    labels = " ".join(universe.label(i) for i in range(universe.size))
    print(f"universe: {labels} ({universe.size} attributes)")
    for kind, basis in named:
        suffix = f" (sigma0 {basis.sigma0_len})" if kind == "dbasis" else ""
        print(f"{kind}: {len(basis)} implications{suffix}")
    for i in range(len(named)):
        for j in range(i + 1, len(named)):
            n1, b1 = named[i]
            n2, b2 = named[j]
            verdict = "yes" if check_equiv(b1, b2) else "NO"
            print(f"equivalent {n1}~{n2}: {verdict}")
    for kind, basis in named:
        word = "ordered-direct" if kind == "dbasis" else "direct"
        witness = direct_witness(basis)
        if witness is None:
            print(f"{word} {kind}: yes")
        else:
            print(f"{word} {kind}: no (witness: {witness})")
    return 0


def cmd_bench(args: argparse.Namespace) -> int:
    root = Path(args.datasets)
    files = sorted(root.glob("*.cxt"))
    if not files:
        raise IoError(f"no .cxt files under {root}")
    datasets = [(path.stem, read_cxt(path)) for path in files]
    _note(args, f"{len(datasets)} datasets, {args.jobs} jobs")
    spec = WorkloadSpec(
        queries=args.queries,
        repetitions=args.reps,
        seed=_seed(args),
        query_density=args.query_density,
    )
    reports = run_bench(datasets, spec, jobs=args.jobs)
    if args.out is not None:
        write_reports_csv(reports, args.out)
        print(f"wrote {args.out} ({len(reports)} rows)")
    else:
        write_reports_csv(reports, sys.stdout)
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    reports = read_reports_csv(args.csv)
    if args.kind == "totals":
        print("dataset combo " + " ".join(METRIC_NAMES))
        if args.normalize:
            columns = {m: normalize(reports, m) for m in METRIC_NAMES}
            for i, r in enumerate(reports):
                cells = " ".join(f"{columns[m][i]:.2f}" for m in METRIC_NAMES)
                print(f"{r.dataset} {combo_label(r)} {cells}")
        else:
            for r in reports:
                cells = []
                for m in METRIC_NAMES:
                    value = metric_value(r, m)
                    cells.append(f"{value:.3f}" if m == "time_ms" else f"{int(value)}")
                print(f"{r.dataset} {combo_label(r)} {' '.join(cells)}")
        return 0
    if args.kind == "ranking":
        table = ranking(reports)
        for metric in METRIC_NAMES:
            ordered = sorted(table[metric].items(), key=lambda kv: (-kv[1], kv[0]))
            cells = " ".join(f"{label}={wins}" for label, wins in ordered)
            print(f"{metric}: {cells}")
        return 0
    print("bucket datasets dg:classic cdub:wild-direct")
    for row in size_ratio_report(reports):
        print(f"{row.bucket:.1f} {row.datasets} {row.wins_a} {row.wins_b}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="implbase",
        description="implication bases and instrumented closures over formal contexts",
    )
    parser.add_argument("--version", action="version", version=version_string())
    parser.add_argument(
        "--seed",
        dest="global_seed",
        type=int,
        help="default seed for the seeded subcommands",
    )
    parser.add_argument(
        "--verbose", action="store_true", help="echo progress detail to stderr"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a synthetic standard context")
    p.add_argument("--objects", type=int, required=True)
    p.add_argument("--attributes", type=int, required=True)
    p.add_argument("--density", type=float, default=0.3)
    p.add_argument("--seed", type=int)
    p.add_argument("-o", "--out", type=Path, help="target .cxt file (default: stdout)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bases", help="build implication bases from a context")
    p.add_argument("--in", dest="context", type=Path, required=True, help="a .cxt file")
    p.add_argument("--kind", choices=["cdub", "dbasis", "dg", "all"], default="all")
    p.add_argument(
        "-o",
        "--out",
        type=Path,
        help="target file, or directory with --kind all (default: stdout)",
    )
    p.set_defaults(func=cmd_bases, parser=p)

    p = sub.add_parser("closure", help="close an attribute set under a basis")
    p.add_argument("--basis", type=Path, required=True, help="a basis file")
    p.add_argument(
        "--set", dest="attrs", default="", help="space separated attributes to close"
    )
    p.add_argument(
        "--algo",
        dest="algorithm",
        required=True,
        choices=["classic", "lin", "wild", "classic-direct", "lin-direct", "wild-direct", "oracle"],
    )
    p.add_argument(
        "--metrics", action="store_true", help="print the counters after the closure"
    )
    p.set_defaults(func=cmd_closure)

    p = sub.add_parser("check", help="build all bases and cross-validate them")
    p.add_argument("--in", dest="context", type=Path, required=True, help="a .cxt file")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("bench", help="run the paired benchmark over a context directory")
    p.add_argument(
        "--in",
        dest="datasets",
        type=Path,
        required=True,
        help="directory containing .cxt files",
    )
    p.add_argument("--queries", type=int, default=1000)
    p.add_argument("--reps", type=int, default=3)
    p.add_argument("--seed", type=int)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--query-density", type=float, default=0.5)
    p.add_argument("-o", "--out", type=Path, help="target .csv file (default: stdout)")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("report", help="aggregate a benchmark CSV")
    p.add_argument("--in", dest="csv", type=Path, required=True, help="a bench CSV")
    p.add_argument("--kind", choices=["totals", "ranking", "ratio"], default="totals")
    p.add_argument("--normalize", action="store_true", help="rescale metrics onto [0, 100]")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit as exc:
        code = exc.code
        if code is None:
            return 0
        return code if isinstance(code, int) else 2
    except OSError as exc:
        print(f"error: IoError: {exc}", file=sys.stderr)
        return 1
    except (ImplbaseError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
