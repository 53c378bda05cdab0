"""Deterministic closure benchmarks over basis/algorithm combinations.

A workload draws a seeded sequence of random query sets and replays the
*same* sequence against every requested combination, so comparisons are
paired.  Counters are summed per repetition and must agree bit for bit
across repetitions (the algorithms are deterministic); only wall time is
averaged.  Combinations follow the supported pairing table: single-round
algorithms run against the ``cdub`` and ``dbasis`` kinds, iterate-until-
stable algorithms against ``dg``.

Reports serialise to CSV with a fixed header; given the same inputs and
seed, two runs differ at most in the ``time_ms`` column.
"""

from __future__ import annotations

import csv
import hashlib
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from random import Random
from typing import Callable, Iterable, Mapping, Sequence, TextIO

from . import bases as bases_mod
from .closure import (
    ClosureResult,
    Metrics,
    closure_classic,
    closure_direct,
    lin_closure,
    lin_closure_direct,
    wild_closure,
    wild_closure_direct,
)
from .context import Context
from .errors import InvalidCombo, UniverseMismatch
from .sets import AttributeSet, Basis, BasisKind, Universe

__all__ = [
    "ALGORITHMS",
    "TABLE_COMBOS",
    "METRIC_NAMES",
    "CSV_HEADER",
    "WorkloadSpec",
    "ComboReport",
    "RatioBucket",
    "default_combos",
    "valid_combo",
    "derive_seed",
    "run_workload",
    "run_bench",
    "combo_label",
    "metric_value",
    "normalize",
    "ranking",
    "size_ratio_report",
    "write_reports_csv",
    "read_reports_csv",
]

ALGORITHMS: dict[str, Callable[[AttributeSet, Basis], ClosureResult]] = {
    "classic": closure_classic,
    "lin": lin_closure,
    "wild": wild_closure,
    "classic-direct": closure_direct,
    "lin-direct": lin_closure_direct,
    "wild-direct": wild_closure_direct,
}

#: Supported pairings: direct algorithms with the direct bases, classic with dg.
TABLE_COMBOS: dict[BasisKind, tuple[str, ...]] = {
    BasisKind.CDUB: ("classic-direct", "lin-direct", "wild-direct"),
    BasisKind.DBASIS: ("classic-direct", "lin-direct", "wild-direct"),
    BasisKind.DG: ("classic", "lin", "wild"),
}

METRIC_NAMES = ("deps", "attrib_ops", "inner", "outer", "time_ms")

CSV_HEADER = "dataset,universe,basis_kind,basis_size,algorithm,queries,reps,deps,attrib_ops,inner,outer,time_ms"


def valid_combo(kind: BasisKind, algorithm: str) -> bool:
    return algorithm in TABLE_COMBOS.get(kind, ())


def default_combos(
    kinds: Iterable[BasisKind] = (BasisKind.CDUB, BasisKind.DBASIS, BasisKind.DG),
) -> tuple[tuple[BasisKind, str], ...]:
    return tuple((kind, algo) for kind in kinds for algo in TABLE_COMBOS[kind])


@dataclass(frozen=True)
class WorkloadSpec:
    """What to run: query count, repetitions, seed, combos, query density."""

    queries: int = 50_000
    repetitions: int = 3
    seed: int = 0
    combos: tuple[tuple[BasisKind, str], ...] | None = None
    query_density: float = 0.5


@dataclass(frozen=True)
class ComboReport:
    """Summed metrics of one basis/algorithm combination over one dataset."""

    dataset: str
    basis_kind: BasisKind
    algorithm: str
    universe_size: int
    basis_size: int
    queries: int
    repetitions: int
    totals: Metrics
    query_digest: str

    @property
    def time_ms(self) -> float:
        return self.totals.elapsed_ns / 1e6


def combo_label(report: ComboReport) -> str:
    return f"{report.basis_kind.value}:{report.algorithm}"


def metric_value(report: ComboReport, metric: str) -> float:
    if metric == "deps":
        return report.totals.deps
    if metric == "attrib_ops":
        return report.totals.attribute_ops
    if metric == "inner":
        return report.totals.inner_loops
    if metric == "outer":
        return report.totals.outer_loops
    if metric == "time_ms":
        return report.time_ms
    raise ValueError(f"unknown metric {metric!r}")


def derive_seed(seed: int, dataset: str) -> int:
    """Stable per-dataset seed, independent of dataset order."""
    digest = hashlib.sha256(f"{seed}:{dataset}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def _draw_queries(
    universe: Universe, count: int, density: float, seed: int
) -> tuple[list[AttributeSet], str]:
    """The seeded query sequence and its digest.

    Each attribute of each query is an independent Bernoulli(density) draw;
    the digest identifies the exact sequence so paired replay is checkable.
    """
    rng = Random(seed)
    n = universe.size
    nbytes = (n + 7) // 8
    hasher = hashlib.sha256()
    queries: list[AttributeSet] = []
    for _ in range(count):
        if density == 0.5:
            bits = rng.getrandbits(n) if n else 0
        else:
            bits = 0
            for j in range(n):
                if rng.random() < density:
                    bits |= 1 << j
        hasher.update(bits.to_bytes(nbytes, "big"))
        queries.append(AttributeSet(universe, bits))
    return queries, hasher.hexdigest()[:16]


def _bases_from(source: Context | Mapping[BasisKind, Basis]) -> dict[BasisKind, Basis]:
    if isinstance(source, Context):
        return {
            BasisKind.CDUB: bases_mod.build_cdub(source),
            BasisKind.DBASIS: bases_mod.build_dbasis(source),
            BasisKind.DG: bases_mod.build_dg(source),
        }
    return {BasisKind(kind): basis for kind, basis in source.items()}


def run_workload(
    source: Context | Mapping[BasisKind, Basis],
    spec: WorkloadSpec,
    dataset_id: str = "dataset",
) -> list[ComboReport]:
    """Run every requested combination over the same seeded query sequence.

    ``source`` is either a standard context (all three bases are then built
    here, outside any measurement) or a ready mapping of kind to basis.
    Counters must agree across repetitions; a mismatch would mean a
    non-deterministic algorithm and raises ``RuntimeError``.
    """
    bases = _bases_from(source)
    if spec.combos is None:
        combos = default_combos(kinds=[k for k in TABLE_COMBOS if k in bases])
    else:
        combos = tuple((BasisKind(kind), algo) for kind, algo in spec.combos)
    universes = {basis.universe for basis in bases.values()}
    if len(universes) > 1:
        raise UniverseMismatch("bases of one workload must share a universe")
    for kind, algo in combos:
        if algo not in ALGORITHMS:
            raise InvalidCombo(f"unknown algorithm {algo!r}")
        if not valid_combo(kind, algo):
            raise InvalidCombo(
                f"{kind.value} is not paired with {algo}; "
                f"supported: {', '.join(TABLE_COMBOS[kind])}"
            )
        if kind not in bases:
            raise InvalidCombo(f"no {kind.value} basis available in this workload")
    universe = next(iter(universes)) if universes else None
    if universe is None:
        raise InvalidCombo("a workload needs at least one basis")
    queries, digest = _draw_queries(universe, spec.queries, spec.query_density, spec.seed)
    reports: list[ComboReport] = []
    for kind, algo in combos:
        basis = bases[kind]
        func = ALGORITHMS[algo]
        reference: tuple[int, int, int, int] | None = None
        elapsed_total = 0
        for _ in range(max(1, spec.repetitions)):
            totals = Metrics()
            for query in queries:
                totals.add(func(query, basis).metrics)
            if reference is None:
                reference = totals.counters()
            elif totals.counters() != reference:
                raise RuntimeError(
                    f"counters changed between repetitions for {kind.value}:{algo}"
                )
            elapsed_total += totals.elapsed_ns
        assert reference is not None
        reps = max(1, spec.repetitions)
        summed = Metrics(*reference, elapsed_ns=round(elapsed_total / reps))
        reports.append(
            ComboReport(
                dataset=dataset_id,
                basis_kind=kind,
                algorithm=algo,
                universe_size=universe.size,
                basis_size=len(basis),
                queries=spec.queries,
                repetitions=reps,
                totals=summed,
                query_digest=digest,
            )
        )
    return reports


def _bench_dataset(task: tuple[str, Context, WorkloadSpec]) -> list[ComboReport]:
    name, ctx, spec = task
    per_dataset = replace(spec, seed=derive_seed(spec.seed, name))
    return run_workload(ctx, per_dataset, dataset_id=name)


def run_bench(
    datasets: Sequence[tuple[str, Context]],
    spec: WorkloadSpec,
    jobs: int = 1,
) -> list[ComboReport]:
    """Run the workload over many datasets, optionally on a process pool.

    Each dataset derives its own query seed from its name, so results do not
    depend on scheduling; parallel and serial runs produce identical
    counters.
    """
    tasks = [(name, ctx, spec) for name, ctx in datasets]
    if jobs <= 1 or len(tasks) <= 1:
        nested = [_bench_dataset(task) for task in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            nested = list(pool.map(_bench_dataset, tasks))
    return [report for group in nested for report in group]


# -- CSV ----------------------------------------------------------------------


def write_reports_csv(reports: Iterable[ComboReport], target: str | Path | TextIO) -> None:
    """Fixed-header CSV; equal inputs and seed give byte-equal files except
    for the time column."""
    own = isinstance(target, (str, Path))
    handle = open(target, "w", encoding="utf-8", newline="") if own else target
    try:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(CSV_HEADER.split(","))
        for r in reports:
            writer.writerow(
                [
                    r.dataset,
                    r.universe_size,
                    r.basis_kind.value,
                    r.basis_size,
                    r.algorithm,
                    r.queries,
                    r.repetitions,
                    r.totals.deps,
                    r.totals.attribute_ops,
                    r.totals.inner_loops,
                    r.totals.outer_loops,
                    f"{r.time_ms:.6f}",
                ]
            )
    finally:
        if own:
            handle.close()


def read_reports_csv(source: str | Path | TextIO) -> list[ComboReport]:
    own = isinstance(source, (str, Path))
    handle = open(source, "r", encoding="utf-8", newline="") if own else source
    try:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header != CSV_HEADER.split(","):
            raise ValueError("unexpected CSV header")
        reports = []
        for row in reader:
            (
                dataset,
                universe_size,
                kind,
                basis_size,
                algorithm,
                queries,
                reps,
                deps,
                attrib_ops,
                inner,
                outer,
                time_ms,
            ) = row
            totals = Metrics(
                deps=int(deps),
                attribute_ops=int(attrib_ops),
                inner_loops=int(inner),
                outer_loops=int(outer),
                elapsed_ns=round(float(time_ms) * 1e6),
            )
            reports.append(
                ComboReport(
                    dataset=dataset,
                    basis_kind=BasisKind(kind),
                    algorithm=algorithm,
                    universe_size=int(universe_size),
                    basis_size=int(basis_size),
                    queries=int(queries),
                    repetitions=int(reps),
                    totals=totals,
                    query_digest="",
                )
            )
        return reports
    finally:
        if own:
            handle.close()


# -- aggregation --------------------------------------------------------------


def normalize_values(values: Sequence[float]) -> list[float]:
    """Affine rescale onto [0, 100]; an all-equal column maps to all zeros."""
    if not values:
        return []
    low = min(values)
    high = max(values)
    if math.isclose(low, high):
        return [0.0 for _ in values]
    span = high - low
    return [100.0 * (v - low) / span for v in values]


def normalize(reports: Sequence[ComboReport], metric: str) -> list[float]:
    """One metric of the given reports rescaled onto [0, 100], order kept."""
    return normalize_values([metric_value(r, metric) for r in reports])


def ranking(
    reports: Sequence[ComboReport],
    metrics: Sequence[str] = METRIC_NAMES,
) -> dict[str, dict[str, int]]:
    """Win counts per metric and combination across datasets.

    For every dataset and metric, each combination achieving the dataset
    minimum scores one win; ties credit every minimiser.
    """
    by_dataset: dict[str, list[ComboReport]] = {}
    for report in reports:
        by_dataset.setdefault(report.dataset, []).append(report)
    labels: list[str] = []
    for report in reports:
        label = combo_label(report)
        if label not in labels:
            labels.append(label)
    table: dict[str, dict[str, int]] = {
        metric: {label: 0 for label in labels} for metric in metrics
    }
    for metric in metrics:
        for group in by_dataset.values():
            best = min(metric_value(r, metric) for r in group)
            for r in group:
                if metric_value(r, metric) == best:
                    table[metric][combo_label(r)] += 1
    return table


@dataclass(frozen=True)
class RatioBucket:
    """Head-to-head outcome for datasets whose size ratio falls in one bucket."""

    bucket: float
    datasets: int
    wins_a: int
    wins_b: int

    @property
    def share_a(self) -> float:
        return self.wins_a / self.datasets if self.datasets else 0.0

    @property
    def share_b(self) -> float:
        return self.wins_b / self.datasets if self.datasets else 0.0


def size_ratio_report(
    reports: Sequence[ComboReport],
    combo_a: tuple[BasisKind, str] = (BasisKind.DG, "classic"),
    combo_b: tuple[BasisKind, str] = (BasisKind.CDUB, "wild-direct"),
    metric: str = "time_ms",
) -> list[RatioBucket]:
    """Bucket datasets by ``|cdub| / |dg|`` in steps of one tenth and count,
    per bucket, how often each head-to-head combination wins the metric.

    Bucket ``x`` covers ratios in ``(x - 0.1, x]``; the boundary is computed
    in integer arithmetic, so 2.39... lands in 2.4 and exactly 1.3 in 1.3.
    Ties credit both sides.  Datasets missing either combination or either
    size are skipped.
    """
    by_dataset: dict[str, dict[tuple[BasisKind, str], ComboReport]] = {}
    sizes: dict[str, dict[BasisKind, int]] = {}
    for report in reports:
        by_dataset.setdefault(report.dataset, {})[
            (report.basis_kind, report.algorithm)
        ] = report
        sizes.setdefault(report.dataset, {})[report.basis_kind] = report.basis_size
    buckets: dict[int, list[int]] = {}
    for dataset, combos in sorted(by_dataset.items()):
        size_cdub = sizes[dataset].get(BasisKind.CDUB)
        size_dg = sizes[dataset].get(BasisKind.DG)
        a = combos.get(combo_a)
        b = combos.get(combo_b)
        if not size_cdub or not size_dg or a is None or b is None:
            continue
        tenths = -(-10 * size_cdub // size_dg)
        entry = buckets.setdefault(tenths, [0, 0, 0])
        entry[0] += 1
        va = metric_value(a, metric)
        vb = metric_value(b, metric)
        if va <= vb:
            entry[1] += 1
        if vb <= va:
            entry[2] += 1
    return [
        RatioBucket(bucket=tenths / 10, datasets=n, wins_a=wa, wins_b=wb)
        for tenths, (n, wa, wb) in sorted(buckets.items())
    ]
