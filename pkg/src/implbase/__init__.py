"""Implication bases over formal contexts, with instrumented closure
algorithms and a deterministic benchmark harness.

The public surface re-exported here covers the usual workflow: load or
generate a context, bring it to standard form, build the three bases
(unit basis with all minimal premises, ordered-direct basis with a binary
prefix, minimum-cardinality basis), and close attribute sets with any of
the six counting algorithms.
"""

from __future__ import annotations

from .bases import (
    PseudoClosedWitness,
    build_cdub,
    build_dbasis,
    build_dg,
    check_equiv,
    direct_witness,
    enumerate_pseudo_closed,
    is_pseudo_closed,
    verify_direct,
)
from .bench import (
    ALGORITHMS,
    CSV_HEADER,
    METRIC_NAMES,
    TABLE_COMBOS,
    ComboReport,
    RatioBucket,
    WorkloadSpec,
    default_combos,
    normalize,
    ranking,
    read_reports_csv,
    run_bench,
    run_workload,
    size_ratio_report,
    write_reports_csv,
)
from .closure import (
    ClosureResult,
    Metrics,
    binary_closure,
    closure_classic,
    closure_direct,
    implies,
    lin_closure,
    lin_closure_direct,
    oracle_closure,
    pass_once,
    wild_closure,
    wild_closure_direct,
)
from .context import (
    Context,
    clarify,
    context_closure,
    gen_synthetic,
    is_clarified,
    is_reduced,
    is_standard,
    parse_cxt,
    read_cxt,
    reduce,
    render_cxt,
    require_standard,
    write_cxt,
)
from .errors import (
    DegenerateContext,
    EmptyLhs,
    ImplbaseError,
    ImplicationSyntaxError,
    InvalidBasis,
    InvalidCombo,
    IoError,
    MalformedCxt,
    NotClarified,
    NotStandardContext,
    UniverseMismatch,
    UnknownAttribute,
    WrongBasisKind,
)
from .sets import (
    AttributeSet,
    Basis,
    BasisKind,
    Implication,
    Universe,
    format_implication,
    lectic_key,
    merge_same_lhs,
    parse_basis,
    parse_implication,
    read_basis,
    render_basis,
    unit_expand,
    write_basis,
)

__version__ = "0.1.0"

__all__ = [
    "AttributeSet",
    "Basis",
    "BasisKind",
    "Implication",
    "Universe",
    "format_implication",
    "lectic_key",
    "merge_same_lhs",
    "parse_basis",
    "parse_implication",
    "read_basis",
    "render_basis",
    "unit_expand",
    "write_basis",
    "Context",
    "clarify",
    "context_closure",
    "gen_synthetic",
    "is_clarified",
    "is_reduced",
    "is_standard",
    "parse_cxt",
    "read_cxt",
    "reduce",
    "render_cxt",
    "require_standard",
    "write_cxt",
    "ClosureResult",
    "Metrics",
    "binary_closure",
    "closure_classic",
    "closure_direct",
    "implies",
    "lin_closure",
    "lin_closure_direct",
    "oracle_closure",
    "pass_once",
    "wild_closure",
    "wild_closure_direct",
    "PseudoClosedWitness",
    "build_cdub",
    "build_dbasis",
    "build_dg",
    "check_equiv",
    "direct_witness",
    "enumerate_pseudo_closed",
    "is_pseudo_closed",
    "verify_direct",
    "ALGORITHMS",
    "CSV_HEADER",
    "METRIC_NAMES",
    "TABLE_COMBOS",
    "ComboReport",
    "RatioBucket",
    "WorkloadSpec",
    "default_combos",
    "normalize",
    "ranking",
    "read_reports_csv",
    "run_bench",
    "run_workload",
    "size_ratio_report",
    "write_reports_csv",
    "DegenerateContext",
    "EmptyLhs",
    "ImplbaseError",
    "ImplicationSyntaxError",
    "InvalidBasis",
    "InvalidCombo",
    "IoError",
    "MalformedCxt",
    "NotClarified",
    "NotStandardContext",
    "UniverseMismatch",
    "UnknownAttribute",
    "WrongBasisKind",
    "__version__",
]
