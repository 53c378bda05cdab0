"""Command line surface: subcommands, output shape, exit codes."""

from __future__ import annotations

import re

import pytest

from conftest import EX51_CXT, EX51_IMP
from implbase.cli import main
from implbase.context import parse_cxt, read_cxt
from implbase.sets import BasisKind, parse_basis, read_basis


def run(capsys, *argv: str) -> tuple[int, str, str]:
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# -- version and usage ------------------------------------------------------------


def test_version_flag(capsys):
    code, out, _ = run(capsys, "--version")
    assert code == 0
    assert re.fullmatch(r"implbase 0\.1\.0\+[0-9a-f]{8}\n", out)


def test_usage_errors_exit_2(capsys):
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys)[0] == 2
    assert run(capsys, "gen", "--objects", "5")[0] == 2  # --attributes missing
    assert run(capsys, "closure", "--basis", str(EX51_IMP))[0] == 2  # --algo missing


# -- gen ----------------------------------------------------------------------------


def test_gen_writes_a_standard_context(capsys, tmp_path):
    target = tmp_path / "new.cxt"
    code, out, _ = run(
        capsys,
        "gen", "--objects", "15", "--attributes", "6",
        "--density", "0.4", "--seed", "3", "-o", str(target),
    )
    assert code == 0
    assert str(target) in out
    ctx = read_cxt(target)
    assert ctx.universe.size <= 6


def test_gen_to_stdout_parses(capsys):
    code, out, _ = run(
        capsys, "gen", "--objects", "15", "--attributes", "6", "--seed", "3"
    )
    assert code == 0
    assert parse_cxt(out).objects >= 1


def test_gen_global_seed_equals_local_seed(capsys):
    local = run(
        capsys, "gen", "--objects", "12", "--attributes", "5", "--seed", "8"
    )
    fallback = run(
        capsys, "--seed", "8", "gen", "--objects", "12", "--attributes", "5"
    )
    assert local == fallback


def test_gen_verbose_notes_go_to_stderr(capsys):
    code, out, err = run(
        capsys, "--verbose", "gen", "--objects", "12", "--attributes", "5"
    )
    assert code == 0
    assert "objects x" in err
    assert parse_cxt(out).objects >= 1


def test_gen_rejects_bad_density(capsys):
    code, _, err = run(
        capsys,
        "gen", "--objects", "5", "--attributes", "4", "--density", "1.5",
    )
    assert code == 1
    assert "error: ValueError" in err


# -- bases --------------------------------------------------------------------------


def test_bases_single_kind_to_stdout(capsys):
    code, out, _ = run(capsys, "bases", "--in", str(EX51_CXT), "--kind", "dbasis")
    assert code == 0
    assert out == EX51_IMP.read_text(encoding="utf-8")


def test_bases_all_kinds_to_directory(capsys, tmp_path):
    outdir = tmp_path / "bases"
    code, out, _ = run(
        capsys, "bases", "--in", str(EX51_CXT), "--kind", "all", "-o", str(outdir)
    )
    assert code == 0
    for kind in ("cdub", "dbasis", "dg"):
        basis = read_basis(outdir / f"{kind}.imp")
        assert basis.kind is BasisKind(kind)
    assert read_basis(outdir / "dbasis.imp") == read_basis(EX51_IMP)


def test_bases_all_requires_out(capsys):
    code, _, err = run(capsys, "bases", "--in", str(EX51_CXT), "--kind", "all")
    assert code == 2


def test_bases_missing_file_reports_io_error(capsys, tmp_path):
    code, _, err = run(
        capsys, "bases", "--in", str(tmp_path / "absent.cxt"), "--kind", "dg"
    )
    assert code == 1
    assert err.startswith("error: IoError:")


def test_bases_malformed_file_reports_class_name(capsys, tmp_path):
    bad = tmp_path / "bad.cxt"
    bad.write_text("not a context\n")
    code, _, err = run(capsys, "bases", "--in", str(bad), "--kind", "dg")
    assert code == 1
    assert err.startswith("error: MalformedCxt:")


# -- closure ------------------------------------------------------------------------


def test_closure_prints_set_only_by_default(capsys):
    code, out, _ = run(
        capsys,
        "closure", "--basis", str(EX51_IMP), "--algo", "classic", "--set", "b d",
    )
    assert code == 0
    assert out == "a b c d\n"


def test_closure_metrics_flag_adds_counters(capsys):
    code, out, _ = run(
        capsys,
        "closure", "--basis", str(EX51_IMP), "--set", "b d",
        "--algo", "lin-direct", "--metrics",
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "a b c d"
    assert re.fullmatch(
        r"deps=2 attrib=3 inner=5 outer=3 time_ns=\d+", lines[1]
    )


def test_closure_oracle_has_no_counters(capsys):
    code, out, _ = run(
        capsys,
        "closure", "--basis", str(EX51_IMP), "--set", "b d",
        "--algo", "oracle", "--metrics",
    )
    assert code == 0
    assert out == "a b c d\n"


def test_closure_rejects_direct_algorithm_on_wrong_kind(capsys, tmp_path):
    basis = parse_basis(EX51_IMP.read_text(encoding="utf-8"))
    raw = tmp_path / "raw.imp"
    text = "\n".join(
        line
        for line in EX51_IMP.read_text(encoding="utf-8").splitlines()
        if not line.startswith("#")
    )
    raw.write_text("# kind: raw\n" + text + "\n")
    code, _, err = run(
        capsys,
        "closure", "--basis", str(raw), "--set", "b d", "--algo", "wild-direct",
    )
    assert code == 1
    assert err.startswith("error: InvalidCombo:")
    assert basis.kind is BasisKind.DBASIS  # the original file stays typed


def test_closure_unknown_attribute(capsys):
    code, _, err = run(
        capsys, "closure", "--basis", str(EX51_IMP), "--algo", "classic", "--set", "z"
    )
    assert code == 1
    assert err.startswith("error: UnknownAttribute:")


# -- check --------------------------------------------------------------------------


def test_check_reports_sizes_equivalence_and_directness(capsys):
    code, out, _ = run(capsys, "check", "--in", str(EX51_CXT))
    assert code == 0
    assert "universe: a b c d (4 attributes)" in out
    assert "cdub: 5 implications" in out
    assert "dbasis: 4 implications (sigma0 1)" in out
    assert "dg: 4 implications" in out
    assert "equivalent cdub~dbasis: yes" in out
    assert "equivalent cdub~dg: yes" in out
    assert "equivalent dbasis~dg: yes" in out
    assert "direct cdub: yes" in out
    assert "ordered-direct dbasis: yes" in out
    assert "direct dg: no (witness:" in out


# -- bench and report ----------------------------------------------------------------


@pytest.fixture(scope="module")
def bench_dir(tmp_path_factory):
    root = tmp_path_factory.mktemp("bench")
    ctxdir = root / "ctx"
    ctxdir.mkdir()
    for seed in (1, 2):
        assert (
            main(
                [
                    "gen", "--objects", "14", "--attributes", "6", "--density", "0.5",
                    "--seed", str(seed), "-o", str(ctxdir / f"g{seed}.cxt"),
                ]
            )
            == 0
        )
    return ctxdir


def test_bench_writes_csv(capsys, bench_dir, tmp_path):
    target = tmp_path / "results.csv"
    code, out, _ = run(
        capsys,
        "bench", "--in", str(bench_dir), "--queries", "80", "--reps", "1",
        "--seed", "5", "-o", str(target),
    )
    assert code == 0
    lines = target.read_text().splitlines()
    assert (
        lines[0]
        == "dataset,universe,basis_kind,basis_size,algorithm,queries,reps,deps,attrib_ops,inner,outer,time_ms"
    )
    assert len(lines) == 1 + 2 * 9


def test_bench_to_stdout_and_reports(capsys, bench_dir, tmp_path):
    code, out, _ = run(
        capsys, "bench", "--in", str(bench_dir), "--queries", "40", "--reps", "1"
    )
    assert code == 0
    csv_path = tmp_path / "r.csv"
    csv_path.write_text(out)

    code, totals, _ = run(capsys, "report", "--in", str(csv_path))
    assert code == 0
    assert totals.splitlines()[0] == "dataset combo deps attrib_ops inner outer time_ms"
    assert "g1 cdub:classic-direct" in totals

    code, normalized, _ = run(capsys, "report", "--in", str(csv_path), "--normalize")
    assert code == 0
    assert "100.00" in normalized or "0.00" in normalized

    code, ranking_out, _ = run(
        capsys, "report", "--in", str(csv_path), "--kind", "ranking"
    )
    assert code == 0
    assert ranking_out.startswith("deps:")

    code, ratio_out, _ = run(capsys, "report", "--in", str(csv_path), "--kind", "ratio")
    assert code == 0
    assert ratio_out.splitlines()[0] == "bucket datasets dg:classic cdub:wild-direct"
    assert len(ratio_out.splitlines()) >= 2


def test_bench_requires_datasets(capsys, tmp_path):
    empty = tmp_path / "none"
    empty.mkdir()
    code, _, err = run(capsys, "bench", "--in", str(empty))
    assert code == 1
    assert err.startswith("error: IoError:")
