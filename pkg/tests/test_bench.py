"""Benchmark harness bookkeeping and the command line entry point."""

import json

import pytest

from ccdkit import QueryKind, gen_random
from ccdkit.bench import (
    BenchReport,
    emit_report,
    format_report,
    load_report,
    run_benchmark,
)
from ccdkit.cli import main
from ccdkit.dataset import Profile, parse_queries


@pytest.fixture(scope="module")
def sample():
    out, dropped = gen_random(
        24, seed=21, profile=Profile.ADVERSARIAL, positive_fraction=0.5
    )
    assert not dropped
    return out


@pytest.fixture(scope="module")
def report(sample):
    return run_benchmark(sample, ("ours", "irf", "univariate"), seed=21)


class TestRunBenchmark:
    def test_counts_partition_the_dataset(self, report, sample):
        assert report.size == len(sample)
        for ms in report.methods:
            total = ms.fp_count + ms.fn_count + ms.correct_count + ms.undecided_count
            assert total == report.size
            assert sum(ms.histogram) == report.size
            assert len(ms.verdicts) == report.size
            assert ms.avg_time_us > 0.0

    def test_conservative_methods_never_miss(self, report):
        assert report.method("ours").fn_count == 0
        assert report.method("irf").fn_count == 0

    def test_method_lookup(self, report):
        assert report.method("univariate").name == "univariate"
        with pytest.raises(KeyError):
            report.method("nope")

    def test_unknown_method_rejected(self, sample):
        with pytest.raises(ValueError):
            run_benchmark(sample, ("ours", "nope"))

    def test_degenerate_mapping_trades_misses_for_alarms(self, handcrafted):
        vf = [lq for lq in handcrafted if lq.kind is QueryKind.VERTEX_FACE]
        as_miss = run_benchmark(vf, ("univariate",), degenerate_as="no_collision")
        as_hit = run_benchmark(vf, ("univariate",), degenerate_as="collision")
        miss, hit = as_miss.method("univariate"), as_hit.method("univariate")
        assert hit.fn_count <= miss.fn_count
        assert hit.fp_count >= miss.fp_count


class TestReportSerialization:
    def test_json_round_trip(self, report, tmp_path):
        path = tmp_path / "report.json"
        emit_report(report, "json", path)
        assert load_report(path) == report

    def test_dict_round_trip(self, report):
        assert BenchReport.from_dict(report.to_dict()) == report

    def test_json_text_is_valid(self, report):
        doc = json.loads(format_report(report, "json"))
        assert doc["size"] == report.size

    def test_csv_has_one_row_per_method(self, report):
        lines = format_report(report, "csv").strip().splitlines()
        assert len(lines) == 1 + len(report.methods)
        for ms in report.methods:
            assert any(line.startswith(ms.name + ",") for line in lines[1:])

    def test_unknown_format_rejected(self, report):
        with pytest.raises(ValueError):
            format_report(report, "yaml")


class TestCli:
    def test_gen_then_run(self, tmp_path):
        data = tmp_path / "queries.csv.gz"
        rc = main(
            [
                "gen",
                "--profile", "random",
                "--kind", "ee",
                "--n", "12",
                "--seed", "4",
                "--flavor", "adversarial",
                "--positive-fraction", "0.5",
                "--out", str(data),
            ]
        )
        assert rc == 0
        parsed = parse_queries(data, QueryKind.EDGE_EDGE)
        assert 10 <= len(parsed) <= 12

        out = tmp_path / "report.json"
        rc = main(
            [
                "run",
                "--dataset", str(data),
                "--kind", "ee",
                "--methods", "ours,univariate",
                "--seed", "1",
                "--out", str(out),
            ]
        )
        assert rc == 0
        rep = load_report(out)
        assert [ms.name for ms in rep.methods] == ["ours", "univariate"]
        assert rep.size == len(parsed)
        assert rep.method("ours").fn_count == 0

    def test_gen_handcrafted_battery(self, tmp_path, handcrafted):
        data = tmp_path / "hand.csv"
        rc = main(["gen", "--profile", "handcrafted", "--kind", "vf", "--out", str(data)])
        assert rc == 0
        expect = [lq for lq in handcrafted if lq.kind is QueryKind.VERTEX_FACE]
        assert len(parse_queries(data, QueryKind.VERTEX_FACE)) == len(expect)

    def test_run_csv_format_to_stdout(self, tmp_path, capsys):
        data = tmp_path / "queries.csv"
        main(
            [
                "gen",
                "--profile", "random",
                "--kind", "vf",
                "--n", "8",
                "--seed", "6",
                "--flavor", "adversarial",
                "--positive-fraction", "1.0",
                "--out", str(data),
            ]
        )
        capsys.readouterr()  # drop the gen status line
        rc = main(
            [
                "run",
                "--dataset", str(data),
                "--kind", "vf",
                "--methods", "univariate",
                "--format", "csv",
            ]
        )
        assert rc == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert len(lines) == 2
        assert lines[1].startswith("univariate,")
