"""Rational CSV round-trips, the handcrafted battery, and random generators."""

import dataclasses
import gzip

import pytest

from ccdkit import QueryKind, gen_random
from ccdkit.dataset import (
    DatasetError,
    Profile,
    Provenance,
    gen_handcrafted,
    parse_queries,
    write_queries,
)
from ccdkit.oracle import rational_eval_F

VALID_ROW = "0,1,0,1,0,1,0\n"


class TestHandcrafted:
    def test_battery_shape(self, handcrafted):
        assert len(handcrafted) >= 20
        kinds = {lq.kind for lq in handcrafted}
        assert kinds == {QueryKind.VERTEX_FACE, QueryKind.EDGE_EDGE}

    def test_labels_carry_their_evidence(self, handcrafted):
        for lq in handcrafted:
            if lq.truth:
                assert lq.witness is not None, lq.tag
            elif lq.provenance is Provenance.ORACLE_CERTIFIED:
                assert lq.margin is not None and lq.margin > 0, lq.tag

    def test_constructed_roots_are_exact_zeros(self, handcrafted):
        checked = 0
        for lq in handcrafted:
            if lq.provenance is Provenance.CONSTRUCTED and lq.truth:
                assert rational_eval_F(lq.query, *lq.witness) == (0, 0, 0), lq.tag
                checked += 1
        assert checked >= 5


class TestRoundTrip:
    def test_write_parse_write_is_byte_identical(self, handcrafted, tmp_path):
        subset = [lq for lq in handcrafted if lq.kind is QueryKind.VERTEX_FACE]
        path = tmp_path / "vf.csv"
        write_queries(subset, path)
        first = path.read_bytes()
        back = parse_queries(path, QueryKind.VERTEX_FACE)
        assert len(back) == len(subset)
        assert all(lq.provenance is Provenance.FILE for lq in back)
        assert [lq.rationals for lq in back] == [lq.rationals for lq in subset]
        assert [lq.truth for lq in back] == [lq.truth for lq in subset]
        again = tmp_path / "vf2.csv"
        write_queries(back, again)
        assert again.read_bytes() == first

    def test_gzip_paths_are_transparent(self, handcrafted, tmp_path):
        subset = [lq for lq in handcrafted if lq.kind is QueryKind.EDGE_EDGE]
        path = tmp_path / "ee.csv.gz"
        write_queries(subset, path)
        with gzip.open(path, "rt") as fh:
            assert fh.read(1)  # really gzip-compressed
        back = parse_queries(path, QueryKind.EDGE_EDGE)
        assert [lq.rationals for lq in back] == [lq.rationals for lq in subset]


class TestParseErrors:
    def _parse(self, tmp_path, text):
        path = tmp_path / "bad.csv"
        path.write_text(text)
        return parse_queries(path, QueryKind.VERTEX_FACE)

    def test_wrong_field_count(self, tmp_path):
        with pytest.raises(DatasetError, match="expected 7 fields"):
            self._parse(tmp_path, "1,2,3\n")

    def test_bad_truth_token(self, tmp_path):
        with pytest.raises(DatasetError, match="bad truth value"):
            self._parse(tmp_path, VALID_ROW * 7 + "0,1,0,1,0,1,2\n")

    def test_zero_denominator(self, tmp_path):
        with pytest.raises(DatasetError, match="zero denominator"):
            self._parse(tmp_path, VALID_ROW * 7 + "1,0,1,1,1,1,0\n")

    def test_malformed_integer(self, tmp_path):
        with pytest.raises(DatasetError, match="malformed integer"):
            self._parse(tmp_path, VALID_ROW * 7 + "x,1,1,1,1,1,0\n")

    def test_row_count_not_multiple_of_eight(self, tmp_path):
        with pytest.raises(DatasetError, match="not a multiple of 8"):
            self._parse(tmp_path, VALID_ROW * 7)

    def test_truth_inconsistent_within_record(self, tmp_path):
        with pytest.raises(DatasetError, match="truth differs"):
            self._parse(tmp_path, VALID_ROW * 7 + "0,1,0,1,0,1,1\n")


class TestLabeledQueryValidation:
    def test_constructed_positive_requires_witness(self, handcrafted):
        lq = next(
            q for q in handcrafted if q.provenance is Provenance.CONSTRUCTED and q.truth
        )
        with pytest.raises(ValueError):
            dataclasses.replace(lq, witness=None)

    def test_certified_negative_requires_margin(self):
        negs, _ = gen_random(
            3, seed=5, profile=Profile.SIMULATION_LIKE, positive_fraction=0.0
        )
        lq = negs[0]
        assert lq.provenance is Provenance.ORACLE_CERTIFIED and not lq.truth
        with pytest.raises(ValueError):
            dataclasses.replace(lq, margin=None)


class TestGenRandom:
    def test_deterministic_for_a_seed(self):
        a, _ = gen_random(30, seed=7, profile=Profile.SIMULATION_LIKE)
        b, _ = gen_random(30, seed=7, profile=Profile.SIMULATION_LIKE)
        assert [lq.rationals for lq in a] == [lq.rationals for lq in b]
        assert [(lq.truth, lq.tag) for lq in a] == [(lq.truth, lq.tag) for lq in b]

    def test_planted_roots_are_exact(self):
        pos, dropped = gen_random(
            20, seed=3, profile=Profile.ADVERSARIAL, positive_fraction=1.0
        )
        assert not dropped and len(pos) == 20
        for lq in pos:
            assert lq.truth and lq.provenance is Provenance.CONSTRUCTED
            assert rational_eval_F(lq.query, *lq.witness) == (0, 0, 0)

    def test_kind_forcing(self):
        out, _ = gen_random(
            10,
            seed=2,
            profile=Profile.SIMULATION_LIKE,
            positive_fraction=1.0,
            kind=QueryKind.EDGE_EDGE,
        )
        assert all(lq.kind is QueryKind.EDGE_EDGE for lq in out)

    def test_mixed_sample_certifies_negatives(self):
        out, dropped = gen_random(
            12, seed=9, profile=Profile.SIMULATION_LIKE, positive_fraction=0.5
        )
        assert len(out) + dropped == 12
        for lq in out:
            if not lq.truth:
                assert lq.margin is not None and lq.margin > 0

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            gen_random(0, seed=1, profile=Profile.SIMULATION_LIKE)
        with pytest.raises(ValueError):
            gen_random(5, seed=1, profile=Profile.SIMULATION_LIKE, positive_fraction=1.5)
