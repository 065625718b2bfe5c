import io

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from railcause.corpus import (
    GENERAL_CLASSES,
    SPECIFIC_CLASSES,
    AccidentRecord,
    ColumnMap,
    general_label,
    load_records,
    load_saved_records,
    save_records,
    specific_label,
    stratified_split,
)
from railcause.errors import DataError, InvalidCauseCodeError, UnsplittableClassError

CMAP = ColumnMap(cause="CAUSE", narrative=["NARR1", "NARR2"], id="ID", year="YEAR")


def _csv(rows: list[str]) -> io.StringIO:
    return io.StringIO("ID,YEAR,CAUSE,NARR1,NARR2\n" + "\n".join(rows) + "\n")


class TestLoadRecords:
    def test_narrative_concatenation(self):
        recs, rep = load_records(
            _csv(['1,2004,H401,FAILURE TO STOP A TRAIN IN THE CLEAR,']), CMAP
        )
        assert len(recs) == 1
        assert recs[0].cause_code == "H401"
        assert recs[0].narrative == "FAILURE TO STOP A TRAIN IN THE CLEAR"
        assert rep.accepted == 1

    def test_continuation_columns_joined(self):
        recs, _ = load_records(_csv(["1,2004,T110,CAR DERAILED,ON THE MAIN"]), CMAP)
        assert recs[0].narrative == "CAR DERAILED ON THE MAIN"

    def test_missing_cause_skipped(self):
        recs, rep = load_records(_csv(["1,2004,,SOMETHING HAPPENED,"]), CMAP)
        assert recs == []
        assert rep.missing_cause == 1

    def test_malformed_cause_skipped(self):
        recs, rep = load_records(_csv(["1,2004,X999,SOMETHING HAPPENED,"]), CMAP)
        assert recs == []
        assert rep.malformed_cause == 1

    def test_empty_narrative_skipped(self):
        recs, rep = load_records(_csv(["1,2004,H401, ,"]), CMAP)
        assert recs == []
        assert rep.empty_narrative == 1

    def test_missing_mapped_column_is_fatal(self):
        stream = io.StringIO("ID,YEAR,NARR1,NARR2\n1,2004,TEXT,\n")
        with pytest.raises(DataError, match="CAUSE"):
            load_records(stream, CMAP)

    def test_no_header_is_fatal(self):
        with pytest.raises(DataError):
            load_records(io.StringIO(""), CMAP)

    def test_duplicate_ids_kept_and_counted(self):
        recs, rep = load_records(
            _csv(["1,2004,H401,FIRST,", "1,2005,T110,SECOND,"]), CMAP
        )
        assert len(recs) == 2
        assert rep.duplicate_ids == 1

    def test_whitespace_collapsed(self):
        recs, _ = load_records(_csv(['1,2004,H401,"A   B","  C  "']), CMAP)
        assert recs[0].narrative == "A B C"

    def test_lowercase_code_normalized(self):
        recs, _ = load_records(_csv(["1,2004,h401,TEXT,"]), CMAP)
        assert recs[0].cause_code == "H401"


class TestLabels:
    @pytest.mark.parametrize("code,expected", [("H401", "H"), ("T110", "T"), ("E99", "E"), ("M405", "M"), ("S001", "S")])
    def test_general(self, code, expected):
        assert general_label(code) == expected

    def test_general_invalid_prefix(self):
        with pytest.raises(InvalidCauseCodeError):
            general_label("X999")

    def test_general_empty(self):
        with pytest.raises(InvalidCauseCodeError):
            general_label("")

    @pytest.mark.parametrize(
        "code,expected",
        [
            ("H306", "H306-7"),
            ("H307", "H306-7"),
            ("T220", "T220-207"),
            ("T207", "T220-207"),
            ("T110", "T110"),
            ("H702", "H702"),
            ("T314", "T314"),
            ("M405", "M405"),
            ("H704", "H704"),
            ("H503", "H503"),
        ],
    )
    def test_specific_mapping(self, code, expected):
        assert specific_label(code) == expected

    def test_specific_absent_for_uncommon_code(self):
        assert specific_label("H401") is None

    def test_specific_consistent_with_general(self):
        # every merged category's source codes share the category's letter
        for code in ("H306", "H307", "T110", "H702", "T220", "T207", "T314", "M405", "H704", "H503"):
            category = specific_label(code)
            assert category is not None
            assert general_label(code) == category[0]

    def test_exactly_five_general_and_eight_specific(self):
        assert len(GENERAL_CLASSES) == 5
        assert len(SPECIFIC_CLASSES) == 8


def _items(class_sizes: dict[str, int]) -> list[tuple[str, str]]:
    out = []
    for label, n in class_sizes.items():
        out.extend((f"{label}{i}", label) for i in range(n))
    return out


class TestStratifiedSplit:
    def test_balanced_exact_divisibility(self):
        items = _items({c: 20 for c in "ABCDE"})
        split = stratified_split(items, 0.2, seed=7)
        assert len(split.train) == 80
        assert len(split.test) == 20
        from collections import Counter

        per_class = Counter(label for _, label in split.test)
        assert all(per_class[c] == 4 for c in "ABCDE")

    def test_deterministic(self):
        items = _items({"A": 11, "B": 7})
        s1 = stratified_split(items, 0.3, seed=42)
        s2 = stratified_split(items, 0.3, seed=42)
        assert s1.train == s2.train
        assert s1.test == s2.test

    def test_paper_scale_class_counts(self):
        # class sizes from the specific-cause task distribution
        sizes = (2613, 2448, 2171, 1716, 1053, 753, 652, 576)
        items = _items({f"c{i}": n for i, n in enumerate(sizes)})
        split = stratified_split(items, 0.2, seed=0)
        from collections import Counter

        per_class = Counter(label for _, label in split.test)
        for i, n in enumerate(sizes):
            expected = int(np.floor(0.2 * n + 0.5))
            assert abs(per_class[f"c{i}"] - expected) <= 1

    def test_class_too_small(self):
        with pytest.raises(UnsplittableClassError):
            stratified_split([("x", "A"), ("y", "B"), ("z", "B")], 0.2, seed=0)

    def test_fraction_validation(self):
        items = _items({"A": 4})
        for bad in (0.0, 1.0, -0.5, 1.5):
            with pytest.raises(ValueError):
                stratified_split(items, bad, seed=0)

    @settings(max_examples=40, deadline=None)
    @given(
        sizes=st.lists(st.integers(min_value=2, max_value=25), min_size=1, max_size=5),
        frac=st.floats(min_value=0.05, max_value=0.9),
        seed=st.integers(min_value=0, max_value=2**31),
    )
    def test_split_invariants(self, sizes, frac, seed):
        items = _items({f"c{i}": n for i, n in enumerate(sizes)})
        split = stratified_split(items, frac, seed)
        train_set = {x for x, _ in split.train}
        test_set = {x for x, _ in split.test}
        assert train_set.isdisjoint(test_set)
        assert train_set | test_set == {x for x, _ in items}
        from collections import Counter

        per_class = Counter(label for _, label in split.test)
        for i, n in enumerate(sizes):
            assert abs(per_class[f"c{i}"] - frac * n) <= 1.0


class TestRecordRoundtrip:
    def test_jsonl_roundtrip(self):
        records = [
            AccidentRecord(id="a1", year=2004, narrative="CAR DERAILED", cause_code="T110"),
            AccidentRecord(id="a2", year=2011, narrative="CREW ERROR AT SWITCH", cause_code="H307"),
        ]
        buf = io.StringIO()
        save_records(records, buf)
        assert load_saved_records(io.StringIO(buf.getvalue())) == records

    def test_bad_line_raises(self):
        with pytest.raises(DataError):
            load_saved_records(io.StringIO('{"id": "x"}\n'))
