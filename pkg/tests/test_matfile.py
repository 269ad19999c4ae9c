import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pwcalc.errors import ParseError
from pwcalc.extended import PLUS_INF
from pwcalc.matfile import dumps, matrix_document, parse_matrix_document, read_matrix_file, write_matrix_file
from pwcalc.sampling import random_isometry, random_psd


class TestRoundTrip:
    def test_exact(self, tmp_path, rng):
        M = random_psd(rng, 4)
        M = (M + M.conj().T) / 2
        write_matrix_file(tmp_path / "m.json", M, "M", tol={"rank_tol": 1e-9})
        f = read_matrix_file(tmp_path / "m.json")
        np.testing.assert_array_equal(f.matrix, M)
        assert f.name == "M" and f.tol == {"rank_tol": 1e-9}

    def test_general(self, tmp_path, rng):
        V = random_isometry(rng, 3, 2)
        write_matrix_file(tmp_path / "v.json", V, "V", general=True)
        f = read_matrix_file(tmp_path / "v.json")
        assert f.kind == "general"
        np.testing.assert_array_equal(f.matrix, V)

    def test_byte_stable(self, rng):
        M = random_psd(rng, 3)
        assert dumps(matrix_document(M, "M")) == dumps(matrix_document(M.copy(), "M"))

    def test_entries_always_pairs(self):
        doc = matrix_document(np.eye(2), "I")
        assert doc["entries"] == [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [1.0, 0.0]]


class TestDumps:
    def test_inf_token(self):
        assert dumps({"v": PLUS_INF}) == '{\n  "v": "+inf"\n}'

    def test_float_format(self):
        assert dumps([0.1, 1.0, 2]) == "[0.10000000000000001, 1, 2]"

    def test_rejects_nan(self):
        with pytest.raises(ValueError):
            dumps([float("nan")])


def _doc(**over):
    doc = {"name": "A", "dim": 2, "entries": [[1, 0], [0, 0], [0, 0], [1, 0]]}
    doc.update(over)
    return {k: v for k, v in doc.items() if v is not None}


class TestParseErrors:
    @pytest.mark.parametrize(
        "doc",
        [
            [],
            _doc(name=3),
            _doc(dim=0),
            _doc(dim=True),
            _doc(dim=2.0),
            _doc(dim=None),
            _doc(entries=[[1, 0]]),
            _doc(entries="x"),
            _doc(entries=[[1, 0], [0, 0], [0, 0], [1]]),
            _doc(entries=[[1, 0], [0, 0], [0, 0], ["1", 0]]),
            _doc(entries=[[1, 0], [0, 0], [0, 0], [True, 0]]),
            _doc(entries=[[1, 0], [5, 0], [0, 0], [1, 0]]),
            _doc(entries=[[1, 0], [0, 0], [0, 0], [10**400, 0]]),
            _doc(entries=[[1, 0], [0, 0], [0, 0], [1e308, 0]]),
            _doc(extra=1),
            _doc(tol=[1]),
            _doc(tol={"foo": 1}),
            _doc(tol={"rank_tol": -1}),
            _doc(kind="weird"),
            {"name": "V", "kind": "general", "rows": 2, "entries": []},
        ],
    )
    def test_rejects(self, doc):
        with pytest.raises(ParseError):
            parse_matrix_document(doc)

    def test_herm_tol_override(self):
        doc = _doc(entries=[[1, 0], [1e-6, 0], [0, 0], [1, 0]])
        with pytest.raises(ParseError):
            parse_matrix_document(doc)
        parse_matrix_document({**doc, "tol": {"herm_tol": 1e-5}})
        with pytest.raises(ParseError):
            parse_matrix_document({**doc, "tol": {"herm_tol": 1e-5}}, 1e-8, force_herm_tol=True)

    def test_file_errors(self, tmp_path):
        with pytest.raises(ParseError):
            read_matrix_file(tmp_path / "missing.json")
        (tmp_path / "bad.json").write_bytes(b"\xff\xfe{")
        with pytest.raises(ParseError):
            read_matrix_file(tmp_path / "bad.json")
        (tmp_path / "deep.json").write_text("[" * 100000)
        with pytest.raises(ParseError):
            read_matrix_file(tmp_path / "deep.json")


json_values = st.recursive(
    st.none() | st.booleans() | st.integers() | st.floats(allow_nan=True) | st.text(max_size=5),
    lambda children: st.lists(children, max_size=5) | st.dictionaries(st.text(max_size=8), children, max_size=5),
    max_leaves=30,
)


@settings(max_examples=300, deadline=None)
@given(json_values)
def test_parse_never_crashes(value):
    try:
        parse_matrix_document(value)
    except ParseError:
        pass


@settings(max_examples=200, deadline=None)
@given(st.dictionaries(st.sampled_from(["name", "dim", "entries", "tol", "kind", "rows", "cols"]), json_values))
def test_parse_near_valid_never_crashes(doc):
    try:
        parse_matrix_document(doc)
    except ParseError:
        pass


def test_json_text_round_trip(rng):
    M = random_psd(rng, 3)
    text = dumps(matrix_document(M, "M"))
    assert parse_matrix_document(json.loads(text)).name == "M"
