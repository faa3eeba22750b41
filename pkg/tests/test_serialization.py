import functools
import glob
import json
import os
import sys

import pytest
from hypothesis import given, settings, strategies as st

from loosebimod import doublecat as dc
from loosebimod import fincore as fc
from loosebimod import looseuniv as lu
from loosebimod import serialization as ser

ROOT = os.path.join(os.path.dirname(__file__), "..")
FIXTURES = os.path.join(ROOT, "fixtures")
sys.path.insert(0, os.path.join(ROOT, "demos"))
import make_fixtures  # noqa: E402

NAMES = sorted(os.path.basename(p) for p in glob.glob(os.path.join(FIXTURES, "*.json")))


@functools.lru_cache(maxsize=None)
def generated():
    return make_fixtures.fixtures()


def read(name):
    with open(os.path.join(FIXTURES, name), encoding="utf-8") as f:
        return f.read()


def test_every_fixture_is_generated():
    assert NAMES == sorted(generated())


@pytest.mark.parametrize("name", NAMES)
def test_fixture_round_trips_byte_exactly(name):
    text = read(name)
    again = ser.dumps(ser.loads(text)) + "\n"
    assert ser.first_mismatch(text, again) is None


@pytest.mark.parametrize("name", NAMES)
def test_fixture_matches_generator(name):
    assert ser.dumps(generated()[name]) + "\n" == read(name)


def test_saved_files_are_stable(tmp_path):
    make_fixtures.main(str(tmp_path))
    for name in NAMES:
        assert (tmp_path / name).read_text(encoding="utf-8") == read(name)


def test_unicode_names_survive():
    text = read("unicode_category.json")
    assert "日本" in text and "\\u" not in text
    C = ser.loads(text)
    assert set(C.objects) == {"α", "β", "日本"}
    assert "g∘f" in C.mor_labels
    assert fc.validate_category(C) == []


def test_structure_is_preserved():
    C = ser.load(os.path.join(FIXTURES, "walking_arrow.json"))
    assert C.same_as(fc.walking_arrow())
    D = ser.load(os.path.join(FIXTURES, "cocycle.json"))
    assert dc.validate_double_category(D) == []
    assert not D.is_strict()


def test_span_fragment_round_trips():
    F = lu.span_fragment_bounded(2, 1)
    text = ser.dumps(F)
    G = ser.loads(text)
    assert ser.dumps(G) == text
    assert G.tight.same_as(F.tight)
    for field in ("loose_labels", "lsrc", "ltgt", "sq_labels", "top", "bot", "left", "right", "vcomp", "vid",
                  "unit", "tight_sq", "hcomp", "hcomp_sq", "assoc", "lunit", "runit"):
        assert getattr(G, field) == getattr(F, field), field
    assert G.is_strict() == F.is_strict()


@settings(max_examples=100, deadline=None)
@given(st.recursive(st.none() | st.booleans() | st.integers(-5, 5) | st.text(max_size=4),
                    lambda inner: st.tuples(inner, inner) | st.lists(inner, max_size=3)
                    | st.frozensets(st.integers(0, 5) | st.text(max_size=2), max_size=3), max_leaves=8))
def test_labels_round_trip(x):
    assert ser.dec(json.loads(json.dumps(ser.enc(x)))) == x


def test_named_labels_round_trip():
    s = lu.Span(2, 1, (0, 1), (0, 0))
    assert ser.dec(ser.enc(s)) == s and type(ser.dec(ser.enc(s))) is lu.Span


def test_invalid_json_reports_line_and_column():
    with pytest.raises(ser.FormatError) as err:
        ser.loads('{"kind": "category",\n  "objects": [1,,2]}')
    assert err.value.path == "line 2 column 17"


def test_missing_field_reports_path():
    d = json.loads(read("walking_arrow.json"))
    del d["morphisms"][1]["src"]
    with pytest.raises(ser.FormatError) as err:
        ser.from_document(d)
    assert err.value.path == "category.morphisms[1]"


def test_unknown_kind_and_format():
    d = json.loads(read("walking_arrow.json"))
    with pytest.raises(ser.FormatError):
        ser.from_document(dict(d, kind="sheaf"))
    with pytest.raises(ser.FormatError):
        ser.from_document(dict(d, format=2))
    with pytest.raises(ser.FormatError):
        ser.dec({"nt": "Nope", "v": []})
    with pytest.raises(ser.FormatError):
        ser.dec({"a": 1, "b": 2})


def test_unserializable_things():
    with pytest.raises(TypeError):
        ser.enc(object())
    with pytest.raises(TypeError):
        ser.dumps(3)


def test_first_mismatch():
    assert ser.first_mismatch("abc", "abc") is None
    assert ser.first_mismatch("abc", "abd") == 2
    assert ser.first_mismatch("ab", "abc") == 2
    text = read("walking_arrow.json")
    k = len(text) // 2
    assert ser.first_mismatch(text, text[:k] + "#" + text[k + 1:]) == k
