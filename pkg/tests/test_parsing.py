import sys
import unicodedata
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from caloriepipe.ingestion import IngredientLine
from caloriepipe.parsing import (
    BY_TASTE,
    UNKNOWN,
    EmptyNameError,
    QuantityKind,
    load_lexicon,
    parse_ingredient_line,
    parse_quantity,
)


@pytest.mark.parametrize(
    "text,expected",
    [
        ("1 3/4", Fraction(7, 4)),
        ("¼", Fraction(1, 4)),
        ("1,5", Fraction(3, 2)),
        ("2", Fraction(2)),
        ("0.25", Fraction(1, 4)),
        ("3/4", Fraction(3, 4)),
        ("1¼", Fraction(5, 4)),
        ("1 ½", Fraction(3, 2)),
        ("⅔", Fraction(2, 3)),
        ("⅛", Fraction(1, 8)),
    ],
)
def test_counts(text, expected):
    q = parse_quantity(text)
    assert q.kind is QuantityKind.COUNT
    assert q.value == expected


@pytest.mark.parametrize("text", ["n. B.", "nach Belieben", "etwas", "by taste", "some"])
def test_by_taste_markers(text):
    assert parse_quantity(text) is BY_TASTE


@pytest.mark.parametrize("text", ["", "viel spaß", "1/0", "0", "-3", "a/b"])
def test_unknown(text):
    assert parse_quantity(text) is UNKNOWN


def test_range_resolves_to_mean():
    q = parse_quantity("2-3")
    assert q.value == Fraction(5, 2)
    assert parse_quantity("2 - 4").value == Fraction(3)


def _vulgar_fraction_chars():
    chars = []
    for cp in range(sys.maxunicode + 1):
        ch = chr(cp)
        if unicodedata.category(ch) != "No":
            continue
        try:
            v = unicodedata.numeric(ch)
        except (TypeError, ValueError):
            continue
        if 0 < v < 1:
            chars.append(ch)
    return chars


def test_no_vulgar_fraction_parses_large():
    # a single fraction character must never become a big count ("14 cups" bug)
    chars = _vulgar_fraction_chars()
    assert chars
    for ch in chars:
        q = parse_quantity(ch)
        if q.kind is QuantityKind.COUNT:
            assert q.value < 100, (ch, q.value)
            assert q.value < 1


@given(
    st.integers(min_value=0, max_value=30),
    st.integers(min_value=1, max_value=30),
    st.integers(min_value=2, max_value=30),
)
def test_mixed_number_exact(a, b, c):
    q = parse_quantity(f"{a} {b}/{c}")
    if a == 0:
        # "0 b/c" is not a mixed number our grammar accepts
        assert q.kind in (QuantityKind.COUNT, QuantityKind.UNKNOWN)
        return
    assert q.kind is QuantityKind.COUNT
    assert q.value * c == a * c + b


@given(st.text(max_size=30))
def test_parse_quantity_total(s):
    parse_quantity(s)  # must never raise


def test_parse_line_worked_example():
    line = IngredientLine("1 3/4", "cups", "diced potatoes")
    p = parse_ingredient_line(line)
    assert p.quantity.value == Fraction(7, 4)
    assert p.unit_token == "cups"
    assert p.name == "diced potatoes"


def test_parse_line_by_taste_unit():
    p = parse_ingredient_line(IngredientLine("", "etwas", "Salz"))
    assert p.quantity is BY_TASTE
    assert p.unit_token == ""
    assert p.name == "salz"


def test_parse_line_bare_count():
    p = parse_ingredient_line(IngredientLine("3", "", "Zwiebeln, gewürfelt"))
    assert p.quantity.value == Fraction(3)
    assert p.unit_token == ""
    assert p.name == "zwiebeln, gewürfelt"


def test_parse_line_amount_embedded_in_unit():
    p = parse_ingredient_line(IngredientLine("", "500 g", "Mehl"))
    assert p.quantity.value == Fraction(500)
    assert p.unit_token == "g"


def test_parse_line_unit_never_contains_digits():
    p = parse_ingredient_line(IngredientLine("2", "500g", "Mehl"))
    assert not any(c.isdigit() for c in p.unit_token)


def test_parse_line_empty_name_rejected():
    with pytest.raises(EmptyNameError):
        parse_ingredient_line(IngredientLine("1", "g", "   "))


def test_lexicon_file(tmp_path, fixtures_dir):
    markers = load_lexicon(fixtures_dir / "bytaste.txt")
    assert "n. b." in markers
    assert parse_quantity("nach Geschmack", markers) is BY_TASTE
    custom = tmp_path / "lex.txt"
    custom.write_text("# comment\nprise\n")
    assert parse_quantity("Prise", load_lexicon(custom)) is BY_TASTE
