"""Parse raw ingredient lines into exact quantities, unit tokens, and names.

Quantities stay exact rationals until gram conversion so downstream totals
can be checked by exact equality. Vulgar-fraction codepoints are resolved
through their unicode numeric value, so "¼" can never turn into 14.
"""

from __future__ import annotations

import enum
import re
import unicodedata
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .ingestion import IngredientLine, normalize_text


class QuantityKind(enum.Enum):
    COUNT = "count"
    BY_TASTE = "by_taste"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class ParsedQuantity:
    kind: QuantityKind
    value: Fraction | None = None

    def __post_init__(self):
        if self.kind is QuantityKind.COUNT:
            assert self.value is not None and self.value > 0
        else:
            assert self.value is None


BY_TASTE = ParsedQuantity(QuantityKind.BY_TASTE)
UNKNOWN = ParsedQuantity(QuantityKind.UNKNOWN)

# German + English defaults; extendable via a lexicon file.
DEFAULT_BY_TASTE_MARKERS = frozenset(
    {
        "nach belieben",
        "n. b.",
        "n.b.",
        "nb",
        "etwas",
        "nach geschmack",
        "nach bedarf",
        "by taste",
        "to taste",
        "some",
        "a little",
        "evtl.",
    }
)


def load_lexicon(path: str | Path) -> frozenset[str]:
    """One marker per line; blank lines and '#' comments skipped."""
    markers = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            markers.add(normalize_text(line))
    return frozenset(markers)


def _vulgar_value(ch: str) -> Fraction | None:
    if unicodedata.category(ch) != "No":
        return None
    try:
        val = unicodedata.numeric(ch)
    except (TypeError, ValueError):
        return None
    frac = Fraction(val).limit_denominator(1000)
    return frac if 0 < frac < 1 else None


_NUMBER_RE = re.compile(r"^\d+(?:[.,]\d+)?$")
_ASCII_FRACTION_RE = re.compile(r"^(\d+)\s*/\s*(\d+)$")
_MIXED_RE = re.compile(r"^(\d+)\s+(\d+)\s*/\s*(\d+)$")
_RANGE_RE = re.compile(r"^(.+?)\s*(?:-|–|bis)\s*(.+)$")


def _parse_number(text: str) -> Fraction | None:
    """One plain number, fraction, mixed number, or vulgar-fraction form."""
    text = text.strip()
    if not text:
        return None
    if _NUMBER_RE.match(text):
        return Fraction(text.replace(",", "."))
    m = _ASCII_FRACTION_RE.match(text)
    if m:
        num, den = int(m.group(1)), int(m.group(2))
        return Fraction(num, den) if den and num else None
    m = _MIXED_RE.match(text)
    if m:
        whole, num, den = (int(g) for g in m.groups())
        return whole + Fraction(num, den) if den else None
    # trailing vulgar fraction: "¼", "1¼", "1 ¼"
    last = text[-1]
    frac = _vulgar_value(last)
    if frac is not None:
        rest = text[:-1].strip()
        if not rest:
            return frac
        if _NUMBER_RE.match(rest) and "," not in rest and "." not in rest:
            return int(rest) + frac
    return None


def parse_quantity(
    amount_text: str, by_taste_markers: frozenset[str] = DEFAULT_BY_TASTE_MARKERS
) -> ParsedQuantity:
    """Recognize counts (integers, decimals with dot or comma, fractions,
    mixed numbers, vulgar fractions, ranges) and by-taste markers."""
    text = normalize_text(amount_text)
    if not text:
        return UNKNOWN
    if text in by_taste_markers:
        return BY_TASTE
    value = _parse_number(text)
    if value is None:
        m = _RANGE_RE.match(text)
        if m:
            lo = _parse_number(m.group(1))
            hi = _parse_number(m.group(2))
            if lo is not None and hi is not None:
                value = (lo + hi) / 2
    if value is None or value <= 0:
        return UNKNOWN
    return ParsedQuantity(QuantityKind.COUNT, value)


@dataclass(frozen=True)
class ParsedIngredient:
    quantity: ParsedQuantity
    unit_token: str
    name: str


class EmptyNameError(ValueError):
    pass


_UNIT_WITH_AMOUNT_RE = re.compile(r"^([\d.,/\s]+?)\s*([^\d]+)$")


def parse_ingredient_line(
    line: IngredientLine,
    by_taste_markers: frozenset[str] = DEFAULT_BY_TASTE_MARKERS,
) -> ParsedIngredient:
    name = normalize_text(line.name_text)
    if not name:
        raise EmptyNameError("ingredient name empty after normalization")
    unit = normalize_text(line.unit_text)
    quantity = parse_quantity(line.amount_text, by_taste_markers)
    if unit in by_taste_markers and quantity.kind is not QuantityKind.COUNT:
        return ParsedIngredient(BY_TASTE, "", name)
    # amount slipped into the unit field, e.g. unit "500 g" with empty amount
    if quantity is UNKNOWN and not normalize_text(line.amount_text) and unit:
        m = _UNIT_WITH_AMOUNT_RE.match(unit)
        if m:
            embedded = _parse_number(m.group(1))
            if embedded is not None and embedded > 0:
                quantity = ParsedQuantity(QuantityKind.COUNT, embedded)
                unit = m.group(2).strip()
    if any(c.isdigit() for c in unit):
        unit = "".join(c for c in unit if not c.isdigit()).strip()
    return ParsedIngredient(quantity, unit, name)
