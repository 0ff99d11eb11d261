"""Convert parsed quantities plus unit tokens into grams for a matched food
item, walking match candidates in descending similarity until one resolves.

Gram results stay exact: quantities are rationals and conversion factors
are lifted into rationals, so recipe totals admit exact equality checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .ingestion import FoodDatabase, FoodItem, normalize_text
from .matcher import Candidate
from .parsing import ParsedIngredient, QuantityKind

# direct mass/volume units, factor to grams (ml at density 1 unless the item
# carries an explicit "ml" quantity entry)
_DIRECT_UNITS: dict[str, Fraction] = {
    "g": Fraction(1),
    "gramm": Fraction(1),
    "gram": Fraction(1),
    "grams": Fraction(1),
    "kg": Fraction(1000),
    "ml": Fraction(1),
    "l": Fraction(1000),
    "liter": Fraction(1000),
}

_PIECE_UNITS = ("stück", "piece", "stk.", "stk")


@dataclass(frozen=True)
class MatchedIngredient:
    food_id: str
    similarity: float
    grams: Fraction
    by_taste: bool = False

    def __post_init__(self):
        assert (self.grams == 0) == self.by_taste


class _NoConversion:
    def __repr__(self):
        return "NoConversion"


class _Unmatched:
    def __repr__(self):
        return "Unmatched"


class _Excluded:
    def __repr__(self):
        return "Excluded"


NO_CONVERSION = _NoConversion()
UNMATCHED = _Unmatched()
EXCLUDED = _Excluded()


@dataclass
class UnitSynonyms:
    """unit_token -> database unit names to try, in order."""

    table: dict[str, list[str]]

    @classmethod
    def default(cls) -> "UnitSynonyms":
        return cls(
            {
                "dose": ["dose (abtropfgewicht)"],
                "can": ["can (drained weight)"],
                "glas": ["glas (abtropfgewicht)"],
            }
        )

    @classmethod
    def load(cls, path: str | Path) -> "UnitSynonyms":
        """Plain text, one ``token = name1 | name2 | ...`` per line."""
        table: dict[str, list[str]] = {}
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            token, _, names = line.partition("=")
            targets = [normalize_text(n) for n in names.split("|") if n.strip()]
            if not targets:
                raise ValueError(f"synonym line without targets: {line!r}")
            table[normalize_text(token)] = targets
        return cls(table)


def _quantity_lookup(item: FoodItem, unit_name: str) -> Fraction | None:
    for name, grams in item.quantities:
        if normalize_text(name) == unit_name:
            return Fraction(grams)
    return None


def resolve_amount(
    parsed: ParsedIngredient, item: FoodItem, synonyms: UnitSynonyms
):
    """Grams for a Count quantity against one food item, or NO_CONVERSION."""
    if parsed.quantity.kind is not QuantityKind.COUNT:
        raise ValueError("resolve_amount requires a Count quantity")
    value = parsed.quantity.value
    unit = parsed.unit_token

    if unit in _DIRECT_UNITS:
        # an explicit per-ml entry overrides the density-1 default
        if unit == "ml":
            per_ml = _quantity_lookup(item, "ml")
            if per_ml is not None:
                return value * per_ml
        if unit == "l":
            per_ml = _quantity_lookup(item, "ml")
            if per_ml is not None:
                return value * per_ml * 1000
        return value * _DIRECT_UNITS[unit]

    if not unit:
        for piece in _PIECE_UNITS:
            grams = _quantity_lookup(item, piece)
            if grams is not None:
                return value * grams
        if len(item.quantities) == 1:
            return value * Fraction(item.quantities[0][1])
        return NO_CONVERSION

    grams = _quantity_lookup(item, unit)
    if grams is not None:
        return value * grams
    for target in synonyms.table.get(unit, []):
        grams = _quantity_lookup(item, target)
        if grams is not None:
            return value * grams
    return NO_CONVERSION


def match_ingredient(
    parsed: ParsedIngredient,
    cands: list[Candidate],
    db: FoodDatabase,
    synonyms: UnitSynonyms,
):
    """First candidate (descending similarity) whose amount resolves wins.

    By-taste lines attach to the top candidate with zero grams, or are
    EXCLUDED outright when nothing matches; Count lines with no resolvable
    candidate are UNMATCHED (which discards the whole recipe downstream).
    """
    if parsed.quantity.kind is QuantityKind.BY_TASTE:
        if cands:
            top = cands[0]
            return MatchedIngredient(top.food_id, top.score, Fraction(0), by_taste=True)
        return EXCLUDED
    if parsed.quantity.kind is QuantityKind.UNKNOWN:
        return UNMATCHED
    for cand in cands:
        grams = resolve_amount(parsed, db.items[cand.food_id], synonyms)
        if grams is not NO_CONVERSION:
            return MatchedIngredient(cand.food_id, cand.score, grams)
    return UNMATCHED
