"""Load and normalize the recipe corpus and the food-composition database.

Both inputs are line-delimited JSON (one record per line). Malformed lines
are collected into a rejects report instead of aborting the load; real
scraped corpora are noisy.
"""

from __future__ import annotations

import json
import math
import re
import unicodedata
from dataclasses import dataclass, field
from pathlib import Path

_WS_RE = re.compile(r"\s+")


def normalize_text(s: str) -> str:
    """Canonical NFC form, case-folded, whitespace collapsed and stripped."""
    s = unicodedata.normalize("NFC", s)
    s = s.casefold()
    return _WS_RE.sub(" ", s).strip()


@dataclass(frozen=True)
class IngredientLine:
    amount_text: str
    unit_text: str
    name_text: str


@dataclass(frozen=True)
class RecipeRaw:
    id: str
    title: str
    portions: int | None
    ingredient_lines: tuple[IngredientLine, ...]
    image_refs: tuple[str, ...]
    user_kcal_per_portion: float | None
    metadata: dict[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class FoodItem:
    id: str
    name: str
    kcal_per_100g: float
    fat_per_100g: float
    protein_per_100g: float
    carbs_per_100g: float
    quantities: tuple[tuple[str, float], ...]  # (unit_name, grams), grams > 0
    popularity: int


@dataclass
class FoodDatabase:
    items: dict[str, FoodItem]

    def __len__(self) -> int:
        return len(self.items)


@dataclass(frozen=True)
class Reject:
    line_no: int
    reason: str


@dataclass
class LoadResult:
    records: list
    rejects: list[Reject]


def write_rejects(rejects: list[Reject], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for r in rejects:
            f.write(f"{r.line_no}\t{r.reason}\n")


def _require(record: dict, key: str):
    if key not in record:
        raise KeyError(key)
    return record[key]


def _parse_recipe(record: dict) -> RecipeRaw:
    rid = str(_require(record, "id"))
    title = str(_require(record, "title"))
    portions = record.get("portions")
    if portions is not None:
        portions = int(portions)
        if portions < 1:
            raise ValueError("portions must be >= 1")
    lines = []
    for ing in _require(record, "ingredients"):
        name = str(ing.get("name", ""))
        if not normalize_text(name):
            raise ValueError("ingredient with empty name")
        lines.append(
            IngredientLine(
                amount_text=str(ing.get("amount", "")),
                unit_text=str(ing.get("unit", "")),
                name_text=name,
            )
        )
    if not lines:
        raise ValueError("ingredient list empty")
    kcal_user = record.get("kcal_user")
    if kcal_user is not None:
        kcal_user = float(kcal_user)
        if kcal_user < 0:
            raise ValueError("negative kcal_user")
    return RecipeRaw(
        id=rid,
        title=title,
        portions=portions,
        ingredient_lines=tuple(lines),
        image_refs=tuple(str(p) for p in record.get("images", [])),
        user_kcal_per_portion=kcal_user,
        metadata={str(k): str(v) for k, v in record.get("meta", {}).items()},
    )


def _parse_food_item(record: dict) -> FoodItem:
    rid = str(_require(record, "id"))
    name = str(_require(record, "name"))
    per = _require(record, "per_100g")
    vals = {}
    for key in ("kcal", "fat", "protein", "carbs"):
        v = float(_require(per, key))
        if not math.isfinite(v) or v < 0:
            raise ValueError(f"per_100g {key} out of range")
        vals[key] = v
    quantities = []
    seen_units = set()
    for q in record.get("quantities", []):
        unit = str(_require(q, "unit"))
        grams = float(_require(q, "grams"))
        if grams <= 0 or not math.isfinite(grams):
            raise ValueError("quantity grams must be positive")
        if unit in seen_units:
            raise ValueError(f"duplicate quantity unit {unit!r}")
        seen_units.add(unit)
        quantities.append((unit, grams))
    popularity = int(record.get("popularity", 0))
    if popularity < 0:
        raise ValueError("negative popularity")
    return FoodItem(
        id=rid,
        name=name,
        kcal_per_100g=vals["kcal"],
        fat_per_100g=vals["fat"],
        protein_per_100g=vals["protein"],
        carbs_per_100g=vals["carbs"],
        quantities=tuple(quantities),
        popularity=popularity,
    )


def _load_jsonl(path: str | Path, parse_record) -> LoadResult:
    records = []
    rejects = []
    seen_ids = set()
    with open(path, "r", encoding="utf-8") as f:
        for line_no, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                raw = json.loads(line)
            except json.JSONDecodeError:
                rejects.append(Reject(line_no, "malformed json"))
                continue
            if not isinstance(raw, dict):
                rejects.append(Reject(line_no, "not an object"))
                continue
            try:
                rec = parse_record(raw)
            except KeyError as e:
                rejects.append(Reject(line_no, f"missing field {e.args[0]}"))
                continue
            except (ValueError, TypeError) as e:
                rejects.append(Reject(line_no, f"invariant violation: {e}"))
                continue
            if rec.id in seen_ids:
                rejects.append(Reject(line_no, f"duplicate id {rec.id}"))
                continue
            seen_ids.add(rec.id)
            records.append(rec)
    return LoadResult(records=records, rejects=rejects)


def load_recipes(path: str | Path) -> LoadResult:
    """Load a recipes file; well-formed records in file order, rest rejected."""
    return _load_jsonl(path, _parse_recipe)


def load_food_db(path: str | Path) -> tuple[FoodDatabase, list[Reject]]:
    result = _load_jsonl(path, _parse_food_item)
    return FoodDatabase({item.id: item for item in result.records}), result.rejects


def filter_food_db(db: FoodDatabase, max_items: int) -> FoodDatabase:
    """Collapse exact-normalized-name duplicates (keep highest popularity,
    ties by id ascending), then keep the ``max_items`` most popular items."""
    if max_items < 1:
        raise ValueError("max_items must be >= 1")
    by_name: dict[str, FoodItem] = {}
    for item in sorted(db.items.values(), key=lambda it: (-it.popularity, it.id)):
        key = normalize_text(item.name)
        if key not in by_name:
            by_name[key] = item
    kept = sorted(by_name.values(), key=lambda it: (-it.popularity, it.id))[:max_items]
    return FoodDatabase({item.id: item for item in kept})
