"""Sum matched-ingredient nutrition into recipe totals, normalize to a
basis, and iteratively drop kcal outliers beyond k standard deviations.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

from .amounts import MatchedIngredient
from .ingestion import FoodDatabase


@dataclass(frozen=True)
class NutritionFacts:
    kcal: Fraction
    fat_g: Fraction
    protein_g: Fraction
    carbs_g: Fraction

    def scaled(self, factor: Fraction) -> "NutritionFacts":
        return NutritionFacts(
            self.kcal * factor,
            self.fat_g * factor,
            self.protein_g * factor,
            self.carbs_g * factor,
        )


@dataclass(frozen=True)
class RecipeNutrition:
    recipe_id: str
    totals: NutritionFacts
    total_mass_g: Fraction
    portions: int | None


class Basis(enum.Enum):
    PER_RECIPE = "recipe"
    PER_PORTION = "portion"
    PER_100G = "100g"


class _NoPortionInfo:
    def __repr__(self):
        return "NoPortionInfo"


class _NoMass:
    def __repr__(self):
        return "NoMass"


NO_PORTION_INFO = _NoPortionInfo()
NO_MASS = _NoMass()


def recipe_totals(
    recipe_id: str,
    matched: list[MatchedIngredient],
    db: FoodDatabase,
    portions: int | None = None,
) -> RecipeNutrition:
    """Exact component-wise sum of grams/100 x per-100g values."""
    kcal = fat = protein = carbs = Fraction(0)
    mass = Fraction(0)
    for mi in matched:
        if mi.food_id not in db.items:
            raise KeyError(f"matched ingredient references unknown food id {mi.food_id}")
        if mi.by_taste:
            continue
        item = db.items[mi.food_id]
        portion = mi.grams / 100
        kcal += portion * Fraction(item.kcal_per_100g)
        fat += portion * Fraction(item.fat_per_100g)
        protein += portion * Fraction(item.protein_per_100g)
        carbs += portion * Fraction(item.carbs_per_100g)
        mass += mi.grams
    return RecipeNutrition(
        recipe_id=recipe_id,
        totals=NutritionFacts(kcal, fat, protein, carbs),
        total_mass_g=mass,
        portions=portions,
    )


def to_basis(rn: RecipeNutrition, basis: Basis):
    """Totals normalized to the basis, or NO_PORTION_INFO / NO_MASS."""
    if basis is Basis.PER_RECIPE:
        return rn.totals
    if basis is Basis.PER_PORTION:
        if rn.portions is None:
            return NO_PORTION_INFO
        return rn.totals.scaled(Fraction(1, rn.portions))
    if basis is Basis.PER_100G:
        if rn.total_mass_g == 0:
            return NO_MASS
        return rn.totals.scaled(Fraction(100) / rn.total_mass_g)
    raise ValueError(f"unknown basis {basis!r}")


class DegenerateDistributionError(ValueError):
    pass


def filter_outliers_trace(
    values: list[tuple[str, float]], k: float = 2.0
) -> tuple[set[str], int]:
    """Iterate {drop everything beyond k population-sigma from the mean}
    until nothing is dropped; returns (surviving id set, number of passes).

    A pass that drops nothing still counts: the minimum is one pass, which
    verifies the output is a fixed point.
    """
    if k <= 0:
        raise ValueError("k must be positive")
    if not values:
        raise ValueError("empty value list")
    kept = list(values)
    passes = 0
    while True:
        n = len(kept)
        if n == 0:
            raise DegenerateDistributionError("outlier filter removed every value")
        mean = math.fsum(v for _, v in kept) / n
        var = math.fsum((v - mean) ** 2 for _, v in kept) / n
        bound = k * math.sqrt(var)
        survivors = [(i, v) for i, v in kept if abs(v - mean) <= bound]
        passes += 1
        if len(survivors) == len(kept):
            return {i for i, _ in kept}, passes
        kept = survivors


def filter_outliers(values: list[tuple[str, float]], k: float = 2.0) -> set[str]:
    kept, _ = filter_outliers_trace(values, k)
    return kept


def atwater_warnings(
    nutritions: list[RecipeNutrition], tolerance: float = 0.25
) -> list[str]:
    """Soft consistency check: db kcal vs 4*protein + 4*carbs + 9*fat, only
    where all three macros are positive. Returns warning lines."""
    warnings = []
    for rn in nutritions:
        t = rn.totals
        if t.fat_g > 0 and t.protein_g > 0 and t.carbs_g > 0 and t.kcal > 0:
            derived = 4 * t.protein_g + 4 * t.carbs_g + 9 * t.fat_g
            rel = abs(derived - t.kcal) / t.kcal
            if rel > tolerance:
                warnings.append(
                    f"{rn.recipe_id}\tatwater mismatch: db kcal {float(t.kcal):.1f}, "
                    f"derived {float(derived):.1f} ({float(rel):.0%} off)"
                )
    return warnings
