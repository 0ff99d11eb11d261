"""Split assignment, ingredient vocabulary, sample emission, and the
preprocessing statistics report.

Split assignment hashes recipe ids so growing the corpus never moves
existing recipes between splits; all emitted files are byte-stable for a
fixed config.
"""

from __future__ import annotations

import hashlib
import json
import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from .aggregate import NutritionFacts

SPLITS = ("train", "val", "test")


def split_of(recipe_id: str, ratios: tuple[float, float, float], seed: int) -> str:
    """Stable hash bucket for one recipe id."""
    digest = hashlib.sha256(f"{seed}:{recipe_id}".encode("utf-8")).digest()
    u = int.from_bytes(digest[:8], "big") / 2**64
    if u < ratios[0]:
        return "train"
    if u < ratios[0] + ratios[1]:
        return "val"
    return "test"


def assign_splits(
    recipe_ids: list[str],
    ratios: tuple[float, float, float] = (0.70, 0.15, 0.15),
    seed: int = 0,
) -> dict[str, str]:
    if abs(sum(ratios) - 1.0) > 1e-9:
        raise ValueError("split ratios must sum to 1")
    return {rid: split_of(rid, ratios, seed) for rid in recipe_ids}


def build_vocab(
    recipe_food_ids: list[set[str]], n: int
) -> list[tuple[str, int]]:
    """Top-n food ids by number of recipes containing them (set semantics),
    ties broken by id ascending."""
    if n < 1:
        raise ValueError("n must be >= 1")
    counts = Counter()
    for ids in recipe_food_ids:
        counts.update(ids)
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return ranked[:n]


@dataclass(frozen=True)
class DatasetSample:
    image_ref: str
    recipe_id: str
    split: str
    basis: str
    targets: NutritionFacts
    label_indices: tuple[int, ...]


def emit_samples(
    recipes: dict[str, tuple[list[str], set[str]]],
    targets: dict[str, NutritionFacts],
    splits: dict[str, str],
    vocab: list[tuple[str, int]],
    basis: str,
) -> list[DatasetSample]:
    """One sample per image of every recipe present in ``targets``; output
    sorted by (recipe_id, image_ref).

    ``recipes`` maps recipe_id -> (image_refs, matched food_id set).
    """
    vocab_pos = {fid: i for i, (fid, _) in enumerate(vocab)}
    samples = []
    for rid in sorted(targets):
        image_refs, food_ids = recipes[rid]
        label = tuple(sorted(vocab_pos[f] for f in food_ids if f in vocab_pos))
        for image in sorted(image_refs):
            samples.append(
                DatasetSample(
                    image_ref=image,
                    recipe_id=rid,
                    split=splits[rid],
                    basis=basis,
                    targets=targets[rid],
                    label_indices=label,
                )
            )
    return samples


@dataclass
class StatsReport:
    basis: str
    original: int
    removed_incomplete_match: int
    removed_no_portion: int
    removed_no_mass: int
    removed_kcal_outliers: int
    final: int
    kcal_mean: float
    kcal_std: float
    sample_count: int
    top_ingredients: list[tuple[str, str, int]] = field(default_factory=list)
    gamma: float | None = None

    def reconciles(self) -> bool:
        removed = (
            self.removed_incomplete_match
            + self.removed_no_portion
            + self.removed_no_mass
            + self.removed_kcal_outliers
        )
        return self.original - removed == self.final

    def to_dict(self) -> dict:
        return {
            "basis": self.basis,
            "original": self.original,
            "removed_incomplete_match": self.removed_incomplete_match,
            "removed_no_portion": self.removed_no_portion,
            "removed_no_mass": self.removed_no_mass,
            "removed_kcal_outliers": self.removed_kcal_outliers,
            "final": self.final,
            "kcal_mean": self.kcal_mean,
            "kcal_std": self.kcal_std,
            "sample_count": self.sample_count,
            "top_ingredients": [list(t) for t in self.top_ingredients],
            "gamma": self.gamma,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "StatsReport":
        return cls(
            basis=d["basis"],
            original=d["original"],
            removed_incomplete_match=d["removed_incomplete_match"],
            removed_no_portion=d["removed_no_portion"],
            removed_no_mass=d["removed_no_mass"],
            removed_kcal_outliers=d["removed_kcal_outliers"],
            final=d["final"],
            kcal_mean=d["kcal_mean"],
            kcal_std=d["kcal_std"],
            sample_count=d["sample_count"],
            top_ingredients=[tuple(t) for t in d.get("top_ingredients", [])],
            gamma=d.get("gamma"),
        )


def compute_kcal_stats(kcals: list[float]) -> tuple[float, float]:
    if not kcals:
        return 0.0, 0.0
    mean = math.fsum(kcals) / len(kcals)
    var = math.fsum((v - mean) ** 2 for v in kcals) / len(kcals)
    return mean, math.sqrt(var)


def write_dataset_file(samples: list[DatasetSample], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for s in samples:
            record = {
                "image": s.image_ref,
                "recipe_id": s.recipe_id,
                "split": s.split,
                "basis": s.basis,
                "kcal": float(s.targets.kcal),
                "fat": float(s.targets.fat_g),
                "protein": float(s.targets.protein_g),
                "carbs": float(s.targets.carbs_g),
                "label_indices": list(s.label_indices),
            }
            f.write(json.dumps(record, ensure_ascii=False) + "\n")


def read_dataset_file(path: str | Path) -> list[dict]:
    records = []
    with open(path, "r", encoding="utf-8") as f:
        for line in f:
            if line.strip():
                records.append(json.loads(line))
    return records


def write_vocab_file(
    vocab: list[tuple[str, int]], names: dict[str, str], path: str | Path
) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for rank, (fid, count) in enumerate(vocab, start=1):
            f.write(f"{rank}\t{fid}\t{names.get(fid, '?')}\t{count}\n")


def read_vocab_file(path: str | Path) -> list[tuple[str, str, int]]:
    entries = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        _, fid, name, count = line.split("\t")
        entries.append((fid, name, int(count)))
    return entries


def write_stats_file(report: StatsReport, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(report.to_dict(), indent=2, ensure_ascii=False) + "\n",
        encoding="utf-8",
    )
