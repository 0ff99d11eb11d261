"""End-to-end orchestration: ingest, parse, match, resolve, aggregate,
filter, split, and emit dataset artifacts for one basis.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path

from . import aggregate, amounts, dataset, ingestion, matcher, parsing
from .aggregate import Basis

logger = logging.getLogger(__name__)


@dataclass
class PipelineConfig:
    recipes_path: str
    fooddb_path: str
    out_dir: str
    provider: str = "edit"  # edit | wordvec | precomputed
    embeddings_path: str | None = None
    synonyms_path: str | None = None
    by_taste_lexicon_path: str | None = None
    threshold: float = 0.84
    outlier_k: float = 2.0
    basis: Basis = Basis.PER_100G
    split_ratios: tuple[float, float, float] = (0.70, 0.15, 0.15)
    seed: int = 0
    vocab_n: int = 100
    gamma_override: float | None = None
    max_food_items: int | None = None

    def __post_init__(self):
        if not 0.0 <= self.threshold <= 1.0:
            raise ValueError("threshold must be in [0, 1]")
        if abs(sum(self.split_ratios) - 1.0) > 1e-9:
            raise ValueError("split ratios must sum to 1")
        if self.vocab_n < 1:
            raise ValueError("vocab_n must be >= 1")


@dataclass
class MatchDecision:
    recipe_id: str
    line_index: int
    name: str
    outcome: str  # matched | by_taste | excluded | unmatched
    food_id: str | None = None
    score: float | None = None
    grams: float | None = None


@dataclass
class PipelineRun:
    config: PipelineConfig
    recipes: list[ingestion.RecipeRaw] = field(default_factory=list)
    recipe_rejects: list[ingestion.Reject] = field(default_factory=list)
    db: ingestion.FoodDatabase | None = None
    decisions: list[MatchDecision] = field(default_factory=list)
    matched: dict[str, list[amounts.MatchedIngredient]] = field(default_factory=dict)
    incomplete: set[str] = field(default_factory=set)
    nutrition: dict[str, aggregate.RecipeNutrition] = field(default_factory=dict)
    targets: dict[str, aggregate.NutritionFacts] = field(default_factory=dict)
    no_portion: set[str] = field(default_factory=set)
    no_mass: set[str] = field(default_factory=set)
    outliers: set[str] = field(default_factory=set)
    splits: dict[str, str] = field(default_factory=dict)
    vocab: list[tuple[str, int]] = field(default_factory=list)
    samples: list[dataset.DatasetSample] = field(default_factory=list)
    stats: dataset.StatsReport | None = None


def build_provider(config: PipelineConfig):
    if config.provider == "edit":
        return matcher.EditDistanceProvider()
    if config.provider in ("wordvec", "precomputed"):
        if not config.embeddings_path:
            raise ValueError(f"provider {config.provider!r} needs --embeddings")
        table = matcher.load_embedding_file(config.embeddings_path)
        if config.provider == "wordvec":
            return matcher.AveragedWordVectorProvider(table)
        return matcher.PrecomputedEmbeddingProvider(table)
    raise ValueError(f"unknown provider {config.provider!r}")


def run_matching(config: PipelineConfig) -> PipelineRun:
    """Everything up to per-recipe matched-ingredient lists."""
    run = PipelineRun(config=config)
    result = ingestion.load_recipes(config.recipes_path)
    run.recipes = result.records
    run.recipe_rejects = result.rejects
    db, db_rejects = ingestion.load_food_db(config.fooddb_path)
    run.recipe_rejects.extend(db_rejects)
    if config.max_food_items is not None:
        db = ingestion.filter_food_db(db, config.max_food_items)
    run.db = db

    markers = parsing.DEFAULT_BY_TASTE_MARKERS
    if config.by_taste_lexicon_path:
        markers = parsing.load_lexicon(config.by_taste_lexicon_path)
    synonyms = (
        amounts.UnitSynonyms.load(config.synonyms_path)
        if config.synonyms_path
        else amounts.UnitSynonyms.default()
    )
    provider = build_provider(config)
    index = matcher.build_index(db, provider)

    cand_cache: dict[str, list[matcher.Candidate]] = {}
    for recipe in run.recipes:
        matched: list[amounts.MatchedIngredient] = []
        complete = True
        for i, line in enumerate(recipe.ingredient_lines):
            try:
                parsed = parsing.parse_ingredient_line(line, markers)
            except parsing.EmptyNameError:
                complete = False
                run.decisions.append(
                    MatchDecision(recipe.id, i, line.name_text, "unmatched")
                )
                continue
            if parsed.name not in cand_cache:
                cand_cache[parsed.name] = matcher.candidates(
                    index, parsed.name, config.threshold
                )
            cands = cand_cache[parsed.name]
            outcome = amounts.match_ingredient(parsed, cands, db, synonyms)
            if outcome is amounts.UNMATCHED:
                complete = False
                run.decisions.append(
                    MatchDecision(recipe.id, i, parsed.name, "unmatched")
                )
            elif outcome is amounts.EXCLUDED:
                run.decisions.append(
                    MatchDecision(recipe.id, i, parsed.name, "excluded")
                )
            else:
                matched.append(outcome)
                run.decisions.append(
                    MatchDecision(
                        recipe.id,
                        i,
                        parsed.name,
                        "by_taste" if outcome.by_taste else "matched",
                        food_id=outcome.food_id,
                        score=outcome.similarity,
                        grams=float(outcome.grams),
                    )
                )
        if complete:
            run.matched[recipe.id] = matched
        else:
            run.incomplete.add(recipe.id)
    return run


def run_build(config: PipelineConfig) -> PipelineRun:
    """Full pipeline for one basis; fills targets, splits, vocab, samples,
    and the stats report."""
    run = run_matching(config)
    basis = config.basis
    by_id = {r.id: r for r in run.recipes}

    for rid, matched in run.matched.items():
        recipe = by_id[rid]
        rn = aggregate.recipe_totals(rid, matched, run.db, portions=recipe.portions)
        run.nutrition[rid] = rn
        facts = aggregate.to_basis(rn, basis)
        if facts is aggregate.NO_PORTION_INFO:
            run.no_portion.add(rid)
        elif facts is aggregate.NO_MASS:
            run.no_mass.add(rid)
        else:
            run.targets[rid] = facts

    if run.targets:
        kept = aggregate.filter_outliers(
            [(rid, float(f.kcal)) for rid, f in sorted(run.targets.items())],
            k=config.outlier_k,
        )
        run.outliers = set(run.targets) - kept
        run.targets = {rid: f for rid, f in run.targets.items() if rid in kept}

    run.splits = dataset.assign_splits(
        [r.id for r in run.recipes], config.split_ratios, config.seed
    )
    food_sets = {
        rid: {mi.food_id for mi in matched} for rid, matched in run.matched.items()
    }
    train_sets = [
        food_sets[rid] for rid in sorted(run.targets) if run.splits[rid] == "train"
    ]
    run.vocab = dataset.build_vocab(train_sets, config.vocab_n) if train_sets else []

    recipe_info = {
        rid: (list(by_id[rid].image_refs), food_sets[rid]) for rid in run.targets
    }
    run.samples = dataset.emit_samples(
        recipe_info, run.targets, run.splits, run.vocab, basis.value
    )

    kcals = [float(run.targets[rid].kcal) for rid in sorted(run.targets)]
    mean, std = dataset.compute_kcal_stats(kcals)
    names = {fid: run.db.items[fid].name for fid, _ in run.vocab}
    run.stats = dataset.StatsReport(
        basis=basis.value,
        original=len(run.recipes),
        removed_incomplete_match=len(run.incomplete),
        removed_no_portion=len(run.no_portion),
        removed_no_mass=len(run.no_mass),
        removed_kcal_outliers=len(run.outliers),
        final=len(run.targets),
        kcal_mean=mean,
        kcal_std=std,
        sample_count=len(run.samples),
        top_ingredients=[
            (fid, names[fid], count) for fid, count in run.vocab[:15]
        ],
        gamma=config.gamma_override,
    )
    assert run.stats.reconciles()
    return run


def write_artifacts(run: PipelineRun) -> dict[str, Path]:
    out = Path(run.config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    basis = run.config.basis.value
    paths = {
        "dataset": out / f"dataset_{basis}.jsonl",
        "vocab": out / f"vocab_{basis}.txt",
        "stats": out / f"stats_{basis}.json",
        "rejects": out / "rejects.txt",
    }
    dataset.write_dataset_file(run.samples, paths["dataset"])
    item_names = {fid: run.db.items[fid].name for fid, _ in run.vocab}
    dataset.write_vocab_file(run.vocab, item_names, paths["vocab"])
    dataset.write_stats_file(run.stats, paths["stats"])
    ingestion.write_rejects(run.recipe_rejects, paths["rejects"])
    return paths
