"""Command-line entry point: ingest / match / build / stats / baseline /
eval / losscheck subcommands over the pipeline stages.

Exit codes: 0 success, 1 validation failure, 2 fatal error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import dataset, evalkit, ingestion, pipeline
from .aggregate import Basis

_BASIS_FLAGS = {
    "recipe": Basis.PER_RECIPE,
    "portion": Basis.PER_PORTION,
    "100g": Basis.PER_100G,
    "per100g": Basis.PER_100G,
    "perportion": Basis.PER_PORTION,
}


def _add_pipeline_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--recipes", required=True)
    p.add_argument("--fooddb", required=True)
    p.add_argument("--embeddings")
    p.add_argument("--provider", choices=["edit", "wordvec", "precomputed"],
                   default="edit")
    p.add_argument("--threshold", type=float, default=0.84)
    p.add_argument("--synonyms")
    p.add_argument("--by-taste-lexicon")
    p.add_argument("--basis", choices=sorted(_BASIS_FLAGS), default="100g")
    p.add_argument("--outlier-k", type=float, default=2.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--vocab-n", type=int, default=100)
    p.add_argument("--gamma", type=float, default=None)
    p.add_argument("--max-food-items", type=int, default=None)
    p.add_argument("--out", required=True)


def _config_from_args(args) -> pipeline.PipelineConfig:
    return pipeline.PipelineConfig(
        recipes_path=args.recipes,
        fooddb_path=args.fooddb,
        out_dir=args.out,
        provider=args.provider,
        embeddings_path=args.embeddings,
        synonyms_path=args.synonyms,
        by_taste_lexicon_path=args.by_taste_lexicon,
        threshold=args.threshold,
        outlier_k=args.outlier_k,
        basis=_BASIS_FLAGS[args.basis],
        seed=args.seed,
        vocab_n=args.vocab_n,
        gamma_override=args.gamma,
        max_food_items=args.max_food_items,
    )


def cmd_ingest(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    result = ingestion.load_recipes(args.recipes)
    db, db_rejects = ingestion.load_food_db(args.fooddb)
    ingestion.write_rejects(result.rejects + db_rejects, out / "rejects.txt")
    print(f"recipes: {len(result.records)} loaded, {len(result.rejects)} rejected")
    print(f"food items: {len(db)} loaded, {len(db_rejects)} rejected")
    return 0


def cmd_match(args) -> int:
    config = _config_from_args(args)
    run = pipeline.run_matching(config)
    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "matches.jsonl", "w", encoding="utf-8") as f:
        for d in run.decisions:
            f.write(
                json.dumps(
                    {
                        "recipe_id": d.recipe_id,
                        "line": d.line_index,
                        "name": d.name,
                        "outcome": d.outcome,
                        "food_id": d.food_id,
                        "score": d.score,
                        "grams": d.grams,
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )
    print(
        f"{len(run.matched)} recipes fully matched, "
        f"{len(run.incomplete)} with unmatched ingredients"
    )
    return 0


def cmd_build(args) -> int:
    config = _config_from_args(args)
    run = pipeline.run_build(config)
    paths = pipeline.write_artifacts(run)
    s = run.stats
    print(f"basis={s.basis} original={s.original} final={s.final} "
          f"samples={s.sample_count}")
    for name, path in paths.items():
        print(f"  {name}: {path}")
    return 0


def cmd_stats(args) -> int:
    reports = [
        dataset.StatsReport.from_dict(json.loads(Path(p).read_text()))
        for p in args.stats_files
    ]
    rows = [
        ("Original recipe count", "original"),
        ("Removed (incomplete ingredients match)", "removed_incomplete_match"),
        ("Removed (no portion size information)", "removed_no_portion"),
        ("Removed (no resolvable mass)", "removed_no_mass"),
        ("Removed (kcal outliers)", "removed_kcal_outliers"),
        ("Final recipe count", "final"),
        ("Sample count", "sample_count"),
        ("Mean [kcal]", "kcal_mean"),
        ("Std. Dev. [kcal]", "kcal_std"),
    ]
    header = "Preprocessing".ljust(42) + "".join(
        f"Per {r.basis:>8}" for r in reports
    )
    print(header)
    print("-" * len(header))
    for label, attr in rows:
        cells = []
        for r in reports:
            v = getattr(r, attr)
            cells.append(f"{v:11.1f}" if isinstance(v, float) else f"{v:11d}")
        print(label.ljust(42) + "".join(cells))
    return 0


def _load_eval_pairs(dataset_path: str, split: str | None):
    records = dataset.read_dataset_file(dataset_path)
    if split:
        records = [r for r in records if r["split"] == split]
    return records


def _target_from_record(r: dict, n_labels: int) -> evalkit.MultiTaskTarget:
    label = np.zeros(n_labels)
    for i in r["label_indices"]:
        label[i] = 1.0
    return evalkit.MultiTaskTarget(
        r["kcal"], r["fat"], r["protein"], r["carbs"], label
    )


def cmd_baseline(args) -> int:
    records = dataset.read_dataset_file(args.dataset)
    n_labels = args.vocab_n
    train = [
        _target_from_record(r, n_labels)
        for r in records
        if r["split"] == "train"
    ]
    if not train:
        print("no training samples in dataset", file=sys.stderr)
        return 1
    eval_records = [r for r in records if r["split"] == args.split]
    if args.kind == "mean":
        predictor = evalkit.MeanBaseline(train)
    else:
        predictor = evalkit.RandomBaseline(train, seed=args.seed)
    preds = predictor.predict(len(eval_records))
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", encoding="utf-8") as f:
        for r, p in zip(eval_records, preds):
            probs = 1.0 / (1.0 + np.exp(-p.ingredient_logits))
            f.write(
                json.dumps(
                    {
                        "image": r["image"],
                        "kcal": float(p.kcal),
                        "fat": float(p.fat_g),
                        "protein": float(p.protein_g),
                        "carbs": float(p.carbs_g),
                        "ingredient_probs": [float(x) for x in probs],
                    }
                )
                + "\n"
            )
    print(f"wrote {len(eval_records)} predictions to {out}")
    return 0


def cmd_eval(args) -> int:
    records = _load_eval_pairs(args.dataset, args.split)
    by_image = {r["image"]: r for r in records}
    preds = []
    tgts = []
    n_labels = args.vocab_n
    with open(args.predictions, "r", encoding="utf-8") as f:
        for line in f:
            if not line.strip():
                continue
            p = json.loads(line)
            r = by_image.get(p["image"])
            if r is None:
                print(f"prediction for unknown image {p['image']!r}", file=sys.stderr)
                return 1
            probs = p.get("ingredient_probs")
            if probs is not None:
                probs = np.clip(np.asarray(probs, dtype=np.float64), 1e-12, 1 - 1e-12)
                logits = np.log(probs / (1 - probs))
            else:
                logits = np.zeros(n_labels)
            preds.append(
                evalkit.MultiTaskOutput(
                    p["kcal"], p["fat"], p["protein"], p["carbs"], logits
                )
            )
            tgts.append(_target_from_record(r, n_labels))
    if not preds:
        print("no predictions to score", file=sys.stderr)
        return 1
    m = evalkit.evaluate(preds, tgts)
    print(f"{'kcal (rel)':>12} {'kcal':>10} {'protein':>10} {'fat':>10} {'carbs':>10}")
    print(
        f"{m.kcal_rel:12.4f} {m.kcal_abs:10.2f} {m.protein_abs:10.2f} "
        f"{m.fat_abs:10.2f} {m.carbs_abs:10.2f}"
    )
    return 0


def _losscheck_batch(path: str) -> int:
    spec = json.loads(Path(path).read_text())
    gamma = float(spec.get("gamma", 1.0))
    beta = float(spec.get("beta", 1.0))
    totals = []
    breakdowns = []
    for s in spec["samples"]:
        p, t = s["pred"], s["target"]
        out = evalkit.MultiTaskOutput(
            p["kcal"], p["fat"], p["protein"], p["carbs"],
            np.asarray(p["logits"], dtype=np.float64),
        )
        tgt = evalkit.MultiTaskTarget(
            t["kcal"], t["fat"], t["protein"], t["carbs"],
            np.asarray(t["label"], dtype=np.float64),
        )
        lb = evalkit.multitask_loss(out, tgt, gamma, beta)
        totals.append(lb.total)
        breakdowns.append(lb)
    mean_total = float(np.mean(totals))
    print(
        json.dumps(
            {
                "mean_total": mean_total,
                "mean_bce": float(np.mean([b.bce for b in breakdowns])),
                "mean_l1": float(
                    np.mean(
                        [
                            b.l1_kcal + b.l1_fat + b.l1_prot + b.l1_carb
                            for b in breakdowns
                        ]
                    )
                ),
                "gamma": gamma,
                "beta": beta,
            }
        )
    )
    return 0


def cmd_losscheck(args) -> int:
    if args.batch:
        return _losscheck_batch(args.batch)
    rng = np.random.default_rng(args.seed)
    n_labels, features = 10, 16
    worst = 0.0
    for _ in range(args.rounds):
        model = evalkit.AffineModel(
            weights=rng.normal(size=(4 + n_labels, features)),
            bias=rng.normal(size=4 + n_labels),
        )
        batch = [
            (
                rng.normal(size=features),
                evalkit.MultiTaskTarget(
                    *rng.normal(size=4),
                    label=(rng.random(n_labels) > 0.5).astype(float),
                ),
            )
            for _ in range(4)
        ]
        err = evalkit.finite_difference_check(model, batch, gamma=0.7)
        worst = max(worst, err)
    print(f"max gradient relative error over {args.rounds} rounds: {worst:.3e}")
    if worst >= 1e-4:
        print("FAIL: gradient check exceeded 1e-4", file=sys.stderr)
        return 1
    print("PASS")
    return 0


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="caloriepipe",
        description="Recipe-to-nutrition dataset pipeline and evaluation kit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="validate inputs, write rejects report")
    p.add_argument("--recipes", required=True)
    p.add_argument("--fooddb", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("match", help="write per-line match decisions")
    _add_pipeline_flags(p)
    p.set_defaults(func=cmd_match)

    p = sub.add_parser("build", help="build dataset + vocab + stats for a basis")
    _add_pipeline_flags(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("stats", help="print the preprocessing report")
    p.add_argument("stats_files", nargs="+")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("baseline", help="write baseline predictions")
    p.add_argument("--dataset", required=True)
    p.add_argument("--kind", choices=["mean", "random"], default="mean")
    p.add_argument("--split", default="test")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--vocab-n", type=int, default=100)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_baseline)

    p = sub.add_parser("eval", help="score a predictions file")
    p.add_argument("--dataset", required=True)
    p.add_argument("--predictions", required=True)
    p.add_argument("--split", default=None)
    p.add_argument("--vocab-n", type=int, default=100)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("losscheck", help="gradient finite-difference suite")
    p.add_argument("--rounds", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--batch", help="compute the loss of a serialized batch file")
    p.set_defaults(func=cmd_losscheck)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 1 if e.code not in (0, None) else 0
    try:
        return args.func(args)
    except (FileNotFoundError, ValueError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
