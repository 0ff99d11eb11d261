"""Regenerate the test fixtures (recipes, food db, embeddings, queries).

Deterministic; run from the repo root:

    python3 tests/fixtures/gen_fixtures.py

The generated files are committed; tests never invoke this script. Keep the
seed fixed so frozen expected values in the tests stay valid.
"""

from __future__ import annotations

import json
import sys
import unicodedata
from pathlib import Path

import numpy as np

HERE = Path(__file__).parent
SEED = 20240817
DIM = 16
N_FOODS = 200
N_RECIPES = 50
N_QUERIES = 1000

ADJECTIVES = [
    "rote", "grüne", "frische", "feine", "süße", "junge", "milde", "herbe",
    "weiße", "dunkle", "helle", "zarte", "würzige", "saure", "kleine", "große",
]
BASES = [
    "zwiebel", "kartoffel", "karotte", "tomate", "paprika", "gurke", "apfel",
    "birne", "banane", "zitrone", "mehl", "zucker", "butter", "milch", "sahne",
    "quark", "käse", "ei", "hähnchen", "rindfleisch", "schwein", "lachs",
    "thunfisch", "reis", "nudel", "linse", "bohne", "erbse", "mais", "spinat",
    "brokkoli", "blumenkohl", "kürbis", "pilz", "knoblauch", "ingwer", "honig",
    "joghurt", "haferflocke", "walnuss",
]


def norm(s: str) -> str:
    import re

    return re.sub(r"\s+", " ", unicodedata.normalize("NFC", s).casefold()).strip()


def unit_vec(rng) -> np.ndarray:
    v = rng.normal(size=DIM)
    return v / np.linalg.norm(v)


def perturb(rng, v: np.ndarray, noise: float) -> np.ndarray:
    w = v + noise * rng.normal(size=DIM)
    return w / np.linalg.norm(w)


def fmt_vec(v: np.ndarray) -> str:
    return " ".join(repr(float(x)) for x in v)


def main() -> None:
    rng = np.random.default_rng(SEED)

    # --- food database -------------------------------------------------------
    names = []
    for i in range(N_FOODS):
        base = BASES[i % len(BASES)]
        adj = ADJECTIVES[(i // len(BASES)) % len(ADJECTIVES)]
        names.append(f"{adj} {base}" if i >= len(BASES) else base)
    foods = []
    for i, name in enumerate(names):
        fid = f"f{i:03d}"
        kcal = round(float(rng.uniform(15, 600)), 1)
        fat = round(float(rng.uniform(0, 40)), 1)
        protein = round(float(rng.uniform(0, 30)), 1)
        carbs = round(float(rng.uniform(0, 70)), 1)
        quantities = [{"unit": "Stück", "grams": round(float(rng.uniform(20, 300)), 1)}]
        if i % 7 == 0:
            quantities.append({"unit": "EL", "grams": round(float(rng.uniform(5, 25)), 1)})
        if i % 11 == 0:
            quantities.append(
                {"unit": "Dose (Abtropfgewicht)", "grams": round(float(rng.uniform(120, 400)), 1)}
            )
        foods.append(
            {
                "id": fid,
                "name": name,
                "per_100g": {"kcal": kcal, "fat": fat, "protein": protein, "carbs": carbs},
                "quantities": quantities,
                "popularity": int(rng.integers(0, 10000)),
            }
        )

    # anchors used by specific tests
    foods[1]["name"] = "kartoffel"
    foods[1]["quantities"] = [
        {"unit": "Stück", "grams": 90.0},
        {"unit": "cup", "grams": 225.14},
    ]
    foods[6]["name"] = "apfel"
    foods[6]["quantities"] = [{"unit": "medium-sized apple", "grams": 130.0}]
    # a salt-like item: by-taste in most recipes
    foods[0]["name"] = "salz"
    foods[0]["per_100g"] = {"kcal": 0.0, "fat": 0.0, "protein": 0.0, "carbs": 0.0}
    foods[0]["popularity"] = 9999

    with open(HERE / "fooddb.jsonl", "w", encoding="utf-8") as f:
        for item in foods:
            f.write(json.dumps(item, ensure_ascii=False) + "\n")

    food_vecs = {item["id"]: unit_vec(rng) for item in foods}

    # --- recipes -------------------------------------------------------------
    variants = {}  # normalized ingredient text -> vector

    def variant_for(item) -> str:
        text = item["name"]
        roll = rng.random()
        if roll < 0.3:
            text = f"{item['name']}, gewürfelt"
        elif roll < 0.5:
            text = f"frische {item['name']}"
        key = norm(text)
        if key not in variants:
            base = food_vecs[item["id"]]
            while True:
                vec = perturb(rng, base, 0.18)
                if float(vec @ base) > 0.9:
                    variants[key] = vec
                    break
        return text

    recipes = []
    usable = [it for it in foods if it["id"] not in ("f000",)]
    for i in range(N_RECIPES):
        rid = f"r{i:03d}"
        n_ing = int(rng.integers(2, 7))
        picks = rng.choice(len(usable), size=n_ing, replace=False)
        lines = []
        for p in picks:
            item = usable[int(p)]
            form = rng.random()
            if form < 0.45:
                lines.append(
                    {"amount": str(int(rng.integers(20, 900))), "unit": "g",
                     "name": variant_for(item)}
                )
            elif form < 0.6:
                lines.append(
                    {"amount": f"{rng.integers(1, 4)}", "unit": "",
                     "name": variant_for(item)}
                )
            elif form < 0.7:
                kg = f"0,{int(rng.integers(1, 10))}"
                lines.append({"amount": kg, "unit": "kg", "name": variant_for(item)})
            elif form < 0.8:
                lines.append(
                    {"amount": str(int(rng.integers(50, 600))), "unit": "ml",
                     "name": variant_for(item)}
                )
            elif form < 0.9 and any(q["unit"] == "EL" for q in item["quantities"]):
                lines.append(
                    {"amount": str(int(rng.integers(1, 5))), "unit": "EL",
                     "name": variant_for(item)}
                )
            elif any(q["unit"].startswith("Dose") for q in item["quantities"]):
                lines.append(
                    {"amount": str(int(rng.integers(1, 3))), "unit": "Dose",
                     "name": variant_for(item)}
                )
            else:
                lines.append(
                    {"amount": str(int(rng.integers(20, 900))), "unit": "g",
                     "name": variant_for(item)}
                )
        if rng.random() < 0.5:
            lines.append({"amount": "", "unit": "etwas", "name": "Salz"})
        portions = int(rng.integers(2, 7)) if i % 10 != 3 else None
        n_img = int(rng.integers(1, 5))
        recipes.append(
            {
                "id": rid,
                "title": f"Gericht {i}",
                "portions": portions,
                "ingredients": lines,
                "images": [f"img/{rid}_{k}.jpg" for k in range(n_img)],
                "kcal_user": round(float(rng.uniform(150, 900)), 0) if rng.random() < 0.1 else None,
                "meta": {"meal": "hauptspeise" if i % 2 else "dessert"},
            }
        )

    # anchors: hand-worked example lines, an unmatched recipe, an outlier recipe
    recipes[0]["ingredients"] = [
        {"amount": "1 3/4", "unit": "cup", "name": "diced kartoffel"},
        {"amount": "1", "unit": "", "name": "apfel"},
        {"amount": "n. B.", "unit": "", "name": "Salz"},
    ]
    recipes[0]["portions"] = 2
    recipes[4]["ingredients"].append(
        {"amount": "2", "unit": "g", "name": "geheime spezialzutat"}
    )
    recipes[7]["ingredients"] = [
        {"amount": "1000000", "unit": "g", "name": variant_for(foods[2])},
    ] + recipes[7]["ingredients"][:2]

    variants[norm("Salz")] = perturb(rng, food_vecs["f000"], 0.1)
    variants[norm("diced kartoffel")] = perturb(rng, food_vecs["f001"], 0.1)
    variants[norm("apfel")] = food_vecs["f006"]
    # deliberately unmatched: keep resampling until far from every food
    while True:
        vec = unit_vec(rng)
        if max(float(vec @ v) for v in food_vecs.values()) < 0.6:
            variants[norm("geheime spezialzutat")] = vec
            break

    with open(HERE / "recipes.jsonl", "w", encoding="utf-8") as f:
        for r in recipes:
            f.write(json.dumps(r, ensure_ascii=False) + "\n")

    # noisy copy for the ingestion reject test: 50 records, 2 malformed
    with open(HERE / "recipes_noisy.jsonl", "w", encoding="utf-8") as f:
        for k, r in enumerate(recipes):
            if k == 13:
                f.write("{this is not json\n")
            elif k == 29:
                bad = {key: v for key, v in r.items() if key != "ingredients"}
                f.write(json.dumps(bad, ensure_ascii=False) + "\n")
            else:
                f.write(json.dumps(r, ensure_ascii=False) + "\n")

    # --- embedding file (food names + ingredient variants + scan queries) ----
    entries: dict[str, np.ndarray] = {}
    for item in foods:
        entries[norm(item["name"])] = food_vecs[item["id"]]
    for key, vec in variants.items():
        if key not in entries:
            entries[key] = vec
    for q in range(N_QUERIES):
        base = food_vecs[foods[int(rng.integers(0, N_FOODS))]["id"]]
        noise = float(rng.uniform(0.05, 1.5))
        entries[f"query {q:04d}"] = perturb(rng, base, noise)

    with open(HERE / "embeddings.txt", "w", encoding="utf-8") as f:
        f.write(f"{len(entries)} {DIM}\n")
        for key in entries:
            f.write(f"{key}\t{fmt_vec(entries[key])}\n")

    # --- small word-vector file ----------------------------------------------
    words = ["rote", "zwiebel", "apfel", "frische", "kartoffel", "salz", "grüne"]
    with open(HERE / "wordvecs.txt", "w", encoding="utf-8") as f:
        f.write(f"{len(words)} {DIM}\n")
        for w in words:
            f.write(f"{w}\t{fmt_vec(unit_vec(rng))}\n")

    with open(HERE / "synonyms.txt", "w", encoding="utf-8") as f:
        f.write("dose = Dose (Abtropfgewicht)\n")
        f.write("can = can (drained weight)\n")

    with open(HERE / "bytaste.txt", "w", encoding="utf-8") as f:
        for marker in ["nach Belieben", "n. B.", "etwas", "by taste", "some",
                       "nach Geschmack", "to taste"]:
            f.write(marker + "\n")

    # sanity: every intended variant still matches its food above 0.84
    for key, vec in variants.items():
        if key == norm("geheime spezialzutat"):
            continue
        best = max(food_vecs.items(), key=lambda kv: float(vec @ kv[1]))
        assert float(vec @ best[1]) > 0.84, (key, float(vec @ best[1]))
    print("fixtures written:", sorted(p.name for p in HERE.glob("*") if p.is_file()))


if __name__ == "__main__":
    sys.exit(main())
