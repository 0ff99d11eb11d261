"""Map free-text ingredient names to ranked food-database candidates.

Three interchangeable similarity providers: normalized character edit
distance, averaged word vectors, and precomputed sentence embeddings.
Embedding lookups are cosine similarity over unit-norm rows, which reduces
to a dot product.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .ingestion import FoodDatabase, normalize_text


def levenshtein(a: str, b: str) -> int:
    if a == b:
        return 0
    if not a:
        return len(b)
    if not b:
        return len(a)
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        cur = [i]
        for j, cb in enumerate(b, start=1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def edit_distance_score(a: str, b: str) -> float:
    """1 - levenshtein/max(len); 1.0 for two empty strings."""
    longest = max(len(a), len(b))
    if longest == 0:
        return 1.0
    return 1.0 - levenshtein(a, b) / longest


class EmbeddingTableError(ValueError):
    pass


def load_embedding_file(path: str | Path) -> dict[str, np.ndarray]:
    """Parse an embedding file: header ``<count> <dim>``, then one
    ``key<TAB>floats`` line per entry. Keys are normalized on load."""
    table: dict[str, np.ndarray] = {}
    with open(path, "r", encoding="utf-8") as f:
        header = f.readline().split()
        if len(header) != 2:
            raise EmbeddingTableError(f"bad header in {path}")
        count, dim = int(header[0]), int(header[1])
        for line in f:
            if not line.strip():
                continue
            key, _, rest = line.rstrip("\n").partition("\t")
            vec = np.array(rest.split(), dtype=np.float64)
            if vec.shape[0] != dim:
                raise EmbeddingTableError(
                    f"entry {key!r} has dim {vec.shape[0]}, expected {dim}"
                )
            table[normalize_text(key)] = vec
    if len(table) != count:
        raise EmbeddingTableError(
            f"header promised {count} entries, file has {len(table)}"
        )
    return table


def avg_word_embed(name: str, vectors: dict[str, np.ndarray]) -> np.ndarray | None:
    """Mean of in-vocabulary token vectors, renormalized; None when no token
    is embeddable (or the mean cancels to zero)."""
    if not vectors:
        raise EmbeddingTableError("empty word-vector table")
    dims = {v.shape[0] for v in vectors.values()}
    if len(dims) != 1:
        raise EmbeddingTableError(f"mixed dimensions in word-vector table: {dims}")
    hits = [vectors[tok] for tok in name.split() if tok in vectors]
    if not hits:
        return None
    mean = np.mean(hits, axis=0)
    norm = float(np.linalg.norm(mean))
    if norm < 1e-12:
        return None
    return mean / norm


@dataclass(frozen=True)
class Candidate:
    food_id: str
    score: float


class EditDistanceProvider:
    kind = "edit"

    def build(self, db: FoodDatabase) -> "MatchIndex":
        ids = sorted(db.items)
        names = [normalize_text(db.items[i].name) for i in ids]
        return MatchIndex(food_ids=ids, names=names, matrix=None, provider=self)

    def query_scores(self, index: "MatchIndex", name: str) -> np.ndarray | None:
        return np.array([edit_distance_score(name, n) for n in index.names])


class AveragedWordVectorProvider:
    kind = "wordvec"

    def __init__(self, vectors: dict[str, np.ndarray]):
        self.vectors = vectors

    def embed(self, name: str) -> np.ndarray | None:
        return avg_word_embed(name, self.vectors)

    def build(self, db: FoodDatabase) -> "MatchIndex":
        return _build_embedding_index(db, self)

    def query_scores(self, index: "MatchIndex", name: str) -> np.ndarray | None:
        vec = self.embed(name)
        if vec is None:
            return None
        return index.matrix @ vec


class PrecomputedEmbeddingProvider:
    kind = "precomputed"

    def __init__(self, table: dict[str, np.ndarray]):
        self.table = table

    def embed(self, name: str) -> np.ndarray | None:
        vec = self.table.get(name)
        if vec is None:
            return None
        norm = float(np.linalg.norm(vec))
        if norm < 1e-12:
            return None
        return vec / norm

    def build(self, db: FoodDatabase) -> "MatchIndex":
        return _build_embedding_index(db, self)

    def query_scores(self, index: "MatchIndex", name: str) -> np.ndarray | None:
        vec = self.embed(name)
        if vec is None:
            return None
        return index.matrix @ vec


@dataclass
class MatchIndex:
    food_ids: list[str]
    provider: object
    names: list[str] | None = None  # EditDistance only
    matrix: np.ndarray | None = None  # embedding providers, unit-norm rows


def _build_embedding_index(db: FoodDatabase, provider) -> MatchIndex:
    ids = sorted(db.items)
    rows = []
    missing = []
    for fid in ids:
        vec = provider.embed(normalize_text(db.items[fid].name))
        if vec is None:
            missing.append(fid)
        else:
            rows.append(vec)
    if missing:
        raise EmbeddingTableError(
            "no embedding for food items: " + ", ".join(missing)
        )
    matrix = np.vstack(rows) if rows else np.empty((0, 0))
    return MatchIndex(food_ids=ids, matrix=matrix, provider=provider)


def build_index(db: FoodDatabase, provider) -> MatchIndex:
    """Deterministic index over the database, rows in id-ascending order."""
    return provider.build(db)


def candidates(index: MatchIndex, name: str, threshold: float) -> list[Candidate]:
    """All items scoring strictly above ``threshold``, best first; ties broken
    by food id. Unembeddable queries yield an empty list."""
    if not 0.0 <= threshold <= 1.0:
        raise ValueError("threshold must be in [0, 1]")
    if not index.food_ids:
        return []
    scores = index.provider.query_scores(index, name)
    if scores is None:
        return []
    hits = [
        Candidate(index.food_ids[i], float(scores[i]))
        for i in np.flatnonzero(scores > threshold)
    ]
    hits.sort(key=lambda c: (-c.score, c.food_id))
    return hits
