import random

import numpy as np
import pytest

from caloriepipe import ingestion, matcher
from caloriepipe.matcher import (
    AveragedWordVectorProvider,
    EditDistanceProvider,
    PrecomputedEmbeddingProvider,
    avg_word_embed,
    build_index,
    candidates,
    edit_distance_score,
    levenshtein,
    load_embedding_file,
)


def test_levenshtein_classic():
    assert levenshtein("kitten", "sitting") == 3


def test_edit_score_identity_and_classic():
    assert edit_distance_score("zwiebel", "zwiebel") == 1.0
    assert edit_distance_score("kitten", "sitting") == pytest.approx(1 - 3 / 7)


def test_edit_score_empty_strings():
    assert edit_distance_score("", "") == 1.0
    assert edit_distance_score("", "abc") == 0.0


def test_edit_score_symmetry_random_pairs():
    rng = random.Random(7)
    alphabet = "abcdefgäöü "
    for _ in range(500):
        a = "".join(rng.choices(alphabet, k=rng.randrange(0, 12)))
        b = "".join(rng.choices(alphabet, k=rng.randrange(0, 12)))
        sa = edit_distance_score(a, b)
        assert sa == edit_distance_score(b, a)
        assert 0.0 <= sa <= 1.0


def _toy_wordvecs():
    rng = np.random.default_rng(3)
    table = {}
    for w in ["rote", "zwiebel", "apfel", "salz", "mehl"]:
        v = rng.normal(size=8)
        table[w] = v / np.linalg.norm(v)
    return table


def test_avg_word_embed_single_word():
    table = _toy_wordvecs()
    vec = avg_word_embed("zwiebel", table)
    assert np.allclose(vec, table["zwiebel"])


def test_avg_word_embed_oov_skipped():
    table = _toy_wordvecs()
    assert avg_word_embed("qqq www", table) is None
    vec = avg_word_embed("qqq zwiebel", table)
    assert np.allclose(vec, table["zwiebel"])


def test_avg_word_embed_antipodal_cancellation():
    v = np.zeros(4)
    v[0] = 1.0
    table = {"a": v, "b": -v}
    assert avg_word_embed("a b", table) is None


def test_avg_word_embed_hand_mean():
    table = _toy_wordvecs()
    vec = avg_word_embed("rote zwiebel apfel", table)
    mean = (table["rote"] + table["zwiebel"] + table["apfel"]) / 3
    assert np.allclose(vec, mean / np.linalg.norm(mean))


def test_avg_word_embed_dim_mismatch():
    with pytest.raises(matcher.EmbeddingTableError):
        avg_word_embed("a", {"a": np.ones(3), "b": np.ones(4)})


@pytest.fixture(scope="module")
def fixture_db(fixtures_dir):
    db, _ = ingestion.load_food_db(fixtures_dir / "fooddb.jsonl")
    return db


@pytest.fixture(scope="module")
def embed_index(fixture_db, fixture_embeddings):
    provider = PrecomputedEmbeddingProvider(fixture_embeddings)
    return build_index(fixture_db, provider)


def test_index_rows_unit_norm_and_ordered(embed_index, fixture_db):
    assert embed_index.food_ids == sorted(fixture_db.items)
    norms = np.linalg.norm(embed_index.matrix, axis=1)
    assert np.all(np.abs(norms - 1.0) < 1e-6)


def test_index_deterministic(fixture_db, fixture_embeddings):
    provider = PrecomputedEmbeddingProvider(fixture_embeddings)
    a = build_index(fixture_db, provider)
    b = build_index(fixture_db, provider)
    assert a.food_ids == b.food_ids
    assert np.array_equal(a.matrix, b.matrix)


def test_empty_db_builds_empty_index():
    idx = build_index(ingestion.FoodDatabase({}), EditDistanceProvider())
    assert candidates(idx, "anything", 0.5) == []


def test_missing_embedding_is_fatal(fixture_db):
    with pytest.raises(matcher.EmbeddingTableError) as e:
        build_index(fixture_db, PrecomputedEmbeddingProvider({}))
    assert "f000" in str(e.value)


def test_self_query_ranks_itself_first(embed_index, fixture_db):
    name = matcher.normalize_text(fixture_db.items["f006"].name)
    result = candidates(embed_index, name, 0.84)
    assert result[0].food_id == "f006"
    assert result[0].score >= 0.999


def test_threshold_is_strict():
    # query [1, 0]; item "a" at cosine exactly 0.84, item "b" well above
    table = {
        "a": np.array([0.84, np.sqrt(1 - 0.84**2)]),
        "b": np.array([0.999, np.sqrt(1 - 0.999**2)]),
        "q": np.array([1.0, 0.0]),
    }
    db = ingestion.FoodDatabase({
        "a": ingestion.FoodItem("a", "a", 1, 0, 0, 0, (), 0),
        "b": ingestion.FoodItem("b", "b", 1, 0, 0, 0, (), 0),
    })
    idx = build_index(db, PrecomputedEmbeddingProvider(table))
    result = candidates(idx, "q", 0.84)
    assert [c.food_id for c in result] == ["b"]


def test_unembeddable_query_gives_empty_list(embed_index):
    assert candidates(embed_index, "completely unknown text", 0.84) == []


def test_candidates_match_exhaustive_scan(embed_index, fixture_embeddings):
    queries = sorted(k for k in fixture_embeddings if k.startswith("query "))
    assert len(queries) == 1000
    ids = embed_index.food_ids
    mat = embed_index.matrix
    nonempty = 0
    for q in queries:
        qv = fixture_embeddings[q]
        qv = qv / np.linalg.norm(qv)
        # oracle: plain python dot products over every row
        scored = []
        for i, fid in enumerate(ids):
            s = float(sum(a * b for a, b in zip(mat[i], qv)))
            if s > 0.84:
                scored.append((fid, s))
        scored.sort(key=lambda t: (-t[1], t[0]))
        got = candidates(embed_index, q, 0.84)
        assert [c.food_id for c in got] == [fid for fid, _ in scored]
        assert np.allclose([c.score for c in got], [s for _, s in scored])
        scores = [c.score for c in got]
        assert scores == sorted(scores, reverse=True)
        nonempty += bool(got)
    assert nonempty > 100  # the fixture queries are not trivially empty


def test_wordvec_provider_roundtrip(fixtures_dir, fixture_db):
    table = load_embedding_file(fixtures_dir / "wordvecs.txt")
    provider = AveragedWordVectorProvider(table)
    vec = provider.embed("rote zwiebel")
    assert vec is not None
    assert abs(np.linalg.norm(vec) - 1.0) < 1e-9


def test_embedding_file_roundtrip(fixtures_dir, fixture_embeddings, tmp_path):
    # rewrite and reload: same keys, same vectors
    out = tmp_path / "emb.txt"
    dim = len(next(iter(fixture_embeddings.values())))
    with open(out, "w", encoding="utf-8") as f:
        f.write(f"{len(fixture_embeddings)} {dim}\n")
        for k, v in fixture_embeddings.items():
            f.write(k + "\t" + " ".join(repr(float(x)) for x in v) + "\n")
    again = load_embedding_file(out)
    assert again.keys() == fixture_embeddings.keys()
    for k in again:
        assert np.array_equal(again[k], fixture_embeddings[k])
