import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import all_sequences, edit_distances_from
from pmc.evaluate import ScoringError, batch_score, levenshtein
from pmc.frameio import BatchManifest, TestItem


@pytest.mark.parametrize(
    "a, b, expected",
    [([1, 2, 3], [1, 2, 3], 0), ([1, 2], [1, 3, 2], 1), ([], [4, 4], 2), ([4, 4], [], 2), ([], [], 0)],
)
def test_levenshtein_examples(a, b, expected):
    assert levenshtein(a, b) == expected


def test_levenshtein_matches_bfs_on_short_sequences():
    alphabet = (0, 1, 2)
    for a in all_sequences(alphabet, 3):
        dist = edit_distances_from(a, alphabet, 4)
        for b in all_sequences(alphabet, 3):
            assert levenshtein(a, b) == dist[b]


seqs = st.lists(st.integers(0, 4), max_size=7)


@given(seqs, seqs, seqs)
def test_metric_axioms(a, b, c):
    ab = levenshtein(a, b)
    assert ab == levenshtein(b, a)
    assert (ab == 0) == (a == b)
    assert levenshtein(a, c) <= ab + levenshtein(b, c)
    assert ab <= max(len(a), len(b))


def manifest(truths):
    return BatchManifest(4, 4, (("g1", 1), ("g2", 2), ("g3", 3)),
                         tuple(TestItem(f"t{i}", tuple(t)) for i, t in enumerate(truths)))


def test_perfect_predictions_score_zero():
    m = manifest([[1, 2], [3]])
    assert batch_score(m, {"t0": [1, 2], "t1": [3]}).score == 0.0


def test_one_substitution_in_twenty_labels():
    truths = [[1, 2]] * 10
    preds = {f"t{i}": [1, 2] for i in range(10)}
    preds["t4"] = [1, 3]
    r = batch_score(manifest(truths), preds)
    assert (r.total_edits, r.total_truth_labels, r.score) == (1, 20, 0.05)


def test_all_wrong_single_label_predictions():
    rnd = random.Random(0)
    truths = [[rnd.randint(1, 3) for _ in range(rnd.randint(1, 5))] for _ in range(12)]
    preds = {f"t{i}": [9] for i in range(12)}
    r = batch_score(manifest(truths), preds)
    # DP oracle via BFS distances over the labels actually used
    expected = sum(edit_distances_from(tuple(t), (1, 2, 3, 9), 5)[(9,)] for t in truths)
    assert r.total_edits == expected
    assert r.score == expected / sum(len(t) for t in truths)


def test_missing_prediction_named():
    with pytest.raises(ScoringError, match="t1"):
        batch_score(manifest([[1], [2]]), {"t0": [1]})


def test_order_invariance():
    truths = [[1, 2], [3], [2, 2, 1]]
    preds = {"t0": [1], "t1": [3, 3], "t2": [2, 1]}
    m = manifest(truths)
    reversed_m = BatchManifest(4, 4, m.train, tuple(reversed(m.test)))
    assert batch_score(m, preds).score == batch_score(reversed_m, preds).score


def test_report_serialization():
    r = batch_score(manifest([[1, 2], [3]]), {"t0": [1], "t1": [3]})
    obj = r.to_json()
    assert obj["score"] == 1 / 3 and obj["per_video"][0]["normalized"] == 0.5
    assert r.tsv_line("b1").split("\t")[:3] == ["b1", "0.333333", "0.250000"]
