import math

import pytest

import maxrep

COIN = {"kind": "iid", "alphabet_size": 2, "probabilities": [0.5, 0.5]}
CHAIN = {"kind": "markov", "alphabet_size": 2, "transition": [[0.7, 0.3], [0.3, 0.7]]}


def test_string_statistics():
    x = [0, 1, 0, 1, 1, 0, 1, 0]
    assert maxrep.maximal_repetition(x) == 3
    assert maxrep.subword_complexity(x, 2) == 3
    assert maxrep.longest_match([0, 1, 1], [1, 1, 0]) == 2
    assert maxrep.maximal_repetition_profile(x, [2, 4, 8]) == [(2, 0), (4, 2), (8, 3)]
    value, truncated = maxrep.waiting_time([0, 1, 0, 1], 2, [0, 1])
    assert (value, truncated) == (2, False)


def test_sampling_is_seeded():
    a = maxrep.sample(COIN, 200, 5)
    assert a == maxrep.sample(COIN, 200, 5)
    assert a != maxrep.sample(COIN, 200, 6)
    assert set(a) <= {0, 1}


def test_model_validation():
    with pytest.raises(maxrep.ConfigError):
        maxrep.sample({"kind": "iid", "alphabet_size": 2, "probabilities": [0.5, 0.6]}, 10, 1)
    assert maxrep.normalize_model(CHAIN)["kind"] == "markov"


def test_entropies():
    assert maxrep.renyi_block_entropy(COIN, 4, 2.0) == pytest.approx(4 * math.log(2))
    assert maxrep.block_log_prob(CHAIN, [0, 0, 1]) == pytest.approx(math.log(0.5 * 0.7 * 0.3))
    value, lower = maxrep.conditional_min_entropy(CHAIN, 3)
    assert value == pytest.approx(-3 * math.log(0.7)) and not lower
    assert maxrep.conditional_renyi_entropy(CHAIN, 2, 2.0) <= 2 * maxrep.renyi_block_entropy(CHAIN, 1, 1.0)
    with pytest.raises(maxrep.CapabilityError):
        hmm = {"kind": "hidden_markov", "alphabet_size": 2, "transition": [[0.9, 0.1], [0.2, 0.8]],
               "emission": [[0.8, 0.2], [0.3, 0.7]]}
        maxrep.conditional_renyi_entropy(hmm, 2, 2.0)


def test_check_bounds():
    reports, errors = maxrep.check_bounds(COIN, ["kac", "subword"], replicas=2000, seed=3)
    assert not errors
    assert reports and all(r["verdict"] != "violated" for r in reports)
    again, _ = maxrep.check_bounds(COIN, ["kac", "subword"], replicas=2000, seed=3, workers=2)
    assert again == reports


def test_corpus_fit():
    grid = maxrep.geometric_grid(16, 4096, 2.0)
    pts = [(n, 0.5 * math.log(n) ** 1.5) for n in grid]
    fit = maxrep.fit_power_law_log(pts)
    assert fit["A"] == pytest.approx(0.5) and fit["alpha"] == pytest.approx(1.5)
    x = maxrep.sample(COIN, 5000, 1)
    rows = maxrep.repetition_experiment(x, grid, 7, 2)
    assert len(rows) == 2 * len(grid)
    shuffled = maxrep.permutation_baseline(x, 9)
    assert sorted(shuffled) == sorted(x)
