import random
from fractions import Fraction

import pytest

from disclab import (
    CapExceededError,
    DimensionMismatchError,
    InputError,
    OracleConfig,
    RatMatrix,
    eval_asymmetric,
    eval_weighted,
    odisc_exact,
    oracle_solve,
    stack_horizontal,
    wdisc_exact,
    wdisc_heuristic,
)

from conftest import random_01_matrix, random_rational_matrix
from naive import naive_odisc, naive_wdisc


def test_eval_weighted_pinned(w2):
    assert eval_weighted(w2, Fraction(1, 2), (1, 0)) == Fraction(1, 2)
    assert eval_weighted(w2, Fraction(1, 3), (0, 1)) == Fraction(1, 3)
    assert eval_weighted(w2, Fraction(0), (0, 0)) == 0


def test_eval_weighted_validation(w2):
    with pytest.raises(DimensionMismatchError):
        eval_weighted(w2, Fraction(1, 2), (1, 0, 0))
    with pytest.raises(InputError):
        eval_weighted(w2, Fraction(3, 2), (1, 0))
    with pytest.raises(InputError):
        eval_weighted(w2, Fraction(1, 2), (2, 0))


def test_eval_asymmetric_pinned(w2):
    assert eval_asymmetric([w2, w2], (1, 2)) == Fraction(1, 2)
    assert eval_asymmetric([w2, w2], (1, 1)) == 1  # color 2 empty
    assert eval_asymmetric([w2], (1, 1)) == 0      # k = 1 forces the zero vector


def test_eval_asymmetric_validation(w2, w4):
    with pytest.raises(DimensionMismatchError):
        eval_asymmetric([w2, w4], (1, 2))
    with pytest.raises(InputError):
        eval_asymmetric([w2, w2], (1, 3))


def test_wdisc_exact_pinned(w2):
    assert wdisc_exact(w2, Fraction(1, 2)).value == Fraction(1, 2)
    result = wdisc_exact(w2, Fraction(1, 3))
    assert result.value == Fraction(1, 3)
    assert result.witness == (0, 1)
    stacked = stack_horizontal(w2, 2)
    result = wdisc_exact(stacked, Fraction(1, 5))
    assert result.value == Fraction(2, 5)
    assert result.witness == (0, 0, 0, 1)


def test_wdisc_exact_width_cap(w4):
    wide = stack_horizontal(w4, 7)  # 28 columns
    with pytest.raises(CapExceededError):
        wdisc_exact(wide, Fraction(1, 2))
    assert wdisc_exact(wide, Fraction(1, 2), OracleConfig(exact_width_cap=28)).exact


def test_wdisc_exact_matches_naive_enumeration():
    """Branch-and-bound equals full enumeration: value and tie-broken witness."""
    rng = random.Random(42)
    for trial in range(60):
        rows = rng.randint(1, 4)
        cols = rng.randint(1, 9)
        if trial % 2:
            matrix = random_01_matrix(rng, rows, cols)
        else:
            matrix = random_rational_matrix(rng, rows, cols)
        p = Fraction(rng.randint(0, 6), 6)
        value, witness = naive_wdisc(matrix, p)
        result = wdisc_exact(matrix, p)
        assert result.value == value
        assert result.witness == witness
        assert result.exact


def test_wdisc_witness_reevaluates_to_value():
    rng = random.Random(7)
    for _ in range(30):
        matrix = random_rational_matrix(rng, rng.randint(1, 4), rng.randint(1, 10))
        p = Fraction(rng.randint(1, 5), rng.randint(5, 9))
        result = wdisc_exact(matrix, p)
        assert eval_weighted(matrix, p, result.witness) == result.value


def test_wdisc_symmetry_under_p_flip():
    rng = random.Random(11)
    for _ in range(25):
        matrix = random_rational_matrix(rng, rng.randint(1, 3), rng.randint(1, 8))
        p = Fraction(rng.randint(0, 7), 7)
        assert wdisc_exact(matrix, p).value == wdisc_exact(matrix, 1 - p).value


def test_wdisc_heuristic_contract(w2):
    result = wdisc_heuristic(w2, Fraction(1, 2), OracleConfig(kind="local-search", budget=50, seed=3))
    assert not result.exact
    assert result.value <= 1  # trivial bound: m * max entry
    assert eval_weighted(w2, Fraction(1, 2), result.witness) == result.value

    # must find the global optimum on a 4-point space
    result = wdisc_heuristic(w2, Fraction(1, 3), OracleConfig(kind="local-search", budget=100, seed=7))
    assert result.value == Fraction(1, 3)


def test_wdisc_heuristic_never_below_exact(w4):
    rng = random.Random(23)
    for _ in range(20):
        matrix = random_rational_matrix(rng, rng.randint(1, 3), rng.randint(1, 8))
        p = Fraction(rng.randint(1, 4), rng.randint(4, 9))
        exact = wdisc_exact(matrix, p).value
        for kind in ("greedy", "local-search"):
            heur = wdisc_heuristic(matrix, p, OracleConfig(kind=kind, budget=200, seed=5))
            assert heur.value >= exact

    stacked = stack_horizontal(w4, 2)
    exact = wdisc_exact(stacked, Fraction(1, 4)).value
    heur = wdisc_heuristic(stacked, Fraction(1, 4), OracleConfig(kind="local-search", budget=500, seed=1))
    assert heur.value == exact  # finds the optimum here, and never goes below


def test_wdisc_heuristic_deterministic(w4):
    stacked = stack_horizontal(w4, 2)
    config = OracleConfig(kind="local-search", budget=300, seed=99)
    first = wdisc_heuristic(stacked, Fraction(1, 3), config)
    second = wdisc_heuristic(stacked, Fraction(1, 3), config)
    assert first == second


def test_oracle_dispatch(w2):
    exact = oracle_solve(w2, Fraction(1, 2), OracleConfig(kind="exact"))
    assert exact.exact and exact.value == Fraction(1, 2)
    wide = stack_horizontal(w2, 15)  # 30 columns
    with pytest.raises(CapExceededError):
        oracle_solve(wide, Fraction(1, 2), OracleConfig(kind="exact"))
    heur = oracle_solve(w2, Fraction(1, 2), OracleConfig(kind="greedy"))
    assert not heur.exact


def test_odisc_exact_pinned(w2):
    result = odisc_exact([w2, w2])
    assert result.value == Fraction(1, 2)
    assert result.exact
    assert eval_asymmetric([w2, w2], result.witness) == result.value

    # k copies of the 1 x k all-ones matrix: a permutation coloring is perfect
    for k in (2, 3, 4):
        ones = RatMatrix.from_rows([[1] * k])
        result = odisc_exact([ones] * k)
        assert result.value == 0
        assert sorted(result.witness) == list(range(1, k + 1))

    single = odisc_exact([w2])
    assert single.value == 0 and single.witness == (1, 1)


def test_odisc_exact_cap(w2):
    with pytest.raises(CapExceededError):
        odisc_exact([w2, w2], cap=3)


def test_odisc_matches_naive():
    rng = random.Random(77)
    for _ in range(25):
        k = rng.randint(1, 3)
        cols = rng.randint(1, 5)
        blocks = [random_01_matrix(rng, rng.randint(1, 2), cols) for _ in range(k)]
        value, chi = naive_odisc(blocks)
        result = odisc_exact(blocks)
        assert result.value == value
        assert result.witness == chi
        assert eval_asymmetric(blocks, result.witness) == result.value


def test_odisc_symmetric_pruning_same_value(w2, w4):
    rng = random.Random(5)
    for _ in range(10):
        matrix = random_01_matrix(rng, rng.randint(1, 3), rng.randint(1, 5))
        k = rng.randint(2, 3)
        plain = odisc_exact([matrix] * k)
        pruned = odisc_exact([matrix] * k, symmetric_pruning=True)
        assert plain.value == pruned.value
    with pytest.raises(InputError):
        odisc_exact([w2, w4.restrict_columns([0, 1])], symmetric_pruning=True)


def test_odisc_threads_deterministic():
    rng = random.Random(31)
    for _ in range(8):
        k = rng.randint(2, 3)
        cols = rng.randint(2, 5)
        blocks = [random_01_matrix(rng, rng.randint(1, 2), cols) for _ in range(k)]
        sequential = odisc_exact(blocks, threads=1)
        parallel = odisc_exact(blocks, threads=4)
        assert sequential == parallel


def test_multicolor_at_least_weighted():
    """k-coloring cannot beat the one-sided weighted relaxation at p = 1/k."""
    rng = random.Random(13)
    for _ in range(40):
        k = rng.choice((2, 3))
        matrix = random_01_matrix(rng, rng.randint(1, 3), rng.randint(1, 6))
        colored = odisc_exact([matrix] * k).value
        weighted = wdisc_exact(matrix, Fraction(1, k)).value
        assert colored >= weighted


def test_result_json_shapes(w2):
    data = wdisc_exact(w2, Fraction(1, 3)).to_json_dict()
    assert data == {"value": "1/3", "witness": [0, 1], "exact": True, "nodes": data["nodes"]}
    assert isinstance(data["nodes"], int)
    data = odisc_exact([w2, w2]).to_json_dict()
    assert data["value"] == "1/2" and data["exact"] is True
