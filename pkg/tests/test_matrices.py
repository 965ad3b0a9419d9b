import json
import random
from fractions import Fraction

import pytest

from disclab import (
    CapExceededError,
    DimensionMismatchError,
    InputError,
    RatMatrix,
    SignMatrix,
    hadamard_sylvester,
    lift_w,
    stack_horizontal,
    stack_vertical,
    transfer_z,
)


def test_order_one_is_identity_case():
    h = hadamard_sylvester(0)
    assert h.order == 1
    assert h.entries == ((1,),)


def test_order_two_base_block():
    h = hadamard_sylvester(1)
    assert h.entries == ((1, 1), (1, -1))


def test_order_four_orthogonality_by_direct_multiplication():
    h = hadamard_sylvester(2)
    assert h.entries == (
        (1, 1, 1, 1),
        (1, -1, 1, -1),
        (1, 1, -1, -1),
        (1, -1, -1, 1),
    )
    for i in range(4):
        for j in range(4):
            dot = sum(a * b for a, b in zip(h.entries[i], h.entries[j]))
            assert dot == (4 if i == j else 0)


@pytest.mark.parametrize("log2", [0, 1, 2, 3, 4, 5, 6])
def test_orthogonality_all_orders(log2):
    assert hadamard_sylvester(log2).check_orthogonal()


def test_first_row_and_column_all_ones():
    h = hadamard_sylvester(4)
    assert all(e == 1 for e in h.entries[0])
    assert all(row[0] == 1 for row in h.entries)


def test_order_cap():
    with pytest.raises(CapExceededError):
        hadamard_sylvester(21)
    with pytest.raises(InputError):
        hadamard_sylvester(-1)


def test_lift_w_small_orders(w2, w4):
    assert lift_w(hadamard_sylvester(0)).entries == ((Fraction(1),),)
    assert w2.entries == ((1, 1), (1, 0))
    assert w4.entries == (
        (1, 1, 1, 1),
        (1, 0, 1, 0),
        (1, 1, 0, 0),
        (1, 0, 0, 1),
    )


@pytest.mark.parametrize("log2", [1, 2, 3, 4, 5])
def test_lift_w_ones_count(log2):
    # first row all ones, every other row exactly n/2 ones
    n = 1 << log2
    w = lift_w(hadamard_sylvester(log2))
    assert sum(sum(row) for row in w.entries) == n * (n + 1) // 2
    assert sum(w.entries[0]) == n
    for row in w.entries[1:]:
        assert sum(row) == n // 2


def test_stack_horizontal(w2, w4):
    assert stack_horizontal(w2, 1).entries == w2.entries
    doubled = stack_horizontal(w2, 2)
    assert doubled.rows == 2 and doubled.cols == 4
    assert doubled.entries == ((1, 1, 1, 1), (1, 0, 1, 0))
    tripled = stack_horizontal(w4, 3)
    assert tripled.cols == 12
    assert tripled.column(4) == w4.column(0)
    with pytest.raises(CapExceededError):
        stack_horizontal(w4, 2, width_cap=7)
    with pytest.raises(InputError):
        stack_horizontal(w4, 0)


def test_stack_vertical(w2, w4):
    assert stack_vertical([w2]).entries == w2.entries
    stacked = stack_vertical([w2, w2])
    assert stacked.rows == 4 and stacked.cols == 2
    assert stacked.entries == ((1, 1), (1, 0), (1, 1), (1, 0))
    with pytest.raises(DimensionMismatchError):
        stack_vertical([w2, w4])


def test_transfer_z_examples():
    assert transfer_z((1, 0, 0, 1), 2, 2) == (1, 1)
    assert transfer_z((0, 1), 2, 1) == (0, 1)
    assert transfer_z((1, 1, 1, 0), 2, 2) == (2, 1)
    with pytest.raises(DimensionMismatchError):
        transfer_z((1, 0, 0), 2, 2)


def test_transfer_z_identity_pinned_values(w2):
    # A(p*1 - x) = W(p*t*1 - z), evaluated exactly at p = 1/5, t = 2
    p = Fraction(1, 5)
    stacked = stack_horizontal(w2, 2)

    def sides(x):
        z = transfer_z(x, 2, 2)
        lhs = [sum(e * (p - b) for e, b in zip(row, x)) for row in stacked.entries]
        rhs = [sum(e * (p * 2 - v) for e, v in zip(row, z)) for row in w2.entries]
        return lhs, rhs

    lhs, rhs = sides((1, 0, 0, 1))
    assert lhs == rhs == [Fraction(-6, 5), Fraction(-3, 5)]
    lhs, rhs = sides((1, 1, 1, 0))
    assert lhs == rhs == [Fraction(-11, 5), Fraction(-8, 5)]


@pytest.mark.parametrize("log2", [1, 2, 3])
@pytest.mark.parametrize("t", [1, 2, 3])
@pytest.mark.parametrize("p", [Fraction(1, 2), Fraction(1, 3), Fraction(1, 5)])
def test_transfer_z_identity_random(log2, t, p):
    rng = random.Random(1000 * log2 + 10 * t + p.denominator)
    n = 1 << log2
    w = lift_w(hadamard_sylvester(log2))
    stacked = stack_horizontal(w, t)
    for _ in range(20):
        x = tuple(rng.randint(0, 1) for _ in range(n * t))
        z = transfer_z(x, n, t)
        assert all(0 <= v <= t for v in z)
        lhs = [sum(e * (p - b) for e, b in zip(row, x)) for row in stacked.entries]
        rhs = [sum(e * (p * t - v) for e, v in zip(row, z)) for row in w.entries]
        assert lhs == rhs


def test_rat_matrix_validation():
    with pytest.raises(InputError):
        RatMatrix.from_rows([[Fraction(3, 2)]])
    with pytest.raises(InputError):
        RatMatrix.from_rows([[Fraction(-1, 2)]])
    with pytest.raises(DimensionMismatchError):
        RatMatrix.from_rows([[0, 1], [1]])
    with pytest.raises(InputError):
        RatMatrix.from_rows([])


def test_rat_matrix_json_round_trip(w4):
    data = w4.to_json_dict()
    text = json.dumps(data)
    again = RatMatrix.from_json_dict(json.loads(text))
    assert again == w4

    fancy = RatMatrix.from_rows([[Fraction(1, 3), Fraction(2, 7)], [0, 1]])
    assert RatMatrix.from_json_dict(fancy.to_json_dict()) == fancy
    assert fancy.to_json_dict()["entries"][0] == ["1/3", "2/7"]


def test_sign_matrix_json_round_trip():
    h = hadamard_sylvester(2)
    data = h.to_json_dict()
    assert data["entries"][1] == ["1", "-1", "1", "-1"]
    assert SignMatrix.from_json_dict(data) == h
    data["entries"][0][0] = "0"
    with pytest.raises(InputError):
        SignMatrix.from_json_dict(data)


def test_restrict_columns(w4):
    sub = w4.restrict_columns([2, 0])
    assert sub.cols == 2
    assert sub.entries[1] == (Fraction(1), Fraction(1))
    with pytest.raises(InputError):
        w4.restrict_columns([])
    with pytest.raises(InputError):
        w4.restrict_columns([9])
