import random
from fractions import Fraction

import pytest

from disclab import (
    InputError,
    build_stacked,
    certify_multicolor_lb,
    certify_wdisc_lb,
    check_hadamard_lemma,
    hadamard_sylvester,
    lb_value,
    lift_w,
    stack_horizontal,
    transfer_z,
    wdisc_exact,
)


def test_build_stacked_t_formula(w2, w4):
    c = build_stacked(Fraction(1, 2), 2)
    assert c.t == 1 and c.matrix == w2 and c.p * c.t == Fraction(1, 2)

    c = build_stacked(Fraction(1, 5), 2)
    assert c.t == 2
    assert c.matrix == stack_horizontal(w2, 2)
    assert c.p * c.t == Fraction(2, 5)  # inside [1/4, 1/2]

    # p above one half mirrors first
    c = build_stacked(Fraction(2, 3), 4)
    assert c.p == Fraction(1, 3) and c.t == 1 and c.matrix == w4


def test_build_stacked_validation():
    with pytest.raises(InputError):
        build_stacked(Fraction(0), 2)
    with pytest.raises(InputError):
        build_stacked(Fraction(1), 2)
    with pytest.raises(InputError):
        build_stacked(Fraction(1, 2), 3)


def test_build_stacked_pt_window():
    for den in range(2, 40):
        for num in range(1, den):
            c = build_stacked(Fraction(num, den), 2)
            assert Fraction(1, 4) <= c.p * c.t <= Fraction(1, 2)
            assert c.delta * c.delta <= Fraction(1, 64)


def test_hadamard_lemma_pinned(w2, w4):
    lhs, rhs, holds = check_hadamard_lemma(w2, (1, 0))
    assert (lhs, rhs, holds) == (2, 0, True)
    lhs, rhs, holds = check_hadamard_lemma(w2, (0, 1))
    assert (lhs, rhs, holds) == (1, Fraction(1, 2), True)
    lhs, rhs, holds = check_hadamard_lemma(w4, (0, 1, 1, 1))
    assert lhs == 12 and rhs == 3 and holds


def test_hadamard_lemma_rational_vectors(w4):
    lhs, rhs, holds = check_hadamard_lemma(w4, (Fraction(1, 2), Fraction(-1, 3), 0, 1))
    assert holds
    # lhs computed independently: W4 z with z = (1/2, -1/3, 0, 1)
    z = (Fraction(1, 2), Fraction(-1, 3), 0, 1)
    image = [sum(e * v for e, v in zip(row, z)) for row in w4.entries]
    assert lhs == sum(v * v for v in image)
    assert rhs == Fraction(4, 4) * (Fraction(1, 9) + 0 + 1)


def test_hadamard_lemma_validation(w2):
    with pytest.raises(InputError):
        check_hadamard_lemma(stack_horizontal(w2, 2), (1, 0, 0, 0))
    with pytest.raises(InputError):
        check_hadamard_lemma(w2, (1, 0, 0))


@pytest.mark.parametrize("log2", [1, 2, 3, 4, 5, 6])
def test_hadamard_lemma_random_sweep(log2):
    # exact inequality on random integer vectors plus all unit vectors
    n = 1 << log2
    w = lift_w(hadamard_sylvester(log2))
    rng = random.Random(log2)
    for _ in range(100):
        z = [rng.randint(-8, 8) for _ in range(n)]
        assert check_hadamard_lemma(w, z)[2]
    for i in range(n):
        unit = [0] * n
        unit[i] = 1
        assert check_hadamard_lemma(w, unit)[2]


def test_lb_value():
    assert lb_value(1, "statement") == 0
    assert lb_value(2, "proof") == Fraction(1, 8)
    assert lb_value(2, "statement") == Fraction(1, 16)
    r = lb_value(4, "proof")
    assert r * r <= Fraction(3, 64)
    assert float(r) > (3 ** 0.5) / 8 * (1 - 1e-9)
    assert lb_value(5, "statement") == Fraction(1, 8)  # sqrt(4)/16 exactly
    with pytest.raises(InputError):
        lb_value(5, "proof")
    with pytest.raises(InputError):
        lb_value(4, "both")


def test_certify_wdisc_lb_pinned():
    report = certify_wdisc_lb(Fraction(1, 3), 2)
    assert report.passed
    assert report.exact_value == Fraction(1, 3)
    assert report.bound == Fraction(1, 8)

    report = certify_wdisc_lb(Fraction(1, 5), 2)
    assert report.passed and report.exact_value == Fraction(2, 5)

    report = certify_wdisc_lb(Fraction(1, 2), 4)
    assert report.passed and report.exact_value == 1
    assert report.bound * report.bound <= Fraction(3, 64)


def test_certify_report_json():
    data = certify_wdisc_lb(Fraction(1, 3), 2).to_json_dict()
    assert data["exact_value"] == "1/3"
    assert data["bound"] == "1/8"
    assert data["pass"] is True
    assert data["construction"]["t"] == 1


def test_certify_multicolor_pinned():
    report = certify_multicolor_lb(2, 2)
    assert report.passed
    assert report.exact_value == Fraction(1, 2)       # odisc
    assert report.weighted_value == Fraction(1, 2)    # wdisc chain value

    report = certify_multicolor_lb(3, 2)
    assert report.passed
    assert report.weighted_value == Fraction(1, 3)
    assert report.exact_value >= report.weighted_value

    report = certify_multicolor_lb(3, 4)
    assert report.passed
    data = report.to_json_dict()
    assert data["k"] == 3 and "weighted_value" in data


def test_certify_multicolor_validation():
    with pytest.raises(InputError):
        certify_multicolor_lb(1, 2)


def test_coordinate_gap_property():
    """Every coordinate of p*t*1 - z has magnitude >= 1/4 whenever z is integral."""
    for p in (Fraction(1, 3), Fraction(1, 5), Fraction(1, 7)):
        c = build_stacked(p, 2)
        pt = c.p * c.t
        for z_entry in range(c.t + 1):
            assert abs(pt - z_entry) >= Fraction(1, 4)


def test_end_to_end_norm_chain():
    """Stacked-to-W transfer preserves the l2 norm; linf dominates l2/sqrt(n)."""
    rng = random.Random(3)
    for p in (Fraction(1, 3), Fraction(1, 5)):
        c = build_stacked(p, 4)
        w = lift_w(hadamard_sylvester(2))
        for _ in range(25):
            x = tuple(rng.randint(0, 1) for _ in range(c.matrix.cols))
            z = transfer_z(x, 4, c.t)
            lhs = [sum(e * (c.p - b) for e, b in zip(row, x)) for row in c.matrix.entries]
            rhs = [sum(e * (c.p * c.t - v) for e, v in zip(row, z)) for row in w.entries]
            assert sum(v * v for v in lhs) == sum(v * v for v in rhs)
            linf = max(abs(v) for v in lhs)
            assert linf * linf * 4 >= sum(v * v for v in lhs)


def test_certified_value_is_true_minimum():
    """The certificate's exact_value matches an independent solver run."""
    for n, p in ((2, Fraction(1, 3)), (4, Fraction(1, 2)), (4, Fraction(2, 5))):
        report = certify_wdisc_lb(p, n)
        again = wdisc_exact(report.construction.matrix, report.construction.p)
        assert report.exact_value == again.value
