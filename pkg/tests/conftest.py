import random
from fractions import Fraction

import pytest

from disclab import RatMatrix, hadamard_sylvester, lift_w


@pytest.fixture(scope="session")
def w2():
    return lift_w(hadamard_sylvester(1))


@pytest.fixture(scope="session")
def w4():
    return lift_w(hadamard_sylvester(2))


def random_01_matrix(rng: random.Random, rows: int, cols: int) -> RatMatrix:
    entries = [[rng.randint(0, 1) for _ in range(cols)] for _ in range(rows)]
    # avoid the all-zero degenerate matrix: flip one deterministic entry
    if all(all(e == 0 for e in row) for row in entries):
        entries[0][0] = 1
    return RatMatrix.from_rows(entries)


def random_rational_matrix(rng: random.Random, rows: int, cols: int, max_den: int = 6) -> RatMatrix:
    entries = []
    for _ in range(rows):
        row = []
        for _ in range(cols):
            den = rng.randint(1, max_den)
            row.append(Fraction(rng.randint(0, den), den))
        entries.append(row)
    return RatMatrix.from_rows(entries)
