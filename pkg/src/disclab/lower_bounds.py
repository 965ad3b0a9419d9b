"""Hadamard stacked lower-bound construction and its exact certification.

The construction concatenates t = floor(1/(2p)) copies of W = (1 + H)/2 for a
Sylvester H, which forces the weighted discrepancy of the result above
sqrt(n-1)/8 at every p. Square roots are irrational, so every pass/fail
decision here compares squares: a certificate asserts value^2 >= (n-1)/64
exactly, and the rational `bound` fields are one-sided approximations used
for reporting only.

Two bound variants exist because the headline constant (sqrt(n-1)/16, any n)
and the power-of-two constant proved directly (sqrt(n-1)/8) differ by the
rounding-to-power-of-two step; neither is derived from the other here.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InputError
from .matrices import RatMatrix, hadamard_sylvester, lift_w, stack_horizontal
from .rational import format_rational, sqrt_lower
from .solvers import OracleConfig, odisc_exact, wdisc_exact

_ZERO = Fraction(0)
_ONE = Fraction(1)
_HALF = Fraction(1, 2)


def _require_power_of_two(n: int) -> int:
    if n < 1 or n & (n - 1) != 0:
        raise InputError(f"{n} is not a power of two")
    return n.bit_length() - 1


@dataclass(frozen=True)
class StackedConstruction:
    """t copies of W side by side, with the certified-lower-bound claim."""

    n: int
    p: Fraction
    t: int
    matrix: RatMatrix
    delta: Fraction  # rational lower approximation of sqrt(n-1)/8

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "p": format_rational(self.p),
            "t": self.t,
            "rows": self.matrix.rows,
            "cols": self.matrix.cols,
            "delta": format_rational(self.delta),
        }


@dataclass(frozen=True)
class CertReport:
    """Outcome of one certification run; `passed` is decided exactly."""

    construction: StackedConstruction
    exact_value: Fraction
    bound: Fraction
    passed: bool
    witness: tuple
    k: int = 0
    weighted_value: Fraction = None

    def to_json_dict(self) -> dict:
        data = {
            "construction": self.construction.to_json_dict(),
            "exact_value": format_rational(self.exact_value),
            "bound": format_rational(self.bound),
            "pass": self.passed,
            "witness": list(self.witness),
        }
        if self.k:
            data["k"] = self.k
            data["weighted_value"] = format_rational(self.weighted_value)
        return data


def build_stacked(p: Fraction, n: int) -> StackedConstruction:
    """Assemble the stacked instance for weight p and power-of-two order n.

    p above 1/2 is mirrored to 1 - p first (the weighted discrepancy is
    symmetric under that swap); afterwards t = floor(1/(2p)) guarantees
    1/4 <= p*t <= 1/2.
    """
    p = Fraction(p)
    if not _ZERO < p < _ONE:
        raise InputError(f"p must lie strictly between 0 and 1, got {p}")
    log2 = _require_power_of_two(n)
    if p > _HALF:
        p = 1 - p
    t = int(Fraction(1, 2) / p)  # floor of 1/(2p) for positive rationals
    w = lift_w(hadamard_sylvester(log2))
    matrix = stack_horizontal(w, t)
    assert Fraction(1, 4) <= p * t <= _HALF
    return StackedConstruction(n=n, p=p, t=t, matrix=matrix, delta=lb_value(n, "proof"))


def check_hadamard_lemma(w: RatMatrix, z) -> tuple:
    """Evaluate ||Wz||_2^2 against (n/4) * sum of z_i^2 over i >= 2.

    Returns (lhs, rhs, holds) as exact values. Integer z stays in integer
    arithmetic end to end; rational entries are handled exactly as well. The
    first coordinate is the all-ones row/column direction and is excluded
    from the right-hand side.
    """
    if w.rows != w.cols:
        raise InputError("lemma check needs a square matrix")
    _require_power_of_two(w.rows)
    z = list(z)
    if len(z) != w.cols:
        raise InputError(f"vector length {len(z)} != order {w.rows}")
    if all(isinstance(v, int) or (isinstance(v, Fraction) and v.denominator == 1) for v in z):
        z_int = [int(v) for v in z]
        image = [sum(int(e) * v for e, v in zip(row, z_int)) for row in w.entries]
        lhs = Fraction(sum(v * v for v in image))
        rhs = Fraction(w.rows * sum(v * v for v in z_int[1:]), 4)
    else:
        z_frac = [Fraction(v) for v in z]
        image = [sum(e * v for e, v in zip(row, z_frac)) for row in w.entries]
        lhs = sum((v * v for v in image), start=_ZERO)
        rhs = Fraction(w.rows, 4) * sum((v * v for v in z_frac[1:]), start=_ZERO)
    return lhs, rhs, lhs >= rhs


def lb_value(n: int, variant: str) -> Fraction:
    """Certified-from-below rational approximation of the lower bound.

    "statement": sqrt(n-1)/16 for any n >= 1. "proof": sqrt(n-1)/8, defined
    for power-of-two n only. Exact whenever n-1 is a perfect square times a
    square denominator; otherwise within relative error 1e-12, always below.
    """
    if n < 1:
        raise InputError("n must be >= 1")
    if variant == "statement":
        return sqrt_lower(Fraction(n - 1, 256))
    if variant == "proof":
        _require_power_of_two(n)
        return sqrt_lower(Fraction(n - 1, 64))
    raise InputError(f"unknown variant {variant!r}")


def certify_wdisc_lb(p: Fraction, n: int, config: OracleConfig = OracleConfig()) -> CertReport:
    """Exactly certify wdisc of the stacked construction against sqrt(n-1)/8.

    Runs the exact solver on the construction and decides the comparison on
    squares: pass iff value^2 >= (n-1)/64. Intended for n <= 8 where the
    exhaustive-equivalent search finishes in seconds.
    """
    construction = build_stacked(p, n)
    result = wdisc_exact(construction.matrix, construction.p, config)
    passed = result.value * result.value >= Fraction(n - 1, 64)
    return CertReport(
        construction=construction,
        exact_value=result.value,
        bound=construction.delta,
        passed=passed,
        witness=result.witness,
    )


def certify_multicolor_lb(
    k: int,
    n: int,
    config: OracleConfig = OracleConfig(),
    enumeration_cap: int = None,
    threads: int = 1,
) -> CertReport:
    """Certify the multicolor chain odisc >= wdisc >= sqrt(n-1)/8 at p = 1/k.

    Builds the stacked construction at p = 1/k, solves the k-color problem
    exactly on k identical copies, and the weighted problem exactly at 1/k;
    both inequalities are checked with exact arithmetic (the last one on
    squares). Intended for n <= 4 where k^(n*t) enumeration is immediate.
    """
    if k < 2:
        raise InputError("multicolor certification needs k >= 2")
    construction = build_stacked(Fraction(1, k), n)
    kwargs = {"config": config, "threads": threads}
    if enumeration_cap is not None:
        kwargs["cap"] = enumeration_cap
    colored = odisc_exact([construction.matrix] * k, **kwargs)
    weighted = wdisc_exact(construction.matrix, construction.p, config)
    passed = (
        colored.value >= weighted.value
        and weighted.value * weighted.value >= Fraction(n - 1, 64)
    )
    return CertReport(
        construction=construction,
        exact_value=colored.value,
        bound=construction.delta,
        passed=passed,
        witness=colored.witness,
        k=k,
        weighted_value=weighted.value,
    )
