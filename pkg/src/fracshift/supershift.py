"""Superoscillation coefficients and fractional supershift sequences.

The coefficients ``C_j(n, a)`` alternate in sign and their absolute sum is
``a^n``, while the signed sum is exactly one. No double-precision summation
survives that cancellation for large ``n``, so the coefficients are kept as
integers over a common denominator. Sums that are polynomial in the
frequencies ``lambda_j = 1 - 2j/n`` are then exact; sums through a
transcendental weight run in an mpmath context whose precision grows with
``n log10(a)``.
"""

from __future__ import annotations

import cmath
import math
import sys
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable

import mpmath
import numpy as np

from .errors import CoefficientOverflowError, DomainError, OutOfEnvelopeError, UsageError
from .weights import ML_ENVELOPE, WeightFamily

GUARD_DIGITS = 25


@dataclass(frozen=True)
class CoefficientSet:
    """``C_j = numerators[j] / denominator`` and nodes ``z_j = -i lambda_j``."""

    n: int
    a: Fraction
    numerators: tuple[int, ...]
    denominator: int

    @cached_property
    def C(self) -> np.ndarray:
        q = self.denominator
        return np.array([k / q for k in self.numerators])

    @cached_property
    def C_exact(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(k, self.denominator) for k in self.numerators)

    @cached_property
    def lambdas(self) -> np.ndarray:
        n = self.n
        return np.array([(n - 2 * j) / n for j in range(n + 1)])

    @cached_property
    def nodes(self) -> np.ndarray:
        return -1j * self.lambdas

    def lambda_exact(self, j: int) -> Fraction:
        return Fraction(self.n - 2 * j, self.n)

    @property
    def abs_sum_log10(self) -> float:
        """``log10 sum_j |C_j|``, which equals ``n log10(a)`` for a >= 1."""
        return self.n * math.log10(self.a)

    def weighted_sum(self, values: Iterable[Fraction | int]) -> Fraction:
        """Exact ``sum_j C_j v_j`` for rational ``v_j``."""
        total = Fraction(0)
        for k, v in zip(self.numerators, values):
            total += k * Fraction(v)
        return total / self.denominator


@lru_cache(maxsize=256)
def _coefficients(n: int, a: Fraction) -> CoefficientSet:
    num, den = a.numerator, a.denominator
    p, r = den + num, den - num
    binom = 1
    numerators = []
    for j in range(n + 1):
        numerators.append(binom * p ** (n - j) * r**j)
        binom = binom * (n - j) // (j + 1)
    return CoefficientSet(n, a, tuple(numerators), (2 * den) ** n)


def coefficients(n: int, a: float) -> CoefficientSet:
    """Exact ``C_j(n, a) = binom(n, j) ((1+a)/2)^(n-j) ((1-a)/2)^j``.

    ``a`` is taken at its exact binary value. Raises
    ``CoefficientOverflowError`` when the largest coefficient does not fit
    in a double.
    """
    if int(n) != n or n < 1:
        raise UsageError(f"n must be a positive integer, got {n!r}")
    if not a >= 1:
        raise UsageError(f"a must be >= 1, got {a!r}")
    cs = _coefficients(int(n), Fraction(a))
    big = max(abs(k) for k in cs.numerators)
    log2_max = big.bit_length() - cs.denominator.bit_length()
    if log2_max >= sys.float_info.max_exp - 1:
        per_n = log2_max / n
        suggested = int((sys.float_info.max_exp - 2) / per_n)
        raise CoefficientOverflowError(
            f"max |C_j| for n={n}, a={a:g} exceeds double range; use n <= {suggested}"
        )
    return cs


def coefficient_sum(n: int, a: float) -> float:
    """``sum_j C_j(n, a)``, exactly summed and rounded once."""
    cs = coefficients(n, a)
    return sum(cs.numerators) / cs.denominator


@dataclass(frozen=True)
class SupershiftSpec:
    n: int
    a: float
    family: WeightFamily

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise UsageError(f"n must be a positive integer, got {self.n!r}")
        if not self.a >= 1:
            raise UsageError(f"a must be >= 1, got {self.a!r}")

    @property
    def coefficients(self) -> CoefficientSet:
        return coefficients(self.n, self.a)


def _context(cs: CoefficientSet, extra: float = 0.0) -> mpmath.ctx_mp.MPContext:
    ctx = mpmath.MPContext()
    ctx.dps = GUARD_DIGITS + int(math.ceil(cs.abs_sum_log10 + max(extra, 0.0)))
    return ctx


def _mp_coefficients(ctx, cs: CoefficientSet):
    q = ctx.mpf(cs.denominator)
    return [ctx.mpf(k) / q for k in cs.numerators]


def classical_F(n: int, a: float, z: complex, form: str = "product") -> complex:
    """Superoscillating sequence ``F_n(z, a)``.

    ``product`` evaluates ``[cos(z/n) + i a sin(z/n)]^n``; ``sum`` evaluates
    ``sum_j C_j exp(i lambda_j z)``.
    """
    z = complex(z)
    if form == "product":
        return (cmath.cos(z / n) + 1j * a * cmath.sin(z / n)) ** n
    if form != "sum":
        raise ValueError(f"form must be 'product' or 'sum', got {form!r}")
    cs = coefficients(n, a)
    ctx = _context(cs, abs(z.imag) / math.log(10))
    zz = ctx.mpc(z)
    total = ctx.mpc(0)
    for c, lam in zip(_mp_coefficients(ctx, cs), range(n, -n - 1, -2)):
        total += c * ctx.expj(zz * lam / n)
    return complex(total)


def _term_arguments(spec: SupershiftSpec, z: complex) -> np.ndarray:
    """``-z_j z = i lambda_j z`` for every j."""
    return 1j * spec.coefficients.lambdas * complex(z)


def _check_terms(spec: SupershiftSpec, z: complex):
    r = spec.family.domain_radius
    if abs(z) >= r:
        raise DomainError(f"|z| = {abs(z):g} outside the domain radius {r:g}")
    args = _term_arguments(spec, z)
    bad = np.nonzero(np.abs(args) >= r)[0]
    if bad.size:
        raise DomainError(f"term j={bad[0]} has argument outside the weight's domain")


def fractional_F(spec: SupershiftSpec, z: complex) -> complex:
    """Fractional supershift ``sum_j C_j K(-z_j z)``."""
    z = complex(z)
    _check_terms(spec, z)
    cs = spec.coefficients
    family = spec.family
    if family.weight_mp is None:
        terms = family.weight(_term_arguments(spec, z))
        return complex(np.sum(cs.C * terms))
    ctx = _context(cs, abs(z) / math.log(10))
    zz = ctx.mpc(z)
    total = ctx.mpc(0)
    for j, c in enumerate(_mp_coefficients(ctx, cs)):
        lam = ctx.mpf(cs.n - 2 * j) / cs.n
        total += c * family.weight_mp(ctx, ctx.mpc(0, 1) * lam * zz)
    return complex(total)


def kernel_supershift(spec: SupershiftSpec, z: complex) -> complex:
    """Kernel variant ``sum_j C_j phi(z conj(z_j))`` with ``conj(z_j) = i lambda_j``."""
    z = complex(z)
    family = spec.family
    if family.kernel_mp is None:
        raise DomainError(f"family {family.name!r} has no extended-precision kernel")
    if abs(z) > ML_ENVELOPE:
        raise OutOfEnvelopeError(f"|z| = {abs(z):g} beyond the kernel envelope {ML_ENVELOPE:g}")
    cs = spec.coefficients
    ctx = _context(cs, abs(z) / math.log(10))
    zz = ctx.mpc(z)
    total = ctx.mpc(0)
    for j, c in enumerate(_mp_coefficients(ctx, cs)):
        lam = ctx.mpf(cs.n - 2 * j) / cs.n
        total += c * family.kernel_mp(ctx, ctx.mpc(0, 1) * lam * zz)
    return complex(total)


def kernel_target(spec: SupershiftSpec, z: complex) -> complex:
    """Limit ``phi(i a z)`` of the kernel variant."""
    ctx = mpmath.MPContext()
    ctx.dps = 30
    return complex(spec.family.kernel_mp(ctx, ctx.mpc(0, 1) * spec.a * ctx.mpc(complex(z))))


def supershift_target(spec: SupershiftSpec, z: complex) -> complex:
    """Limit ``K(i a z)`` of the fractional supershift."""
    return complex(spec.family.weight(1j * spec.a * complex(z)))


def check_grid(spec: SupershiftSpec, grid: Iterable[complex]) -> np.ndarray:
    pts = np.asarray(list(grid), dtype=complex)
    bound = spec.family.analytic_radius / spec.a
    outside = np.nonzero(np.abs(pts) >= bound)[0]
    if outside.size:
        raise DomainError(
            f"grid point {pts[outside[0]]} outside the admissible disk |z| < r/a = {bound:g}"
            f" for family {spec.family.name!r}"
        )
    return pts


def supershift_error(spec: SupershiftSpec, grid: Iterable[complex]) -> float:
    """Largest ``|F_{n,phi}(z) - K(i a z)|`` over the grid.

    The grid must lie in ``|z| < r/a`` where ``r`` is the radius of
    analyticity of the weight about 0, so the limit is defined.
    """
    pts = check_grid(spec, grid)
    return max(abs(fractional_F(spec, z) - supershift_target(spec, z)) for z in pts)


def derivative_moment(n: int, a: float, k: int) -> complex:
    """``sum_j C_j (i lambda_j)^k``, the k-th derivative of ``F_n`` at 0.

    Exact in rational arithmetic, rounded once.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    cs = coefficients(n, a)
    total = sum(c * (n - 2 * j) ** k for j, c in enumerate(cs.numerators))
    real = Fraction(total, cs.denominator * n**k)
    return (1, 1j, -1, -1j)[k % 4] * float(real)


def disk_grid(radius: float, rings: int = 4, per_ring: int = 16) -> np.ndarray:
    """The origin plus ``rings`` concentric circles out to ``radius``."""
    pts = [0j]
    for r in np.linspace(radius / rings, radius, rings):
        th = 2 * np.pi * np.arange(per_ring) / per_ring
        pts.extend(r * np.exp(1j * th))
    return np.array(pts)
