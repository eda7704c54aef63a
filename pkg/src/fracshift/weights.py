"""Weight families K_phi, their coefficients phi_n, and the moment oracle.

A family pairs the Taylor coefficients ``phi_n`` of an entire comparison
function with a weight ``K`` whose Mellin moments reproduce them:

    integral_0^inf x^n K(-x) dx * phi_n == normalization

Every built-in family is of Mittag-Leffler type, with
``phi_n = 1/Gamma(mu + n/rho)`` and ``K(-x) = c rho x^(rho mu - 1) exp(-x^rho)``;
the constant ``c`` is the family's normalization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import mpmath
import numpy as np

from .errors import (
    DivergentMomentError,
    DomainError,
    IndexRangeError,
    InvalidFamilyError,
    OutOfEnvelopeError,
)
from .quadrature import QuadratureConfig, panel_rule
from .series import DEFAULT_TRUNCATION

ML_ENVELOPE = 50.0


def _neg(x):
    """``-x`` as complex with a +0 imaginary part on the real axis.

    Keeps principal-branch powers of negative reals at argument +pi.
    """
    w = -np.asarray(x, dtype=complex)
    return np.where(w.imag == 0, w.real + 0j, w)


@dataclass(frozen=True)
class WeightFamily:
    name: str
    log_phi: Callable[[int], float]
    weight: Callable
    normalization: float = 1.0
    domain_radius: float = math.inf
    # radius of the disk about 0 on which K is analytic; 0 when K has a branch point there
    analytic_radius: float = math.inf
    max_index: int = 2 * DEFAULT_TRUNCATION
    weight_mp: Callable | None = field(default=None, repr=False)
    kernel_mp: Callable | None = field(default=None, repr=False)
    # direct phi_n, more accurate than exp(log_phi) where it does not underflow
    phi_direct: Callable[[int], float] | None = field(default=None, repr=False)

    def __post_init__(self):
        if not self.normalization > 0:
            raise InvalidFamilyError("normalization must be positive")

    def phi(self, n: int) -> float:
        if self.phi_direct is not None:
            return self.phi_direct(n)
        return math.exp(self.log_phi(n))


def _reciprocal_gamma(x: float) -> float:
    if x < 170.0:
        return 1.0 / math.gamma(x)
    return math.exp(-math.lgamma(x))


def mittag_leffler_family(rho: float, mu: float = 1.0, scale: float = 1 / math.pi,
                          name: str | None = None) -> WeightFamily:
    """Family with ``phi = E_{1/rho, mu}`` and a stretched-exponential weight."""
    rho, mu = float(rho), float(mu)
    if not (rho > 0 and mu > 0):
        raise InvalidFamilyError("Mittag-Leffler family needs rho > 0 and mu > 0")
    power = rho * mu - 1.0

    def log_phi(n):
        return -math.lgamma(mu + n / rho)

    def weight(x):
        w = _neg(x)
        return scale * rho * w**power * np.exp(-(w**rho))

    def weight_mp(ctx, x):
        w = -ctx.mpc(x)
        return scale * rho * ctx.power(w, power) * ctx.exp(-ctx.power(w, rho))

    def kernel_mp(ctx, w):
        return ml_series(ctx, rho, mu, w)

    entire = rho == int(rho) and power >= 0 and power == int(power)
    return WeightFamily(
        name=name or f"ml:{rho:g}:{mu:g}",
        log_phi=log_phi,
        weight=weight,
        normalization=scale,
        analytic_radius=math.inf if entire else 0.0,
        weight_mp=weight_mp,
        kernel_mp=kernel_mp,
        phi_direct=lambda n: _reciprocal_gamma(mu + n / rho),
    )


def exponential_family() -> WeightFamily:
    """``K(z) = e^z`` with ``phi_n = 1/n!``: the classical Fock space."""
    return WeightFamily(
        name="exp",
        log_phi=lambda n: -math.lgamma(n + 1),
        weight=lambda x: np.exp(np.asarray(x, dtype=complex)),
        weight_mp=lambda ctx, x: ctx.exp(x),
        kernel_mp=lambda ctx, w: ctx.exp(w),
        phi_direct=lambda n: _reciprocal_gamma(n + 1.0),
    )


def gamma_shifted_family() -> WeightFamily:
    """``K(-x) = sqrt(x) e^{-x}``, moments ``Gamma(n + 3/2)``.

    The weight has a branch point at the origin, so it is analytic on no disk
    about 0 even though ``phi`` is entire.
    """
    return mittag_leffler_family(1.0, 1.5, scale=1.0, name="gamma-shifted")


def parse_family(name: str) -> WeightFamily:
    """Resolve ``exp``, ``gamma-shifted`` or ``ml:<rho>:<mu>``."""
    if name == "exp":
        return exponential_family()
    if name == "gamma-shifted":
        return gamma_shifted_family()
    if name.startswith("ml:"):
        parts = name.split(":")
        if len(parts) != 3:
            raise InvalidFamilyError(f"expected ml:<rho>:<mu>, got {name!r}")
        try:
            rho, mu = float(parts[1]), float(parts[2])
        except ValueError:
            raise InvalidFamilyError(f"bad Mittag-Leffler parameters in {name!r}") from None
        return mittag_leffler_family(rho, mu)
    raise InvalidFamilyError(f"unknown weight family {name!r}")


def phi_coefficient(family: WeightFamily, n: int) -> float:
    if n < 0:
        raise ValueError("index must be nonnegative")
    if n > family.max_index:
        raise IndexRangeError(
            f"index {n} beyond the guaranteed range 0..{family.max_index} of {family.name!r}"
        )
    return family.phi(n)


def weight_eval(family: WeightFamily, x: complex) -> complex:
    if abs(x) >= family.domain_radius:
        raise DomainError(f"|x| = {abs(x):g} outside the domain of {family.name!r}")
    return complex(family.weight(complex(x)))


def _moment_integrand(family, n):
    def f(x):
        return x**n * np.real(family.weight(-x))
    return f


def mellin_moment(family: WeightFamily, n: int, q: QuadratureConfig | None = None) -> float:
    """``integral_0^inf x^n K(-x) dx`` by split quadrature.

    ``[0, 1]`` is integrated after the substitution ``x = u^2``, which
    removes square-root endpoint behaviour; ``[1, L]`` uses unit-width
    Gauss-Legendre panels, with ``L`` the point past which the integrand is
    negligible. An integrand still significant at ``q.cutoff`` raises
    ``DivergentMomentError``.
    """
    q = q or QuadratureConfig()
    if n < 0:
        raise ValueError("moment order must be nonnegative")
    if n > family.max_index:
        raise IndexRangeError(f"moment order {n} beyond range of {family.name!r}")
    f = _moment_integrand(family, n)

    u, wu = panel_rule(np.linspace(0.0, 1.0, 5), q.nodes)
    head = math.fsum(wu * 2 * u * f(u * u))

    probe = np.arange(1.0, q.cutoff + 0.5, 0.5)
    vals = np.abs(f(probe))
    peak = vals.max()
    significant = np.nonzero(vals > 1e-22 * peak)[0]
    end = probe[min(significant[-1] + 4, probe.size - 1)]
    edges = np.arange(1.0, end + 1.0, 1.0) if end > 1 else np.array([1.0, 2.0])
    x, wx = panel_rule(edges, q.nodes)
    body = math.fsum(wx * f(x))
    total = head + body

    # tail beyond the cutoff, crudely bounded by value * length
    tail = abs(f(np.array([q.cutoff]))[0]) * q.cutoff
    if tail > q.rel_tol * abs(total):
        raise DivergentMomentError(
            f"moment {n} of {family.name!r} does not converge by x = {q.cutoff:g}",
            achieved=tail / abs(total) if total else math.inf,
        )
    return total


class CarlemanReport(NamedTuple):
    terms: np.ndarray
    partial_sums: np.ndarray
    last_term: float
    diverging: bool


def carleman_diagnostic(family: WeightFamily, N: int) -> CarlemanReport:
    """Partial sums of ``sum_{n>=1} phi_n^(-1/(2n))``.

    Terms are formed as ``exp(-log(phi_n) / (2n))``, so they never overflow.
    ``diverging`` is a finite-N heuristic: it is set when every term in the
    last N/2 indices stays at or above half the term that opens that window,
    i.e. the terms show no decay.
    """
    if N < 10:
        raise ValueError("Carleman diagnostic needs N >= 10")
    n = np.arange(1, N + 1)
    log_terms = np.array([-family.log_phi(int(k)) / (2 * k) for k in n])
    terms = np.exp(log_terms)
    window = log_terms[N // 2:]
    diverging = bool(np.all(window >= window[0] - math.log(2.0)))
    return CarlemanReport(terms, np.cumsum(terms), float(terms[-1]), diverging)


def ml_series(ctx, rho, mu, w, max_terms: int = 100000):
    """``sum_k w^k / Gamma(mu + k/rho)`` at the precision of ``ctx``.

    Stops after three consecutive terms below machine epsilon of ``ctx``
    relative to the running sum.
    """
    w = ctx.mpc(w)
    mu = ctx.mpmathify(mu)
    rho = ctx.mpf(rho)
    eps = ctx.eps
    total = ctx.mpc(0)
    power = ctx.mpc(1)
    small = 0
    for k in range(max_terms):
        term = power * ctx.rgamma(mu + k / rho)
        total += term
        if abs(term) <= eps * abs(total):
            small += 1
            if small == 3:
                break
        else:
            small = 0
        power *= w
    return total


def _ml_max_term_log10(rho, mu, z):
    """log10 of the largest series term, for precision planning."""
    r = abs(z)
    if r == 0:
        return 0.0
    best = -math.inf
    k = 0
    while True:
        val = k * math.log10(r) - float(mpmath.log10(abs(mpmath.gamma(mu + k / rho))))
        best = max(best, val)
        if k > 10 and val < best - 20:
            return best
        k += 1


def mittag_leffler_eval(rho: float, mu: complex, z: complex) -> complex:
    """Two-parameter Mittag-Leffler function ``E_{1/rho, mu}(z)`` by its Taylor series.

    Summation runs in extended precision chosen from the size of the largest
    term, so cancellation for negative arguments does not leak into the
    double-precision result. Arguments beyond ``|z| <= 50`` are refused.
    """
    if not rho > 0:
        raise ValueError("rho must be positive")
    if not complex(mu).real > 0:
        raise ValueError("mu must have positive real part")
    if abs(z) > ML_ENVELOPE:
        raise OutOfEnvelopeError(
            f"|z| = {abs(z):g} beyond the Taylor envelope {ML_ENVELOPE:g}"
        )
    mu = complex(mu)
    mu_arg = mu.real if mu.imag == 0 else mu
    ctx = mpmath.MPContext()
    digits = max(0.0, _ml_max_term_log10(rho, mu_arg, z))
    ctx.dps = int(digits) + 30
    value = ml_series(ctx, rho, mu_arg, z)
    # tiny results (e.g. E(-50)) lose the leading digits to cancellation
    lost = digits - float(ctx.log10(abs(value))) if value != 0 else digits
    if lost > ctx.dps - 20:
        ctx.dps = int(lost) + 40
        value = ml_series(ctx, rho, mu_arg, z)
    return complex(value)
