"""Truncated complex power series and the Gelfond-Leontiev derivative."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .errors import InsufficientDataError, InvalidFamilyError

DEFAULT_TRUNCATION = 64

# above this many terms the series is summed with exactly rounded partials
COMPENSATED_THRESHOLD = 32


def csum(values) -> complex:
    """Exactly rounded sum of complex values (real and imaginary parts separately)."""
    values = np.asarray(values, dtype=complex).ravel()
    return complex(math.fsum(values.real), math.fsum(values.imag))


@dataclass(frozen=True)
class PowerSeries:
    """Coefficients ``a_0 .. a_N`` of ``sum a_k z^k``.

    ``radius_hint`` is the radius of convergence of the untruncated series
    when known; evaluation outside it is flagged, not refused.
    """

    coeffs: np.ndarray
    radius_hint: float = math.inf
    truncated_from: int | None = field(default=None, compare=False)

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex).ravel()
        if c.size == 0:
            raise ValueError("a power series needs at least one coefficient")
        if not np.all(np.isfinite(c)):
            raise ValueError("power series coefficients must be finite")
        if not self.radius_hint > 0:
            raise ValueError("radius_hint must be positive")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def truncation_order(self) -> int:
        return self.coeffs.size - 1

    @classmethod
    def monomial(cls, k: int, coefficient: complex = 1.0) -> PowerSeries:
        c = np.zeros(k + 1, dtype=complex)
        c[k] = coefficient
        return cls(c)

    @classmethod
    def from_family(cls, family, N: int = DEFAULT_TRUNCATION) -> PowerSeries:
        """Truncation of the comparison function ``phi`` of ``family``."""
        return cls(np.array([family.phi(k) for k in range(N + 1)]))

    def truncate(self, N: int) -> PowerSeries:
        if N >= self.truncation_order:
            return self
        return PowerSeries(self.coeffs[: N + 1], self.radius_hint, self.truncation_order)

    def _combine(self, other: PowerSeries, op) -> PowerSeries:
        N = min(self.truncation_order, other.truncation_order)
        return PowerSeries(
            op(self.coeffs[: N + 1], other.coeffs[: N + 1]),
            min(self.radius_hint, other.radius_hint),
            max(self.truncation_order, other.truncation_order)
            if self.truncation_order != other.truncation_order
            else None,
        )

    def __add__(self, other: PowerSeries) -> PowerSeries:
        return self._combine(other, np.add)

    def __sub__(self, other: PowerSeries) -> PowerSeries:
        return self._combine(other, np.subtract)

    def __mul__(self, scalar: complex) -> PowerSeries:
        return PowerSeries(self.coeffs * scalar, self.radius_hint)

    __rmul__ = __mul__


class SeriesValue(NamedTuple):
    value: complex
    outside_radius: bool


def eval_series(f: PowerSeries, z: complex) -> SeriesValue:
    """Evaluate ``f`` at ``z``.

    Short series use Horner's rule. Longer ones form every term ``a_k z^k``
    and add them with an exactly rounded sum, which matters when the terms
    cancel.
    """
    z = complex(z)
    outside = math.isfinite(f.radius_hint) and abs(z) >= f.radius_hint
    c = f.coeffs
    if c.size <= COMPENSATED_THRESHOLD + 1:
        acc = 0j
        for a in c[::-1]:
            acc = acc * z + a
        return SeriesValue(complex(acc), outside)
    powers = np.empty(c.size, dtype=complex)
    powers[0] = 1.0
    for k in range(1, c.size):
        powers[k] = powers[k - 1] * z
    return SeriesValue(csum(c * powers), outside)


def _phi_ratios(family, N: int) -> np.ndarray:
    """``phi_{k-1}/phi_k`` for k = 1..N, formed in the log domain."""
    logs = np.empty(N + 1)
    for k in range(N + 1):
        try:
            logs[k] = family.log_phi(k)
        except (ValueError, IndexError) as exc:
            raise InvalidFamilyError(
                f"family {family.name!r} has no usable coefficient at index {k}: {exc}"
            ) from exc
        if not np.isfinite(logs[k]):
            raise InvalidFamilyError(
                f"family {family.name!r}: coefficient {k} is not positive"
            )
    return np.exp(logs[:-1] - logs[1:])


def gl_derivative(f: PowerSeries, family) -> PowerSeries:
    """Gelfond-Leontiev derivative of ``f`` with respect to ``family.phi``.

    Sends ``a_k z^k`` to ``a_k (phi_{k-1}/phi_k) z^{k-1}``. The result is
    truncated one order lower than ``f``; a constant maps to the zero series.
    """
    N = f.truncation_order
    if N == 0:
        _phi_ratios(family, 0)
        return PowerSeries(np.zeros(1, dtype=complex), f.radius_hint)
    ratios = _phi_ratios(family, N)
    return PowerSeries(f.coeffs[1:] * ratios, f.radius_hint)


@dataclass(frozen=True)
class OrderEstimate:
    rho: float
    k_range: tuple[int, int]
    pointwise: tuple[float, ...]
    stabilized: bool


def order_estimate(phi: PowerSeries | Sequence[float]) -> OrderEstimate:
    """Estimate the order of the entire function with coefficients ``phi``.

    For an entire function of order rho and finite degree,
    ``(1/k) log(1/phi_k)`` grows like ``(1/rho) log k``; the estimate is the
    reciprocal of the least-squares slope of that quantity against ``log k``
    over the last third of the indices. ``pointwise`` holds the consecutive
    two-point estimates; ``stabilized`` is set when the last three of them
    are finite and agree within 5%.

    A function that is not entire (for instance all coefficients equal to
    one) gives a nonpositive slope and an infinite estimate.
    """
    c = phi.coeffs if isinstance(phi, PowerSeries) else np.asarray(phi, dtype=complex)
    c = np.asarray(c)
    if np.any(np.abs(c.imag) > 0) or np.any(c.real <= 0):
        raise InsufficientDataError("order estimate needs strictly positive coefficients")
    N = c.size - 1
    k_lo = max(2, N - math.ceil(N / 3) + 1)
    ks = np.arange(k_lo, N + 1)
    if ks.size < 10:
        raise InsufficientDataError(
            f"order estimate needs at least 10 tail coefficients, got {ks.size}"
        )
    y = -np.log(c.real[ks]) / ks
    logk = np.log(ks)
    slope = np.polyfit(logk, y, 1)[0]
    rho = 1.0 / slope if slope > 0 else math.inf
    with np.errstate(divide="ignore"):
        dy = np.diff(y) / np.diff(logk)
        pointwise = np.where(dy > 0, 1.0 / np.where(dy > 0, dy, 1.0), np.inf)
    last = pointwise[-3:]
    stabilized = bool(
        np.all(np.isfinite(last)) and (last.max() - last.min()) <= 0.05 * last.min()
    )
    return OrderEstimate(float(rho), (int(ks[0]), int(ks[-1])), tuple(map(float, pointwise)), stabilized)
