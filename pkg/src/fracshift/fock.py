"""Fractional Fock spaces: inner products, reproducing kernel, ladder operators.

Inner products conjugate the first argument. The Bargmann-type map is
modelled only on coefficients: Hermite function ``h_n`` goes to the basis
element ``e_n = sqrt(phi_n) z^n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import IncompatibleSpaceError, OutOfEnvelopeError, ToleranceError
from .quadrature import QuadratureConfig, panel_rule
from .series import DEFAULT_TRUNCATION, PowerSeries, csum, eval_series, gl_derivative
from .weights import WeightFamily

KERNEL_REL_TOL = 1e-13


@dataclass(frozen=True)
class FockElement:
    series: PowerSeries
    family: WeightFamily

    @classmethod
    def from_coeffs(cls, coeffs, family: WeightFamily) -> FockElement:
        return cls(PowerSeries(np.asarray(coeffs, dtype=complex)), family)

    @property
    def coeffs(self) -> np.ndarray:
        return self.series.coeffs

    def __call__(self, z: complex) -> complex:
        return eval_series(self.series, z).value

    def norm(self) -> float:
        return math.sqrt(inner_product(self, self).real)


def _log_phis(family: WeightFamily, N: int) -> np.ndarray:
    return np.array([family.log_phi(n) for n in range(N + 1)])


def basis_element(family: WeightFamily, n: int, N: int | None = None) -> FockElement:
    """``e_n = sqrt(phi_n) z^n``, padded to truncation ``N``."""
    N = n if N is None else N
    c = np.zeros(N + 1, dtype=complex)
    c[n] = math.sqrt(family.phi(n))
    return FockElement.from_coeffs(c, family)


def kernel_section(family: WeightFamily, w: complex, N: int = DEFAULT_TRUNCATION) -> FockElement:
    """``k_w(z) = phi(z conj(w))`` truncated at order ``N``."""
    n = np.arange(N + 1)
    c = np.exp(_log_phis(family, N)) * np.conj(complex(w)) ** n
    return FockElement.from_coeffs(c, family)


def _check_same_space(f: FockElement, g: FockElement):
    if f.family.name != g.family.name:
        raise IncompatibleSpaceError(
            f"elements live in different spaces: {f.family.name!r} vs {g.family.name!r}"
        )


def inner_product(f: FockElement, g: FockElement) -> complex:
    """``sum_n conj(f_n) g_n / phi_n`` over the common truncation."""
    _check_same_space(f, g)
    N = min(f.series.truncation_order, g.series.truncation_order)
    inv_phi = np.exp(-_log_phis(f.family, N))
    return csum(np.conj(f.coeffs[: N + 1]) * g.coeffs[: N + 1] * inv_phi)


def _kernel_terms(family, x, N):
    n = np.arange(N + 1)
    if x == 0:
        terms = np.zeros(N + 1, dtype=complex)
        terms[0] = family.phi(0)
        return terms
    logmag = _log_phis(family, N) + n * math.log(abs(x))
    return np.exp(logmag) * np.exp(1j * n * np.angle(x))


def kernel_tail_bound(family: WeightFamily, z: complex, w: complex,
                      N: int = DEFAULT_TRUNCATION) -> float:
    """Geometric estimate of the neglected tail beyond order ``N``.

    Infinite when the last term ratio is not below one.
    """
    x = complex(z) * np.conj(complex(w))
    if x == 0:
        return 0.0
    last = abs(_kernel_terms(family, x, N)[-1])
    ratio = math.exp(family.log_phi(N + 1) - family.log_phi(N)) * abs(x)
    if ratio >= 1:
        return math.inf
    return last * ratio / (1 - ratio)


def kernel_eval(family: WeightFamily, z: complex, w: complex,
                N: int = DEFAULT_TRUNCATION) -> complex:
    """Reproducing kernel ``phi(z conj(w))`` as a truncated series."""
    x = complex(z) * np.conj(complex(w))
    terms = _kernel_terms(family, x, N)
    tail = kernel_tail_bound(family, z, w, N)
    scale = float(np.sum(np.abs(terms)))
    if tail > KERNEL_REL_TOL * scale:
        raise OutOfEnvelopeError(
            f"|z conj(w)| = {abs(x):g} too large for truncation N = {N} (tail {tail:.3g})"
        )
    return csum(terms)


def gram_matrix(family: WeightFamily, points: Sequence[complex],
                N: int = DEFAULT_TRUNCATION) -> np.ndarray:
    pts = list(points)
    return np.array([[kernel_eval(family, zi, zj, N) for zj in pts] for zi in pts])


def quadrature_inner_product(f: FockElement, g: FockElement,
                             q: QuadratureConfig | None = None) -> complex:
    """Area-integral form of the inner product, normalized by the family constant.

    Evaluates ``(1/(pi c)) * integral conj(f) g K(-|z|^2) dx dy`` with
    ``c = family.normalization``. The angular integral uses an equispaced
    rule with more points than the trigonometric degree of the integrand,
    which is exact; the radial one uses Gauss-Legendre panels in ``r`` out
    to where the weighted integrand is negligible.
    """
    q = q or QuadratureConfig()
    _check_same_space(f, g)
    family = f.family
    df, dg = f.series.truncation_order, g.series.truncation_order
    n_theta = df + dg + 2
    theta = 2 * math.pi * np.arange(n_theta) / n_theta

    d = max(df, dg)
    probe = np.linspace(0.0, math.sqrt(q.cutoff), 4001)[1:]
    radial_size = probe ** (2 * d + 1) * np.abs(family.weight(-(probe**2)))
    keep = np.nonzero(radial_size > 1e-22 * radial_size.max())[0]
    R = probe[min(keep[-1] + 10, probe.size - 1)]

    def integrate(panels):
        r, wr = panel_rule(np.linspace(0.0, R, panels + 1), q.nodes)
        zz = r[:, None] * np.exp(1j * theta)[None, :]
        fv = np.polynomial.polynomial.polyval(zz, f.coeffs)
        gv = np.polynomial.polynomial.polyval(zz, g.coeffs)
        ang = np.mean(np.conj(fv) * gv, axis=1)
        ang_abs = np.mean(np.abs(fv * gv), axis=1)
        radial = 2 * r * np.real(family.weight(-(r * r))) * wr
        c = family.normalization
        return csum(radial * ang) / c, math.fsum(radial * ang_abs) / c

    panels = 8
    value, scale = integrate(panels)
    coarse, _ = integrate(max(1, panels // 2))
    err = abs(value - coarse)
    if err > q.rel_tol * max(scale, abs(value)):
        raise ToleranceError(
            f"radial quadrature did not converge (estimated error {err:.3g})", achieved=err
        )
    return value


def _ratio_sqrt(family, n):
    """``sqrt(phi_{n-1}/phi_n)`` for n >= 1."""
    return math.exp(0.5 * (family.log_phi(n - 1) - family.log_phi(n)))


def ladder_apply(direction: str, coeffs: Sequence[complex], family: WeightFamily) -> np.ndarray:
    """Raising or lowering operator on coefficients in the Hermite basis.

    ``raise`` sends ``h_{n-1}`` to ``sqrt(phi_{n-1}/phi_n) h_n`` and lengthens
    the vector by one; ``lower`` sends ``h_n`` to the same multiple of
    ``h_{n-1}`` and returns a vector one longer than the input with a
    trailing zero, so both compositions have matching lengths.
    """
    c = np.asarray(coeffs, dtype=complex)
    L = c.size
    s = np.array([_ratio_sqrt(family, n) for n in range(1, L + 1)])
    out = np.zeros(L + 1, dtype=complex)
    if direction == "raise":
        out[1:] = s * c
    elif direction == "lower":
        out[: L - 1] = s[: L - 1] * c[1:]
    else:
        raise ValueError(f"direction must be 'raise' or 'lower', got {direction!r}")
    return out


def bargmann_coefficients(coeffs: Sequence[complex], family: WeightFamily) -> PowerSeries:
    """Image of ``sum c_n h_n`` under ``h_n -> e_n``."""
    c = np.asarray(coeffs, dtype=complex)
    scale = np.exp(0.5 * np.array([family.log_phi(n) for n in range(c.size)]))
    return PowerSeries(c * scale)


def intertwining_check(family: WeightFamily, coeffs: Sequence[complex], N: int) -> float:
    """Largest coefficient mismatch in the two intertwining relations.

    Compares mapping then differentiating (``D_phi``) against lowering then
    mapping, and mapping then multiplying by ``z`` against raising then
    mapping.
    """
    c = np.zeros(N + 1, dtype=complex)
    v = np.asarray(coeffs, dtype=complex)
    if v.size > N:
        raise ValueError("coefficient vector must be supported on indices <= N - 1")
    c[: v.size] = v

    mapped = bargmann_coefficients(c, family)
    d_path = gl_derivative(mapped, family).coeffs
    lowered = bargmann_coefficients(ladder_apply("lower", c, family), family).coeffs
    dev_lower = np.max(np.abs(d_path - lowered[: d_path.size]), initial=0.0)

    z_path = np.concatenate([[0], mapped.coeffs])
    raised = bargmann_coefficients(ladder_apply("raise", c, family), family).coeffs
    dev_raise = np.max(np.abs(z_path - raised), initial=0.0)
    return float(max(dev_lower, dev_raise))
