"""Free Schroedinger evolution of a fractional supershift initial datum.

The solution is the mode sum

    psi(x, t) = (2 pi)^(-1/2) sum_m (i^m / m!) (1/phi_{m+1}) c_n(m) I_m(x, t)

with moment coefficients ``c_n(m) = sum_{j=0}^{n} C_j z_j^(1-m)``. Each mode
``I_m`` solves ``i psi_t = -psi_xx`` exactly, so finite-difference residuals
measure only discretization error. Convergence in ``m`` is not claimed: the
evaluator reports the size of the last retained term instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, NamedTuple

import mpmath
import numpy as np

from .errors import SingularityError, SingularNodeError
from .oscillatory import EXPONENT_CONVENTIONS, I_m_closed, _it_power
from .quadrature import default_rel_tol
from .supershift import SupershiftSpec, coefficients
from .weights import WeightFamily

DEFAULT_M = 24
PREFACTOR_CONVENTIONS = ("2^-m", "2^-2")
INV_SQRT_2PI = 1 / math.sqrt(2 * math.pi)

_MINUS_I_POW = (1, -1j, -1, 1j)


def moment_coefficient(spec: SupershiftSpec, m: int) -> complex:
    """``c_n(m) = sum_{j=0}^{n} C_j z_j^(1-m)`` with ``z_j = -i lambda_j``.

    Summed exactly in rational arithmetic. A vanishing node (``j = n/2`` for
    even n) raised to a negative power is an error.
    """
    if m < 0:
        raise ValueError("m must be nonnegative")
    cs = coefficients(spec.n, spec.a)
    n = spec.n
    if m >= 2 and n % 2 == 0:
        raise SingularNodeError(
            f"node z_{n // 2} = 0 raised to the power {1 - m} (even n = {n})"
        )
    p = 1 - m
    if p >= 0:
        total = Fraction(sum(c * (n - 2 * j) ** p for j, c in enumerate(cs.numerators)),
                         cs.denominator * n**p)
    else:
        total = sum(Fraction(c * n ** (-p), (n - 2 * j) ** (-p))
                    for j, c in enumerate(cs.numerators)) / cs.denominator
    return _MINUS_I_POW[p % 4] * float(total)


def _log_mode_scale(family: WeightFamily, m: int) -> float:
    """``log(1/(m! phi_{m+1}))``."""
    return -family.log_phi(m + 1) - math.lgamma(m + 1)


@dataclass(frozen=True)
class EvolutionSolution:
    """Truncated mode expansion of psi.

    ``c[m]`` holds ``c_n(m)`` for ``m = 0..M``. ``exponent`` selects the
    power of ``(it)`` inside ``I_m`` and ``prefactor`` the power of two in
    the ``b_n(m)`` coefficients; the defaults are the self-consistent ones.
    """

    family: WeightFamily
    c: np.ndarray
    spec: SupershiftSpec | None = None
    exponent: str = "half"
    prefactor: str = "2^-m"

    def __post_init__(self):
        c = np.array(self.c, dtype=complex)
        if c.size < 5:
            raise ValueError("truncation order M must be at least 4")
        if not np.all(np.isfinite(c)):
            raise ValueError("moment coefficients must be finite")
        if self.exponent not in EXPONENT_CONVENTIONS:
            raise ValueError(f"exponent convention must be one of {EXPONENT_CONVENTIONS}")
        if self.prefactor not in PREFACTOR_CONVENTIONS:
            raise ValueError(f"prefactor convention must be one of {PREFACTOR_CONVENTIONS}")
        c.setflags(write=False)
        object.__setattr__(self, "c", c)

    @property
    def M(self) -> int:
        return self.c.size - 1


def solve(spec: SupershiftSpec, M: int = DEFAULT_M, exponent: str = "half",
          prefactor: str = "2^-m") -> EvolutionSolution:
    if M >= 2 and spec.n % 2 == 0:
        raise SingularNodeError(
            f"even n = {spec.n} has a zero node; only M <= 1 is possible"
        )
    c = [moment_coefficient(spec, m) for m in range(M + 1)]
    return EvolutionSolution(spec.family, np.array(c), spec, exponent, prefactor)


def b_coefficient(sol: EvolutionSolution, m: int, t: float) -> complex:
    """Coefficient ``b_n(m)`` at time t.

    ``sqrt(pi) (1/m!) (1/phi_{m+1}) 2^(-m) (it)^(-(m+1)/2) c_n(m)``; with
    ``prefactor="2^-2"`` the power of two is the constant ``1/4``.
    """
    if t == 0:
        raise SingularityError("b_n(m) is singular at t = 0")
    if not 0 <= m <= sol.M:
        raise ValueError(f"m must lie in 0..{sol.M}")
    two = 2.0**-m if sol.prefactor == "2^-m" else 0.25
    return complex(
        math.sqrt(math.pi)
        * math.exp(_log_mode_scale(sol.family, m))
        * two
        * _it_power(t, m, "half")
        * sol.c[m]
    )


class PsiValue(NamedTuple):
    value: np.ndarray | complex
    b_form_value: np.ndarray | complex
    tail: np.ndarray | float
    truncation_warning: bool


def _mode_sums(sol: EvolutionSolution, x, t):
    """Both assemblies of psi plus the last-term size, vectorized over x and t."""
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    if np.any(t == 0):
        raise SingularityError("psi is singular at t = 0")
    x, t = np.broadcast_arrays(x, t)
    it = 1j * t
    gauss = np.exp(-(x * x) / (4 * it))
    w = -x / (2 * np.sqrt(it))
    h_prev = np.zeros_like(w)
    h = np.ones_like(w)
    via_im = np.zeros_like(w)
    via_b = np.zeros_like(w)
    last = np.zeros(x.shape)
    for m in range(sol.M + 1):
        if m:
            h_prev, h = h, 2 * w * h - 2 * (m - 1) * h_prev
        scale = math.exp(_log_mode_scale(sol.family, m)) * sol.c[m]
        # independent evaluation of each mode, so the two assemblies share no Hermite values
        term = (1j) ** m * scale * I_m_closed(m, x, t, sol.exponent)
        via_im = via_im + term
        two = 2.0**-m if sol.prefactor == "2^-m" else 0.25
        b = math.sqrt(math.pi) * scale * two * _it_power(t, m, "half")
        via_b = via_b + b * gauss * h
        last = np.abs(term)
    return INV_SQRT_2PI * via_im, INV_SQRT_2PI * via_b, INV_SQRT_2PI * last


def psi_eval(sol: EvolutionSolution, x, t, rel_tol: float | None = None) -> PsiValue:
    """psi(x, t) by the ``I_m`` mode sum, with the ``b_n(m)`` assembly alongside.

    ``tail`` is the size of the last retained term relative to the result;
    ``truncation_warning`` is set when it exceeds ``rel_tol`` anywhere.
    """
    rel_tol = default_rel_tol() if rel_tol is None else rel_tol
    value, b_form, last = _mode_sums(sol, x, t)
    with np.errstate(divide="ignore", invalid="ignore"):
        tail = np.where(np.abs(value) > 0, last / np.abs(value), np.where(last > 0, np.inf, 0.0))
    warn = bool(np.any(tail > rel_tol))
    if np.ndim(value) == 0:
        return PsiValue(complex(value), complex(b_form), float(tail), warn)
    return PsiValue(value, b_form, tail, warn)


def schrodinger_residual(func: Callable, xs, ts, h) -> float:
    """Normalized central-difference residual of ``i f_t + f_xx`` on a grid.

    ``h`` is a step or an ``(h_x, h_t)`` pair. Returns the largest residual
    divided by the largest ``|f|`` on the grid.
    """
    hx, ht = (h, h) if np.isscalar(h) else h
    xs = np.asarray(xs, dtype=float)
    ts = np.asarray(ts, dtype=float)
    if np.min(np.abs(ts)) < 10 * ht:
        raise ValueError("time grid must stay at least 10 h_t away from t = 0")
    X, T = np.meshgrid(xs, ts, indexing="ij")
    f0 = func(X, T)
    dt = (func(X, T + ht) - func(X, T - ht)) / (2 * ht)
    dxx = (func(X + hx, T) - 2 * f0 + func(X - hx, T)) / (hx * hx)
    return float(np.max(np.abs(1j * dt + dxx)) / np.max(np.abs(f0)))


def pde_residual(sol: EvolutionSolution, xs, ts, h) -> float:
    """Normalized finite-difference residual of the truncated psi."""
    return schrodinger_residual(lambda x, t: _mode_sums(sol, x, t)[0], xs, ts, h)


class HatC(NamedTuple):
    value: complex
    converged: bool
    terms: np.ndarray


def hat_c_eval(spec: SupershiftSpec, lam: float, M: int = DEFAULT_M) -> HatC:
    """Partial sum of the formal transform ``sum_m (i lam)^m/m! (1/phi_{m+1}) c_n(m)``.

    ``converged`` is a ratio test on the last three retained terms; outside
    ``|lam| < min_j |z_j|`` the exponential-family series diverges and the
    flag is false.
    """
    if M < 4:
        raise ValueError("M must be at least 4")
    mmax = M if spec.n % 2 else min(M, 1)
    terms = np.zeros(M + 1, dtype=complex)
    for m in range(mmax + 1):
        if lam == 0 and m > 0:
            break
        terms[m] = (1j * lam) ** m * math.exp(_log_mode_scale(spec.family, m)) \
            * moment_coefficient(spec, m)
    value = complex(np.sum(terms))
    if lam == 0:
        return HatC(value, True, terms)
    mags = np.abs(terms[mmax - 3: mmax + 1])
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = mags[1:] / mags[:-1]
    converged = bool(mmax >= 4 and np.all(np.isfinite(ratios)) and np.all(ratios < 1))
    return HatC(value, converged, terms)


def plane_wave_psi(spec: SupershiftSpec, x: float, t: float) -> complex:
    """``sum_j C_j exp(i lambda_j x - i lambda_j^2 t)``.

    Free evolution of the classical sequence term by term; a diagnostic for
    comparison with the mode sum, meaningful for the exponential family.
    """
    cs = coefficients(spec.n, spec.a)
    ctx = mpmath.MPContext()
    ctx.dps = 25 + int(math.ceil(cs.abs_sum_log10))
    q = ctx.mpf(cs.denominator)
    total = ctx.mpc(0)
    for j, c in enumerate(cs.numerators):
        lam = ctx.mpf(spec.n - 2 * j) / spec.n
        total += ctx.mpf(c) / q * ctx.expj(lam * x - lam * lam * t)
    return complex(total)
