"""Complex Hermite polynomials and the Gaussian-oscillatory integrals I_m(x, t).

``I_m(x, t)`` is the limit as eps -> 0+ of

    integral lambda^m exp(-(i t + eps) lambda^2 + i lambda x) d lambda

and has a closed form through ``H_m``. Every fractional power uses the
principal branch, so ``sqrt(i t) = exp(i pi/4) sqrt(t)`` for t > 0.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .errors import HypothesisViolationError, SingularityError, ToleranceError
from .quadrature import QuadratureConfig, gauss_legendre

SQRT_PI = math.sqrt(math.pi)
EPS = np.finfo(float).eps

# exponent of (it) in the closed form: "half" is -(m+1)/2, "integer" is -(m+1)
EXPONENT_CONVENTIONS = ("half", "integer")


def hermite_complex(m: int, z):
    """Physicists' Hermite polynomial ``H_m`` by the three-term recurrence."""
    if m < 0:
        raise ValueError("order must be nonnegative")
    z = np.asarray(z, dtype=complex)
    h_prev = np.ones_like(z)
    if m == 0:
        return h_prev if h_prev.ndim else complex(h_prev)
    h = 2 * z
    for k in range(1, m):
        h_prev, h = h, 2 * z * h - 2 * k * h_prev
    return h if h.ndim else complex(h)


def parabolic_cylinder(m: int, z):
    """``D_m(z) = 2^(-m/2) exp(-z^2/4) H_m(z / sqrt 2)``."""
    z = np.asarray(z, dtype=complex)
    out = 2.0 ** (-m / 2) * np.exp(-z * z / 4) * hermite_complex(m, z / math.sqrt(2))
    return out if np.ndim(out) else complex(out)


def gaussian_moment(a: complex, b: complex, n: int) -> complex:
    """Closed form of ``integral x^n exp(-a x^2 + b x) dx`` over the real line.

    Valid for Re(a) > 0; principal square root of ``a``.
    """
    a, b = complex(a), complex(b)
    if not a.real > 0:
        raise HypothesisViolationError(f"Re(a) must be positive, got a = {a}")
    if n < 0:
        raise ValueError("order must be nonnegative")
    s = np.sqrt(a)
    return complex(
        np.sqrt(math.pi / a)
        * np.exp(b * b / (4 * a))
        * (-1j) ** n
        * (1 / (2 * s)) ** n
        * hermite_complex(n, 1j * b / (2 * s))
    )


def _it_power(t, m, exponent):
    it = 1j * np.asarray(t, dtype=float)
    if exponent == "half":
        return np.power(it, -(m + 1) / 2)
    if exponent == "integer":
        return np.power(it, -(m + 1))
    raise ValueError(f"exponent convention must be one of {EXPONENT_CONVENTIONS}")


def _check_t(t):
    if np.any(np.asarray(t) == 0):
        raise SingularityError("the closed form is singular at t = 0")


def I_m_closed(m: int, x, t, exponent: str = "half"):
    """Closed form of ``I_m(x, t)``; broadcasts over ``x`` and ``t``.

    ``exponent="integer"`` substitutes ``(it)^(-(m+1))`` for the power of
    ``it``, for comparison against the half-integer form.
    """
    _check_t(t)
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    it = 1j * t
    out = (
        (1j) ** (-m)
        * 2.0**-m
        * SQRT_PI
        * _it_power(t, m, exponent)
        * np.exp(-(x * x) / (4 * it))
        * hermite_complex(m, -x / (2 * np.sqrt(it)))
    )
    return out if np.ndim(out) else complex(out)


def I_m_parabolic(m: int, x, t):
    """``I_m`` assembled from ``D_m`` instead of ``H_m``.

    With ``w = -x / (2 sqrt(it))`` the Gaussian-times-Hermite factor equals
    ``2^(m/2) exp(-w^2/2) D_m(sqrt(2) w)``.
    """
    _check_t(t)
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    w = -x / (2 * np.sqrt(1j * t))
    out = (
        (1j) ** (-m)
        * 2.0 ** (-m / 2)
        * SQRT_PI
        * _it_power(t, m, "half")
        * np.exp(-w * w / 2)
        * parabolic_cylinder(m, math.sqrt(2) * w)
    )
    return out if np.ndim(out) else complex(out)


def _half_width(re_a, center, order):
    """Half-width L with ``re_a L^2 - order log(|center| + L) >= 40``."""
    L = math.sqrt(40.0 / re_a)
    for _ in range(20):
        new = math.sqrt((40.0 + order * math.log(max(abs(center) + L, 1.0))) / re_a)
        if abs(new - L) < 1e-9 * L:
            break
        L = new
    return L


def _panel_edges(lo, hi, im_a, im_b, re_a, span):
    """Panel edges, each panel covering about ``span`` radians of phase.

    The Gaussian envelope width also counts as phase, so slowly oscillating
    integrands are still resolved.
    """
    xs = np.linspace(lo, hi, 200001)
    density = 2 * abs(im_a) * np.abs(xs) + abs(im_b) + math.sqrt(2 * re_a) + 1.0
    cum = np.concatenate([[0.0], np.cumsum(0.5 * (density[1:] + density[:-1]) * np.diff(xs))])
    panels = max(8, int(math.ceil(cum[-1] / span)))
    edges = np.interp(np.linspace(0.0, cum[-1], panels + 1), cum, xs)
    # dyadic edges make panel centres and half-widths exact, so panels tile with no gaps
    quantum = 2.0 ** (math.frexp(max(abs(lo), abs(hi)))[1] - 40)
    edges = np.unique(np.round(edges / quantum) * quantum)
    return edges


_SPLITTER = 134217729.0  # 2^27 + 1
_TWO_PI_HI = 2 * math.pi
_TWO_PI_LO = 2.4492935982947064e-16


def _split(a):
    t = _SPLITTER * a
    hi = t - (t - a)
    return hi, a - hi


def _two_prod(a, b):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _reduced_phase(c, quad, lin):
    """``quad * c^2 + lin * c`` reduced modulo 2 pi, in double-double arithmetic.

    Panel centres reach phases near 1e6 radians; plain doubles would leave
    errors near 1e-10 there, which the cancellation in the oscillatory sum
    amplifies.
    """
    c2, c2e = _two_prod(c, c)
    p1, p1e = _two_prod(np.full_like(c, quad), c2)
    p1e = p1e + quad * c2e
    p2, p2e = _two_prod(np.full_like(c, lin), c)
    s, se = _two_sum(p1, p2)
    lo = se + p1e + p2e
    k = np.round(s / _TWO_PI_HI)
    kh, khe = _two_prod(k, np.full_like(k, _TWO_PI_HI))
    return ((s - kh) - khe) - k * _TWO_PI_LO + lo


def gaussian_integral(a: complex, b: complex, orders: Sequence[int] | int,
                      q: QuadratureConfig | None = None, chunk: int = 50000):
    """Direct quadrature of ``integral x^k exp(-a x^2 + b x) dx`` for each order k.

    Gauss-Legendre panels follow the local oscillation frequency, on a
    window centred where the Gaussian envelope peaks and wide enough that
    the envelope has dropped by ``e^-40`` at its ends. Inside a panel with
    centre ``c`` and half-width ``h`` the exponent is expanded exactly as
    ``(-a c^2 + b c) + (b - 2 a c) h u - a h^2 u^2``. Returns one value per
    order (a scalar for an integer ``orders``).
    """
    q = q or QuadratureConfig()
    scalar = np.isscalar(orders)
    ks = np.atleast_1d(np.asarray(orders, dtype=int))
    a, b = complex(a), complex(b)
    if not a.real > 0:
        raise HypothesisViolationError("quadrature needs Re(a) > 0")
    center = b.real / (2 * a.real)
    L = _half_width(a.real, center, int(ks.max()))
    span = math.pi * q.nodes / 16
    edges = _panel_edges(center - L, center + L, a.imag, b.imag, a.real, span)
    gx, gw = gauss_legendre(q.nodes)
    kmax = int(ks.max())

    panel_sums = [[] for _ in range(kmax + 1)]
    abs_total = np.zeros(kmax + 1)
    for start in range(0, edges.size - 1, chunk):
        e = edges[start: start + chunk + 1]
        c = 0.5 * (e[1:] + e[:-1])
        h = 0.5 * (e[1:] - e[:-1])
        phase0 = _reduced_phase(c, -a.imag, b.imag)
        const = np.exp(-a.real * c * c + b.real * c + 1j * phase0)[:, None]
        lin = ((b - 2 * a * c) * h)[:, None]
        quad = (-a * h * h)[:, None]
        base = const * np.exp(lin * gx + quad * gx * gx) * (h[:, None] * gw)
        x = c[:, None] + h[:, None] * gx
        vals = base
        for k in range(kmax + 1):
            if k:
                vals = vals * x
            panel_sums[k].append(vals.sum(axis=1))
            abs_total[k] += np.abs(vals).sum()

    results = np.empty(ks.size, dtype=complex)
    for i, k in enumerate(ks):
        s = np.concatenate(panel_sums[k])
        results[i] = complex(math.fsum(s.real), math.fsum(s.imag))
        # neglected tails on both sides
        tail = 0.0
        for end in (center - L, center + L):
            tail += abs(end) ** k * math.exp(-a.real * end * end + b.real * end) / (2 * a.real * L)
        # a tail below the rounding floor of the sum is invisible even if the result cancels to 0
        if tail > max(q.rel_tol * abs(results[i]), EPS * abs_total[k]):
            raise ToleranceError(f"window too narrow for order {k}: tail bound {tail:.3g}",
                                 achieved=tail)
    return complex(results[0]) if scalar else results


def I_m_quadrature(m, x: float, t: float, epsilon: float, q: QuadratureConfig | None = None):
    """Regularized ``I_m^eps(x, t)`` by direct quadrature (needs eps > 0)."""
    if not epsilon > 0:
        raise ValueError("quadrature of I_m needs epsilon > 0")
    return gaussian_integral(1j * t + epsilon, 1j * x, m, q)
