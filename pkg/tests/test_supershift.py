import cmath
import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracshift.errors import CoefficientOverflowError, DomainError, UsageError
from fracshift.supershift import (
    SupershiftSpec,
    classical_F,
    coefficient_sum,
    coefficients,
    derivative_moment,
    disk_grid,
    fractional_F,
    kernel_supershift,
    kernel_target,
    supershift_error,
)
from fracshift.weights import (
    exponential_family,
    gamma_shifted_family,
    mittag_leffler_eval,
    mittag_leffler_family,
)

EXP = exponential_family()
ML = mittag_leffler_family(2.0, 1.0)


def test_n_equals_one():
    for a in (1.0, 1.5, 3.0):
        cs = coefficients(1, a)
        assert cs.C[0] == (1 + a) / 2 and cs.C[1] == (1 - a) / 2


def test_a_equals_one():
    cs = coefficients(17, 1.0)
    assert cs.C[0] == 1 and np.all(cs.C[1:] == 0)


def test_partition_n40_a4():
    assert coefficient_sum(40, 4.0) == 1.0


def test_coefficients_against_binomials():
    # independent oracle: mpmath binomials at 50 digits
    mpmath.mp.dps = 50
    cs = coefficients(30, 2.5)
    for j in range(31):
        ref = mpmath.binomial(30, j) * mpmath.mpf(1.75) ** (30 - j) * mpmath.mpf(-0.75) ** j
        assert cs.C[j] == pytest.approx(float(ref), rel=1e-15)


def test_nodes_and_signs():
    cs = coefficients(9, 3.0)
    assert np.all(cs.nodes == -1j * cs.lambdas)
    assert np.all(np.abs(cs.lambdas) <= 1)
    assert np.all(np.sign(cs.C) == (-1.0) ** np.arange(10))


def test_overflow():
    with pytest.raises(CoefficientOverflowError, match="use n <="):
        coefficients(1200, 2.0)


def test_bad_inputs():
    with pytest.raises(UsageError):
        coefficients(0, 2.0)
    with pytest.raises(UsageError):
        SupershiftSpec(5, 0.5, EXP)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 400), st.sampled_from([1.0, 1.5, 2.0, 4.0]))
def test_partition_of_unity_property(n, a):
    assert abs(coefficient_sum(n, a) - 1) <= n * 2.0**-50


def test_unimodular_case():
    for z in (0.3, 2 - 1j, 5j):
        assert abs(classical_F(7, 1.0, z) - cmath.exp(1j * z)) < 1e-13
        assert abs(classical_F(7, 1.0, z, "sum") - cmath.exp(1j * z)) < 1e-13


def test_z_zero():
    assert classical_F(12, 3.0, 0) == 1
    assert classical_F(12, 3.0, 0, "sum") == 1


@pytest.mark.parametrize("z", [0.5, 1 + 1j, 3])
def test_forms_agree(z):
    p, s = classical_F(25, 2.0, z), classical_F(25, 2.0, z, "sum")
    assert abs(p - s) / abs(p) < 1e-9


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 30), st.floats(1, 4), st.floats(-3, 3))
def test_conjugation_symmetry(n, a, t):
    assert abs(classical_F(n, a, -t) - np.conj(classical_F(n, a, t))) < 1e-12 * max(1, abs(classical_F(n, a, t)))


def test_fractional_exponential_is_classical():
    for z in (0.4, -0.8 + 0.3j):
        spec = SupershiftSpec(31, 2.0, EXP)
        assert abs(fractional_F(spec, z) - classical_F(31, 2.0, z, "sum")) < 1e-12


def test_fractional_at_zero():
    for fam in (EXP, ML):
        assert fractional_F(SupershiftSpec(15, 2.0, fam), 0) == pytest.approx(complex(fam.weight(0)))


def test_fractional_ml_termwise():
    # displayed Mittag-Leffler weight: (1/(q pi)) w^{1/q - 1} exp(-w^{1/q}) with w = -i lambda_j z
    spec = SupershiftSpec(9, 1.5, ML)
    z = 0.35
    cs = spec.coefficients
    mpmath.mp.dps = 40
    total = mpmath.mpc(0)
    for c, lam in zip(cs.C_exact, cs.lambdas):
        w = -1j * lam * z
        total += mpmath.mpf(c.numerator) / c.denominator * (2 / mpmath.pi) * w * mpmath.exp(-(w**2))
    assert abs(fractional_F(spec, z) - complex(total)) < 1e-13


def test_a_one_exact():
    grid = disk_grid(1.0)
    assert supershift_error(SupershiftSpec(33, 1.0, EXP), grid) < 1e-14


def test_exponential_convergence_trend():
    grid = disk_grid(1.0)
    e21 = supershift_error(SupershiftSpec(21, 2.0, EXP), grid)
    e161 = supershift_error(SupershiftSpec(161, 2.0, EXP), grid)
    assert e161 < e21


def test_ml_convergence_trend():
    grid = disk_grid(0.5)
    errs = [supershift_error(SupershiftSpec(n, 1.5, ML), grid) for n in (21, 81, 321)]
    assert errs[0] > errs[1] > errs[2]


def test_grid_outside_admissible_disk():
    with pytest.raises(DomainError, match="r/a"):
        supershift_error(SupershiftSpec(11, 2.0, gamma_shifted_family()), [0.1])


def test_kernel_exponential_is_classical():
    z = 0.7 - 0.2j
    assert abs(kernel_supershift(SupershiftSpec(21, 2.0, EXP), z) - classical_F(21, 2.0, z, "sum")) < 1e-12


def test_kernel_at_zero():
    assert kernel_supershift(SupershiftSpec(21, 2.0, ML), 0) == pytest.approx(ML.phi(0))


def test_kernel_convergence():
    target = mittag_leffler_eval(2, 1, 1j * 2 * 0.5)
    assert abs(kernel_target(SupershiftSpec(11, 2.0, ML), 0.5) - target) < 1e-14
    errs = [abs(kernel_supershift(SupershiftSpec(n, 2.0, ML), 0.5) - target) for n in (11, 41, 161)]
    assert errs[0] > errs[1] > errs[2]


def test_derivative_moment_k0():
    for n in (3, 50, 301):
        assert derivative_moment(n, 2.5, 0) == 1


def test_derivative_moment_k1_exact():
    for n in range(1, 120):
        for a in (1.0, 1.5, 2.0, 4.0):
            assert derivative_moment(n, a, 1) == 1j * a


def test_derivative_moment_matches_product_derivative():
    # second derivative of [cos(z/n) + i a sin(z/n)]^n at 0 is -(a^2 + (1 - a^2)/n)
    for n in (5, 17, 64):
        a = Fraction(3, 2)
        ref = -(a * a + (1 - a * a) / n)
        assert derivative_moment(n, 1.5, 2) == pytest.approx(float(ref), rel=1e-15)


def test_derivative_moment_limit():
    g51 = abs(derivative_moment(51, 2.0, 2) + 4)
    g401 = abs(derivative_moment(401, 2.0, 2) + 4)
    assert g401 < g51
