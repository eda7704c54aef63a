import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracshift.errors import IncompatibleSpaceError, OutOfEnvelopeError
from fracshift.fock import (
    FockElement,
    basis_element,
    gram_matrix,
    inner_product,
    intertwining_check,
    kernel_eval,
    kernel_section,
    ladder_apply,
    quadrature_inner_product,
)
from fracshift.weights import exponential_family, gamma_shifted_family, mittag_leffler_family

EXP = exponential_family()
ML = mittag_leffler_family(2.0, 1.0)
FAMILIES = [EXP, ML]

points = st.complex_numbers(max_magnitude=1.2, allow_nan=False, allow_infinity=False)


def random_poly(rng, deg):
    return rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1)


@pytest.mark.parametrize("family", FAMILIES, ids=lambda f: f.name)
def test_basis_orthonormal(family):
    for n in range(15):
        for m in range(15):
            v = inner_product(basis_element(family, n, 14), basis_element(family, m, 14))
            assert abs(v - (n == m)) < 1e-12


@pytest.mark.parametrize("family", FAMILIES, ids=lambda f: f.name)
def test_reproducing_property(family):
    rng = np.random.default_rng(7)
    f = FockElement.from_coeffs(random_poly(rng, 8), family)
    w = 0.3 + 0.4j
    assert abs(inner_product(kernel_section(family, w), f) - f(w)) < 1e-12


def test_reproducing_property_all_degrees():
    rng = np.random.default_rng(8)
    for deg in range(0, 20, 3):
        f = FockElement.from_coeffs(random_poly(rng, deg), ML)
        for _ in range(20):
            w = complex(*rng.uniform(-1.5, 1.5, 2))
            val = inner_product(kernel_section(ML, w), f)
            assert abs(val - f(w)) <= 1e-10 * max(1.0, abs(f(w)))


def test_kernel_norm():
    w = 0.5 - 0.7j
    k = kernel_section(EXP, w)
    assert inner_product(k, k).real == pytest.approx(math.exp(abs(w) ** 2), rel=1e-13)
    ref = complex(mpmath.exp(abs(w) ** 4) * mpmath.erfc(-abs(w) ** 2))
    kk = kernel_section(ML, w)
    assert inner_product(kk, kk).real == pytest.approx(ref.real, rel=1e-12)


def test_incompatible_spaces():
    with pytest.raises(IncompatibleSpaceError):
        inner_product(basis_element(EXP, 1), basis_element(ML, 1))


def test_inner_product_conjugates_first_slot():
    f = FockElement.from_coeffs([1j, 0], EXP)
    g = FockElement.from_coeffs([1, 0], EXP)
    assert inner_product(f, g) == -1j


def test_kernel_exponential():
    for z, w in [(0.5 + 1j, 2 - 0.3j), (-1.5, 0.8j), (2 + 2j, 1 + 1j)]:
        ref = np.exp(z * np.conj(w))
        assert abs(kernel_eval(EXP, z, w) - ref) / abs(ref) < 1e-12


def test_kernel_at_zero_anchor():
    for fam in (EXP, ML, gamma_shifted_family()):
        assert kernel_eval(fam, 3 + 1j, 0) == pytest.approx(fam.phi(0))


@settings(max_examples=40, deadline=None)
@given(points, points)
def test_kernel_hermitian(z, w):
    assert abs(kernel_eval(ML, z, w) - np.conj(kernel_eval(ML, w, z))) < 1e-13


def test_kernel_envelope():
    with pytest.raises(OutOfEnvelopeError):
        kernel_eval(ML, 5, 5)


def test_kernel_expansion_matches_basis():
    z, w = 0.4 + 0.2j, -0.3 + 0.6j
    total = sum(basis_element(ML, n)(z) * np.conj(basis_element(ML, n)(w)) for n in range(65))
    assert abs(kernel_eval(ML, z, w) - total) < 1e-14


def test_gram_positive_semidefinite():
    rng = np.random.default_rng(9)
    for fam in FAMILIES:
        pts = rng.uniform(-1, 1, 6) + 1j * rng.uniform(-1, 1, 6)
        G = gram_matrix(fam, pts)
        assert np.allclose(G, G.conj().T, atol=1e-14)
        eig = np.linalg.eigvalsh(G)
        assert eig.min() >= -1e-10 * np.trace(G).real


def test_parseval():
    rng = np.random.default_rng(10)
    f = FockElement.from_coeffs(random_poly(rng, 9), ML)
    total = sum(abs(inner_product(f, basis_element(ML, n, 9))) ** 2 for n in range(10))
    assert f.norm() ** 2 == pytest.approx(total, rel=1e-12)


@pytest.mark.parametrize("n", range(7))
def test_quadrature_monomial_norms(n):
    f = FockElement.from_coeffs(np.eye(n + 1)[n], EXP)
    assert quadrature_inner_product(f, f).real == pytest.approx(math.factorial(n), rel=1e-6)


def test_quadrature_angular_orthogonality():
    for n in range(5):
        for m in range(5):
            if n != m:
                f = FockElement.from_coeffs(np.eye(6)[n], ML)
                g = FockElement.from_coeffs(np.eye(6)[m], ML)
                assert abs(quadrature_inner_product(f, g)) < 1e-8


def test_quadrature_matches_coefficients_ml():
    rng = np.random.default_rng(11)
    for _ in range(5):
        f = FockElement.from_coeffs(random_poly(rng, 6), ML)
        g = FockElement.from_coeffs(random_poly(rng, 6), ML)
        ref = inner_product(f, g)
        assert abs(quadrature_inner_product(f, g) - ref) / abs(ref) < 1e-6


def test_lower_annihilates_ground_state():
    assert np.all(ladder_apply("lower", [1, 0, 0], EXP) == 0)


@pytest.mark.parametrize("n", range(1, 8))
def test_raise_then_lower_exponential(n):
    e = np.eye(n)[n - 1]
    out = ladder_apply("lower", ladder_apply("raise", e, EXP), EXP)
    assert out[n - 1] == pytest.approx(n, rel=1e-14)
    assert np.count_nonzero(np.abs(out) > 1e-14) == 1


@pytest.mark.parametrize("family", [EXP, ML], ids=lambda f: f.name)
def test_commutator(family):
    n = 4
    e = np.eye(8)[n]
    rl = ladder_apply("raise", ladder_apply("lower", e, family), family)
    lr = ladder_apply("lower", ladder_apply("raise", e, family), family)
    diff = (rl[:9] - lr[:9])[n]
    p = family.phi
    assert diff == pytest.approx(p(n - 1) / p(n) - p(n) / p(n + 1), rel=1e-13)
    if family is EXP:
        assert diff == pytest.approx(-1, rel=1e-13)


def test_ladder_bad_direction():
    with pytest.raises(ValueError):
        ladder_apply("sideways", [1], EXP)


@pytest.mark.parametrize("family", [EXP, ML, gamma_shifted_family()], ids=lambda f: f.name)
def test_intertwining_unit_vectors(family):
    for n in range(10):
        assert intertwining_check(family, np.eye(10)[n], 11) < 1e-14


def test_intertwining_zero_and_random():
    assert intertwining_check(EXP, np.zeros(5), 6) == 0
    rng = np.random.default_rng(12)
    assert intertwining_check(EXP, random_poly(rng, 15), 16) < 1e-13
