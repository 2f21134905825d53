import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import bessel_j_normalized
from sonine.errors import DivergenceWarning, PochhammerZero, PoleParameter
from sonine.hypergeom import (
    MultiplicityB,
    bessel_1d,
    bessel_B,
    dunkl_kernel_1d,
    dunkl_kernel_1d_coeffs,
    dunkl_operator_1d,
    hyp0f1,
)


def test_multiplicity_invariants():
    k = MultiplicityB(0.5, 2.0)
    assert k.alpha == 0.5
    assert k.mu(3) == pytest.approx(0.5 + 4 + 0.5)
    assert k.shifted(1.5) == MultiplicityB(2.0, 2.0)
    with pytest.raises(ValueError):
        MultiplicityB(-0.1, 1)
    with pytest.raises(ValueError):
        MultiplicityB(0.1, 0)


def test_zero_argument_is_one():
    sv = hyp0f1(1.5, 2.0, [0, 0], [0.3, 1.1])
    assert sv.value == 1
    assert bessel_B(MultiplicityB(0.2, 1.0), [0.0, 0.0], [1.0, 2.0]).value == 1


def test_rank_one_sinc():
    z = -((math.pi / 2) ** 2) / 4
    assert hyp0f1(1.0, 1.5, [z], [1.0]).value.real == pytest.approx(2 / math.pi, abs=1e-14)


def test_symmetric_in_arguments():
    z, w = np.array([0.3, -0.7]), np.array([1.1, 0.4])
    a = hyp0f1(2.0, 2.5, z, w).value
    b = hyp0f1(2.0, 2.5, w, z).value
    assert a == pytest.approx(b, rel=1e-14)


def test_bessel_b_symmetries():
    k = MultiplicityB(0.4, 0.8)
    z, w = np.array([0.9, -0.4]), np.array([0.3, 1.2])
    base = bessel_B(k, z, w).value
    assert bessel_B(k, w, z).value == pytest.approx(base, rel=1e-13)
    assert bessel_B(k, z[::-1] * np.array([-1, 1]), w).value == pytest.approx(base, rel=1e-13)


def test_two_forms_of_bessel_b_agree():
    # 0F1(mu; z^2/4, w^2) equals 0F1(mu; z^2/2, w^2/2)
    k = MultiplicityB(0.3, 1.5)
    z, w = np.array([1.2, 0.5]), np.array([0.7, -1.0])
    a = hyp0f1(k.alpha, k.mu(2), z**2 / 4, w**2).value
    b = hyp0f1(k.alpha, k.mu(2), z**2 / 2, w**2 / 2).value
    assert a == pytest.approx(b, rel=1e-13)


def test_pochhammer_zero_raises():
    with pytest.raises(PochhammerZero):
        hyp0f1(1.0, -1.0, [0.5], [1.0])
    # mu = (j-1)/alpha - m for j = 2, m = 0 at alpha = 2
    with pytest.raises(PochhammerZero):
        hyp0f1(2.0, 0.5, [0.5, 0.2], [1.0, 1.0], max_weight=4)


def test_divergence_flag_on_large_argument():
    with warnings.catch_warnings(record=True) as rec:
        warnings.simplefilter("always")
        sv = hyp0f1(1.0, 1.0, [400.0], [1.0], max_weight=6)
    assert sv.diverging
    assert any(issubclass(w.category, DivergenceWarning) for w in rec)


@pytest.mark.parametrize("mu", [1.0, 2.5, 1 + 0.5j])
def test_shell_decay(mu):
    rng = np.random.default_rng(3)
    for _ in range(5):
        z = rng.uniform(-2, 2, 2)
        w = rng.uniform(-2, 2, 2)
        sv = hyp0f1(2.0, mu, z, w)
        assert sv.last_shell < 1e-12 * abs(sv.value)


def test_batch_matches_pointwise():
    k = MultiplicityB(0.5, 1.0)
    X = np.array([[0.1, 0.2], [0.5, 0.9], [1.3, 0.0]])
    batch = bessel_B(k, [0.7, 1.1], X).value
    single = [bessel_B(k, [0.7, 1.1], x).value for x in X]
    assert np.allclose(batch, single, rtol=1e-14)


@given(st.lists(st.floats(0, 2), min_size=2, max_size=2),
       st.lists(st.floats(0, 2), min_size=2, max_size=2),
       st.floats(0, 2), st.floats(0.2, 3))
def test_bessel_b_real_and_positive(z, w, k1, k2):
    sv = bessel_B(MultiplicityB(k1, k2), z, w)
    assert abs(sv.value.imag) < 1e-14 * abs(sv.value)
    assert sv.value.real >= 1.0 - 1e-14


def test_bessel_1d_examples():
    assert bessel_1d(0.3, 0.0) == 1
    assert bessel_1d(0.5, math.pi) == pytest.approx(0.0, abs=1e-15)
    assert bessel_1d(-0.5, 1.0) == pytest.approx(math.cos(1.0), abs=1e-15)
    with pytest.raises(PoleParameter):
        bessel_1d(-2, 1.0)


@given(st.floats(-0.9, 5), st.one_of(st.just(0.0), st.floats(1e-3, 12)))
def test_bessel_1d_against_scipy(a, z):
    ref = bessel_j_normalized(a, np.array([z]))[0]
    assert bessel_1d(a, z) == pytest.approx(ref, rel=1e-9, abs=1e-11)


def test_hyp0f1_rank_one_is_bessel_1d():
    z = np.linspace(-4, 4, 9)
    vals = hyp0f1(1.0, 1.8, (-(z**2) / 4)[:, None], [1.0]).value
    assert np.allclose(vals, bessel_1d(0.8, z), rtol=1e-12)


def test_dunkl_kernel_examples():
    assert dunkl_kernel_1d(0.7, 0.0, 1.3) == 1
    x = np.linspace(-2, 2, 7)
    assert np.allclose(dunkl_kernel_1d(0.0, x, 0.9), np.exp(0.9 * x), rtol=1e-14)
    k, z = 1.2, 0.8
    even = (dunkl_kernel_1d(k, x, z) + dunkl_kernel_1d(k, -x, z)) / 2
    assert np.allclose(even, bessel_1d(k - 0.5, 1j * x * z).real, rtol=1e-14)


@pytest.mark.parametrize("k", [0.0, 0.5, 1.3])
def test_dunkl_eigen_equation(k):
    z = 0.7 - 0.2j
    c = dunkl_kernel_1d_coeffs(k, z, 12)
    Tc = dunkl_operator_1d(c, k)
    assert np.allclose(Tc, z * c[:-1], atol=1e-9, rtol=0)


def test_kernel_coeffs_match_values():
    k, z = 0.9, 1.4
    c = dunkl_kernel_1d_coeffs(k, z, 40)
    x = np.linspace(-1, 1, 5)
    assert np.allclose(np.polyval(c[::-1], x).real, dunkl_kernel_1d(k, x, z), rtol=1e-13)
