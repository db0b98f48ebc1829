import io
import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rankin.circle_harmonics import (CoefficientSequence, PowerKernelSpec, argmax_mode, coeff_quadrature_oracle,
                                     correlation_coeffs, cos_power_coeffs, cos_power_coeffs_reflected,
                                     product_coeffs, seq_norms, sin_power_coeffs, write_sequence_csv)
from rankin.errors import DivergenceError, DomainError


def mp_cos_coeff(w, n):
    # (1/2pi) int_0^{2pi} |cos t|^w e^{-int} dt at 30 digits, split at the zeros of cos
    mp.mp.dps = 30
    f = lambda t: mp.power(abs(mp.cos(t)), w) * mp.exp(-1j * n * t)
    pts = [0, mp.pi / 2, 3 * mp.pi / 2, 2 * mp.pi]
    return complex(mp.quad(f, pts) / (2 * mp.pi))


@pytest.mark.parametrize("w,n", [(0.5, 0), (0.5, 4), (-0.5 + 3j, 2), (1.7 - 10j, 12), (0.2 + 25j, 30)])
def test_against_mpmath_oracle(w, n):
    c = cos_power_coeffs(w, 32)
    assert abs(c[n] - mp_cos_coeff(w, n)) < 1e-12


def test_abs_cos_closed_forms():
    c = cos_power_coeffs(1.0, 16)
    assert abs(c[0] - 2 / math.pi) < 1e-14
    assert abs(c[2] - 2 / (3 * math.pi)) < 1e-14
    # |cos t| = 2/pi - (4/pi) sum (-1)^k cos(2kt)/(4k^2 - 1)
    for k in range(1, 8):
        assert abs(c[2 * k] - (-1) ** (k + 1) * 2 / (math.pi * (4 * k * k - 1))) < 1e-14


def test_even_integer_exponent_is_finite_trig_polynomial():
    # cos^2 t = (1 + cos 2t)/2
    c = cos_power_coeffs(2.0, 10)
    assert abs(c[0] - 0.5) < 1e-15 and abs(c[2] - 0.25) < 1e-15 and abs(c[-2] - 0.25) < 1e-15
    assert np.all(np.abs(c.values[np.abs(c.n) > 2]) < 1e-15)


def test_zero_exponent_is_delta():
    c = cos_power_coeffs(0.0, 6)
    assert abs(c[0] - 1) < 1e-14 and np.count_nonzero(c.values) == 1 and c.tail_bound == 0


@settings(max_examples=60, deadline=None)
@given(st.floats(-0.85, 1.9), st.floats(-40, 40))
def test_reflected_form_agrees(re, im):
    w = complex(re, im)
    if abs(w.imag) < 1e-6 and abs(w.real - round(w.real)) < 1e-6 and round(w.real) % 2 == 0:
        return
    a = cos_power_coeffs(w, 64)
    b = cos_power_coeffs_reflected(w, 64)
    ref = np.abs(a.values[64::2]).max()
    assert np.abs(a.values[64::2] - b).max() <= 1e-11 * ref


@settings(max_examples=40, deadline=None)
@given(st.floats(-0.9, 2.0), st.floats(-50, 50))
def test_parity_and_odd_modes(re, im):
    c = cos_power_coeffs(complex(re, im), 20)
    assert np.allclose(c.values, c.values[::-1], rtol=0, atol=0)
    assert np.all(c.values[c.n % 2 != 0] == 0)


def test_oracle_grid():
    n = np.arange(-32, 33)
    for w in (-0.89, -0.3 + 40j, 2.0, 1.1 - 50j):
        c = cos_power_coeffs(w, 32)
        o = coeff_quadrature_oracle(PowerKernelSpec(w), n)
        assert np.abs(c.values - o).max() < 1e-9


def test_sin_power_shift():
    w = 0.4 + 2j
    c, s = cos_power_coeffs(w, 12), sin_power_coeffs(w, 12)
    o = coeff_quadrature_oracle(PowerKernelSpec(w, "sin_power"), s.n)
    assert np.abs(s.values - o).max() < 1e-10
    assert np.allclose(s.values, c.values * np.exp(1j * math.pi * c.n / 2), atol=1e-15)


def test_divergent_exponent():
    with pytest.raises(DivergenceError):
        cos_power_coeffs(-1.0)
    with pytest.raises(DivergenceError):
        PowerKernelSpec(-1.2)


def test_tail_bound_infinite_when_not_summable():
    assert cos_power_coeffs(-0.5, 64).tail_bound == math.inf
    assert math.isfinite(cos_power_coeffs(0.5, 64).tail_bound)


def test_correlation_is_pointwise_product():
    a = CoefficientSequence(np.array([1, 2j, 3, 0, 1]), "none")
    b = CoefficientSequence(np.array([0.5, 1, 2, 1j, 0]), "none")
    c = correlation_coeffs(a, b)
    assert np.allclose(c.values, 2 * math.pi * a.values * b.values[::-1])


def test_correlation_matches_integral():
    rng = np.random.default_rng(1)
    a = CoefficientSequence(rng.normal(size=9) + 1j * rng.normal(size=9))
    b = CoefficientSequence(rng.normal(size=9) + 1j * rng.normal(size=9))
    c = correlation_coeffs(a, b)
    t = 0.7
    p = np.linspace(0, 2 * math.pi, 4096, endpoint=False)
    direct = np.mean(a.evaluate(t + p) * b.evaluate(p)) * 2 * math.pi
    assert abs(c.evaluate(t) - direct) < 1e-10


def test_product_is_convolution():
    a = CoefficientSequence(np.array([0, 1, 0]))
    b = CoefficientSequence(np.array([0, 1, 0]))
    assert np.allclose(product_coeffs(a, b).values, [0, 0, 1, 0, 0])
    t = np.linspace(0, 6, 5)
    x = CoefficientSequence(np.array([1, 2, 3]))
    y = CoefficientSequence(np.array([1j, 0, 1]))
    assert np.allclose(product_coeffs(x, y).evaluate(t), x.evaluate(t) * y.evaluate(t))


def test_norms_and_argmax():
    c = CoefficientSequence(np.array([3, 0, 1, 0, -3j]))
    l1, l2, sup, arg = seq_norms(c)
    assert (l1, sup) == (7.0, 3.0) and abs(l2 - math.sqrt(19)) < 1e-15
    assert arg == 2  # tie at |n| = 2 resolved to positive n
    assert argmax_mode(np.array([0, 1, 1]), np.array([-1, 0, 1])) == 0


def test_sequence_validation():
    with pytest.raises(DomainError):
        CoefficientSequence(np.zeros(4))
    with pytest.raises(DomainError):
        CoefficientSequence(np.zeros(5), "weird")


def test_csv_writer():
    buf = io.StringIO()
    write_sequence_csv(CoefficientSequence(np.array([1, 2j, 3])), buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "n,re,im" and lines[1] == "-1,1.0,0.0" and len(lines) == 4
