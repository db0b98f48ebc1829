import io
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rankin.archimedean_index import (ExponentFit, c_sequence, c_sequence_detail, c_sequence_oracle,
                                      fit_exponent, index_bruteforce, index_scan, index_value,
                                      l1_exponent_scan, write_index_csv)
from rankin.errors import DomainError, StripError
from rankin.mathkit import QuadratureSpec
from rankin.principal_series import from_coefficients
from rankin.trilinear import SpectralPoint, tr_rs_fourier

# c^(0), c^(2), c^(4) at s = 3/4, lambda = (1, 2); frozen from the Richardson construction,
# confirmed against the direct singular quadrature
C_FROZEN = [-0.20217462381982698 + 6.331550283198407j, -2.1681481733305894 + 5.87264882055481j,
            -3.524743991305577 + 4.938048863019446j]

INDEX_FROZEN = [(0.55, 6.062229736749476), (0.7, 2.312362375992945), (0.85, 1.0220937837480806)]


def test_c_sequence_frozen():
    c = c_sequence(SpectralPoint(0.75, 1.0, 2.0), 8)
    assert np.abs(c.at(np.array([0, 2, 4])) - C_FROZEN).max() < 1e-12


def test_c_sequence_odd_entries_zero_and_tail():
    c = c_sequence(SpectralPoint(0.6 + 4j), 16)
    assert np.all(c.values[c.n % 2 != 0] == 0)
    assert c.tail_bound == math.inf and c.tail_sup > 0


@pytest.mark.parametrize("s,l1,l2", [(0.7 + 2j, 0.5, -0.5), (0.55, 0.0, 0.0)])
def test_c_sequence_against_quadrature_oracle(s, l1, l2):
    pt = SpectralPoint(s, l1, l2)
    c = c_sequence(pt, 8)
    o = c_sequence_oracle(pt, [0, 4], QuadratureSpec(abs_tol=1e-9, max_level=9))
    assert np.abs(c.at(np.array([0, 4])) - o).max() < 1e-8


def test_richardson_error_estimate_is_conservative():
    # the estimate compares against the previous column, so it dominates the true change
    pt = SpectralPoint(0.65 + 30j, 0.5, 1.0)
    a, err = c_sequence_detail(pt, 64)
    b, _ = c_sequence_detail(pt, 64, M0=2048)
    diff = np.abs(a.values - b.values).max()
    assert diff <= err and diff < 1e-9 * np.abs(a.values).max()


def test_strip_required():
    with pytest.raises(StripError):
        c_sequence(SpectralPoint(1.0), 8)
    with pytest.raises(StripError):
        index_value(SpectralPoint(0.0 + 1j))


@pytest.mark.parametrize("sigma,value", INDEX_FROZEN)
def test_index_frozen(sigma, value):
    r = index_value(SpectralPoint(sigma))
    assert abs(r.index - value) < 1e-10 * value
    assert r.argmax_mode == 0 and not r.below_barrier


def test_below_barrier_flag():
    assert index_value(SpectralPoint(0.4 + 3j)).below_barrier


@pytest.mark.parametrize("s,lam", [(0.55 + 5j, (0.0, 0.0)), (0.85 + 20j, (1.0, 2.0))])
def test_index_matches_bruteforce(s, lam):
    pt = SpectralPoint(s, *lam)
    v = index_value(pt)
    b, ascent = index_bruteforce(pt, return_ascent=True)
    assert abs(v.index - b.index) <= 1e-8 * b.index
    assert ascent <= b.index * (1 + 1e-9)
    assert v.argmax_mode == b.argmax_mode


def test_bruteforce_deterministic_per_seed():
    pt = SpectralPoint(0.7 + 5j, 1.0, 2.0)
    a = index_bruteforce(pt, seed=5, return_ascent=True)
    b = index_bruteforce(pt, seed=5, return_ascent=True)
    assert a[1] == b[1] and a[0].index == b[0].index


def test_bruteforce_caps_truncation():
    with pytest.raises(DomainError):
        index_bruteforce(SpectralPoint(0.7), N=128)


def test_extremizer_attains_index():
    pt = SpectralPoint(0.7 + 20j)
    v = index_value(pt)
    m = v.argmax_mode
    f = from_coefficients(0.0, {m: 1.0})
    val = abs(tr_rs_fourier(f, f, pt).value) / f.norm ** 2
    assert abs(val - v.index) < 1e-9 * v.index


@settings(max_examples=15, deadline=None)
@given(st.floats(0.52, 0.95), st.floats(-30, 30))
def test_index_under_conjugation(sigma, t):
    # with lambda = 0, Tr at conj(s) is the conjugate pairing, so the index is even in t
    a = index_value(SpectralPoint(complex(sigma, t))).index
    b = index_value(SpectralPoint(complex(sigma, -t))).index
    assert abs(a - b) < 1e-9 * a


def test_fit_exponent_recovers_power_law():
    ts = np.geomspace(1, 100, 8)
    fit = fit_exponent(ts, 3.0 * (1 + ts) ** -0.4)
    assert abs(fit.fitted_exponent + 0.4) < 1e-12 and abs(fit.fitted_constant - 3.0) < 1e-10
    assert fit.residual < 1e-12


def test_fit_exponent_single_point_degenerate():
    fit = fit_exponent([5.0], [1.0])
    assert fit.degenerate and math.isnan(fit.fitted_exponent)


def test_exponent_fit_requires_increasing_grid():
    with pytest.raises(DomainError):
        ExponentFit(((2.0, 1.0), (1.0, 1.0)), 0.0, 1.0, 0.0)


def test_index_scan_small():
    fit, results = index_scan(0.75, [2.0, 1.0, 4.0])
    assert [r.pt.t for r in results] == [1.0, 2.0, 4.0]
    assert fit.floor > 0 and not fit.degenerate
    with pytest.raises(DomainError):
        index_scan(0.75, [])


def test_l1_scan_exponent_near_half():
    fit = l1_exponent_scan(1.0, np.geomspace(10, 1000, 12))
    assert 0.4 < fit.fitted_exponent <= 0.55


def test_write_index_csv():
    buf = io.StringIO()
    write_index_csv([index_value(SpectralPoint(0.7 + 1j))], buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "sigma,t,lambda1,lambda2,index,argmax_mode,tail_bound" and len(lines) == 2
