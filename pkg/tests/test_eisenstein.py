import io
import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rankin.eisenstein import (DomainSample, UpperHalfPoint, constant_term, eval_fourier_expansion,
                               eval_fourier_row, eval_lattice_sum, scattering, siegel_weight, supnorm_scan,
                               weighted_sup, weighted_sup_E_v)
from rankin.errors import DomainError, PoleError, SlowConvergenceError, WeightError

E_FROZEN = 4.872352704328884  # E(2i, 2), lattice and Fourier routes agree to 1.5e-13


def mp_eisenstein(x, y, s, terms=60):
    # independent oracle: Fourier expansion at 30 digits with mpmath's Bessel K
    mp.mp.dps = 30
    s = mp.mpc(s)
    xi = lambda w: mp.pi ** (-w / 2) * mp.gamma(w / 2) * mp.zeta(w)
    val = y ** s + xi(2 * s - 1) / xi(2 * s) * y ** (1 - s)
    acc = 0
    for n in range(1, terms):
        sig = sum(mp.mpf(d) ** (1 - 2 * s) for d in range(1, n + 1) if n % d == 0)
        acc += n ** (s - 0.5) * sig * mp.besselk(s - 0.5, 2 * mp.pi * n * y) * mp.cos(2 * mp.pi * n * x)
    return complex(val + 4 * mp.sqrt(y) / xi(2 * s) * acc)


def test_frozen_value():
    z = UpperHalfPoint(0.0, 2.0)
    assert abs(eval_lattice_sum(z, 2.0) - E_FROZEN) < 1e-12
    assert abs(eval_fourier_expansion(z, 2.0) - E_FROZEN) < 1e-12


@pytest.mark.parametrize("x,y,s", [(0.1, 1.3, 1.5 + 2j), (-0.4, 0.95, 2.2 - 7j), (0.25, 3.0, 1.2 + 10j)])
def test_against_mpmath_oracle(x, y, s):
    ref = mp_eisenstein(x, y, s)
    assert abs(eval_fourier_expansion(UpperHalfPoint(x, y), s) - ref) < 1e-10 * abs(ref)
    assert abs(eval_lattice_sum(UpperHalfPoint(x, y), s) - ref) < 1e-10 * abs(ref)


@settings(max_examples=20, deadline=None)
@given(st.floats(-0.5, 0.5), st.floats(0.9, 2.5), st.floats(1.1, 2.5), st.floats(-15, 15))
def test_two_routes_agree(x, y, sig, t):
    z, s = UpperHalfPoint(x, y), complex(sig, t)
    a, b = eval_lattice_sum(z, s), eval_fourier_expansion(z, s)
    assert abs(a - b) <= 1e-9 * max(abs(b), 1.0)


@settings(max_examples=20, deadline=None)
@given(st.floats(-0.5, 0.5), st.floats(0.87, 1.2), st.floats(0.5, 20))
def test_modular_invariance_on_critical_line(x, y, t):
    if x * x + y * y < 1.0:
        return
    z, s = UpperHalfPoint(x, y), complex(0.5, t)
    e = eval_fourier_expansion(z, s)
    assert abs(eval_fourier_expansion(z.act(0, -1, 1, 0), s) - e) < 1e-9 * max(1.0, abs(e))
    assert abs(eval_fourier_expansion(UpperHalfPoint(x + 1, y), s) - e) < 1e-12 * max(1.0, abs(e))


def test_centre_of_strip_is_a_pole_of_the_route():
    with pytest.raises(PoleError):
        eval_fourier_expansion(UpperHalfPoint(0.0, 1.0), 0.5)


def test_functional_equation():
    z = UpperHalfPoint(0.2, 1.1)
    for s in (0.3 + 4j, 0.7 - 9j):
        lhs = eval_fourier_expansion(z, s)
        rhs = scattering(s) * eval_fourier_expansion(z, 1 - s)
        assert abs(lhs - rhs) < 1e-10 * abs(lhs)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.5, 200))
def test_scattering_unitary(t):
    assert abs(abs(scattering(0.5 + 1j * t)) - 1) < 1e-10


def test_scattering_matches_mpmath():
    mp.mp.dps = 25
    s = 0.8 + 3j
    xi = lambda w: mp.pi ** (-w / 2) * mp.gamma(w / 2) * mp.zeta(w)
    assert abs(scattering(s) - complex(xi(2 * s - 1) / xi(2 * s))) < 1e-12


def test_constant_term():
    s = 1.5 + 1j
    y = 2.0
    assert abs(constant_term(y, s) - (y ** s + scattering(s) * y ** (1 - s))) < 1e-13


def test_row_matches_points():
    xs = np.array([-0.3, 0.0, 0.41])
    row = eval_fourier_row(xs, 1.2, 0.5 + 12j)
    pts = [eval_fourier_expansion(UpperHalfPoint(x, 1.2), 0.5 + 12j) for x in xs]
    assert np.allclose(row, pts, rtol=1e-13, atol=0)


def test_lattice_needs_convergence_margin():
    with pytest.raises(SlowConvergenceError):
        eval_lattice_sum(UpperHalfPoint(0, 1), 1.05)


def test_fourier_needs_height():
    with pytest.raises(DomainError):
        eval_fourier_expansion(UpperHalfPoint(0.0, 0.3), 2.0)


def test_reduce_to_fundamental_domain():
    z = UpperHalfPoint(3.7, 0.05).reduce()
    assert z.in_fundamental_domain()
    s = 1.6 + 1j
    w = UpperHalfPoint(0.31, 0.4)
    assert abs(eval_lattice_sum(w, s) - eval_fourier_expansion(w.reduce(), s)) < 1e-9 * abs(eval_lattice_sum(w, s))


def test_weighted_sup_and_scan():
    sample = DomainSample(nx=16, ny=12)
    sup, (x, y) = weighted_sup(0.5 + 10j, lambda y: y ** -0.5, sample)
    assert sup > 0 and -0.5 <= x <= 0.5 and y >= math.sqrt(3) / 2 - 1e-12
    rep = supnorm_scan([10.0, 20.0, 40.0], 0.5, sample)
    assert len(rep.weighted_sup) == 3 and rep.fit.fitted_exponent < 0.5
    buf = io.StringIO()
    rep.write_csv(buf)
    assert buf.getvalue().splitlines()[0] == "t,sigma,weighted_sup,argmax_x,argmax_y"


def test_siegel_weight():
    v = siegel_weight(0.5)
    assert v(0.9) == 1.0 and abs(v(4.0) - 4.0 ** -0.75) < 1e-15


def test_weighted_sup_monotone_in_eps():
    # a larger eps gives a heavier weight on the cusp, so the sup cannot shrink
    sample = DomainSample(nx=16, ny=12)
    vals = [weighted_sup_E_v(0.5 + 20j, e, sample)[0] for e in (0.05, 0.3, 0.6, 0.95)]
    assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))


def test_weighted_sup_eps_range():
    with pytest.raises(WeightError):
        weighted_sup_E_v(0.5 + 20j, 1.0)
    with pytest.raises(WeightError):
        weighted_sup_E_v(0.75 + 20j, 0.0)
