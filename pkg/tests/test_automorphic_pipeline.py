import io
import json
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rankin import automorphic_pipeline as ap
from rankin.eisenstein import DomainSample, UpperHalfPoint
from rankin.errors import DataValidationError, DivergenceError, DomainError, PoleError
from rankin.trilinear import SpectralPoint, spherical_trilinear_closed

# bundled synthetic form, s = 2: frozen values of the fundamental-domain quadrature
TR_AUT_MOCK_2 = 2.3274643562947363e-13
PETERSSON_MOCK = 7.557673982075112e-14


@pytest.fixture(scope="module")
def mock():
    return ap.mock_form()


def test_mock_form_loads(mock):
    assert mock.R == 9.5 and mock.M == 60 and mock.coeffs[0] == 1.0
    assert "synthetic" in mock.source.lower()
    assert mock.lam == 19.0


def _coeffs(n=60):
    return [1.0] + [0.1] * (n - 1)


def test_validation():
    with pytest.raises(DataValidationError):
        ap.MaassFormData(9.5, [2.0] + [0.1] * 59)
    with pytest.raises(DataValidationError):
        ap.MaassFormData(9.5, _coeffs(20))
    with pytest.raises(DataValidationError):
        ap.MaassFormData(9.5, _coeffs(), parity="odd")
    with pytest.raises(DataValidationError):
        ap.MaassFormData(-1.0, _coeffs())
    with pytest.raises(DataValidationError):
        ap.MaassFormData(9.5, _coeffs()[:-1] + [float("nan")])


def test_json_round_trip(tmp_path, mock):
    p = tmp_path / "f.json"
    p.write_text(mock.to_json())
    assert ap.MaassFormData.from_json(p) == mock
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"R": 1.0, "coeffs": _coeffs()}))
    with pytest.raises(DataValidationError):
        ap.MaassFormData.from_json(bad)
    with pytest.raises(DataValidationError):
        ap.MaassFormData.from_json(tmp_path / "missing.json")


def test_row_matches_pointwise(mock):
    xs = np.array([-0.4, 0.0, 0.3])
    row = ap.maass_row(mock, xs, 1.1)
    pts = [ap.maass_eval(mock, UpperHalfPoint(x, 1.1)) for x in xs]
    assert np.allclose(row, pts, rtol=1e-13, atol=0)
    assert np.allclose(row, ap.maass_row(mock, -xs, 1.1))  # even form


def test_fundamental_domain_volume():
    vol = ap.fundamental_domain_quad(lambda xs, y: np.ones_like(xs))
    assert abs(vol - math.pi / 3) < 1e-12


def test_fundamental_domain_power_of_y():
    # int_F y^{-2} dx dy / y^2 = (1/3) int (1 - x^2)^{-3/2} dx = 2 / (3 sqrt 3)
    val = ap.fundamental_domain_quad(lambda xs, y: np.full_like(xs, y ** -2.0))
    assert abs(val - 2.0 / (3.0 * math.sqrt(3.0))) < 1e-10


def test_fundamental_domain_rejects_growth():
    from rankin.errors import TailError
    with pytest.raises(TailError):
        ap.fundamental_domain_quad(lambda xs, y: np.full_like(xs, y))


def test_tr_aut_frozen(mock):
    val = ap.tr_aut(mock, mock, 2.0)
    assert abs(val - TR_AUT_MOCK_2) < 1e-7 * TR_AUT_MOCK_2
    pet = ap.tr_aut(mock, mock, 2.0, eisenstein=False)
    assert abs(pet - PETERSSON_MOCK) < 1e-7 * PETERSSON_MOCK


def test_tr_aut_pole(mock):
    with pytest.raises(PoleError):
        ap.tr_aut(mock, mock, 1.0)


def test_dirichlet_series(mock):
    d = ap.rankin_dirichlet_series(mock, mock, 2.0)
    a = np.array(mock.coeffs)
    assert abs(d.value - 2 * np.sum(a * a / np.arange(1, 61) ** 2.0)) < 1e-14
    assert d.tail_estimate > 0 and d.terms == 60
    sgn = ap.rankin_dirichlet_series(mock, mock, 2.0, "signed")
    assert sgn.value == 0 and "even-forms-cancel" in sgn.flags
    with pytest.raises(DivergenceError):
        ap.rankin_dirichlet_series(mock, mock, 1.0)
    with pytest.raises(DomainError):
        ap.rankin_dirichlet_series(mock, mock, 2.0, "twisted")


def test_archimedean_factor(mock):
    s = 2.0 + 0.5j
    assert ap.archimedean_factor(mock, mock, s) == spherical_trilinear_closed(
        SpectralPoint(s, 19.0, 19.0), continued=True)


def test_bound_pipeline_small():
    rep = ap.bound_pipeline(0.75, [10.0, 5.0], sample=DomainSample(nx=16, ny=12))
    assert rep.t_grid == (5.0, 10.0) and rep.eps == 0.25
    assert set(rep.comparisons) == {"congruence_11/8", "sl2z_4/3", "convexity"}
    assert rep.regime in ("sl2z_4/3", "congruence_11/8", "convexity", "above-convexity")
    buf = io.StringIO()
    rep.write_csv(buf)
    assert buf.getvalue().startswith("t,sigma,sup_E_v,index,ratio\n")
    with pytest.raises(DomainError):
        ap.bound_pipeline(0.5, [5.0])
    with pytest.raises(DomainError):
        ap.bound_pipeline(0.75, [])


@pytest.mark.parametrize("points,expected", [
    ([(Fraction(3, 4), Fraction(7, 12)), (Fraction(9, 10), Fraction(13, 30))], Fraction(5, 6)),
    ([(Fraction(3, 4), Fraction(5, 8)), (Fraction(1), Fraction(3, 8))], Fraction(7, 8)),
    ([(Fraction(1), Fraction(0))], Fraction(1)),
])
def test_pl_reference_values(points, expected):
    out = ap.pl_interpolate(points)
    assert out.sigma == Fraction(1, 2) and out.exponent == expected
    assert isinstance(out.exponent, Fraction)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 300), st.integers(51, 100), st.integers(51, 100))
def test_pl_linear_law_exact(c, s1, s2):
    if s1 == s2:
        return
    c, s1, s2 = Fraction(c, 100), Fraction(s1, 100), Fraction(s2, 100)
    out = ap.pl_interpolate([(s1, c - s1), (s2, c - s2)])
    assert out.exponent == c - Fraction(1, 2)


@settings(max_examples=30, deadline=None)
@given(st.integers(51, 100), st.integers(0, 200))
def test_pl_single_point_bound(sig, e):
    sig, e = Fraction(sig, 100), Fraction(e, 100)
    assert ap.pl_interpolate([(sig, e)]).exponent == e + 2 * sig - 1


def test_pl_rejects_nonconvex_and_empty():
    with pytest.raises(ap.ConvexityError):
        ap.pl_interpolate([(Fraction(6, 10), 1), (Fraction(7, 10), 0), (Fraction(8, 10), 1),
                           (Fraction(9, 10), Fraction(1, 2))])
    with pytest.raises(DomainError):
        ap.pl_interpolate([])
    with pytest.raises(DomainError):
        ap.pl_interpolate([(Fraction(1, 4), 1)])


def test_pl_without_symmetry():
    out = ap.pl_interpolate([(Fraction(0), Fraction(1)), (Fraction(1), Fraction(0))], "none")
    assert out.exponent == Fraction(1, 2)
