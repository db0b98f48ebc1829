"""The automorphic side: Maass forms from data, the fundamental-domain
Rankin-Selberg integral, the Dirichlet series, the quotient L-function and
the bound pipeline with the Phragmen-Lindelof exponent arithmetic.

Dictionary: a Maass form with Laplace eigenvalue 1/4 + R^2 corresponds to
P(i lambda, +) with lambda = 2R.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from fractions import Fraction
from importlib import resources
from pathlib import Path

import numpy as np
from scipy.special import k0

from .archimedean_index import ExponentFit, fit_exponent, index_value
from .eisenstein import DomainSample, UpperHalfPoint, eval_fourier_row, weighted_sup_E_v
from .errors import DataValidationError, DivergenceError, DomainError, PoleError, TailError
from .mathkit.special import bessel_k
from .trilinear import SpectralPoint, spherical_trilinear_closed

MIN_COEFFS = 50
CUSP_SPLIT = 2.0
MAASS_TAIL_TOL = 1e-9


@dataclass(frozen=True)
class MaassFormData:
    R: float
    coeffs: tuple
    parity: str = "even"
    source: str = ""

    def __post_init__(self):
        if not (math.isfinite(self.R) and self.R > 0):
            raise DataValidationError("R must be a positive real number")
        if self.parity != "even":
            raise DataValidationError("only even forms are supported")
        a = tuple(float(c) for c in self.coeffs)
        if len(a) < MIN_COEFFS:
            raise DataValidationError(f"need at least {MIN_COEFFS} coefficients, got {len(a)}")
        if not all(math.isfinite(c) for c in a):
            raise DataValidationError("coefficients must be finite")
        if a[0] != 1.0:
            raise DataValidationError(f"a_1 must equal 1.0 (got {a[0]})")
        object.__setattr__(self, "coeffs", a)

    @property
    def M(self) -> int:
        return len(self.coeffs)

    @property
    def lam(self) -> float:
        return 2.0 * self.R

    @classmethod
    def from_json(cls, path) -> "MaassFormData":
        try:
            raw = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise DataValidationError(f"cannot read Maass data {path}: {exc}") from exc
        missing = {"R", "parity", "coeffs", "source"} - set(raw)
        if missing:
            raise DataValidationError(f"Maass data is missing fields {sorted(missing)}")
        return cls(float(raw["R"]), tuple(raw["coeffs"]), raw["parity"], str(raw["source"]))

    def to_json(self) -> str:
        return json.dumps({"R": self.R, "parity": self.parity, "coeffs": list(self.coeffs),
                           "source": self.source}, indent=1)


def mock_form() -> MaassFormData:
    """The synthetic form shipped with the package (not an eigenform)."""
    ref = resources.files("rankin") / "data" / "mock_maass.json"
    with resources.as_file(ref) as p:
        return MaassFormData.from_json(p)


def _tail_bound(y: float, M: int) -> float:
    # |a_n| <= d(n) <= 2 sqrt(n) and |K_{iR}(x)| <= K_0(x)
    n = np.arange(M + 1, M + 400, dtype=float)
    return 2.0 * math.sqrt(y) * float(np.sum(2.0 * np.sqrt(n) * k0(2.0 * math.pi * n * y)))


def maass_row(f: MaassFormData, xs, y: float) -> np.ndarray:
    """2 sqrt(y) sum_{n <= M} a_n K_{iR}(2 pi n y) cos(2 pi n x) at one height."""
    xs = np.asarray(xs, dtype=float)
    if _tail_bound(y, f.M) > MAASS_TAIL_TOL:
        raise TailError(f"{f.M} coefficients do not resolve the form at y = {y}")
    # K_{iR}(x) underflows double precision well before x = 745
    n_eff = min(f.M, int(745.0 / (2.0 * math.pi * y)))
    if n_eff < 1:
        return np.zeros(xs.shape)
    n = np.arange(1, n_eff + 1, dtype=float)
    coeff = 2.0 * math.sqrt(y) * np.asarray(f.coeffs[:n_eff]) * _whittaker_k(f.R, n_eff, y)
    return np.cos(2.0 * math.pi * np.outer(xs, n)) @ coeff


@lru_cache(maxsize=4096)
def _whittaker_k(R: float, n_eff: int, y: float) -> np.ndarray:
    """K_{iR}(2 pi n y) for n = 1..n_eff; quadrature nodes repeat across calls."""
    n = np.arange(1, n_eff + 1, dtype=float)
    out = np.asarray(bessel_k(1j * R, 2.0 * math.pi * n * y)).real
    out.setflags(write=False)
    return out


def maass_eval(f: MaassFormData, z: UpperHalfPoint) -> float:
    return float(maass_row(f, [z.x], z.y)[0])


def _gl(n: int, a: float, b: float):
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (b - a) * x + 0.5 * (a + b), 0.5 * (b - a) * w


def _fd_level(row_integrand, n: int) -> complex:
    """Gauss-Legendre product rule on the three pieces of the domain.

    Arc piece y in [sqrt(3)/2, 1]: outer variable r = sqrt(1 - y^2) in
    [0, 1/2], inner x over [r, 1/2] and its mirror, so every boundary is
    smooth.  Box piece y in [1, 2].  Cusp piece y >= 2 with y = 2/tau,
    where dx dy / y^2 = dx dtau / 2.
    """
    total = 0.0j
    rs, wr = _gl(n, 0.0, 0.5)
    for r, w in zip(rs, wr):
        y = math.sqrt(1.0 - r * r)
        jac = r / y  # |dy/dr|
        xr, wx = _gl(n, r, 0.5)
        xs = np.concatenate([xr, -xr])
        ws = np.concatenate([wx, wx])
        total += w * jac * np.sum(ws * row_integrand(xs, y)) / (y * y)
    x, wx = _gl(n, -0.5, 0.5)
    ys, wy = _gl(n, 1.0, CUSP_SPLIT)
    for y, w in zip(ys, wy):
        total += w * np.sum(wx * row_integrand(x, y)) / (y * y)
    taus, wt = _gl(n, 0.0, 1.0)
    for tau, w in zip(taus, wt):
        total += 0.5 * w * np.sum(wx * row_integrand(x, CUSP_SPLIT / tau))
    return complex(total)


def _check_cusp_decay(row_integrand):
    probe = np.array([0.0, 0.25])
    lo = float(np.max(np.abs(row_integrand(probe, 1e4)))) / 1e4
    hi = float(np.max(np.abs(row_integrand(probe, 1e8)))) / 1e8
    if lo > 0 and hi > 1e-2 * lo:
        raise TailError("integrand does not decay at the cusp fast enough for dx dy / y^2")


def fundamental_domain_quad(row_integrand, tol: float = 1e-9, rtol: float = 0.0,
                            n0: int = 16, n_max: int = 256) -> complex:
    """int_F f(x, y) dx dy / y^2 over the standard domain of SL(2, Z).

    ``row_integrand(xs, y)`` evaluates f on an array of x at one height.
    The node count doubles until successive results differ by at most
    max(tol, rtol |result|).
    """
    _check_cusp_decay(row_integrand)
    prev = _fd_level(row_integrand, n0)
    n = n0
    while n < n_max:
        n *= 2
        cur = _fd_level(row_integrand, n)
        if abs(cur - prev) <= max(tol, rtol * abs(cur)):
            return cur
        prev = cur
    raise TailError(f"fundamental-domain quadrature did not reach tol = {tol}")


def tr_aut(f1: MaassFormData, f2: MaassFormData, s, rtol: float = 1e-9, eisenstein: bool = True) -> complex:
    """int_F Phi_1 conj(Phi_2) E(s, .) dmu; ``eisenstein=False`` puts 1 in place of E.

    The tolerance is relative: with a_1 = 1 the forms carry the factor
    e^{-pi R/2} of K_{iR}, so absolute sizes say little.
    """
    s = complex(s)
    if abs(s - 1.0) < 1e-6:
        raise PoleError("E(z, s) has a pole at s = 1")

    def row(xs, y):
        phi = maass_row(f1, xs, y) * maass_row(f2, xs, y)  # real forms: conj is a no-op
        if not eisenstein:
            return phi
        if not np.any(phi):
            return phi.astype(complex)
        return phi * eval_fourier_row(xs, y, s, 1e-14)

    return fundamental_domain_quad(row, tol=0.0, rtol=rtol)


@dataclass(frozen=True)
class DirichletResult:
    value: complex
    tail_estimate: float
    terms: int
    flags: tuple = ()


def rankin_dirichlet_series(f1: MaassFormData, f2: MaassFormData, s, sign_mode: str = "plain",
                            terms: int | None = None) -> DirichletResult:
    """sum_{n != 0} a_n conj(b_n) |n|^{-s} (plain) or with sgn(n) inserted (signed).

    Even forms have a_{-n} = a_n, so the plain series is twice the sum over
    n >= 1 and the signed series vanishes identically.  The tail is
    estimated from the running mean of |a_n b_n| (Ramanujan on average)
    and reported, never silently dropped.
    """
    s = complex(s)
    if s.real <= 1.0:
        raise DivergenceError("raw summation needs Re s > 1")
    if sign_mode not in ("plain", "signed"):
        raise DomainError("sign_mode must be 'plain' or 'signed'")
    M = min(f1.M, f2.M) if terms is None else int(terms)
    a = np.asarray(f1.coeffs[:M]) * np.asarray(f2.coeffs[:M])
    n = np.arange(1, M + 1, dtype=float)
    half = complex(np.sum(a * np.exp(-s * np.log(n))))
    mean = float(np.max(np.cumsum(np.abs(a)) / n))
    sig = s.real
    tail = 2.0 * mean * sig / (sig - 1.0) * M ** (1.0 - sig)
    if sign_mode == "signed":
        return DirichletResult(0.0j, 0.0, M, ("even-forms-cancel",))
    return DirichletResult(2.0 * half, tail, M, ("ramanujan-on-average-tail",))


def archimedean_factor(f1: MaassFormData, f2: MaassFormData, s) -> complex:
    """Tr_R(f1~ = 1, f2~ = 1, 1_s) at lambda_i = 2 R_i, continued past the strip."""
    return spherical_trilinear_closed(SpectralPoint(complex(s), f1.lam, f2.lam), continued=True)


@dataclass(frozen=True)
class QuotientResult:
    s: complex
    value: complex
    tr_aut: complex
    tr_real: complex


def l_quotient(f1: MaassFormData, f2: MaassFormData, s, rtol: float = 1e-9) -> QuotientResult:
    """L(s) = Tr_aut(s) / Tr_R(s), with both ingredients."""
    s = complex(s)
    den = archimedean_factor(f1, f2, s)
    if abs(den) < 1e-300:
        raise DomainError("Archimedean trilinear form vanishes at s")
    num = tr_aut(f1, f2, s, rtol)
    return QuotientResult(s, num / den, num, den)


def unfold_check(f1: MaassFormData, f2: MaassFormData, s_values=(1.5, 2.0, 2.5), rtol: float = 1e-9):
    """Rows (s, L(s), D(s), L/D) and the relative spread of L/D across s."""
    rows = []
    for s in s_values:
        q = l_quotient(f1, f2, s, rtol)
        d = rankin_dirichlet_series(f1, f2, s)
        rows.append((complex(s), q.value, d.value, q.value / d.value))
    ratios = np.array([r[3] for r in rows])
    spread = float(np.max(np.abs(ratios - ratios[0])) / abs(ratios[0]))
    return rows, spread


@dataclass(frozen=True)
class BoundReport:
    sigma: float
    eps: float
    t_grid: tuple
    sup_E_v: tuple
    index: tuple
    ratio: tuple
    fit: ExponentFit
    comparisons: dict = field(default_factory=dict)

    def __post_init__(self):
        for v in (*self.sup_E_v, *self.index, *self.ratio):
            if not (math.isfinite(v) and v > 0):
                raise DomainError("bound report entries must be finite and positive")

    @property
    def regime(self) -> str:
        e = self.fit.fitted_exponent
        for name in ("sl2z_4/3", "congruence_11/8", "convexity"):
            if e <= self.comparisons[name]:
                return name
        return "above-convexity"

    def write_csv(self, fh) -> None:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["t", "sigma", "sup_E_v", "index", "ratio"])
        for row in zip(self.t_grid, self.sup_E_v, self.index, self.ratio):
            t, sv, ix, r = row
            writer.writerow([repr(t), repr(self.sigma), repr(sv), repr(ix), repr(r)])


def _bound_at(args):
    sigma, t, lambda1, lambda2, eps, sample = args
    s = complex(sigma, t)
    sup, _ = weighted_sup_E_v(s, eps, sample)
    idx = index_value(SpectralPoint(s, lambda1, lambda2)).index
    return sup, idx


def bound_pipeline(sigma: float, t_grid, lambda1: float = 0.0, lambda2: float = 0.0, eps: float | None = None,
                   sample: DomainSample = DomainSample(), mapper=map) -> BoundReport:
    """sup|E v| / I(s) along sigma + it, fitted against 11/8 - sigma, 4/3 - sigma and 1."""
    if not 0.5 < sigma < 1.0:
        raise DomainError("bound pipeline needs sigma in (1/2, 1)")
    if eps is None:
        eps = 0.5 * min(2.0 * sigma, 2.0 - 2.0 * sigma)
    ts = sorted(float(t) for t in t_grid)
    if not ts:
        raise DomainError("t grid is empty")
    res = list(mapper(_bound_at, [(sigma, t, lambda1, lambda2, eps, sample) for t in ts]))
    sups = tuple(r[0] for r in res)
    idx = tuple(r[1] for r in res)
    ratio = tuple(a / b for a, b in res)
    fit = fit_exponent(ts, ratio)
    comps = {"congruence_11/8": 11.0 / 8.0 - sigma, "sl2z_4/3": 4.0 / 3.0 - sigma, "convexity": 1.0}
    return BoundReport(sigma, eps, tuple(ts), sups, idx, ratio, fit, comps)


@dataclass(frozen=True)
class ExponentPoint:
    sigma: Fraction
    exponent: Fraction

    def __post_init__(self):
        object.__setattr__(self, "sigma", Fraction(self.sigma))
        object.__setattr__(self, "exponent", Fraction(self.exponent))


class ConvexityError(DomainError):
    """Exponent data that no convex function of sigma can represent."""


DEGREE = 4


def _interpolant(points):
    pts = sorted(points, key=lambda p: p.sigma)
    if len({p.sigma for p in pts}) != len(pts):
        raise ConvexityError("repeated sigma values")
    slopes = [(b.exponent - a.exponent) / (b.sigma - a.sigma) for a, b in zip(pts, pts[1:])]
    if any(s2 < s1 for s1, s2 in zip(slopes, slopes[1:])):
        raise ConvexityError("exponents are not convex in sigma")

    def e(sig: Fraction) -> Fraction:
        if len(pts) == 1:
            return pts[0].exponent
        # piecewise linear, extended linearly past both ends
        for k, (a, b) in enumerate(zip(pts, pts[1:])):
            if sig <= b.sigma or k == len(pts) - 2:
                return a.exponent + slopes[k] * (sig - a.sigma)
        raise AssertionError

    return pts, e


def pl_interpolate(points, symmetry: str = "functional_equation") -> ExponentPoint:
    """Exponent at sigma = 1/2 by convexity, in exact rational arithmetic.

    With the functional equation of a degree-4 L-function,
    e(1 - sigma) = e(sigma) + 4 sigma - 2, and convexity between sigma and
    1 - sigma gives e(1/2) <= e(sigma) + 2 sigma - 1.  The input exponents
    are taken as a linear law through the points (one point: that point
    alone), and the bound is its limit as sigma -> 1/2 from the right.
    """
    points = [p if isinstance(p, ExponentPoint) else ExponentPoint(*p) for p in points]
    if not points:
        raise DomainError("need at least one exponent point")
    half = Fraction(1, 2)
    if symmetry == "none":
        _, e = _interpolant(points)
        return ExponentPoint(half, e(half))
    if symmetry != "functional_equation":
        raise DomainError("symmetry must be 'none' or 'functional_equation'")
    if not any(p.sigma > half for p in points):
        raise DomainError("functional_equation needs a point with sigma > 1/2")
    right = [p for p in points if p.sigma >= half]
    pts, e = _interpolant(right)
    shift = Fraction(DEGREE, 2)  # e(1 - sigma) - e(sigma) = DEGREE (sigma - 1/2)
    if len(pts) == 1:
        p = pts[0]
        reflected = p.exponent + shift * (2 * p.sigma - 1)
        return ExponentPoint(half, (p.exponent + reflected) / 2)
    # limit sigma -> 1/2+ of (e(sigma) + e(1 - sigma)) / 2 along the linear law
    return ExponentPoint(half, e(half))
