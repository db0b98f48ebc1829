"""Real-analytic Eisenstein series of SL(2, Z) on the upper half-plane.

    E(z, s) = (1/2) sum_{gcd(c, d) = 1} y^s / |cz + d|^{2s}
            = y^s + phi(s) y^{1-s} + (4 sqrt(y) / xi(2s)) sum_{n>=1} n^{s-1/2} sigma_{1-2s}(n)
                                     K_{s-1/2}(2 pi n y) cos(2 pi n x),

with phi(s) = xi(2s-1)/xi(2s) and xi(w) = pi^{-w/2} Gamma(w/2) zeta(w).
The cusp sits at infinity; the group acts on the left.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import kv

from .archimedean_index import ExponentFit, fit_exponent
from .errors import DomainError, PoleError, SlowConvergenceError, WeightError
from .mathkit.special import bessel_k, completed_zeta, hurwitz_zeta, log_gamma, zeta

SQRT3_2 = math.sqrt(3.0) / 2.0


@dataclass(frozen=True)
class UpperHalfPoint:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)) or self.y <= 0:
            raise DomainError("an upper half-plane point needs finite x and y > 0")

    @property
    def z(self) -> complex:
        return complex(self.x, self.y)

    @classmethod
    def from_complex(cls, z: complex) -> "UpperHalfPoint":
        return cls(z.real, z.imag)

    def in_fundamental_domain(self, slack: float = 1e-12) -> bool:
        return abs(self.x) <= 0.5 + slack and self.x ** 2 + self.y ** 2 >= 1.0 - slack

    def act(self, a: int, b: int, c: int, d: int) -> "UpperHalfPoint":
        if a * d - b * c != 1:
            raise DomainError("not an element of SL(2, Z)")
        return UpperHalfPoint.from_complex((a * self.z + b) / (c * self.z + d))

    def reduce(self) -> "UpperHalfPoint":
        """Move into the standard fundamental domain by translations and inversions."""
        z = self.z
        for _ in range(1000):
            z = complex(z.real - math.floor(z.real + 0.5), z.imag)
            if abs(z) >= 1.0:
                return UpperHalfPoint.from_complex(z)
            z = -1.0 / z
        raise DomainError("reduction did not terminate")


def _check_s(s) -> complex:
    s = complex(s)
    if not (math.isfinite(s.real) and math.isfinite(s.imag)):
        raise DomainError("s must be finite")
    return s


def scattering(s) -> complex:
    """phi(s) = xi(2s - 1) / xi(2s)."""
    s = _check_s(s)
    if abs(s - 1.0) < 1e-8 or abs(s - 0.5) < 1e-8 or abs(s) < 1e-8:
        raise PoleError(f"scattering term is singular at s = {s}")
    return completed_zeta(2.0 * s - 1.0) / completed_zeta(2.0 * s)


def _row_sum(a: float, b: float, s: complex) -> complex:
    """F(a, b) = sum_{n in Z} ((a + n)^2 + b^2)^{-s}.

    Terms with |a + n| <= D are summed directly; beyond D the binomial
    series in (b/w)^2 turns each side into Hurwitz zeta values.
    """
    D = max(10.0, 4.0 * b)
    n_lo = math.ceil(-D - a)
    n_hi = math.floor(D - a)
    w = a + np.arange(n_lo, n_hi + 1, dtype=float)
    total = complex(np.sum(np.exp(-s * np.log(w * w + b * b))))
    b2 = b * b
    for start in (a + n_hi + 1, -(a + n_lo - 1)):
        coef = 1.0 + 0.0j
        j = 0
        while True:
            term = coef * b2 ** j * hurwitz_zeta(2.0 * s + 2 * j, start)
            total += term
            if abs(term) <= 1e-18 * abs(total) or j > 60:
                break
            # binom(-s, j + 1) = binom(-s, j) (-s - j) / (j + 1)
            coef *= (-s - j) / (j + 1)
            j += 1
    return total


def _row_remainder_bound(b: float, s: complex, kmax: int = 64) -> float:
    """Bound on |F(a, b) - integral term| from the Poisson dual side.

    Uses |K_nu(x)| <= K_{Re nu}(x) for x > 0.
    """
    sig = s.real
    k = np.arange(1, kmax + 1, dtype=float)
    pref = 2.0 * math.exp(sig * math.log(math.pi) - log_gamma(s).real)
    terms = pref * (k / b) ** (sig - 0.5) * kv(sig - 0.5, 2.0 * math.pi * k * b)
    return 2.0 * float(np.sum(terms))


def eval_lattice_sum(z: UpperHalfPoint, s, tol: float = 1e-12, return_bound: bool = False):
    """Coprime-pair lattice sum with a rigorous tail bound.

    Mobius inversion turns the coprime sum into a sum over all pairs,
    E = y^s + (y^s / zeta(2s)) sum_{m >= 1} F(m x, m y).  Rows m <= M0 are
    summed exactly.  For m > M0 each row is replaced by its integral
    sqrt(pi) Gamma(s - 1/2)/Gamma(s) (m y)^{1-2s}, whose sum is a Hurwitz
    zeta(2s - 1) value, and M0 grows until the bound on the discarded
    remainders is below ``tol``.
    """
    s = _check_s(s)
    if s.real < 1.1:
        raise SlowConvergenceError(f"lattice sum needs Re s >= 1.1 (got {s.real})")
    x, y = z.x, z.y
    ys = np.exp(s * math.log(y))
    z2s = zeta(2.0 * s)
    scale = abs(ys / z2s)
    lead = math.sqrt(math.pi) * np.exp(log_gamma(s - 0.5) - log_gamma(s))
    total = 0.0j
    m = 0
    bound = math.inf
    while bound > tol:
        m += 1
        total += _row_sum(m * x, m * y, s)
        # remainders of rows m' > m, a geometric-like series in e^{-2 pi m' y}
        rest, mm = 0.0, m + 1
        while True:
            r = _row_remainder_bound(mm * y, s)
            rest += r
            if r <= 1e-3 * rest or r == 0.0:
                break
            mm += 1
        bound = scale * rest
        if m > 10000:
            raise SlowConvergenceError("lattice rows did not reach the tolerance")
    tail = lead * np.exp((1.0 - 2.0 * s) * math.log(y)) * hurwitz_zeta(2.0 * s - 1.0, m + 1.0)
    value = complex(ys + ys / z2s * (total + tail))
    return (value, bound) if return_bound else value


def _divisor_sigma(N: int, w: complex) -> np.ndarray:
    """sigma_w(n) = sum_{d | n} d^w for n = 0..N (entry 0 unused)."""
    out = np.zeros(N + 1, dtype=complex)
    d = np.arange(1, N + 1, dtype=float)
    powers = np.exp(w * np.log(d))
    for k in range(1, N + 1):
        out[k::k] += powers[k - 1]
    return out


def _fourier_terms(y: float, s: complex, tol: float):
    """Bessel coefficients b_n with E = y^s + phi y^{1-s} + sum b_n cos(2 pi n x)."""
    if y < 0.5:
        raise DomainError("Fourier expansion is used only for y >= 1/2")
    xi2s = completed_zeta(2.0 * s)
    pref = 4.0 * math.sqrt(y) / xi2s
    nu = s - 0.5
    sig = s.real
    # envelope with |K_nu| <= K_{Re nu} and |sigma_{1-2s}(n)| <= sigma_{1-2 sigma}(n) <= d(n) n^{max(0, 1-2 sigma)}
    n = 1
    env_tail = math.inf
    while env_tail > tol:
        n *= 2
        k = np.arange(n + 1, 4 * n + 1, dtype=float)
        env = abs(pref) * k ** (abs(sig - 0.5) + max(0.0, 1.0 - 2.0 * sig) + 0.5) \
            * kv(sig - 0.5, 2.0 * math.pi * k * y)
        env_tail = 2.0 * float(np.sum(env))
        if n > 1 << 16:
            raise SlowConvergenceError("Fourier expansion truncation did not converge")
    N = n
    idx = np.arange(1, N + 1, dtype=float)
    kvals = np.asarray(bessel_k(nu, 2.0 * math.pi * idx * y), dtype=complex)
    coeff = pref * np.exp(nu * np.log(idx)) * _divisor_sigma(N, 1.0 - 2.0 * s)[1:] * kvals
    return coeff, env_tail


def eval_fourier_row(xs, y: float, s, tol: float = 1e-12) -> np.ndarray:
    """E(x + iy, s) for many x at one height y."""
    s = _check_s(s)
    if abs(s - 1.0) < 1e-8:
        raise PoleError("E(z, s) has a pole at s = 1")
    xs = np.asarray(xs, dtype=float)
    coeff, _ = _fourier_terms(y, s, tol)
    n = np.arange(1, len(coeff) + 1, dtype=float)
    const = np.exp(s * math.log(y)) + scattering(s) * np.exp((1.0 - s) * math.log(y))
    return const + np.cos(2.0 * math.pi * np.outer(xs, n)) @ coeff


def eval_fourier_expansion(z: UpperHalfPoint, s, tol: float = 1e-12) -> complex:
    """Constant term plus Bessel tail, truncated when the K-Bessel envelope drops below tol."""
    return complex(eval_fourier_row([z.x], z.y, s, tol)[0])


def constant_term(y: float, s) -> complex:
    s = _check_s(s)
    return complex(np.exp(s * math.log(y)) + scattering(s) * np.exp((1.0 - s) * math.log(y)))


@dataclass(frozen=True)
class DomainSample:
    """Tensor grid in (x, log y) over the standard fundamental domain.

    ``y_max=None`` picks max(10, t / 2 pi), covering the Bessel transition.
    """

    nx: int = 64
    ny: int = 48
    y_min: float = SQRT3_2
    y_max: float | None = None

    def __post_init__(self):
        if self.nx < 2 or self.ny < 2:
            raise DomainError("sample needs at least 2 points per axis")
        if self.y_min < 0.5:
            raise DomainError("y_min must be >= 1/2 (Fourier route)")

    def top(self, t: float) -> float:
        return self.y_max if self.y_max is not None else max(10.0, abs(t) / (2.0 * math.pi))

    def rows(self, t: float):
        """(y, xs) pairs; x is restricted to the part of the row inside the domain."""
        xs = np.linspace(-0.5, 0.5, self.nx)
        out = []
        for y in np.geomspace(self.y_min, self.top(t), self.ny):
            keep = xs * xs + y * y >= 1.0 - 1e-12
            if np.any(keep):
                out.append((float(y), xs[keep]))
        return out

    def refined(self) -> "DomainSample":
        return DomainSample(2 * self.nx, 2 * self.ny, self.y_min, self.y_max)


def _row_sup(values: np.ndarray, weight: float, xs: np.ndarray):
    w = np.abs(values) * weight
    i = int(np.argmax(w))
    return float(w[i]), float(xs[i])


@dataclass(frozen=True)
class SupnormReport:
    sigma: float
    t_grid: tuple
    weighted_sup: tuple
    argmax: tuple
    fit: ExponentFit
    weight_exponent: float
    flags: tuple = field(default=())

    def __post_init__(self):
        if any(not v >= 0 for v in self.weighted_sup):
            raise DomainError("weighted sup entries must be non-negative")

    def write_csv(self, fh) -> None:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["t", "sigma", "weighted_sup", "argmax_x", "argmax_y"])
        for t, v, (ax, ay) in zip(self.t_grid, self.weighted_sup, self.argmax):
            writer.writerow([repr(t), repr(self.sigma), repr(v), repr(ax), repr(ay)])


def weighted_sup(s, weight, sample: DomainSample = DomainSample(), tol: float = 1e-10):
    """sup over the sample of |E(s, z)| weight(y); returns (sup, (x, y))."""
    s = _check_s(s)
    best, arg = -1.0, (math.nan, math.nan)
    for y, xs in sample.rows(s.imag):
        val, x = _row_sup(eval_fourier_row(xs, y, s, tol), weight(y), xs)
        if val > best:
            best, arg = val, (x, y)
    return best, arg


def _sup_at(args):
    sigma, t, sample, tol = args
    return weighted_sup(complex(sigma, t), lambda y: y ** (-sigma), sample, tol)


def supnorm_scan(t_grid, sigma: float, domain_sample: DomainSample = DomainSample(),
                 tol: float = 1e-10, mapper=map) -> SupnormReport:
    """sup_z |E(sigma + it, z)| y^{-sigma} per t, with the growth fit in t."""
    ts = sorted(float(t) for t in t_grid)
    if not ts:
        raise DomainError("t grid is empty")
    if sigma < 0.5:
        raise DomainError("sup-norm scan requires sigma >= 1/2")
    res = list(mapper(_sup_at, [(sigma, t, domain_sample, tol) for t in ts]))
    sups = [r[0] for r in res]
    fit = fit_exponent(ts, sups)
    return SupnormReport(sigma, tuple(ts), tuple(sups), tuple(r[1] for r in res), fit, sigma)


def siegel_weight(eps: float):
    """v(z) = y^{-(2 - eps)/2} on the Siegel set y >= 1 and 1 on the compact part."""
    def v(y):
        return y ** (-(2.0 - eps) / 2.0) if y >= 1.0 else 1.0
    return v


def weighted_sup_E_v(s, eps: float, domain_sample: DomainSample = DomainSample(), tol: float = 1e-10):
    """sup over the sampled domain of |E(s, z)| v(z); returns (sup, (x, y))."""
    s = _check_s(s)
    sig = s.real
    if not 0.0 < eps < min(2.0 * sig, 2.0 - 2.0 * sig):
        raise WeightError(f"eps = {eps} outside (0, min(2 sigma, 2 - 2 sigma)) for sigma = {sig}")
    return weighted_sup(s, siegel_weight(eps), domain_sample, tol)
