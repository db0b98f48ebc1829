"""The Archimedean index I(s) = sup |Tr(f1, f2, 1_s)| / (||f1|| ||f2||).

The pairing Tr = c_G sum_n H0^(n) c^(-n) is diagonal in the Fourier basis,
so the index is |c_G| sup_n |c^(n)| / pi = |G0(u)| sup |c^| / 4, where c^
are the coefficients of K(t)|sin t|^{-u} and

    K(t) = int |cos(t + p)|^{-1+u+i l1} |cos p|^{-1+u-i l2} dp.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import fftconvolve

from .circle_harmonics import (CoefficientSequence, argmax_mode, correlation_coeffs,
                               cos_power_coeffs, seq_norms, sin_power_coeffs)
from .errors import ConvergenceError, DomainError
from .mathkit.quadrature import QuadratureSpec, singular_circle_quad
from .trilinear import SpectralPoint, g_factor, pairing_constant, tr_rs_fourier
from .principal_series import from_coefficients

RICHARDSON_LEVELS = 5
BRUTEFORCE_MAX_N = 64
BRUTEFORCE_RESTARTS = 32


def default_truncation(t: float) -> int:
    return max(512, 8 * math.ceil(abs(t)))


def _base_cutoff(pt: SpectralPoint, N: int) -> int:
    # K^ must resolve the oscillation of |sin|^{-u}, whose mass sits near |n| ~ |t|
    want = max(256, 4 * N, 6.0 * (1.0 + abs(pt.t)) ** 1.5)
    return 1 << math.ceil(math.log2(want))


def _raw_c(pt: SpectralPoint, M: int, N: int) -> np.ndarray:
    """c^(-N..N) from K^ truncated at |k| <= M."""
    a = cos_power_coeffs(-1.0 + pt.u + 1j * pt.lambda1, M)
    b = cos_power_coeffs(-1.0 + pt.u - 1j * pt.lambda2, M)
    k_hat = correlation_coeffs(a, b)
    s_hat = sin_power_coeffs(-pt.u, M + N)
    full = fftconvolve(k_hat.values, s_hat.values)
    mid = 2 * M + N
    return full[mid - N: mid + N + 1]


def c_sequence_detail(pt: SpectralPoint, N: int, M0: int | None = None,
                      levels: int = RICHARDSON_LEVELS) -> tuple[CoefficientSequence, float]:
    """c^ for |n| <= N and an estimate of its absolute error.

    K^(k) decays like |k|^{-2 sigma}, and truncating it at |k| <= M leaves
    an error with an expansion in M^{-p0-j}, p0 = u + i(l1 - l2), j = 0, 1, ...
    Doubling M and eliminating those terms one by one (Richardson) gives
    the limit; the last elimination step serves as the error estimate.
    """
    pt.require_strip()
    if N < 2:
        raise DomainError("truncation N must be at least 2")
    M0 = _base_cutoff(pt, N) if M0 is None else int(M0)
    rows = [_raw_c(pt, M0 << j, N) for j in range(levels + 1)]
    p0 = pt.u + 1j * (pt.lambda1 - pt.lambda2)
    table = rows
    prev_best = rows[-1]
    for j in range(levels):
        f = 2.0 ** (p0 + j)
        prev_best = table[-1]
        table = [(f * table[i + 1] - table[i]) / (f - 1.0) for i in range(len(table) - 1)]
    best = table[0]
    err = float(np.max(np.abs(best - prev_best)))
    vals = best.copy()
    vals[np.arange(-N, N + 1) % 2 != 0] = 0.0
    # c^(n) decays only like |n|^{sigma - 1}: the l1 tail diverges, and the
    # far sup is bounded by twice the largest value on the outer half
    outer = np.abs(vals[: N // 2 + 1])
    tail_sup = 2.0 * float(outer.max()) + err
    return CoefficientSequence(vals, "even_fn", math.inf, tail_sup), err


def c_sequence(pt: SpectralPoint, N: int | None = None) -> CoefficientSequence:
    """Coefficients of K(t)|sin t|^{-u}, |n| <= N, odd entries exactly 0."""
    if N is None:
        N = default_truncation(pt.t)
    return c_sequence_detail(pt, N)[0]


def c_sequence_oracle(pt: SpectralPoint, n, spec: QuadratureSpec = QuadratureSpec(abs_tol=1e-10, max_level=9)):
    """c^(n) as the singular double integral of the defining formula.

    Substituting t = t1 - t2 in the K-integral turns (1/2pi) int K(t)
    |sin t|^{-u} e^{-int} dt into the kernel of singular_circle_quad (after
    the quarter-turn taking |cos| to |sin|) against e^{-in(t1 - t2)}/2pi.
    """
    pt.require_strip()
    ns = np.atleast_1d(np.asarray(n))
    out = []
    for k in ns.tolist():
        val, _ = singular_circle_quad(lambda a, b, k=k: np.exp(-1j * k * (a - b)) / (2.0 * math.pi),
                                      pt.u, pt.lambda1, pt.lambda2, spec)
        out.append(val)
    return complex(out[0]) if np.ndim(n) == 0 else np.array(out)


@dataclass(frozen=True)
class IndexResult:
    pt: SpectralPoint
    index: float
    argmax_mode: int
    c_seq_tail: float
    method: str = "supnorm_formula"
    below_barrier: bool = False

    def __post_init__(self):
        if not self.index >= 0:
            raise DomainError("index must be non-negative")
        if self.argmax_mode % 2:
            raise DomainError("argmax mode must be even")
        if self.method not in ("supnorm_formula", "bruteforce"):
            raise DomainError(f"unknown method {self.method!r}")


def index_from_sequence(pt: SpectralPoint, c: CoefficientSequence, err: float = 0.0,
                        method: str = "supnorm_formula") -> IndexResult:
    norms = seq_norms(c)
    scale = abs(g_factor("even", pt.u)) / 4.0
    return IndexResult(pt, scale * norms.sup, norms.argmax, scale * err, method,
                       below_barrier=pt.sigma <= 0.5)


def index_value(pt: SpectralPoint, N: int | None = None) -> IndexResult:
    """|G0(u)| sup_n |c^(n)| / 4 (see SUP_IDENTITY_CONSTANT_RATIO in trilinear)."""
    if N is None:
        N = default_truncation(pt.t)
    c, err = c_sequence_detail(pt, N)
    return index_from_sequence(pt, c, err)


def _ascent(d: np.ndarray, rng: np.random.Generator, restarts: int, tol: float = 1e-13, max_iter: int = 20000):
    """Maximize |sum a_n conj(b_n) d_n| over unit vectors from random starts.

    Block-coordinate ascent: for fixed b the best a is conj(w)/|w| with
    w = conj(b) d, and symmetrically for b.  Each half-step is exact, so
    the value never decreases.  All restarts run together as rows.
    """
    m = len(d)
    a = rng.normal(size=(restarts, m)) + 1j * rng.normal(size=(restarts, m))
    b = rng.normal(size=(restarts, m)) + 1j * rng.normal(size=(restarts, m))
    a /= np.linalg.norm(a, axis=1, keepdims=True)
    b /= np.linalg.norm(b, axis=1, keepdims=True)
    cur = np.abs(np.sum(a * np.conj(b) * d, axis=1))
    for _ in range(max_iter):
        w = np.conj(b) * d
        a = np.conj(w) / np.linalg.norm(w, axis=1, keepdims=True)
        v = a * d
        b = v / np.linalg.norm(v, axis=1, keepdims=True)
        new = np.abs(np.sum(a * np.conj(b) * d, axis=1))
        done = np.all(new - cur <= tol * new)
        cur = new
        if done:
            break
    return float(cur.max())


def index_bruteforce(pt: SpectralPoint, N: int = BRUTEFORCE_MAX_N, seed: int = 0,
                     restarts: int = BRUTEFORCE_RESTARTS, return_ascent: bool = False):
    """Maximize |Tr(f1, f2, 1_s)| / (||f1|| ||f2||) over vectors with modes |n| <= N.

    Every single-mode pair (e_m, e_m) is evaluated through tr_rs_fourier;
    a seeded random-restart ascent over the full coefficient space then
    checks that no mixture does better.  ``return_ascent`` also returns the
    best ascent value found.
    """
    pt.require_strip()
    if N > BRUTEFORCE_MAX_N:
        raise DomainError(f"brute force is an oracle: N must be <= {BRUTEFORCE_MAX_N}")
    c, err = c_sequence_detail(pt, N)
    best, best_m = -1.0, 0
    for m in sorted(range(-N, N + 1, 2), key=lambda k: (abs(k), -k)):
        f1 = from_coefficients(pt.lambda1, {m: 1.0}, N)
        f2 = from_coefficients(pt.lambda2, {m: 1.0}, N)
        val = abs(tr_rs_fourier(f1, f2, pt, c=c).value) / (f1.norm * f2.norm)
        if val > best * (1.0 + 1e-14):
            best, best_m = val, m
    # the pairing as a diagonal form on the even modes, ||f||^2 = pi |a|^2
    even = np.arange(-N, N + 1, 2)
    d = pairing_constant(pt.u) * c.at(-even) / math.pi
    rng = np.random.default_rng(seed)
    ascent_best = _ascent(d, rng, restarts)
    if ascent_best > best * (1.0 + 1e-9):
        # a mixture beats every single mode: the diagonal structure is broken
        raise ConvergenceError(f"ascent found {ascent_best} above the single-mode optimum {best}")
    scale = abs(g_factor("even", pt.u)) / 4.0
    res = IndexResult(pt, best, best_m, scale * err, "bruteforce", pt.sigma <= 0.5)
    return (res, ascent_best) if return_ascent else res


@dataclass(frozen=True)
class ExponentFit:
    """Least-squares fit log(value) = log(C) + e log(1 + t)."""

    grid: tuple
    fitted_exponent: float
    fitted_constant: float
    residual: float
    degenerate: bool = False
    floor: float | None = None
    flags: tuple = field(default=())

    def __post_init__(self):
        ts = [g[0] for g in self.grid]
        if not ts:
            raise DomainError("grid must be nonempty")
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise DomainError("grid must be strictly increasing in t")
        if not (self.residual >= 0 or math.isnan(self.residual)):
            raise DomainError("residual must be non-negative")


def fit_exponent(ts, values, flags=(), floor=None) -> ExponentFit:
    ts = [float(t) for t in ts]
    values = [float(v) for v in values]
    grid = tuple(zip(ts, values))
    x = np.log1p(np.abs(ts))
    if len(ts) < 2 or np.ptp(x) == 0:
        return ExponentFit(grid, math.nan, math.nan, math.nan, True, floor, tuple(flags) + ("degenerate",))
    y = np.log(values)
    A = np.vstack([x, np.ones_like(x)]).T
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = float(np.sqrt(np.mean((A @ coef - y) ** 2)))
    return ExponentFit(grid, float(coef[0]), float(math.exp(coef[1])), resid, False, floor, tuple(flags))


def index_scan(sigma: float, t_grid, lambda1: float = 0.0, lambda2: float = 0.0,
               N: int | None = None, mapper=map):
    """I(sigma + it) over the grid, with the fit of log I against log(1 + t).

    ``floor`` is min_t I (1+t)^{1-sigma}; sigma <= 1/2 carries the
    'below-barrier' flag.  ``mapper`` lets a caller supply a parallel map;
    results are consumed in grid order.  Returns (fit, results).
    """
    ts = sorted(float(t) for t in t_grid)
    if not ts:
        raise DomainError("t grid is empty")
    pts = [SpectralPoint(complex(sigma, t), lambda1, lambda2) for t in ts]
    results = list(mapper(_index_at, [(p, N) for p in pts]))
    vals = [r.index for r in results]
    floor = min(v * (1.0 + abs(t)) ** (1.0 - sigma) for v, t in zip(vals, ts))
    flags = ("below-barrier",) if sigma <= 0.5 else ()
    return fit_exponent(ts, vals, flags, floor), results


def _index_at(args):
    pt, N = args
    return index_value(pt, N)


def _l1_at(args):
    eps, u1 = args
    N = max(512, 64 * math.ceil(abs(u1)))
    c = cos_power_coeffs(complex(eps, u1), N)
    n = seq_norms(c)
    return n.l1 + n.l1_err


def l1_exponent_scan(eps: float, u1_grid, mapper=map) -> ExponentFit:
    """Growth of ||p^||_1, p = |cos t|^{eps + i u1}, against 1 + |u1|.

    The truncation N = max(512, 64 |u1|) is well past the transition at
    |m| ~ |u1|/2, and the summable m^{-1-eps} tail bound is added.
    """
    if not 0 < eps <= 2:
        raise DomainError("eps must lie in (0, 2]")
    us = sorted(float(u) for u in u1_grid)
    if not us:
        raise DomainError("u1 grid is empty")
    vals = list(mapper(_l1_at, [(eps, u) for u in us]))
    return fit_exponent(us, vals)


def write_index_csv(results, fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["sigma", "t", "lambda1", "lambda2", "index", "argmax_mode", "tail_bound"])
    for r in results:
        writer.writerow([repr(r.pt.sigma), repr(r.pt.t), repr(r.pt.lambda1), repr(r.pt.lambda2),
                         repr(r.index), r.argmax_mode, repr(r.c_seq_tail)])
