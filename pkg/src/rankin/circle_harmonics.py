"""Fourier analysis on the circle for power kernels |cos t|^w and |sin t|^w.

Coefficient convention throughout:

    c(n) = (1/2pi) int_0^{2pi} f(t) exp(-i n t) dt,   f(t) = sum_n c(n) exp(i n t).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np
from scipy.signal import fftconvolve

from .errors import ConvergenceError, DivergenceError, DomainError
from .mathkit.quadrature import QuadratureSpec, unit_rule
from .mathkit.special import log_gamma

PARITIES = ("even_fn", "odd_fn", "none")
DEFAULT_TRUNCATION = 512


@dataclass(frozen=True)
class CoefficientSequence:
    """Two-sided coefficients c(-N..N) stored as one array of length 2N+1.

    ``tail_bound`` bounds sum_{|n|>N} |c(n)| (infinite when that sum
    diverges); ``tail_sup`` bounds sup_{|n|>N} |c(n)|.
    """

    values: np.ndarray
    parity: str = "none"
    tail_bound: float = 0.0
    tail_sup: float = 0.0

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        if vals.ndim != 1 or len(vals) % 2 == 0 or len(vals) < 3:
            raise DomainError("values must be a 1-D array of odd length 2N+1, N >= 1")
        if self.parity not in PARITIES:
            raise DomainError(f"unknown parity {self.parity!r}")
        if not self.tail_bound >= 0 or not self.tail_sup >= 0:
            raise DomainError("tail bounds must be non-negative")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def N(self) -> int:
        return (len(self.values) - 1) // 2

    @property
    def n(self) -> np.ndarray:
        return np.arange(-self.N, self.N + 1)

    def __getitem__(self, n: int) -> complex:
        if abs(n) > self.N:
            return 0.0j
        return complex(self.values[n + self.N])

    def at(self, n) -> np.ndarray:
        """Vectorized lookup; zero outside the stored range."""
        n = np.asarray(n)
        out = np.zeros(n.shape, dtype=complex)
        ok = np.abs(n) <= self.N
        out[ok] = self.values[n[ok] + self.N]
        return out

    def __iter__(self) -> Iterator[tuple[int, complex]]:
        return zip(self.n.tolist(), self.values.tolist())

    def truncate(self, N: int) -> "CoefficientSequence":
        if N > self.N:
            raise DomainError(f"cannot extend truncation from {self.N} to {N}")
        dropped = np.abs(np.concatenate([self.values[: self.N - N], self.values[self.N + N + 1:]]))
        tail = self.tail_bound + float(np.sum(dropped))
        tsup = max(self.tail_sup, float(dropped.max(initial=0.0)))
        return CoefficientSequence(self.values[self.N - N: self.N + N + 1], self.parity, tail, tsup)

    def reversed(self) -> "CoefficientSequence":
        """n -> -n."""
        return CoefficientSequence(self.values[::-1], self.parity, self.tail_bound, self.tail_sup)

    def conj(self) -> "CoefficientSequence":
        """Coefficients of the complex-conjugate function: conj(c(-n))."""
        return CoefficientSequence(np.conj(self.values[::-1]), self.parity,
                                   self.tail_bound, self.tail_sup)

    def scale(self, factor) -> "CoefficientSequence":
        a = abs(factor)
        return CoefficientSequence(self.values * factor, self.parity,
                                   self.tail_bound * a, self.tail_sup * a)

    def evaluate(self, theta) -> np.ndarray:
        """Partial Fourier sum at the given angles."""
        theta = np.asarray(theta, dtype=float)
        return np.exp(1j * np.multiply.outer(theta, self.n.astype(float))) @ self.values

    @classmethod
    def delta(cls, n: int = 0, value: complex = 1.0, N: int | None = None):
        N = max(abs(n), 1) if N is None else N
        vals = np.zeros(2 * N + 1, dtype=complex)
        vals[n + N] = value
        parity = "even_fn" if n == 0 else "none"
        return cls(vals, parity)


@dataclass(frozen=True)
class PowerKernelSpec:
    exponent: complex
    function: str = "cos_power"

    def __post_init__(self):
        w = complex(self.exponent)
        object.__setattr__(self, "exponent", w)
        if self.function not in ("cos_power", "sin_power"):
            raise DomainError(f"unknown kernel function {self.function!r}")
        if w.real <= -1:
            raise DivergenceError(f"|cos|^w is not integrable for Re w = {w.real} <= -1")


def _check_exponent(w) -> complex:
    w = complex(w)
    if not (math.isfinite(w.real) and math.isfinite(w.imag)):
        raise DomainError("exponent must be finite")
    if w.real <= -1:
        raise DivergenceError(f"|cos|^w is not integrable for Re w = {w.real} <= -1")
    return w


def _half_coeffs(w: complex, M: int) -> np.ndarray:
    """c(2m) for m = 0..M of |cos t|^w, from the Gamma quotient in log space."""
    m = np.arange(M + 1, dtype=float)
    head = log_gamma(w + 1.0) - w * math.log(2.0)
    b = 1.0 + 0.5 * w - m
    # 1/Gamma vanishes at the poles b = 0, -1, ... (w an even integer)
    pole = (np.abs(b - np.round(b.real)) < 1e-14) & (np.round(b.real) <= 0)
    out = np.zeros(M + 1, dtype=complex)
    ok = ~pole
    if np.any(ok):
        out[ok] = np.exp(head - log_gamma(m[ok] + 0.5 * w + 1.0) - log_gamma(b[ok]))
    return out


def _tail_estimates(last: complex, M: int, w: complex) -> tuple[float, float]:
    """Bounds on the discarded m > M part from the m^{-1-Re w} envelope.

    The envelope constant is read off the last stored coefficient and
    doubled for safety.
    """
    decay = 1.0 + w.real
    amp = 2.0 * abs(last) * M ** decay if M > 0 else 0.0
    tail_sup = amp * (M + 1) ** (-decay) if M > 0 else 0.0
    if decay <= 1.0:
        return math.inf, tail_sup
    # both signs of m, even indices only
    return 2.0 * amp * M ** (1.0 - decay) / (decay - 1.0), tail_sup


def _assemble(half: np.ndarray, N: int) -> np.ndarray:
    vals = np.zeros(2 * N + 1, dtype=complex)
    even = np.arange(0, N + 1, 2)
    vals[N + even] = half[even // 2]
    vals[N - even] = half[even // 2]
    return vals


def cos_power_coeffs(w, N: int = DEFAULT_TRUNCATION) -> CoefficientSequence:
    """Fourier coefficients of |cos t|^w for |n| <= N (odd entries are 0)."""
    w = _check_exponent(w)
    if N < 1:
        raise DomainError("truncation N must be positive")
    half = _half_coeffs(w, N // 2)
    if w == 0:
        tail, tsup = 0.0, 0.0
    else:
        tail, tsup = _tail_estimates(half[-1], max(N // 2, 1), w)
    return CoefficientSequence(_assemble(half, N), "even_fn", tail, tsup)


def cos_power_coeffs_reflected(w, N: int = DEFAULT_TRUNCATION) -> np.ndarray:
    """c(2m), m = 0..N//2, from the reflected form

        Gamma(w+1) Gamma(m - w/2) (-1)^{m+1} sin(pi w / 2) / (2^w pi Gamma(m + w/2 + 1)).

    Independent of ``cos_power_coeffs`` (used to cross-check it); undefined
    when w is a non-negative even integer.
    """
    w = _check_exponent(w)
    m = np.arange(N // 2 + 1, dtype=float)
    sign = np.where(m % 2 == 0, -1.0, 1.0)
    log_mag = (log_gamma(w + 1.0) + log_gamma(m - 0.5 * w) - log_gamma(m + 0.5 * w + 1.0)
               - w * math.log(2.0) - math.log(math.pi))
    return sign * np.sin(0.5 * math.pi * w) * np.exp(log_mag)


def sin_power_coeffs(w, N: int = DEFAULT_TRUNCATION) -> CoefficientSequence:
    """Coefficients of |sin t|^w = |cos(t - pi/2)|^w: c_cos(n) exp(i pi n / 2)."""
    base = cos_power_coeffs(w, N)
    n = base.n
    # exp(i pi n/2) = (-1)^{n/2} on even n; odd entries are already zero
    phase = np.where(n % 4 == 0, 1.0, -1.0)
    vals = np.where(n % 2 == 0, base.values * phase, 0.0)
    return CoefficientSequence(vals, "even_fn", base.tail_bound, base.tail_sup)


def power_coeffs(kernel: PowerKernelSpec, N: int = DEFAULT_TRUNCATION) -> CoefficientSequence:
    if kernel.function == "cos_power":
        return cos_power_coeffs(kernel.exponent, N)
    return sin_power_coeffs(kernel.exponent, N)


def _combined_parity(pa: str, pb: str) -> str:
    if pa == "none" or pb == "none":
        return "none"
    return "even_fn" if pa == pb else "odd_fn"


def correlation_coeffs(a: CoefficientSequence, b: CoefficientSequence) -> CoefficientSequence:
    """Coefficients of t -> int_0^{2pi} f_a(t + p) f_b(p) dp, i.e. 2pi a(n) b(-n)."""
    N = min(a.N, b.N)
    av = a.values[a.N - N: a.N + N + 1]
    bv = b.values[b.N - N: b.N + N + 1][::-1]
    vals = 2.0 * math.pi * av * bv
    # sum_{|n|>N} |a(n) b(-n)| <= sup|a| tail(b) + sup|b| tail(a), restricted to the tail
    a_sup = max(float(np.abs(av).max()), a.tail_sup)
    b_sup = max(float(np.abs(bv).max()), b.tail_sup)
    dropped_a = np.abs(a.values[: a.N - N]).sum() + np.abs(a.values[a.N + N + 1:]).sum()
    dropped_b = np.abs(b.values[: b.N - N]).sum() + np.abs(b.values[b.N + N + 1:]).sum()
    tail_a = a.tail_bound + dropped_a
    tail_b = b.tail_bound + dropped_b
    tail = 2.0 * math.pi * min(a_sup * tail_b, b_sup * tail_a) if (tail_a or tail_b) else 0.0
    tsup = 2.0 * math.pi * max(a.tail_sup * b_sup, b.tail_sup * a_sup)
    if math.isnan(tail):
        tail = math.inf
    return CoefficientSequence(vals, _combined_parity(a.parity, b.parity), tail, tsup)


def product_coeffs(a: CoefficientSequence, b: CoefficientSequence, N: int | None = None):
    """Coefficients of the pointwise product f_a f_b (discrete convolution), |n| <= N.

    Only the truncated sequences are convolved; the returned tail fields
    carry ``a``'s and ``b``'s tails forward as a bound on the neglected
    cross terms when both sums are absolutely convergent.
    """
    full = fftconvolve(a.values, b.values)
    center = a.N + b.N
    N = center if N is None else min(N, center)
    vals = full[center - N: center + N + 1]
    lone_a = float(np.abs(a.values).sum())
    lone_b = float(np.abs(b.values).sum())
    tail = a.tail_bound * (lone_b + b.tail_bound) + b.tail_bound * lone_a
    if math.isnan(tail):
        tail = math.inf
    return CoefficientSequence(vals, _combined_parity(a.parity, b.parity), tail, 0.0)


@dataclass(frozen=True)
class SeqNorms:
    """Norms of the stored coefficients; unpacks as (l1, l2, sup, argmax).

    ``l1_err`` and ``sup_err`` are the uncertainty contributed by the
    unstored tail.
    """

    l1: float
    l2: float
    sup: float
    argmax: int
    l1_err: float = field(default=0.0)
    sup_err: float = field(default=0.0)

    def __iter__(self):
        return iter((self.l1, self.l2, self.sup, self.argmax))


def argmax_mode(values: np.ndarray, n: np.ndarray) -> int:
    """Smallest |n| attaining max |values|, positive n preferred on ties."""
    mags = np.abs(values)
    top = mags.max()
    cand = n[mags >= top * (1.0 - 1e-14)] if top > 0 else n
    return int(sorted(cand.tolist(), key=lambda k: (abs(k), -k))[0])


def seq_norms(c: CoefficientSequence) -> SeqNorms:
    mags = np.abs(c.values)
    sup = float(mags.max())
    return SeqNorms(
        l1=float(mags.sum()),
        l2=float(np.sqrt(np.sum(mags * mags))),
        sup=sup,
        argmax=argmax_mode(c.values, c.n),
        l1_err=c.tail_bound,
        sup_err=max(0.0, c.tail_sup - sup),
    )


def coeff_quadrature_oracle(kernel: PowerKernelSpec, n, abs_tol: float = 1e-11,
                            rule: str = "double_exponential"):
    """Direct quadrature of (1/2pi) int |cos t|^w e^{-int} dt (or |sin t|^w).

    ``n`` may be an integer or an array of integers; the integrand is
    sampled once per level and reused for every n.
    """
    w = kernel.exponent
    if w.real <= -0.95:
        raise DivergenceError("oracle requires Re w > -0.95")
    ns = np.atleast_1d(np.asarray(n, dtype=float))
    # |cos t| = |sin(t + pi/2)|: integrate |sin p|^w against e^{-in(p - pi/2)}
    shift = -0.5 * math.pi if kernel.function == "cos_power" else 0.0
    spec = QuadratureSpec(rule=rule, abs_tol=abs_tol, max_level=12)

    def evaluate(level):
        r = unit_rule(spec, level)
        dist = np.minimum(r.dl, r.dr) * math.pi
        base = np.exp(w * np.log(np.sin(dist)) + r.logw) * math.pi
        total = np.zeros(ns.shape, dtype=complex)
        for offset in (0.0, math.pi):
            p = offset + math.pi * r.x
            total += np.exp(-1j * np.outer(ns, p + shift)) @ base
        return total / (2.0 * math.pi)

    prev = None
    start = 2 if rule == "double_exponential" else 0
    for level in range(start, start + spec.max_level + 1):
        vals = evaluate(level)
        if prev is not None and np.max(np.abs(vals - prev)) <= abs_tol:
            return complex(vals[0]) if np.ndim(n) == 0 else vals
        prev = vals
    raise ConvergenceError("coefficient oracle did not converge")


def write_sequence_csv(c: CoefficientSequence, fh) -> None:
    """Write columns n, re, im (one row per stored coefficient)."""
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["n", "re", "im"])
    for k, v in c:
        writer.writerow([k, repr(float(v.real)), repr(float(v.imag))])
