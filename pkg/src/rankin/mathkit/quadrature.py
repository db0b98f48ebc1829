"""Quadrature engines: 1-D rules with endpoint-distance bookkeeping, the
singular double integral over the torus used by the trilinear form, and a
Fourier integral on the real line.

Every 1-D rule lives on [0, 1] and carries the distances of its nodes to
both endpoints (``dl``/``dr``) so integrands with algebraic endpoint
singularities can be evaluated without cancellation.  Weights are kept as
logarithms; products of strongly singular factors are combined in log
space before exponentiation.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate

from ..errors import ConvergenceError, DivergenceError, DomainError, TailError

RULES = ("gauss_legendre", "double_exponential", "graded_mesh")
_BLOCK_POINTS = 1 << 18


@dataclass(frozen=True)
class QuadratureSpec:
    rule: str = "double_exponential"
    panels: int = 8
    grading_exponent: float = 3.0
    abs_tol: float = 1e-10
    max_level: int = 7

    def __post_init__(self):
        if self.rule not in RULES:
            raise DomainError(f"unknown quadrature rule {self.rule!r}")
        if self.panels < 4:
            raise DomainError("panels must be >= 4")
        if not self.grading_exponent > 1:
            raise DomainError("grading_exponent must exceed 1")
        if not 0 < self.abs_tol < 1:
            raise DomainError("abs_tol must lie in (0, 1)")


@dataclass(frozen=True)
class UnitRule:
    """Nodes on [0, 1] given by distances to 0 (dl) and to 1 (dr)."""

    dl: np.ndarray
    dr: np.ndarray
    logw: np.ndarray

    @property
    def x(self):
        return np.where(self.dl <= 0.5, self.dl, 1.0 - self.dr)

    @property
    def w(self):
        return np.exp(self.logw)


def _log_cosh(s):
    a = np.abs(s)
    return a + np.log1p(np.exp(-2.0 * a)) - math.log(2.0)


def tanh_sinh_rule(level: int, t_max: float = 5.5) -> UnitRule:
    h = 2.0 ** (-level)
    k = int(math.ceil(t_max / h))
    t = h * np.arange(-k, k + 1)
    s = 0.5 * math.pi * np.sinh(t)
    dl = 1.0 / (1.0 + np.exp(-2.0 * s))
    dr = 1.0 / (1.0 + np.exp(2.0 * s))
    logw = np.log(h * 0.25 * math.pi * np.cosh(t)) - 2.0 * _log_cosh(s)
    keep = (dl > 0) & (dr > 0)
    return UnitRule(dl[keep], dr[keep], logw[keep])


def gauss_legendre_rule(panels: int, order: int = 8) -> UnitRule:
    xg, wg = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(0.0, 1.0, panels + 1)
    left = edges[:-1, None]
    width = np.diff(edges)[:, None]
    x = (left + 0.5 * width * (xg + 1.0)).ravel()
    w = (0.5 * width * wg).ravel()
    return UnitRule(x, 1.0 - x, np.log(w))


def graded_rule(panels: int, q: float, order: int = 8) -> UnitRule:
    """Gauss-Legendre panels in t with the symmetric grading x = (2t)^q / 2."""
    half = gauss_legendre_rule(max(2, panels // 2), order)
    t = half.dl  # t in (0, 1) stands for 2t in the left half
    x = 0.5 * t ** q
    logw = np.log(0.5 * q) + (q - 1.0) * np.log(t) + half.logw
    # left half: x in (0, 1/2]; right half mirrored
    dl = np.concatenate([x, 1.0 - x])
    dr = np.concatenate([1.0 - x, x])
    lw = np.concatenate([logw, logw])
    return UnitRule(dl, dr, lw)


def unit_rule(spec: QuadratureSpec, level: int) -> UnitRule:
    if spec.rule == "double_exponential":
        return tanh_sinh_rule(level)
    if spec.rule == "graded_mesh":
        return graded_rule(spec.panels * 2 ** level, spec.grading_exponent)
    return gauss_legendre_rule(spec.panels * 2 ** level)


def _first_level(spec: QuadratureSpec) -> int:
    return 2 if spec.rule == "double_exponential" else 0


def adaptive(evaluate: Callable[[int], complex], spec: QuadratureSpec, min_levels: int = 2):
    """Run ``evaluate(level)`` on successive levels until two agree to abs_tol.

    Returns (value, error estimate).
    """
    start = _first_level(spec)
    prev = None
    err = math.inf
    for level in range(start, start + spec.max_level + 1):
        val = evaluate(level)
        if prev is not None and level - start + 1 >= min_levels:
            err = abs(val - prev)
            if err <= spec.abs_tol:
                return val, err
        prev = val
    raise ConvergenceError(
        f"quadrature did not reach abs_tol={spec.abs_tol:g} (last change {err:.3e})"
    )


def power_sine_quad(f, exponent, spec: QuadratureSpec = QuadratureSpec()):
    """int_0^{2 pi} |sin t|^exponent f(t) dt for Re exponent > -1.

    ``f`` must be vectorized.  Each half period is integrated with the
    singular endpoints at the ends of the unit interval.
    """
    exponent = complex(exponent)
    if exponent.real <= -1:
        raise DivergenceError("|sin|^w is not integrable for Re w <= -1")

    def evaluate(level):
        r = unit_rule(spec, level)
        dist = np.minimum(r.dl, r.dr) * math.pi
        logs = np.log(np.sin(dist))
        total = 0.0 + 0.0j
        for offset in (0.0, math.pi):
            theta = offset + math.pi * r.x
            vals = f(theta)
            total += np.sum(np.exp(exponent * logs + r.logw) * vals) * math.pi
        return complex(total)

    return adaptive(evaluate, spec)


def _log_sin(near, far, log_near):
    """log sin v given v = ``near`` (with its log) and pi - v = ``far``."""
    use_near = near <= far
    v = np.where(use_near, near, far)
    # sin v = v * sinc(v/pi); log v is taken from the caller where v is tiny
    lv = np.where(use_near, log_near, np.log(np.maximum(far, 1e-300)))
    return lv + np.log(np.sinc(v / math.pi))


def singular_circle_quad(f, u, lambda1: float = 0.0, lambda2: float = 0.0,
                         spec: QuadratureSpec = QuadratureSpec()):
    """Double integral over [0, 2pi]^2 of

        |sin(t1 - t2)|^{-u} |sin t1|^{-1+u+i l1} |sin t2|^{-1+u-i l2} f(t1, t2).

    The torus is folded onto [0, pi]^2 (all kernel factors are pi-periodic)
    and each half of that square is a triangle whose three edges carry the
    three singular factors.  A Duffy map takes each triangle to the unit
    square so that every singularity sits on a square edge, where the
    tensor 1-D rule clusters its nodes.

    Returns (value, error estimate).  ``f`` must accept broadcast arrays.
    """
    u = complex(u)
    if u.real >= 1:
        raise DivergenceError("Re u >= 1: the kernel |sin(t1-t2)|^{-u} is not integrable")
    if u.real <= 0:
        raise DivergenceError("Re u <= 0: |sin t|^{-1+u} is not integrable")
    e1 = -1.0 + u + 1j * lambda1
    e2 = -1.0 + u - 1j * lambda2
    pi = math.pi

    def folded(p1, p2):
        acc = 0.0
        for a in (0.0, pi):
            for b in (0.0, pi):
                acc = acc + f(p1 + a, p2 + b)
        return acc

    def block(r, rows):
        xl, xr = r.dl[rows, None], r.dr[rows, None]
        yl, yr = r.dl[None, :], r.dr[None, :]
        logw = r.logw[rows, None] + r.logw[None, :] + np.log(pi * pi * xl)
        lxl, lyl, lyr = np.log(xl), np.log(yl), np.log(yr)
        alpha = pi * xr
        beta = pi * xl * yl
        gam = pi * xl * yr
        # alpha + beta + gamma = pi; products may underflow, so logs are summed
        log_pi = math.log(pi)
        log_sa = _log_sin(alpha, pi * xl, np.log(np.maximum(alpha, 1e-300)))
        log_sb = _log_sin(beta, pi * (xr + xl * yr), log_pi + lxl + lyl)
        log_sg = _log_sin(gam, pi * (xr + xl * yl), log_pi + lxl + lyr)
        phi_hi = pi - gam  # the larger angle
        phi_lo = alpha     # the smaller angle
        # triangle t2 < t1: sin t1 <-> gamma, sin t2 <-> alpha
        k1 = np.exp(-u * log_sb + e1 * log_sg + e2 * log_sa + logw)
        # triangle t1 < t2: sin t1 <-> alpha, sin t2 <-> gamma
        k2 = np.exp(-u * log_sb + e1 * log_sa + e2 * log_sg + logw)
        return np.sum(k1 * folded(phi_hi, phi_lo)) + np.sum(k2 * folded(phi_lo, phi_hi))

    def evaluate(level):
        r = unit_rule(spec, level)
        n = len(r.dl)
        step = max(1, _BLOCK_POINTS // n)
        total = 0.0 + 0.0j
        for start in range(0, n, step):
            total += block(r, slice(start, start + step))
        return complex(total)

    return adaptive(evaluate, spec)


def _quad_complex(fun, a, b, **kw):
    re, e_re = integrate.quad(lambda x: complex(fun(x)).real, a, b, **kw)
    im, e_im = integrate.quad(lambda x: complex(fun(x)).imag, a, b, **kw)
    return re + 1j * im, math.hypot(e_re, e_im)


def real_line_fourier(f, xi: float, spec: QuadratureSpec = QuadratureSpec(abs_tol=1e-9),
                      breakpoints=(), split: float | None = None, shift: float = 0.0):
    """Fourier transform int f(x) exp(-2 pi i x xi) dx for f = O(1/(1+|x|)).

    With ``shift`` = eta != 0, ``f`` must accept complex arguments and be
    analytic on the strip between the real axis and Im z = eta; the
    integral is taken along Im z = eta instead.  Shifting towards the side
    where exp(-2 pi i z xi) decays (sign(eta) = -sign(xi)) turns an
    exponentially small transform into an O(1) integral times
    exp(2 pi eta xi), which keeps the error relative.

    The integrand is folded into even and odd parts on (0, inf).  The
    piece (0, split) is cut at ``|breakpoints|`` and each cell uses the
    double-exponential rule, so integrable singularities at 0 and at the
    breakpoints are allowed (nodes that round onto a breakpoint are
    dropped).  The oscillatory tail (split, inf) uses QUADPACK's
    Fourier-weighted infinite-range routine, which sums the integral cycle
    by cycle with extrapolation.  Failure of that tail summation raises
    TailError.

    Returns (value, error estimate).
    """
    omega = 2.0 * math.pi * float(xi)
    if shift:
        g = f
        eta = float(shift)

        def f(x):
            return g(np.asarray(x, dtype=float) + 1j * eta)

        value, err = real_line_fourier(f, xi, spec, breakpoints, split)
        scale = math.exp(omega * eta)
        return value * scale, err * scale
    cuts = sorted({abs(float(b)) for b in breakpoints} - {0.0})
    if split is None:
        split = max([1.0] + [2.0 * c for c in cuts])
    edges = [0.0] + [c for c in cuts if c < split] + [split]

    def even(x):
        return f(x) + f(-x)

    def odd(x):
        return f(x) - f(-x)

    def head(level):
        r = tanh_sinh_rule(level)
        total = 0.0 + 0.0j
        for a, b in zip(edges[:-1], edges[1:]):
            L = b - a
            x = np.where(r.dl <= 0.5, a + L * r.dl, b - L * r.dr)
            ok = (x > a) & (x < b)
            x = x[ok]
            vals = np.asarray(even(x), dtype=complex) * np.cos(omega * x) \
                - 1j * np.asarray(odd(x), dtype=complex) * np.sin(omega * x)
            total += np.sum(L * r.w[ok] * vals)
        return complex(total)

    head_val, head_err = adaptive(head, QuadratureSpec(abs_tol=0.1 * spec.abs_tol))
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            if omega == 0.0:
                tail, tail_err = _quad_complex(lambda x: even(np.array([x]))[0], split, np.inf,
                                               limit=400)
            else:
                a = abs(omega)
                sgn = math.copysign(1.0, omega)
                tc, ec = _quad_complex(lambda x: even(np.array([x]))[0], split, np.inf,
                                       weight="cos", wvar=a, limlst=200)
                ts, es = _quad_complex(lambda x: odd(np.array([x]))[0], split, np.inf,
                                       weight="sin", wvar=a, limlst=200)
                tail = tc - 1j * sgn * ts
                tail_err = math.hypot(ec, es)
        except integrate.IntegrationWarning as exc:
            raise TailError(f"Fourier tail summation failed: {exc}") from exc
    err = head_err + tail_err
    if err > spec.abs_tol * 100:
        raise TailError(f"Fourier tail error estimate {err:.2e} exceeds tolerance")
    return head_val + tail, err
