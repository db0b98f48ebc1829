"""Complex special functions: log-Gamma, Hurwitz/Riemann zeta and K-Bessel.

All functions accept scalars or numpy arrays and return ``complex`` /
``complex128`` values.  NaN inputs are rejected.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import DomainError, PoleError

_LANCZOS_G = 7.0
_LANCZOS_P = np.array([
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
])
_LOG_2 = math.log(2.0)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
_LOG_PI = math.log(math.pi)

# B_{2j}/(2j)! for j = 1..10
_BERNOULLI_OVER_FACT = np.array([
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
    1.0 / 74724249600.0,
    -3617.0 / 10670622842880000.0,
    43867.0 / 5109094217170944000.0,
    -174611.0 / 802857662698291200000.0,
])


def as_complex(z, name="z"):
    """Coerce to complex dtype and reject non-finite entries."""
    arr = np.asarray(z, dtype=complex)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} must be finite, got {z!r}")
    return arr


def _unwrap(arr, like):
    if np.ndim(like) == 0:
        return complex(arr)
    return arr


def _lanczos_log_gamma(z):
    # valid for Re z >= 1/2
    zm = z - 1.0
    acc = np.full(zm.shape, _LANCZOS_P[0], dtype=complex)
    for k in range(1, len(_LANCZOS_P)):
        acc = acc + _LANCZOS_P[k] / (zm + k)
    t = zm + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (zm + 0.5) * np.log(t) - t + np.log(acc)


def _log_sin_pi(z):
    """log(sin(pi z)) on the branch continuous in each closed half-plane.

    Upper half-plane (and the real axis, as the limit from above):
    sin(pi z) = e^{-i pi z} (1 - e^{2 pi i z}) i / 2, and |e^{2 pi i z}| <= 1
    keeps log(1 - e^{2 pi i z}) on its principal branch.  The constant is
    fixed by log sin(pi/2) = 0, which makes the reflection formula return
    the principal branch of log Gamma.  The lower half-plane is the mirror.
    """
    w = np.pi * z
    out = np.empty(z.shape, dtype=complex)
    up = z.imag >= 0
    out[up] = -1j * w[up] + np.log1p(-np.exp(2j * w[up])) + 0.5j * np.pi - _LOG_2
    lo = ~up
    out[lo] = 1j * w[lo] + np.log1p(-np.exp(-2j * w[lo])) - 0.5j * np.pi - _LOG_2
    return out


def log_gamma(z):
    """Logarithm of the Gamma function.

    Lanczos approximation (g=7, 9 terms) on Re z >= 1/2, reflection formula
    elsewhere.  The result is the principal branch (continuation from the
    positive axis, cut along the negative axis, which takes its values
    from above).

    Raises PoleError for non-positive integers.
    """
    zz = np.atleast_1d(as_complex(z))
    near_int = np.abs(zz - np.round(zz.real)) < 1e-14
    if np.any(near_int & (np.round(zz.real) <= 0)):
        raise PoleError(f"Gamma has a pole at {z!r}")
    out = np.empty(zz.shape, dtype=complex)
    right = zz.real >= 0.5
    out[right] = _lanczos_log_gamma(zz[right])
    left = ~right
    if np.any(left):
        zl = zz[left]
        out[left] = _LOG_PI - _log_sin_pi(zl) - _lanczos_log_gamma(1.0 - zl)
    return _unwrap(out.reshape(np.shape(z)) if np.ndim(z) else out[0], z)


def gamma(z):
    return np.exp(log_gamma(z))


def rgamma(z):
    """1/Gamma(z); zero at the poles instead of raising."""
    zz = np.atleast_1d(as_complex(z))
    out = np.zeros(zz.shape, dtype=complex)
    pole = (np.abs(zz - np.round(zz.real)) < 1e-14) & (np.round(zz.real) <= 0)
    if np.any(~pole):
        out[~pole] = np.exp(-np.atleast_1d(log_gamma(zz[~pole])))
    return _unwrap(out.reshape(np.shape(z)) if np.ndim(z) else out[0], z)


def hurwitz_zeta(s, a=1.0, n_terms=None):
    """Hurwitz zeta sum_{k>=0} (k+a)^{-s} by Euler-Maclaurin summation.

    The direct-sum length is ``max(50, |s| + 50)`` by default, which keeps the
    ten Bernoulli corrections in their convergent regime for |Im s| up to 1e3.
    """
    s = complex(as_complex(s, "s"))
    a = float(a)
    if a <= 0:
        raise DomainError("Hurwitz parameter a must be positive")
    if abs(s - 1.0) < 1e-15:
        raise PoleError("zeta has a pole at s = 1")
    n = n_terms if n_terms is not None else int(max(50, abs(s) + 50))
    k = np.arange(n, dtype=float) + a
    head = np.sum(np.exp(-s * np.log(k)))
    big_n = n + a
    log_n = math.log(big_n)
    tail = np.exp((1.0 - s) * log_n) / (s - 1.0) + 0.5 * np.exp(-s * log_n)
    # s (s+1) ... (s+2j-2) N^{-s-2j+1}
    rising = s
    power = np.exp(-(s + 1.0) * log_n)
    corr = 0.0 + 0.0j
    for j, coef in enumerate(_BERNOULLI_OVER_FACT, start=1):
        corr += coef * rising * power
        rising *= (s + 2 * j - 1) * (s + 2 * j)
        power /= big_n * big_n
    return complex(head + tail + corr)


def zeta(s):
    """Riemann zeta function (Euler-Maclaurin), s != 1."""
    return hurwitz_zeta(s, 1.0)


def completed_zeta(w):
    """xi(w) = pi^{-w/2} Gamma(w/2) zeta(w)."""
    w = complex(w)
    return complex(np.exp(-0.5 * w * _LOG_PI + log_gamma(0.5 * w)) * zeta(w))


def _magnitude_bounds(y, cos_a, re_nu, im_nu, alpha, floor):
    """Half-widths U-, U+ beyond which the shifted integrand is below ``floor``.

    ``floor`` is relative (log scale) to the maximum of the log-magnitude
    m(u) = -y cos(alpha) cosh(u) + Re(nu) u - Im(nu) alpha.
    """
    c = y * cos_a
    u0 = np.arcsinh(re_nu / c)
    m_max = -c * np.cosh(u0) + re_nu * u0
    target = m_max - floor
    bounds = []
    for sign in (1.0, -1.0):
        u = np.abs(u0) + 1.0
        for _ in range(60):
            u = np.arccosh(np.maximum(1.0, (sign * re_nu * u - target) / c))
        bounds.append(u + 0.5)
    return bounds[1], bounds[0], m_max - im_nu * alpha


def bessel_k(nu, y, rtol=1e-13, max_levels=12):
    """Modified Bessel function K_nu(y) for complex order, y > 0.

    Evaluates (1/2) int_R exp(-y cosh u + nu u) du, i.e. the integral of
    exp(-y cosh u) cosh(nu u) over (0, inf), on the horizontal contour
    Im u = alpha through the saddle of the exponent (clipped away from
    pi/2).  The integrand then decays doubly exponentially and the
    trapezoidal rule with step halving converges geometrically.
    """
    nu = complex(as_complex(nu, "nu"))
    ys = np.atleast_1d(np.asarray(y, dtype=float))
    if np.any(~np.isfinite(ys)) or np.any(ys <= 0):
        raise DomainError("bessel_k requires y > 0")
    if nu.real < 0:
        nu = -nu
    out = np.empty(ys.shape, dtype=complex)
    delta = max(0.02, min(0.5, 8.0 / (1.0 + abs(nu.imag))))
    for idx, yv in enumerate(ys):
        saddle = np.arcsinh(nu / yv)
        alpha = float(np.clip(saddle.imag, -(np.pi / 2 - delta), np.pi / 2 - delta))
        cos_a = math.cos(alpha)
        u_lo, u_hi, _ = _magnitude_bounds(yv, cos_a, nu.real, nu.imag, alpha, 46.0)
        rate = yv * math.cosh(max(u_lo, u_hi)) * abs(math.sin(alpha)) + abs(nu) + 1.0
        h = min(0.25, 2.0 / rate)
        zshift = 1j * alpha

        def f(u):
            z = u + zshift
            return np.exp(-yv * np.cosh(z) + nu * z)

        grid = np.arange(-u_lo, u_hi + h, h)
        vals = f(grid)
        total = h * np.sum(vals)
        scale = h * np.sum(np.abs(vals))
        for _ in range(max_levels):
            h *= 0.5
            mids = grid + h
            mid_vals = f(mids[:-1])
            new_total = 0.5 * total + h * np.sum(mid_vals)
            scale = 0.5 * scale + h * np.sum(np.abs(mid_vals))
            grid = np.sort(np.concatenate([grid, mids[:-1]]))
            diff = abs(new_total - total)
            total = new_total
            if diff <= rtol * abs(total) or diff <= 1e-16 * scale:
                break
        out[idx] = 0.5 * total
    if nu.real == 0.0 or nu.imag == 0.0:
        # real and imaginary orders give real values (K_nu = K_{-nu} = conj)
        out = out.real.astype(complex)
    if np.ndim(y) == 0:
        return complex(out[0])
    return out.reshape(np.shape(y))
