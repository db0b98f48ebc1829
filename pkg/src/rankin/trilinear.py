"""The Archimedean Rankin-Selberg trilinear form for spherical principal series.

For f_i in P(i lambda_i, +)_e and phi on K/M,

    Tr(f1, f2, phi_s) = (G0(u)/8) int int |sin(t1 - t2)|^{-u}
                        |sin t1|^{-1+u+i l1} |sin t2|^{-1+u-i l2} H(t1, t2) dt1 dt2,

u = s - i(l1 - l2)/2, with H the K-average of f~1(t1 + .) conj f~2(t2 + .) phi.
For phi = 1 the form collapses to a coefficient pairing

    Tr = c_G(u) sum_n H0^(n) c^(-n),   c_G(u) = pi G0(u) / 4,

where c^ are the coefficients of K(t)|sin t|^{-u}.  The constant c_G
follows from Parseval (the second angular integral is already inside K),
and ``calibration_ratio`` confirms it against the direct quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circle_harmonics import CoefficientSequence
from .errors import DivergenceError, DomainError, PoleError, StripError
from .mathkit.quadrature import QuadratureSpec, singular_circle_quad, tanh_sinh_rule, adaptive
from .mathkit.special import as_complex, log_gamma
from .principal_series import PrincipalSeriesVector, spherical_vector

# Ratio of the pairing constant actually realized, |G0|/4, to the constant
# |G0|/(8 pi) in the sup-norm identity as usually written.
SUP_IDENTITY_CONSTANT_RATIO = 2.0 * math.pi


@dataclass(frozen=True)
class SpectralPoint:
    s: complex
    lambda1: float = 0.0
    lambda2: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "s", complex(as_complex(self.s, "s")))
        for name in ("lambda1", "lambda2"):
            val = float(getattr(self, name))
            if not math.isfinite(val):
                raise DomainError(f"{name} must be finite")
            object.__setattr__(self, name, val)

    @property
    def u(self) -> complex:
        return self.s - 0.5j * (self.lambda1 - self.lambda2)

    @property
    def sigma(self) -> float:
        return self.s.real

    @property
    def t(self) -> float:
        return self.s.imag

    def require_strip(self):
        if not 0.0 < self.sigma < 1.0:
            raise StripError(f"Re s = {self.sigma} is outside the open strip (0, 1)")
        return self

    def conjugate(self) -> "SpectralPoint":
        """conj(s) with the lambdas exchanged, so that u -> conj(u)."""
        return SpectralPoint(self.s.conjugate(), self.lambda2, self.lambda1)


@dataclass(frozen=True)
class TrilinearResult:
    value: complex
    method: str
    est_error: float

    def __post_init__(self):
        if not self.est_error >= 0:
            raise DomainError("est_error must be non-negative")


def g_factor(kind: str, u) -> complex:
    """G0(u) = 2(2pi)^{-u} Gamma(u) cos(pi u/2), G1(u) = 2i(2pi)^{-u} Gamma(u) sin(pi u/2).

    Removable points (zeros of the trigonometric factor at poles of Gamma)
    are evaluated through the reflection formula.
    """
    u = complex(as_complex(u, "u"))
    if kind not in ("even", "odd"):
        raise DomainError("kind must be 'even' or 'odd'")
    scale = 2.0 * np.exp(-u * math.log(2.0 * math.pi))
    if kind == "odd":
        scale = scale * 1j
    near_int = abs(u - round(u.real)) < 1e-14
    k = round(u.real)
    if near_int and k <= 0 and ((kind == "even" and k % 2 == 0) or (kind == "odd" and k % 2 != 0)):
        raise PoleError(f"G_{0 if kind == 'even' else 1} has a pole at u = {u}")
    if u.real >= 0.5:
        trig = np.cos(0.5 * math.pi * u) if kind == "even" else np.sin(0.5 * math.pi * u)
        return complex(scale * np.exp(log_gamma(u)) * trig)
    # Gamma(u) cos(pi u/2) = pi / (2 Gamma(1-u) sin(pi u/2)), and likewise for sin
    trig = np.sin(0.5 * math.pi * u) if kind == "even" else np.cos(0.5 * math.pi * u)
    return complex(scale * 0.5 * math.pi * np.exp(-log_gamma(1.0 - u)) / trig)


def pairing_constant(u) -> complex:
    """c_G(u) = pi G0(u) / 4."""
    return 0.25 * math.pi * g_factor("even", u)


@dataclass(frozen=True)
class HCorrelation:
    """H(t1, t2) = sum_{n,m} h[n, m] e^{i n t1} e^{-i m t2}, modes -N..N."""

    matrix: np.ndarray
    N: int

    @property
    def diagonal_only(self) -> bool:
        off = self.matrix - np.diag(np.diag(self.matrix))
        return not np.any(off)

    def reduced(self) -> CoefficientSequence:
        """Coefficients of H0 when H(t1, t2) = H0(t1 - t2)."""
        if not self.diagonal_only:
            raise DomainError("H is not a function of t1 - t2 (phi is not constant)")
        vals = np.diag(self.matrix).copy()
        return CoefficientSequence(vals, "even_fn" if np.allclose(vals, vals[::-1]) else "none")

    def __call__(self, t1, t2):
        t1, t2 = np.broadcast_arrays(np.asarray(t1, dtype=float), np.asarray(t2, dtype=float))
        n = np.arange(-self.N, self.N + 1)
        rows, cols = np.nonzero(self.matrix)
        out = np.zeros(t1.shape, dtype=complex)
        if self.diagonal_only:
            d = t1 - t2
            for k in rows.tolist():
                out += self.matrix[k, k] * np.exp(1j * n[k] * d)
            return out
        for r, c in zip(rows.tolist(), cols.tolist()):
            out += self.matrix[r, c] * np.exp(1j * (n[r] * t1 - n[c] * t2))
        return out


def h_correlation(f1: PrincipalSeriesVector, f2: PrincipalSeriesVector,
                  phi: CoefficientSequence | None = None) -> HCorrelation:
    """2-D coefficients h[n, m] = f1^(n) conj(f2^(m)) phi^(m - n).

    ``phi=None`` stands for the constant function 1 (phi^ = delta_0), for
    which h is diagonal and H depends only on t1 - t2.
    """
    N = max(f1.coeffs.N, f2.coeffs.N, phi.N if phi is not None else 0)
    a = np.zeros(2 * N + 1, dtype=complex)
    b = np.zeros(2 * N + 1, dtype=complex)
    a[N - f1.coeffs.N: N + f1.coeffs.N + 1] = f1.coeffs.values
    b[N - f2.coeffs.N: N + f2.coeffs.N + 1] = f2.coeffs.values
    if phi is None:
        return HCorrelation(np.diag(a * np.conj(b)), N)
    n = np.arange(-N, N + 1)
    diff = n[None, :] - n[:, None]
    return HCorrelation(np.outer(a, np.conj(b)) * phi.at(diff), N)


def _c_seq(pt: SpectralPoint, N: int):
    from .archimedean_index import c_sequence_detail

    return c_sequence_detail(pt, N)


def coefficient_pairing(h0: CoefficientSequence, c: CoefficientSequence) -> complex:
    """sum_n h0(n) c(-n) over the common stored range."""
    N = min(h0.N, c.N)
    hv = h0.values[h0.N - N: h0.N + N + 1]
    cv = c.values[c.N - N: c.N + N + 1][::-1]
    return complex(np.sum(hv * cv))


def tr_rs_fourier(f1: PrincipalSeriesVector, f2: PrincipalSeriesVector, pt: SpectralPoint,
                  c: CoefficientSequence | None = None) -> TrilinearResult:
    """Spherical (phi = 1) trilinear form via the coefficient pairing.

    ``c`` may carry a precomputed c-sequence for ``pt``.
    """
    pt.require_strip()
    if f1.lam != pt.lambda1 or f2.lam != pt.lambda2:
        raise DomainError("vector spectral parameters do not match the spectral point")
    h0 = h_correlation(f1, f2).reduced()
    err_c = 0.0
    if c is None or c.N < h0.N:
        c, err_c = _c_seq(pt, max(h0.N, 2))
    cg = pairing_constant(pt.u)
    value = cg * coefficient_pairing(h0, c)
    est = abs(cg) * float(np.sum(np.abs(h0.values))) * err_c
    return TrilinearResult(complex(value), "fourier", est)


def tr_rs_quadrature(f1: PrincipalSeriesVector, f2: PrincipalSeriesVector,
                     phi: CoefficientSequence | None, pt: SpectralPoint,
                     spec: QuadratureSpec = QuadratureSpec(abs_tol=1e-11)) -> TrilinearResult:
    """Direct singular double integral of the defining formula (ground truth)."""
    pt.require_strip()
    h = h_correlation(f1, f2, phi)
    value, err = singular_circle_quad(h, pt.u, pt.lambda1, pt.lambda2, spec)
    g0 = g_factor("even", pt.u)
    return TrilinearResult(complex(g0 / 8.0 * value), "quadrature", abs(g0) / 8.0 * err)


def calibration_ratio(pt: SpectralPoint = SpectralPoint(0.75)) -> float:
    """Direct quadrature over the coefficient pairing, spherical vectors.

    Equal to 1 when the pairing constant c_G is right.
    """
    v1 = spherical_vector(pt.lambda1)
    v2 = spherical_vector(pt.lambda2)
    quad = tr_rs_quadrature(v1, v2, None, pt).value
    four = tr_rs_fourier(v1, v2, pt).value
    return abs(quad / four)


def spherical_trilinear_closed(pt: SpectralPoint, continued: bool = False) -> complex:
    """Closed form of Tr(f1, f2, 1_s) for the spherical vectors f~ = 1.

    By Parseval, Delta_+ pairs |xi|^{u-1} G0(1-u) with the Bessel-type
    transforms of (1 + x^2)^{-s_i}; the Mellin transform of a product of
    two K-Bessel functions then gives four Gamma factors.  Tr = (G0(u)/2)
    Delta_+, and G0(u) G0(1-u) = 1 leaves a meromorphic function of s.
    ``continued=True`` evaluates it outside the strip as well.
    """
    if not continued:
        pt.require_strip()
    s = pt.s
    s1 = 0.5 * (1.0 + 1j * pt.lambda1)
    s2c = 0.5 * (1.0 - 1j * pt.lambda2)  # conj of s_2
    nu1, nu2 = 0.5j * pt.lambda1, -0.5j * pt.lambda2
    log_mellin = ((s - 3.0) * math.log(2.0) - log_gamma(s)
                  + log_gamma(0.5 * (s + nu1 + nu2)) + log_gamma(0.5 * (s + nu1 - nu2))
                  + log_gamma(0.5 * (s - nu1 + nu2)) + log_gamma(0.5 * (s - nu1 - nu2)))
    log_pref = (math.log(8.0) + (s1 + s2c) * math.log(math.pi) - log_gamma(s1) - log_gamma(s2c)
                - s * math.log(2.0 * math.pi))
    return complex(0.5 * np.exp(log_pref + log_mellin))


def delta_plus(f1, f2, u, support1=(-1.0, 1.0), support2=(-1.0, 1.0), kinks1=(), kinks2=(),
               abs_tol: float = 1e-10) -> complex:
    """Delta_+(f1, f2, u) = int int |x - y|^{-u} f1(x) conj(f2(y)) dx dy on the real line.

    Written as int |z|^{-u} g(z) dz with g(z) = int f1(y + z) conj(f2(y)) dy.
    The inner integral uses Gauss-Legendre panels between kinks; the outer
    one uses the double-exponential rule on cells whose edges include z = 0
    and every kink difference, so |z|^{-u} and the kinks of g sit at cell
    edges.
    """
    u = complex(u)
    if not 0.0 < u.real < 1.0:
        raise DivergenceError("delta_plus requires Re u in (0, 1)")
    a1, b1 = map(float, support1)
    a2, b2 = map(float, support2)
    k1 = sorted({a1, b1, *map(float, kinks1)})
    k2 = sorted({a2, b2, *map(float, kinks2)})
    xg, wg = np.polynomial.legendre.leggauss(24)

    def g(z):
        out = np.empty(len(z), dtype=complex)
        for i, zz in enumerate(z):
            lo, hi = max(a2, a1 - zz), min(b2, b1 - zz)
            if hi <= lo:
                out[i] = 0.0
                continue
            cuts = sorted({lo, hi, *[c for c in k2 if lo < c < hi],
                           *[c - zz for c in k1 if lo < c - zz < hi]})
            acc = 0.0j
            for p, q in zip(cuts[:-1], cuts[1:]):
                y = 0.5 * (q - p) * xg + 0.5 * (p + q)
                acc += 0.5 * (q - p) * np.sum(wg * f1(y + zz) * np.conj(f2(y)))
            out[i] = acc
        return out

    zedges = sorted({0.0, *[p - q for p in k1 for q in k2]})
    spec = QuadratureSpec(abs_tol=abs_tol, max_level=6)

    def evaluate(level):
        r = tanh_sinh_rule(level)
        total = 0.0j
        for p, q in zip(zedges[:-1], zedges[1:]):
            L = q - p
            dl, dr = L * r.dl, L * r.dr
            z = np.where(r.dl <= 0.5, p + dl, q - dr)
            # z = p + dl or q - dr keeps |z| accurate next to z = 0
            absz = np.abs(z)
            ok = absz > 0
            total += np.sum(L * r.w[ok] * np.exp(-u * np.log(absz[ok])) * g(z[ok]))
        return complex(total)

    value, _ = adaptive(evaluate, spec)
    return value


def _log_abs_sin(d):
    d = np.abs(d)
    return np.log(d) + np.log(np.sinc(d / math.pi))


def delta_plus_compact(f1, f2, u, lambda1: float = 0.0, lambda2: float = 0.0,
                       support1=(-1.0, 1.0), support2=(-1.0, 1.0), kinks1=(), kinks2=(),
                       abs_tol: float = 1e-10) -> complex:
    """Delta_+ through the compact picture:

        int_0^pi int_0^pi |sin(t1 - t2)|^{-u} f~1(t1) conj(f~2(t2))
            |sin t1|^{-1+u+i l1} |sin t2|^{-1+u-i l2} dt1 dt2,

    f~(t) = |sin t|^{-1 - i lambda} f(cot t).  Compact support in x keeps
    t away from 0 and pi, so only the diagonal singularity remains.  The
    square is cut at the arccot images of the supports and kinks; cells on
    the diagonal and cells touching it at a corner get Duffy splits.
    """
    u = complex(u)
    if not 0.0 < u.real < 1.0:
        raise DivergenceError("delta_plus requires Re u in (0, 1)")

    def g1(t):
        st = np.sin(t)
        val = np.exp((-1.0 - 1j * lambda1) * np.log(st)) * f1(np.cos(t) / st)
        return val * np.exp((-1.0 + u + 1j * lambda1) * np.log(st))

    def g2(t):
        st = np.sin(t)
        val = np.conj(np.exp((-1.0 - 1j * lambda2) * np.log(st)) * f2(np.cos(t) / st))
        return val * np.exp((-1.0 + u - 1j * lambda2) * np.log(st))

    xs = {*map(float, support1), *map(float, support2), *map(float, kinks1), *map(float, kinks2)}
    lo1, hi1 = map(float, support1)
    lo2, hi2 = map(float, support2)
    xs = sorted(x for x in xs if min(lo1, lo2) <= x <= max(hi1, hi2))
    edges = sorted({math.atan2(1.0, x) for x in xs})
    spec = QuadratureSpec(abs_tol=abs_tol, max_level=7)

    def evaluate(level):
        r = tanh_sinh_rule(level)
        x = r.x
        lx = np.log(np.where(r.dl <= 0.5, r.dl, x))
        X, Y = np.meshgrid(x, x, indexing="ij")
        LX, LY = np.meshgrid(lx, lx, indexing="ij")
        LW = np.add.outer(r.logw, r.logw)
        total = 0.0j
        cells = list(zip(edges[:-1], edges[1:]))
        for i, (p1, q1) in enumerate(cells):
            L1 = q1 - p1
            for j, (p2, q2) in enumerate(cells):
                L2 = q2 - p2
                if i == j:
                    # d = t1 - t2 = L x y, Jacobian L^2 x; kernel, weights and
                    # Jacobian combined in log space so tiny d cannot overflow
                    logd = math.log(L1) + LX + LY
                    d = np.exp(logd)
                    ta = p1 + L1 * X
                    wk = np.exp(2.0 * math.log(L1) + LX + LW - u * (logd + np.log(np.sinc(d / math.pi))))
                    total += np.sum(wk * g1(ta) * g2(ta - d))
                    total += np.sum(wk * g1(ta - d) * g2(ta))
                elif abs(i - j) == 1:
                    # t1 = c + sgn a, t2 = c - sgn b with a, b the distances to the shared corner
                    c = q1 if j == i + 1 else p1
                    sgn = -1.0 if j == i + 1 else 1.0
                    for a, b, lsum in ((L1 * X, L2 * X * Y, LX + np.log(L1 + L2 * Y)),
                                       (L1 * X * Y, L2 * X, LX + np.log(L1 * Y + L2))):
                        d = a + b
                        wk = np.exp(math.log(L1 * L2) + LX + LW - u * (lsum + np.log(np.sinc(d / math.pi))))
                        total += np.sum(wk * g1(c + sgn * a) * g2(c - sgn * b))
                else:
                    t1 = p1 + L1 * X
                    t2 = p2 + L2 * Y
                    total += np.sum(L1 * L2 * np.exp(LW) * np.exp(-u * _log_abs_sin(t1 - t2)) * g1(t1) * g2(t2))
        return complex(total)

    value, _ = adaptive(evaluate, spec)
    return value
