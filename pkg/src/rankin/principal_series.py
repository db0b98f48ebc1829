"""Spherical unitary principal series P(i lambda, +) of SL±(2).

Vectors are stored in the compact picture by their Fourier coefficients.
With x = cot(theta), theta in (0, pi), the two pictures are related by

    f(x) = (1 + x^2)^{-(1 + i lambda)/2} f~(theta) = |sin theta|^{1 + i lambda} f~(theta),

and f~ is pi-periodic, so only even modes occur.  The Hilbert norm is
||f||^2 = pi * sum |c(n)|^2 = (1/2) int_0^{2pi} |f~|^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .circle_harmonics import CoefficientSequence
from .errors import DomainError, SingularityError, TailError
from .mathkit.quadrature import QuadratureSpec, real_line_fourier
from .mathkit.special import bessel_k, log_gamma

GRID_POINTS = 2048
CONTOUR_SHIFT = 0.99


def _parity_of(values: np.ndarray) -> str:
    return "even_fn" if np.allclose(values, values[::-1], rtol=0, atol=1e-15) else "none"


@dataclass(frozen=True)
class PrincipalSeriesVector:
    lam: float
    coeffs: CoefficientSequence
    extension: str = "e"

    def __post_init__(self):
        if self.extension not in ("e", "o"):
            raise DomainError("extension must be 'e' or 'o'")
        if not math.isfinite(self.lam):
            raise DomainError("lambda must be a finite real number")
        odd = self.coeffs.n % 2 != 0
        if np.any(self.coeffs.values[odd] != 0):
            raise DomainError("compact-picture vectors are pi-periodic: odd modes must vanish")

    @property
    def norm(self) -> float:
        return math.sqrt(math.pi * float(np.sum(np.abs(self.coeffs.values) ** 2)))

    def compact(self, theta):
        """f~(theta) from the stored coefficients."""
        return self.coeffs.evaluate(theta)

    def noncompact(self, x):
        """f(x) = |sin theta|^{1+i lambda} f~(theta), theta = arccot x in (0, pi)."""
        x = np.asarray(x, dtype=float)
        theta = np.arctan2(1.0, x)
        lam = self.lam
        return np.exp((1.0 + 1j * lam) * np.log(np.sin(theta))) * self.compact(theta)

    def noncompact_analytic(self, z):
        """Analytic continuation of ``noncompact`` off the real axis.

        With e^{2 i m theta} = ((z + i)/(z - i))^m and 1 + z^2 = (z + i)(z - i),
        the vector is analytic away from the branch points z = +-i.
        """
        z = np.asarray(z, dtype=complex)
        s = 0.5 * (1.0 + 1j * self.lam)
        base = np.exp(-s * (np.log(z + 1j) + np.log(z - 1j)))
        ratio = (z + 1j) / (z - 1j)
        n = self.coeffs.n
        out = np.zeros(z.shape, dtype=complex)
        for k, c in zip(n[::2].tolist(), self.coeffs.values[::2].tolist()):
            if c != 0:
                out = out + c * ratio ** (k // 2)
        return base * out

    def with_coeffs(self, values) -> "PrincipalSeriesVector":
        values = np.asarray(values, dtype=complex)
        seq = CoefficientSequence(values, _parity_of(values), self.coeffs.tail_bound,
                                  self.coeffs.tail_sup)
        return PrincipalSeriesVector(self.lam, seq, self.extension)


def from_coefficients(lam: float, modes: dict[int, complex] | np.ndarray, N: int | None = None,
                      extension: str = "e") -> PrincipalSeriesVector:
    """Build a vector from {mode: coefficient} (even modes) or a full 2N+1 array."""
    if isinstance(modes, dict):
        top = max([abs(k) for k in modes] + [2])
        N = top if N is None else N
        vals = np.zeros(2 * N + 1, dtype=complex)
        for k, c in modes.items():
            if k % 2:
                raise DomainError(f"mode {k} is odd; compact-picture vectors use even modes")
            vals[k + N] = c
    else:
        vals = np.asarray(modes, dtype=complex)
    return PrincipalSeriesVector(float(lam), CoefficientSequence(vals, _parity_of(vals)), extension)


def spherical_vector(lam: float, N: int = 2, extension: str = "e") -> PrincipalSeriesVector:
    return from_coefficients(lam, {0: 1.0}, N, extension)


def picture_convert(f_noncompact, lam: float, N: int = 64,
                    grid: int = GRID_POINTS) -> PrincipalSeriesVector:
    """Compact-picture coefficients of a noncompact-picture function.

    f~(theta) = (1 + x^2)^{(1 + i lambda)/2} f(x) is sampled on a midpoint
    grid in theta (so x = cot theta stays finite) and transformed by FFT.
    """
    if N > grid // 2:
        raise DomainError("truncation exceeds the resolution of the theta grid")
    # decay probe: f~ must stay bounded as x -> +-infinity
    probe = np.array([1e4, 1e6, -1e4, -1e6])
    edge = np.abs(np.exp((1.0 + 1j * lam) * 0.5 * np.log1p(probe ** 2)) * f_noncompact(probe))
    if not np.all(np.isfinite(edge)) or edge[1] > 10 * edge[0] + 1e-12 or edge[3] > 10 * edge[2] + 1e-12:
        raise TailError("noncompact profile decays too slowly for a continuous compact picture")
    theta = (np.arange(grid) + 0.5) * math.pi / grid
    x = 1.0 / np.tan(theta)
    values = np.exp((1.0 + 1j * lam) * (-np.log(np.sin(theta)))) * f_noncompact(x)
    # c(2m) = (1/pi) int_0^pi f~ e^{-2 i m theta}, midpoint rule
    m = np.arange(-(N // 2), N // 2 + 1)
    phase = np.exp(-2j * np.outer(m, theta))
    half = phase @ values / grid
    vals = np.zeros(2 * N + 1, dtype=complex)
    vals[N + 2 * m] = half
    return from_coefficients(lam, vals)


def k_rotate(v: PrincipalSeriesVector, theta0: float) -> PrincipalSeriesVector:
    """Translate the compact picture: f~(theta) -> f~(theta + theta0).

    This is the action of k_{-theta0}; coefficients pick up e^{i n theta0}.
    """
    phase = np.exp(1j * v.coeffs.n * float(theta0))
    return v.with_coeffs(v.coeffs.values * phase)


def i_minus_action(v: PrincipalSeriesVector) -> PrincipalSeriesVector:
    """I_- = diag(-1, 1): f(x) -> f(-x) (extension e) or -f(-x) (extension o)."""
    vals = v.coeffs.values[::-1]
    if v.extension == "o":
        vals = -vals
    return v.with_coeffs(vals)


@dataclass(frozen=True)
class GroupElement:
    """A matrix [[a, b], [c, d]] with determinant +-1 and its Iwasawa data.

    For determinant +1, g = k_theta a_r n_t with k_theta the rotation by
    theta, a_r = diag(r, 1/r), r > 0, and n_t upper unipotent.
    """

    a: float
    b: float
    c: float
    d: float
    iwasawa: tuple = field(init=False, repr=False)

    def __post_init__(self):
        det = self.a * self.d - self.b * self.c
        if abs(abs(det) - 1.0) > 1e-12:
            raise DomainError(f"determinant {det} is not +-1")
        if det > 0:
            r = math.hypot(self.a, self.c)
            theta = math.atan2(self.c, self.a)
            t = (self.a * self.b + self.c * self.d) / (r * r)
            object.__setattr__(self, "iwasawa", (theta, r, t))
        else:
            object.__setattr__(self, "iwasawa", None)

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]])

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        m = self.matrix @ other.matrix
        return GroupElement(*m.ravel().tolist())

    @classmethod
    def rotation(cls, theta: float):
        c, s = math.cos(theta), math.sin(theta)
        return cls(c, -s, s, c)

    @classmethod
    def diagonal(cls, r: float):
        return cls(r, 0.0, 0.0, 1.0 / r)

    @classmethod
    def unipotent(cls, t: float):
        return cls(1.0, t, 0.0, 1.0)

    @classmethod
    def from_iwasawa(cls, theta: float, r: float, t: float):
        return cls.rotation(theta) @ cls.diagonal(r) @ cls.unipotent(t)


def group_action_noncompact(g: GroupElement, f, u, parity: str = "+"):
    """pi_{u,+-}(g) f(x) = chi(a - c x) |a - c x|^{-1-u} f((d x - b)/(a - c x)).

    Returns a vectorized function.  Evaluating at the multiplier zero
    x = a/c raises SingularityError.
    """
    if parity not in ("+", "-"):
        raise DomainError("parity must be '+' or '-'")
    u = complex(u)

    def acted(x):
        x = np.asarray(x, dtype=float)
        mult = g.a - g.c * x
        if np.any(mult == 0):
            raise SingularityError("evaluation at the zero of the multiplier a - c x")
        out = np.exp((-1.0 - u) * np.log(np.abs(mult))) * f((g.d * x - g.b) / mult)
        if parity == "-":
            out = out * np.sign(mult)
        return out

    return acted


def spherical_fourier(lam: float, xi):
    """Fourier transform of (1 + x^2)^{-s}, s = (1 + i lambda)/2:

        (2 pi^s / Gamma(s)) |xi|^{s - 1/2} K_{s - 1/2}(2 pi |xi|).
    """
    s = 0.5 * (1.0 + 1j * lam)
    xi = abs(float(xi))
    if xi == 0:
        raise DomainError("closed form is singular at xi = 0")
    log_pref = math.log(2.0) + s * math.log(math.pi) - log_gamma(s) + (s - 0.5) * math.log(xi)
    return complex(np.exp(log_pref) * bessel_k(s - 0.5, 2.0 * math.pi * xi))


def whittaker_eval(v: PrincipalSeriesVector, k_angle: float, a: float, t: float,
                   spec: QuadratureSpec = QuadratureSpec(abs_tol=1e-9),
                   method: str = "auto") -> complex:
    """Wh_f(k a n_t) = chi(a) |a|^{-1 + i lambda} e^{2 pi i t} F(pi(k)^{-1} f)(a^{-2} sgn a).

    ``method`` is "closed" (spherical vectors only), "numeric", or "auto"
    (closed form whenever the vector is a multiple of the spherical one).
    """
    a = float(a)
    if a == 0:
        raise DomainError("Whittaker function is undefined at a = 0")
    chi = -1.0 if (a < 0 and v.extension == "o") else 1.0
    pref = chi * np.exp((-1.0 + 1j * v.lam) * math.log(abs(a))) * np.exp(2j * math.pi * t)
    xi = math.copysign(a ** -2, a)
    vals = v.coeffs.values
    spherical = np.count_nonzero(vals) <= 1 and vals[v.coeffs.N] != 0
    if method == "closed" and not spherical:
        raise DomainError("closed form applies only to the spherical vector")
    if method == "closed" or (method == "auto" and spherical):
        # the spherical vector is K-fixed, so the rotation drops out
        return complex(pref * vals[v.coeffs.N] * spherical_fourier(v.lam, xi))
    # pi(k_theta)^{-1} = pi(k_{-theta}) translates f~ by +theta
    rotated = k_rotate(v, k_angle)
    # move the contour most of the way to the branch point on the decaying side
    eta = -CONTOUR_SHIFT * math.copysign(1.0, xi)
    value, _ = real_line_fourier(rotated.noncompact_analytic, xi, spec, shift=eta)
    return complex(pref * value)
