"""Named numerical checks shared by the CLI and the acceptance suite.

Each check returns a CheckResult: a table of computed rows plus a list of
assertions (label, passed, detail).  Nothing here relaxes a tolerance; a
failing assertion is reported as such.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import archimedean_index as ai
from . import automorphic_pipeline as ap
from . import circle_harmonics as ch
from . import eisenstein as es
from .mathkit import special as sp
from .mathkit.quadrature import QuadratureSpec
from .principal_series import from_coefficients, k_rotate
from .trilinear import SpectralPoint, tr_rs_fourier, tr_rs_quadrature


@dataclass
class CheckResult:
    name: str
    header: list
    rows: list = field(default_factory=list)
    assertions: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)

    def expect(self, label: str, passed: bool, detail: str = "") -> None:
        self.assertions.append((label, bool(passed), detail))

    @property
    def passed(self) -> bool:
        return all(p for _, p, _ in self.assertions)


def _rel(a, b) -> float:
    a, b = complex(a), complex(b)
    return abs(a - b) / max(abs(b), 1e-300)


def check_special_functions(seed: int = 0) -> CheckResult:
    res = CheckResult("special-functions", ["quantity", "max_rel_error"])
    rng = np.random.default_rng(seed)
    z = rng.uniform(-20, 20, 200) + 1j * rng.uniform(-50, 50, 200)
    z = z[np.abs(z - np.round(z.real)) > 1e-3]
    g = sp.log_gamma
    fe = np.abs(np.exp(g(z + 1) - g(z)) / z - 1.0).max()
    dup = np.abs(np.exp(g(z) + g(z + 0.5) - (1 - 2 * z) * math.log(2) - 0.5 * math.log(math.pi) - g(2 * z)) - 1.0).max()
    ys = np.geomspace(1e-3, 50, 40)
    kh = np.abs(np.asarray(sp.bessel_k(0.5, ys)) / (np.sqrt(np.pi / (2 * ys)) * np.exp(-ys)) - 1.0).max()
    zt = abs(sp.zeta(2.0) / (math.pi ** 2 / 6) - 1.0)
    for label, val, tol in (("gamma functional equation", fe, 1e-11), ("duplication formula", dup, 1e-11),
                            ("K_1/2 closed form", kh, 1e-10), ("zeta(2) = pi^2/6", zt, 1e-10)):
        res.rows.append([label, float(val)])
        res.expect(f"{label} <= {tol:g}", val <= tol, f"{val:.3e}")
    return res


def check_cos_power(seed: int = 0) -> CheckResult:
    res = CheckResult("cos-power-coefficients", ["w_re", "w_im", "max_abs_error"])
    rng = np.random.default_rng(seed)
    ws = [complex(-0.89, 0.0), complex(2.0, 0.0), complex(-0.5, 5.0), complex(-0.85, 50.0), complex(1.9, -50.0)]
    ws += list(rng.uniform(-0.89, 2.0, 7) + 1j * rng.uniform(-50, 50, 7))
    n = np.arange(-32, 33)
    worst = 0.0
    for w in ws:
        c = ch.cos_power_coeffs(w, 32)
        oracle = ch.coeff_quadrature_oracle(ch.PowerKernelSpec(w), n, abs_tol=1e-11)
        err = float(np.abs(c.values - oracle).max())
        worst = max(worst, err)
        res.rows.append([w.real, w.imag, err])
    res.expect("oracle agreement <= 1e-8", worst <= 1e-8, f"{worst:.3e}")
    c1 = ch.cos_power_coeffs(1.0, 8)
    e0 = abs(c1[0] - 2 / math.pi)
    e2 = max(abs(c1[2] - 2 / (3 * math.pi)), abs(c1[-2] - 2 / (3 * math.pi)))
    res.expect("|cos| closed forms <= 1e-12", max(e0, e2) <= 1e-12, f"{max(e0, e2):.3e}")
    return res


def check_l1_growth(u1_grid=None, eps: float = 1.0, mapper=map) -> CheckResult:
    u1_grid = np.geomspace(10, 1000, 12) if u1_grid is None else u1_grid
    fit = ai.l1_exponent_scan(eps, u1_grid, mapper)
    res = CheckResult("l1-scan", ["u1", "l1_norm"], [list(g) for g in fit.grid])
    res.summary = {"fitted_exponent": fit.fitted_exponent, "fitted_constant": fit.fitted_constant,
                   "residual": fit.residual}
    res.expect("fitted L1 exponent <= 0.55", fit.fitted_exponent <= 0.55, f"{fit.fitted_exponent:.4f}")
    return res


def _random_vector(rng, lam, modes):
    return from_coefficients(lam, {m: complex(*rng.normal(size=2)) for m in modes})


def _trilinear_sample(args):
    sigma, l1, l2, c1, c2, theta = args
    pt = SpectralPoint(sigma, l1, l2)
    f1 = from_coefficients(l1, c1)
    f2 = from_coefficients(l2, c2)
    four = tr_rs_fourier(f1, f2, pt).value
    quad = tr_rs_quadrature(f1, f2, None, pt, QuadratureSpec(abs_tol=1e-10)).value
    rot = tr_rs_fourier(k_rotate(f1, theta), k_rotate(f2, theta), pt).value
    return four, quad, rot


def check_trilinear(samples: int = 20, seed: int = 0, modes: int = 4, mapper=map) -> CheckResult:
    res = CheckResult("trilinear-check", ["sigma", "lambda1", "lambda2", "fourier_re", "fourier_im",
                                          "quadrature_re", "quadrature_im", "rel_diff", "rotation_rel_diff"])
    rng = np.random.default_rng(seed)
    sigmas = (0.55, 0.75, 0.9)
    mode_set = list(range(-2 * (modes // 2), 2 * (modes // 2) + 1, 2))
    jobs = []
    for k in range(samples):
        l1, l2 = rng.uniform(-3, 3, 2)
        c1 = {m: complex(*rng.normal(size=2)) for m in mode_set}
        c2 = {m: complex(*rng.normal(size=2)) for m in mode_set}
        jobs.append((sigmas[k % 3], float(l1), float(l2), c1, c2, float(rng.uniform(0, 2 * math.pi))))
    worst = worst_rot = 0.0
    for job, (four, quad, rot) in zip(jobs, mapper(_trilinear_sample, jobs)):
        rel = _rel(four, quad)
        rrel = _rel(rot, four)
        worst, worst_rot = max(worst, rel), max(worst_rot, rrel)
        res.rows.append([job[0], job[1], job[2], four.real, four.imag, quad.real, quad.imag, rel, rrel])
    res.expect("fourier vs quadrature <= 1e-5 relative", worst <= 1e-5, f"{worst:.3e}")
    res.expect("K-rotation invariance <= 1e-10", worst_rot <= 1e-10, f"{worst_rot:.3e}")
    return res


INDEX_LATTICE = [(s, t, lam) for s in (0.55, 0.7, 0.85) for t in (0.0, 5.0, 20.0)
                 for lam in ((0.0, 0.0), (1.0, 2.0))]


def _isup_point(args):
    sigma, t, lam, seed, N = args
    pt = SpectralPoint(complex(sigma, t), *lam)
    v = ai.index_value(pt, N)
    b, ascent = ai.index_bruteforce(pt, seed=seed, return_ascent=True)
    # delta-sequence extremizer at the argmax mode
    m = v.argmax_mode
    f1 = from_coefficients(lam[0], {m: 1.0}, max(abs(m), 2))
    f2 = from_coefficients(lam[1], {m: 1.0}, max(abs(m), 2))
    tr = abs(tr_rs_fourier(f1, f2, pt).value) / (f1.norm * f2.norm)
    return v, b, ascent, tr


def check_isup(points=None, seed: int = 0, N: int | None = None, mapper=map) -> CheckResult:
    res = CheckResult("index-compute", ["sigma", "t", "lambda1", "lambda2", "index", "bruteforce",
                                        "argmax_mode", "rel_diff", "extremizer_rel_diff", "ascent_excess"])
    points = INDEX_LATTICE if points is None else points
    worst = worst_ext = worst_asc = 0.0
    positive = True
    for (sigma, t, lam), (v, b, ascent, tr) in zip(
            points, mapper(_isup_point, [(s, t, lam, seed, N) for s, t, lam in points])):
        rel = abs(v.index - b.index) / b.index
        ext = abs(tr - v.index) / v.index
        asc = ascent / b.index - 1.0
        worst, worst_ext, worst_asc = max(worst, rel), max(worst_ext, ext), max(worst_asc, asc)
        positive &= v.index > 0
        res.rows.append([sigma, t, lam[0], lam[1], v.index, b.index, v.argmax_mode, rel, ext, asc])
    res.expect("index_value = index_bruteforce to 1e-8", worst <= 1e-8, f"{worst:.3e}")
    res.expect("delta extremizer attains the sup to 1e-8", worst_ext <= 1e-8, f"{worst_ext:.3e}")
    res.expect("ascent never beats single modes by > 1e-9", worst_asc <= 1e-9, f"{worst_asc:.3e}")
    res.expect("index > 0 on the lattice", positive)
    return res


def check_index_floor(sigmas=(0.6, 0.75, 0.9), t_grid=None, lambda1: float = 0.0, lambda2: float = 0.0,
                      N: int | None = None, mapper=map) -> CheckResult:
    """Floor of I (1+t)^{1-sigma} and the fitted exponent against sigma - 1.

    'Stable floor' is read as: the compensated quantity carries no
    decaying trend, i.e. its log-log slope (= fitted exponent - (sigma - 1))
    is >= -0.05, the same margin as the exponent check.
    """
    ts = np.geomspace(1, 200, 14) if t_grid is None else t_grid
    res = CheckResult("index-scan", ["sigma", "t", "lambda1", "lambda2", "index", "argmax_mode", "tail_bound",
                                     "compensated"])
    fits = {}
    for sigma in sigmas:
        fit, results = ai.index_scan(sigma, ts, lambda1, lambda2, N, mapper)
        fits[sigma] = fit
        for r in results:
            res.rows.append([r.pt.sigma, r.pt.t, r.pt.lambda1, r.pt.lambda2, r.index, r.argmax_mode, r.c_seq_tail,
                             r.index * (1.0 + abs(r.pt.t)) ** (1.0 - sigma)])
        res.expect(f"sigma={sigma}: floor > 0", fit.floor > 0, f"{fit.floor:.4g}")
        res.expect(f"sigma={sigma}: fitted exponent >= sigma - 1 - 0.05",
                   fit.fitted_exponent >= sigma - 1.05, f"{fit.fitted_exponent:.4f} vs {sigma - 1.05:.4f}")
        # slope of the compensated floor is fitted_exponent - (sigma - 1)
        trend = fit.fitted_exponent - (sigma - 1.0)
        res.expect(f"sigma={sigma}: floor without vanishing trend", trend >= -0.05, f"slope {trend:.4f}")
    res.summary = {f"sigma={s}": {"fitted_exponent": f.fitted_exponent, "fitted_constant": f.fitted_constant,
                                  "floor": f.floor, "residual": f.residual} for s, f in fits.items()}
    return res


def _eis_sample(args):
    x, y, s, tol = args
    z = es.UpperHalfPoint(x, y)
    lat = es.eval_lattice_sum(z, s, tol=tol)
    four = es.eval_fourier_expansion(z, s, tol=tol)
    zt = es.UpperHalfPoint(x + 1.0, y)
    zi = z.act(0, -1, 1, 0)
    inv = max(abs(es.eval_fourier_expansion(zt, s, tol) - four), abs(es.eval_fourier_expansion(zi, s, tol) - four),
              abs(es.eval_lattice_sum(zt, s, tol=tol) - lat), abs(es.eval_lattice_sum(zi, s, tol=tol) - lat))
    return lat, four, inv


def check_eisenstein(samples: int = 10, seed: int = 0, mapper=map, tol: float | None = None) -> CheckResult:
    tol = 1e-13 if tol is None else tol
    res = CheckResult("eisenstein-check", ["x", "y", "s_re", "s_im", "lattice_re", "lattice_im",
                                           "fourier_re", "fourier_im", "rel_diff", "modular_diff"])
    rng = np.random.default_rng(seed)
    jobs = [(0.0, 2.0, 2.0 + 0j)]
    while len(jobs) < samples:
        x = float(rng.uniform(-0.5, 0.5))
        y = float(rng.uniform(0.87, 1.2))
        if x * x + y * y < 1.0:
            continue
        jobs.append((x, y, complex(rng.uniform(1.1, 2.5), rng.uniform(-15, 15))))
    worst = worst_inv = 0.0
    for (x, y, s), (lat, four, inv) in zip(jobs, mapper(_eis_sample, [j + (tol,) for j in jobs])):
        rel = _rel(lat, four)
        worst, worst_inv = max(worst, rel), max(worst_inv, inv / max(abs(four), 1.0))
        res.rows.append([x, y, s.real, s.imag, lat.real, lat.imag, four.real, four.imag, rel, inv])
    res.expect("lattice vs Fourier <= 1e-6 relative", worst <= 1e-6, f"{worst:.3e}")
    res.expect("modular invariance <= 1e-7", worst_inv <= 1e-7, f"{worst_inv:.3e}")
    uni = max(abs(abs(es.scattering(0.5 + 1j * t)) - 1.0) for t in np.linspace(1, 100, 25))
    res.expect("|phi(1/2 + it)| = 1 to 1e-8", uni <= 1e-8, f"{uni:.3e}")
    vol = abs(ap.fundamental_domain_quad(lambda xs, y: np.ones_like(xs)) - math.pi / 3)
    res.expect("vol(F) = pi/3 to 1e-7", vol <= 1e-7, f"{vol:.3e}")
    return res


def check_supnorm(t_grid=None, sigma: float = 0.5, sample: es.DomainSample = es.DomainSample(),
                  mapper=map, tol: float | None = None) -> CheckResult:
    ts = np.geomspace(10, 60, 8) if t_grid is None else t_grid
    rep = es.supnorm_scan(ts, sigma, sample, 1e-10 if tol is None else tol, mapper=mapper)
    res = CheckResult("eisenstein-supnorm", ["t", "sigma", "weighted_sup", "argmax_x", "argmax_y"])
    for t, v, (x, y) in zip(rep.t_grid, rep.weighted_sup, rep.argmax):
        res.rows.append([t, sigma, v, x, y])
    res.summary = {"fitted_exponent": rep.fit.fitted_exponent, "fitted_constant": rep.fit.fitted_constant,
                   "residual": rep.fit.residual}
    res.expect("weighted sup exponent <= 0.5", rep.fit.fitted_exponent <= 0.5, f"{rep.fit.fitted_exponent:.4f}")
    return res


def check_weighted_sup(s_values, eps: float, sample: es.DomainSample = es.DomainSample(),
                       tol: float | None = None) -> CheckResult:
    res = CheckResult("weighted-sup", ["s_re", "s_im", "eps", "sup", "argmax_x", "argmax_y"])
    ok = True
    for s in s_values:
        sup, (x, y) = es.weighted_sup_E_v(s, eps, sample, 1e-10 if tol is None else tol)
        ok &= math.isfinite(sup) and sup > 0
        res.rows.append([complex(s).real, complex(s).imag, eps, sup, x, y])
    res.expect("sup finite and positive", ok)
    return res


PL_CASES = (
    ("4/3 - sigma", [(Fraction(3, 4), Fraction(7, 12)), (Fraction(9, 10), Fraction(13, 30))], Fraction(5, 6)),
    ("11/8 - sigma", [(Fraction(3, 4), Fraction(5, 8)), (Fraction(1), Fraction(3, 8))], Fraction(7, 8)),
    ("convexity reference", [(Fraction(1), Fraction(0))], Fraction(1)),
)


def check_pl(cases=PL_CASES) -> CheckResult:
    res = CheckResult("pl-exponent", ["input", "exponent_at_half", "expected"])
    for label, pts, expected in cases:
        out = ap.pl_interpolate(pts, "functional_equation")
        res.rows.append([label, str(out.exponent), "" if expected is None else str(expected)])
        if expected is None:
            res.expect(f"{label}: exponent at 1/2 computed", out.sigma == Fraction(1, 2), str(out.exponent))
        else:
            res.expect(f"{label} -> {expected}", out.exponent == expected and out.sigma == Fraction(1, 2),
                       str(out.exponent))
    return res


def check_unfold(f1: ap.MaassFormData | None = None, f2: ap.MaassFormData | None = None,
                 s_values=(1.5, 2.0, 2.5), tol: float | None = None) -> CheckResult:
    f1 = ap.mock_form() if f1 is None else f1
    f2 = f1 if f2 is None else f2
    mock = "synthetic" in (f1.source + f2.source).lower()
    rows, spread = ap.unfold_check(f1, f2, s_values, 1e-9 if tol is None else tol)
    res = CheckResult("unfold-check", ["s", "l_quotient_re", "l_quotient_im", "dirichlet_re", "dirichlet_im",
                                       "ratio_re", "ratio_im"])
    for s, q, d, r in rows:
        res.rows.append([s.real, q.real, q.imag, d.real, d.imag, r.real, r.imag])
    res.summary = {"relative_spread": spread, "mock_data": mock}
    finite = all(np.isfinite([q.real, q.imag, d.real, r.real]).all() for _, q, d, r in rows)
    if mock:
        # a synthetic form is not modular, so unfolding does not apply to it
        res.expect("mock data: pipeline ran and reported the ratio table (non-mathematical)", finite,
                   f"spread {spread:.3e}")
    else:
        res.expect("unfolding constant consistent to 1e-3", spread <= 1e-3, f"spread {spread:.3e}")
    return res


def check_bound(sigma: float = 0.75, t_grid=None, eps: float | None = None, mapper=map) -> CheckResult:
    ts = np.geomspace(5, 60, 8) if t_grid is None else t_grid
    rep = ap.bound_pipeline(sigma, ts, eps=eps, mapper=mapper)
    res = CheckResult("bound-pipeline", ["t", "sigma", "sup_E_v", "index", "ratio"])
    for row in zip(rep.t_grid, rep.sup_E_v, rep.index, rep.ratio):
        res.rows.append([row[0], sigma, row[1], row[2], row[3]])
    ceiling = 1.0 / 3.0 + (1.0 - sigma) + 0.1
    res.summary = {"fitted_exponent": rep.fit.fitted_exponent, "regime": rep.regime, **rep.comparisons,
                   "eps": rep.eps}
    ratio = np.asarray(rep.ratio, dtype=float)
    res.expect("ratio positive and finite", bool(np.all(np.isfinite(ratio)) and np.all(ratio > 0)))
    res.expect(f"fitted exponent <= 1/3 + (1 - sigma) + 0.1 = {ceiling:.4f}", rep.fit.fitted_exponent <= ceiling,
               f"{rep.fit.fitted_exponent:.4f}")
    return res
