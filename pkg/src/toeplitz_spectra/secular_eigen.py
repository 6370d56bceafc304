"""Eigenvalues of ``T_N(f)`` for even trigonometric-polynomial symbols as
roots of a small secular determinant, plus localization on the grid
``k pi/(N+2)`` and Weyl equidistribution statistics.

Write ``f(theta) = f1(1 - cos theta)`` with ``deg f1 = r``. For a level
``lam`` the preimages ``x_j`` (roots of ``f1 = lam``) map to circle points
``chi_j`` with ``chi + 1/chi = 2(1 - x_j)``; with ``w_j = conj(chi_j)`` the
r x r Hankel block ``M(lam)`` is the band-inverse block with ``a = b = w``.
Then ``det T_N(f - lam) = C^{N+1} E det(I - M)`` where
``C = lead(f1) / (2^r prod w_j)`` and ``E = prod_{i,j} 1/(1 - w_i w_j)``.
Dividing out the phases of ``C^{N+1} E`` gives a real function whose sign
changes are exactly the eigenvalues.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as nppoly
from scipy.optimize import brentq, linear_sum_assignment

from . import kernels
from .band_inverse import hankel_matrix
from .errors import ExcludedLevelError, SymbolError
from .symbols import Symbol, TrigPoly, to_cheb_form

EXCLUDE_RTOL = 1e-9
NUDGE_RTOL = 1e-7
XTOL_RTOL = 1e-11
GRID_FACTOR = 8
MAX_REFINE = 3
IMAG_WARN = 1e-8


def chi_of_lambda(lp) -> complex:
    """Circle point for a preimage: root of ``chi^2 - 2(1 - lp) chi + 1``.

    Real ``lp`` in [0, 2] gives ``(1 - lp) + i sqrt(1 - (lp - 1)^2)`` on the
    unit circle; otherwise the root with ``|chi| <= 1`` is returned.
    """
    lp = complex(lp)
    if abs(lp.imag) <= 1e-14 * (1 + abs(lp)) and 0.0 <= lp.real <= 2.0:
        x = lp.real
        return complex(1.0 - x, math.sqrt(max(0.0, 1.0 - (x - 1.0) ** 2)))
    b = 1.0 - lp
    s = np.sqrt(b * b - 1.0 + 0j)
    c1, c2 = b + s, b - s
    return complex(c1 if abs(c1) <= abs(c2) else c2)


def _even_cosines(f: Symbol, tol=1e-14, max_degree=512):
    """Cosine coefficients ``a_0..a_r`` of an even symbol.

    Smooth symbols are truncated where the coefficients drop below ``tol``
    relative to ``a_0``.
    """
    if isinstance(f, TrigPoly):
        return f.cosine_coefficients()
    if not getattr(f, "is_even", False):
        raise SymbolError("localization needs an even symbol")
    n = 16
    while n <= max_degree:
        c = f.fourier_coefficients(n)[n:].real
        small = np.flatnonzero(np.abs(c) > tol * max(1.0, abs(c[0])))
        deg = int(small.max()) if small.size else 0
        if deg < n - 4:
            return c[:deg + 1].copy()
        n *= 2
    raise SymbolError("symbol coefficients decay too slowly for localization")


def _cos_eval(a, th):
    th = np.asarray(th, dtype=float)
    out = np.full(th.shape, a[0], dtype=float)
    for j in range(1, len(a)):
        out = out + 2.0 * a[j] * np.cos(j * th)
    return out


# ----------------------------------------------------------------------------
# secular system


@dataclass(frozen=True)
class SecularSystem:
    lam: float
    N: int
    preimages: np.ndarray
    chi: np.ndarray
    residues: np.ndarray
    hankel: np.ndarray
    D: complex
    value: float        # real secular function: D with the phase of C^{N+1} E removed
    imag_ratio: float   # |Im| / (1 + |Re|) of the phase-normalized determinant
    excluded: bool = False

    @property
    def r(self):
        return len(self.chi)


@dataclass(frozen=True)
class _Prepared:
    f1: np.ndarray
    lead: float
    excluded_levels: np.ndarray
    span: float
    lo: float
    hi: float


def _prepare(f: TrigPoly) -> _Prepared:
    if not isinstance(f, TrigPoly) or not f.is_even:
        raise SymbolError("secular path needs an even real trigonometric polynomial")
    if f.degree == 0:
        raise SymbolError("constant symbol: every level is degenerate")
    cf = to_cheb_form(f)
    c = np.asarray(cf.coeffs, dtype=float)
    # excluded: f(0) = f1(0), f(pi) = f1(2), and real critical values of f1
    crit = nppoly.polyroots(nppoly.polyder(c)) if len(c) > 2 else np.zeros(0)
    crit = crit[np.abs(np.imag(crit)) <= 1e-9 * (1 + np.abs(crit))].real
    levels = np.concatenate([[nppoly.polyval(0.0, c), nppoly.polyval(2.0, c)],
                             nppoly.polyval(crit, c)])
    a = f.cosine_coefficients()
    th = np.linspace(0.0, np.pi, 4097)
    v = _cos_eval(a, th)
    lo, hi = float(v.min()), float(v.max())
    return _Prepared(c, float(c[-1]), np.sort(levels), hi - lo, lo, hi)


def _is_excluded(prep, lam, rtol=EXCLUDE_RTOL):
    return bool(np.any(np.abs(prep.excluded_levels - lam) <= rtol * max(prep.span, 1e-300)))


def _system(prep: _Prepared, lam: float, N: int, check=True) -> SecularSystem:
    excluded = _is_excluded(prep, lam)
    if excluded and check:
        raise ExcludedLevelError(f"level {lam:.17g} is a critical value or f(0), f(pi)")
    c = prep.f1.astype(complex)
    c[0] -= lam
    pre = nppoly.polyroots(c)
    chi = np.array([chi_of_lambda(x) for x in pre])
    w = np.conj(chi)
    r = len(w)
    res = np.array([np.prod([1.0 / (1.0 - w[n] / w[i]) for n in range(r) if n != i]) for i in range(r)])
    M = hankel_matrix(w, w, res, res, N)
    D = complex(np.linalg.det(np.eye(r) - M))
    Cc = prep.lead / (2.0 ** r * np.prod(w))
    E = np.prod(1.0 / (1.0 - np.outer(w, w)))
    phase = np.exp(1j * ((N + 1) * np.angle(Cc) + np.angle(E)))
    val = D * phase
    return SecularSystem(float(lam), int(N), pre, chi, res, M, D, float(val.real),
                         float(abs(val.imag) / (1.0 + abs(val.real))), excluded)


def secular_determinant(f: TrigPoly, lam: float, N: int) -> SecularSystem:
    """Secular system at level ``lam``; raises on excluded levels."""
    return _system(_prepare(f), float(lam), int(N))


# ----------------------------------------------------------------------------
# locating eigenvalues


@dataclass
class LocateResult:
    eigenvalues: np.ndarray
    expected: int
    grid_size: int
    max_imag_ratio: float
    diagnostics: list = field(default_factory=list)

    @property
    def complete(self):
        return len(self.eigenvalues) == self.expected


def _grid(prep, f, N, factor):
    n = factor * (N + 1)
    lo, hi = prep.lo, prep.hi
    uni = np.linspace(lo, hi, n)
    th = np.linspace(0.0, np.pi, n)
    g = np.unique(np.concatenate([uni, _cos_eval(f.cosine_coefficients(), th)]))
    nudge = NUDGE_RTOL * prep.span
    out = []
    for x in g:
        if _is_excluded(prep, x, rtol=NUDGE_RTOL / 2):
            # step away from the excluded level, staying inside [lo, hi]
            x = x + nudge if x + nudge < hi else x - nudge
        out.append(min(max(x, lo + nudge), hi - nudge))
    return np.unique(out)


def locate_eigenvalues(f: TrigPoly, N: int, return_details=False):
    """Eigenvalues of ``T_N(f)`` from sign changes of the secular function.

    The level grid is refined (doubling the density) up to three times when
    fewer than ``N + 1`` roots are bracketed; a diagnostic is attached if the
    count is still wrong.
    """
    if not getattr(f, "has_unique_min", True) and f.has_unique_min is not None:
        raise SymbolError("secular path needs a symbol with a unique minimum")
    prep = _prepare(f)
    xtol = XTOL_RTOL * prep.span
    cache = {}

    def F(lam):
        if lam not in cache:
            cache[lam] = _system(prep, lam, N, check=False)
        return cache[lam]

    roots, diag, factor, imag = [], [], GRID_FACTOR, 0.0
    for attempt in range(MAX_REFINE + 1):
        grid = _grid(prep, f, N, factor)
        vals = np.array([F(x).value for x in grid])
        imag = max(F(x).imag_ratio for x in grid if not F(x).excluded)
        roots = []
        for x0, x1, v0, v1 in zip(grid[:-1], grid[1:], vals[:-1], vals[1:]):
            if v0 == 0.0:
                roots.append(x0)
            elif v0 * v1 < 0.0:
                roots.append(brentq(lambda t: F(t).value, x0, x1, xtol=xtol, rtol=1e-15))
        if vals[-1] == 0.0:
            roots.append(grid[-1])
        if len(roots) == N + 1:
            break
        factor *= 2
    if len(roots) != N + 1:
        diag.append(f"bracketed {len(roots)} roots, expected {N + 1} after {MAX_REFINE} refinements")
    if imag > IMAG_WARN:
        diag.append(f"phase-normalized determinant has relative imaginary part {imag:.3g}")
    out = np.sort(np.asarray(roots, dtype=float))
    if return_details:
        return LocateResult(out, N + 1, len(grid), imag, diag)
    return out


# ----------------------------------------------------------------------------
# localization and Weyl statistics

TEST_FUNCTIONS = {
    "x": lambda x: x,
    "x2": lambda x: x * x,
    "cos": np.cos,
    "abs": np.abs,
}


def weyl_statistic(eigs, f: Symbol, N: int, testfns=None):
    """``(1/N) |sum h(lam_j) - sum h(f(-pi + 2 j pi/(N+1)))|`` per test function."""
    eigs = np.asarray(eigs, dtype=float)
    if len(eigs) != N + 1:
        raise ValueError(f"need {N + 1} eigenvalues, got {len(eigs)}")
    names = list(TEST_FUNCTIONS) if testfns is None else list(testfns)
    th = -np.pi + 2.0 * np.pi * np.arange(1, N + 2) / (N + 1)
    fv = f.real_values(th)
    return {h: float(abs(np.sum(TEST_FUNCTIONS[h](eigs)) - np.sum(TEST_FUNCTIONS[h](fv))) / N)
            for h in names}


@dataclass(frozen=True)
class EigenLocalizationReport:
    N: int
    eigenvalues: np.ndarray
    k: np.ndarray          # 1-based grid index per eigenvalue
    theta: np.ndarray
    max_abs_theta: float
    bijective: bool
    weyl: dict
    min_gap: float         # lambda_min - min f
    theta0: float
    k_min: int
    theta0_ok: bool

    @property
    def passed(self):
        return self.bijective and self.max_abs_theta < 1.0

    def to_json(self):
        return {
            "N": self.N,
            "eigenvalues": self.eigenvalues.tolist(),
            "assignments": [{"k": int(k), "theta": float(t)} for k, t in zip(self.k, self.theta)],
            "max_abs_theta": self.max_abs_theta,
            "bijective": self.bijective,
            "weyl": dict(self.weyl),
            "min_gap": self.min_gap,
            "theta0": self.theta0,
            "k_min": self.k_min,
            "theta0_ok": self.theta0_ok,
            "pass": self.passed,
        }


def localize(eigs, f: Symbol, N: int) -> EigenLocalizationReport:
    """Match each eigenvalue to ``f(k pi/(N+2) + theta pi/N)`` with ``|theta| < 1``.

    Per (eigenvalue, k) the smallest-``|theta|`` root is found by bisection on
    8 cells of [-1, 1]; the assignment minimizing total ``|theta|`` (residual
    penalty when no root is bracketed) is taken.
    """
    eigs = np.sort(np.asarray(eigs, dtype=float))
    if len(eigs) != N + 1:
        raise ValueError(f"need {N + 1} eigenvalues, got {len(eigs)}")
    a = np.ascontiguousarray(_even_cosines(f), dtype=float)
    theta, resid, bracketed = kernels.theta_offsets(a, np.ascontiguousarray(eigs), int(N))
    theta, resid, bracketed = np.asarray(theta), np.asarray(resid), np.asarray(bracketed)
    cost = np.where(bracketed, np.abs(theta), 10.0 + resid)
    rows, cols = linear_sum_assignment(cost)
    k = np.empty(N + 1, dtype=int)
    th = np.empty(N + 1)
    k[rows] = cols + 1
    th[rows] = theta[rows, cols]
    ok = bool(np.all(bracketed[rows, cols])) and len(set(k.tolist())) == N + 1
    grid = np.linspace(0.0, np.pi, 4097)
    fv = _cos_eval(a, grid)
    theta0 = float(grid[np.argmin(fv)])
    kmin = int(k[0])
    return EigenLocalizationReport(
        int(N), eigs, k, th, float(np.abs(th).max()), ok,
        weyl_statistic(eigs, f, N), float(eigs[0] - fv.min()), theta0, kmin,
        bool(abs(kmin * np.pi / (N + 2) - theta0) <= np.pi / np.sqrt(N)))
