"""Wiener-Hopf split ``f = g1 g2`` of a band symbol, partial fractions and
the combinatorial helpers ``tau_m`` / ``phi_{k,m}`` used for projections.

With inside roots ``a_j`` (multiplicity ``s_j``) of ``K``::

    g1(chi) = c * prod_j (1 - conj(a_j) chi)^{s_j}      (analytic)
    g2(chi) = prod_j (1 - a_j / chi)^{s_j}              (co-analytic)

``c`` is fixed so that ``g1 g2 = f`` on the circle.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import ConvergenceError, NotHermitianError, SymbolError
from .polyroots import RootSet, classify_unit_circle, find_roots, k_polynomial
from .symbols import TrigPoly, TWO_PI

COINCIDENT_RTOL = 1e-8


# ----------------------------------------------------------------------------
# partial fractions of 1 / prod_j (1 - p_j x)^{s_j}


@dataclass(frozen=True)
class ResidueTable:
    """``1/prod_j (1 - p_j x)^{s_j} = sum_j sum_h R[j][h-1] / (1 - p_j x)^h``."""

    poles: np.ndarray
    multiplicities: np.ndarray
    residues: tuple  # residues[j][h - 1]
    scale: complex = 1.0

    def evaluate(self, x):
        x = np.asarray(x, dtype=complex)
        # without a nonzero pole the function is the constant ``scale``
        out = np.zeros_like(x) if np.any(self.poles != 0) else np.ones_like(x)
        for p, res in zip(self.poles, self.residues):
            d = 1.0 - p * x
            for h, a in enumerate(res, start=1):
                out = out + a / d ** h
        return self.scale * out

    def target(self, x):
        x = np.asarray(x, dtype=complex)
        out = np.ones_like(x)
        for p, s in zip(self.poles, self.multiplicities):
            out = out * (1.0 - p * x) ** int(s)
        return self.scale / out

    @property
    def simple(self):
        return np.array([r[0] for r in self.residues], dtype=complex)

    def max_error(self, n=64, radius=None):
        """Evaluation check at ``n`` off-pole points on a circle."""
        if radius is None:
            radius = 0.5 / max(1.0, np.abs(self.poles).max(initial=0.0))
        x = radius * np.exp(1j * (TWO_PI * np.arange(n) / n + 0.1))
        t = self.target(x)
        return float(np.abs(self.evaluate(x) - t).max() / max(1.0, np.abs(t).max()))


def partial_fractions(poles, scale=1.0) -> ResidueTable:
    """Residues of ``scale / prod_j (1 - p_j x)^{s_j}``; ``poles`` lists ``(p_j, s_j)``.

    Simple poles use ``A_j = prod_{n != j} (1 - p_n / p_j)^{-1}``; higher
    multiplicities are fitted by least squares on sample points around each
    singularity ``x = 1 / p_j``. A zero ``p_j`` is a constant factor and gets
    empty residues.
    """
    pv = np.array([complex(p) for p, _ in poles], dtype=complex)
    sv = np.array([int(s) for _, s in poles], dtype=int)
    if np.any(sv < 1):
        raise ValueError("multiplicities must be positive")
    for i in range(len(pv)):
        for j in range(i + 1, len(pv)):
            if abs(pv[i] - pv[j]) <= COINCIDENT_RTOL * (1 + abs(pv[i])):
                raise ValueError(f"coincident poles {pv[i]:.6g} and {pv[j]:.6g}; merge them first")
    live = np.abs(pv) > 0
    if np.all(sv[live] == 1):
        res = []
        for j in range(len(pv)):
            if not live[j]:
                res.append(np.zeros(0, complex))
                continue
            others = pv[live & (np.arange(len(pv)) != j)]
            res.append(np.array([np.prod(1.0 / (1.0 - others / pv[j]))]))
        table = ResidueTable(pv, sv, tuple(res))
    else:
        table = _fit_residues(pv, sv, live)
    return ResidueTable(table.poles, table.multiplicities, table.residues, scale)


def _fit_residues(pv, sv, live):
    cols = [(j, h) for j in range(len(pv)) if live[j] for h in range(1, sv[j] + 1)]
    n = len(cols)
    sing = 1.0 / pv[live]
    pts = []
    for j, z in enumerate(sing):
        others = np.delete(sing, j)
        rad = 0.5 * min(np.abs(others - z).min(initial=abs(z)), abs(z))
        pts.append(z + rad * np.exp(1j * (TWO_PI * np.arange(4 * n) / (4 * n) + 0.3)))
    x = np.concatenate(pts)
    A = np.empty((x.size, n), dtype=complex)
    for c, (j, h) in enumerate(cols):
        A[:, c] = (1.0 - pv[j] * x) ** (-h)
    b = np.ones_like(x)
    for p, s in zip(pv[live], sv[live]):
        b = b / (1.0 - p * x) ** int(s)
    # column scaling keeps the least-squares problem balanced
    w = np.linalg.norm(A, axis=0)
    sol = np.linalg.lstsq(A / w, b, rcond=None)[0] / w
    res = [np.zeros(0, complex) if not live[j] else np.zeros(sv[j], complex) for j in range(len(pv))]
    for c, (j, h) in enumerate(cols):
        res[j][h - 1] = sol[c]
    return ResidueTable(pv, sv, tuple(res))


def series_residues(p, s, others, order=None):
    """Residues at one pole from the Laurent expansion (oracle for the fit).

    With ``y = 1 - p x`` the rest of the product is analytic at ``y = 0``;
    its Taylor coefficients in ``y`` give the residues for ``h = s, s-1, ...``.
    """
    order = s if order is None else order
    # g(y) = prod_n (1 - q_n x)^{-t_n} with x = (1 - y)/p
    coeff = np.zeros(order, dtype=complex)
    coeff[0] = 1.0
    for q, t in others:
        # 1 - q (1 - y)/p = (1 - q/p) + (q/p) y = u (1 + v y)
        u = 1.0 - q / p
        v = (q / p) / u
        ser = np.array([math.comb(t + n - 1, n) * (-v) ** n for n in range(order)], dtype=complex)
        ser *= u ** (-t)
        coeff = np.convolve(coeff, ser)[:order]
    # residue of y^{-h}: coefficient y^{s-h}
    return np.array([coeff[s - h] for h in range(1, s + 1)])


# ----------------------------------------------------------------------------
# Wiener-Hopf split


@dataclass(frozen=True)
class WienerHopfFactorization:
    """Split of a Hermitian band symbol; see module docstring.

    ``hres`` expands ``1/g2`` in ``(1 - a_i / chi)^{-t}``, ``kres`` expands
    ``1/g1`` in ``(1 - conj(a_j) chi)^{-h}`` (the ``1/c`` is included).
    """

    alpha: np.ndarray
    multiplicities: np.ndarray
    const: complex
    hres: ResidueTable
    kres: ResidueTable
    roots: RootSet | None = None
    n0: int = 0

    @property
    def beta(self):
        return np.conj(self.alpha)

    @property
    def r(self):
        return len(self.alpha)

    @property
    def simple_roots(self):
        return bool(np.all(self.multiplicities == 1))

    @property
    def rho(self):
        return float(np.abs(self.alpha).max(initial=0.0))

    def g1(self, chi):
        chi = np.asarray(chi, dtype=complex)
        out = np.full(chi.shape, self.const, dtype=complex)
        for b, s in zip(self.beta, self.multiplicities):
            out = out * (1.0 - b * chi) ** int(s)
        return out

    def g2(self, chi):
        chi = np.asarray(chi, dtype=complex)
        out = np.ones(chi.shape, dtype=complex)
        for a, s in zip(self.alpha, self.multiplicities):
            out = out * (1.0 - a / chi) ** int(s)
        return out

    def product_error(self, f, n=256):
        th = TWO_PI * np.arange(n) / n
        chi = np.exp(1j * th)
        fv = f.evaluate(th)
        return float(np.abs(self.g1(chi) * self.g2(chi) - fv).max() / np.abs(fv).max())

    def residue_errors(self, n=64):
        """(1/g1 expansion error, 1/g2 expansion error) on the unit circle."""
        chi = np.exp(1j * (TWO_PI * np.arange(n) / n + 0.05))
        e1 = np.abs(self.kres.evaluate(chi) - 1.0 / self.g1(chi)).max()
        e2 = np.abs(self.hres.evaluate(1.0 / chi) - 1.0 / self.g2(chi)).max()
        return float(e1), float(e2)


def wiener_hopf_split(rs: RootSet | None, f: TrigPoly, check=True) -> WienerHopfFactorization:
    """Build ``g1``, ``g2`` and their residue tables from the classified roots."""
    if not isinstance(f, TrigPoly):
        raise SymbolError("Wiener-Hopf split needs a band (trig-poly) symbol")
    if not f.is_real:
        raise NotHermitianError("split needs a Hermitian symbol (a_{-j} = conj(a_j))")
    n0 = f.degree
    if n0 == 0:
        c = complex(f.coeffs[0])
        empty = ResidueTable(np.zeros(0, complex), np.zeros(0, int), ())
        return WienerHopfFactorization(np.zeros(0, complex), np.zeros(0, int), c, empty,
                                       ResidueTable(empty.poles, empty.multiplicities, (), 1.0 / c),
                                       rs, 0)
    if rs is None:
        rs = find_roots(k_polynomial(f))
    inside, _ = classify_unit_circle(rs, n0)
    alpha = np.array([v for v, _ in inside], dtype=complex)
    mult = np.array([m for _, m in inside], dtype=int)
    c = f.coeff(n0) / np.prod((-np.conj(alpha)) ** mult)
    hres = partial_fractions(list(zip(alpha, mult)))
    kres = partial_fractions(list(zip(np.conj(alpha), mult)), scale=1.0 / c)
    fac = WienerHopfFactorization(alpha, mult, complex(c), hres, kres, rs, n0)
    if check:
        err = fac.product_error(f)
        if err > 1e-9:
            raise ConvergenceError(f"factor product misses the symbol by {err:.3g}")
    return fac


def factorize(f: TrigPoly) -> WienerHopfFactorization:
    """Roots, classification and split in one call."""
    if f.degree == 0:
        return wiener_hopf_split(None, f)
    return wiener_hopf_split(find_roots(k_polynomial(f)), f)


# ----------------------------------------------------------------------------
# tau_m and phi_{k,m}


def tau(m: int, u: int) -> int:
    """``tau_1 = 1``, ``tau_m(u) = (u+1)(u+2)...(u+m-1)``.

    ``sum_u tau_m(u) x^u = (m-1)! / (1-x)^m``.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    out = 1
    for i in range(1, m):
        out *= u + i
    return out


def _solve_exact(A, b):
    n = len(A)
    M = [[Fraction(v) for v in row] + [Fraction(bv)] for row, bv in zip(A, b)]
    for col in range(n):
        piv = next(i for i in range(col, n) if M[i][col] != 0)
        M[col], M[piv] = M[piv], M[col]
        for i in range(n):
            if i != col and M[i][col] != 0:
                fac = M[i][col] / M[col][col]
                M[i] = [a - fac * b for a, b in zip(M[i], M[col])]
    return [M[i][n] / M[i][i] for i in range(n)]


def _expand_in_tau(m, r):
    """Values ``phi_{k,m}(r)``, k = 1..m, for one integer ``r``."""
    A = [[tau(k, w) for k in range(1, m + 1)] for w in range(m)]
    b = [tau(m, w + r) for w in range(m)]
    return _solve_exact(A, b)


@lru_cache(maxsize=None)
def phi_table(m: int):
    """Ascending coefficients (Fractions) of ``phi_{k,m}(r)`` for k = 1..m.

    Each ``phi_{k,m}`` has degree ``m - k``; it is obtained by expanding
    ``tau_m(w + r)`` in the basis ``tau_k(w)`` for ``r = 0..m-1`` and
    interpolating in ``r``.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    vals = [_expand_in_tau(m, r) for r in range(m)]
    V = [[r ** d for d in range(m)] for r in range(m)]
    out = []
    for k in range(1, m + 1):
        coeffs = _solve_exact(V, [vals[r][k - 1] for r in range(m)])
        out.append(tuple(coeffs))
    return tuple(out)


def phi_km(m: int, k: int):
    """Coefficients of ``phi_{k,m}`` in ascending powers of ``r``."""
    if not 1 <= k <= m:
        raise ValueError("need 1 <= k <= m")
    return phi_table(m)[k - 1][:m - k + 1]


def phi_value(m: int, k: int, r):
    """``phi_{k,m}(r)``; exact for integer (or Fraction) ``r``."""
    return sum(c * r ** d for d, c in enumerate(phi_km(m, k)))


def check_phi_identity(m: int, pairs):
    """True iff ``tau_m(w + r) = sum_k phi_{k,m}(r) tau_k(w)`` for all pairs."""
    return all(tau(m, w + r) == sum(phi_value(m, k, r) * tau(k, w) for k in range(1, m + 1))
               for w, r in pairs)


# ----------------------------------------------------------------------------
# projection pi_-( chi^r (1 - a/chi)^{-m} )


def projection_coefficients(m: int, r: int):
    """``c_k`` with ``pi_-(chi^r (1-a/chi)^{-m}) = a^{r+1} chi^{-1} sum_k c_k (1-a/chi)^{-k}``.

    ``c_k = phi_{k,m}(r+1) (k-1)!/(m-1)!`` (exact Fractions).
    """
    scale = Fraction(1, math.factorial(m - 1))
    return [phi_value(m, k, r + 1) * math.factorial(k - 1) * scale for k in range(1, m + 1)]


def project_minus_closed(alpha, r: int, m: int, terms: int = 200):
    """Coefficients of ``chi^{-1-v}``, v = 0..terms-1, from the closed form."""
    c = projection_coefficients(m, r)
    v = np.arange(terms)
    out = np.zeros(terms, dtype=complex)
    for k, ck in enumerate(c, start=1):
        out += float(ck) * np.array([math.comb(n + k - 1, k - 1) for n in v], dtype=float) * alpha ** v
    return alpha ** (r + 1) * out


def project_minus_series(alpha, r: int, m: int, terms: int = 200):
    """Same coefficients by truncating the binomial series directly."""
    # chi^r (1 - a/chi)^{-m} = sum_u C(u+m-1, m-1) a^u chi^{r-u}; negative part u >= r+1
    u = r + 1 + np.arange(terms)
    w = np.array([math.comb(int(x) + m - 1, m - 1) for x in u], dtype=float)
    return w * alpha ** u
