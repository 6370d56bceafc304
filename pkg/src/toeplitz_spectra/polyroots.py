"""Roots of the associated polynomial ``K(z) = z^{n0} f(z)``.

Roots come from Aberth-Ehrlich iteration (numba kernel) with a
companion-matrix fallback, then nearby roots are merged into clusters that
define numerical multiplicity.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as nppoly

from . import kernels
from .errors import BoundaryRootError, ConvergenceError, SymbolError, UnbalancedSplitError
from .symbols import Symbol, TrigPoly

TAU_UNIT = 1e-8
MERGE_RTOL = 1e-8
# candidate clusters up to LOOSE_RTOL wide are merged only if the polished
# centroid also annihilates p, p', ..., p^(m-2) to rounding level
LOOSE_RTOL = 1e-2
DERIV_RTOL = 1e-14
RESIDUAL_TOL = 1e-13
MAXITER = 500

INSIDE, OUTSIDE, BOUNDARY = "inside", "outside", "boundary"


def _scale(p, z):
    """``sum |p_i| |z|^i``, the natural size of ``p(z)`` under rounding."""
    return nppoly.polyval(abs(z), np.abs(p))


@dataclass(frozen=True)
class RootSet:
    """Distinct roots with multiplicities of ``leading * prod (z - a)^m``."""

    values: np.ndarray
    multiplicities: np.ndarray
    leading: complex
    degree: int
    tau_unit: float = TAU_UNIT

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        m = np.asarray(self.multiplicities, dtype=int)
        order = np.lexsort((np.angle(v), np.abs(v)))
        object.__setattr__(self, "values", v[order])
        object.__setattr__(self, "multiplicities", m[order])
        if int(m.sum()) != self.degree:
            raise ValueError("multiplicities must sum to the degree")

    def __len__(self):
        return len(self.values)

    def expanded(self):
        return np.repeat(self.values, self.multiplicities)

    def coefficients(self):
        """Ascending coefficients of the reconstructed polynomial."""
        return self.leading * nppoly.polyfromroots(self.expanded()) if self.degree else \
            np.array([self.leading])

    @property
    def tags(self):
        r = np.abs(self.values)
        out = np.where(r < 1 - self.tau_unit, INSIDE, np.where(r > 1 + self.tau_unit, OUTSIDE, BOUNDARY))
        return [str(t) for t in out]

    @property
    def is_simple(self):
        return bool(np.all(self.multiplicities == 1))

    def pairs(self):
        return list(zip(self.values.tolist(), self.multiplicities.tolist()))


def k_polynomial(f: Symbol) -> np.ndarray:
    """Ascending coefficients of ``K(z) = sum_m a_m z^{m + n0}``."""
    if not isinstance(f, TrigPoly):
        raise SymbolError("K polynomial needs a trigonometric polynomial symbol")
    return f.k_coefficients()


def _initial_guesses(p):
    n = len(p) - 1
    radius = abs(p[0] / p[-1]) ** (1.0 / n)
    if not np.isfinite(radius) or radius == 0:
        radius = 1.0
    angles = 2 * np.pi * np.arange(n) / n + 0.4
    return radius * np.exp(1j * angles)


def _polish(p, c, m):
    """Newton on ``p^(m-1)``, whose simple root is an m-fold root of ``p``."""
    q = nppoly.polyder(p, m - 1) if m > 1 else p
    dq = nppoly.polyder(q)
    for _ in range(30):
        d = nppoly.polyval(c, dq)
        if d == 0:
            break
        step = nppoly.polyval(c, q) / d
        c = c - step
        if abs(step) <= 4e-16 * (1 + abs(c)):
            break
    return c


def _is_multiple(p, c, m):
    q = np.asarray(p, dtype=complex)
    for _ in range(m - 1):
        if abs(nppoly.polyval(c, q)) > DERIV_RTOL * _scale(q, c):
            return False
        q = nppoly.polyder(q)
    return True


def _merge(p, roots):
    """Group roots into clusters; returns (centroids, multiplicities)."""
    clusters = [[complex(z)] for z in roots]

    def centre(g):
        return _polish(p, np.mean(g), len(g))

    merged = True
    while merged:
        merged = False
        for a in range(len(clusters)):
            for b in range(a + 1, len(clusters)):
                ca, cb = np.mean(clusters[a]), np.mean(clusters[b])
                dist = abs(ca - cb)
                if dist > LOOSE_RTOL * (1 + abs(ca)):
                    continue
                g = clusters[a] + clusters[b]
                if dist <= MERGE_RTOL * (1 + abs(ca)) or _is_multiple(p, centre(g), len(g)):
                    clusters[a] = g
                    del clusters[b]
                    merged = True
                    break
            if merged:
                break
    return np.array([centre(g) for g in clusters]), np.array([len(g) for g in clusters])


def _backward_error(q, z):
    """Coefficient mismatch of the rebuilt polynomial; catches iterates that
    collapsed onto the same simple root."""
    rebuilt = q[-1] * nppoly.polyfromroots(z)
    return float(np.abs(rebuilt - q).max() / np.abs(q).max())


def find_roots(p, tol=RESIDUAL_TOL, maxiter=MAXITER) -> RootSet:
    """Roots of the polynomial with ascending coefficients ``p``.

    Exact zero roots are split off first; a constant polynomial gives an
    empty root set.
    """
    p = np.array(p, dtype=complex)
    if not np.all(np.isfinite(p)):
        raise ValueError("non-finite polynomial coefficient")
    nz = np.flatnonzero(p)
    if nz.size == 0:
        raise ValueError("zero polynomial has no root set")
    p = p[:nz[-1] + 1]
    degree = len(p) - 1
    leading = complex(p[-1])
    nzero = int(nz[0])
    q = p[nzero:]
    roots = np.zeros(0, dtype=complex)
    if len(q) > 1:
        z0 = _initial_guesses(q)
        z, _, converged = kernels.aberth(q, z0, maxiter, tol)
        resid = np.abs(nppoly.polyval(z, q))
        scale = np.array([_scale(q, zi) for zi in z])
        if not converged or not np.all(np.isfinite(z)) or np.any(resid > 1e-10 * scale) \
                or _backward_error(q, z) > 1e-8:
            z = nppoly.polyroots(q)
            if not np.all(np.isfinite(z)) or _backward_error(q, z) > 1e-8:
                raise ConvergenceError("root finder did not converge (Aberth and companion)")
        roots = np.asarray(z, dtype=complex)
    vals, mults = _merge(q, roots) if roots.size else (roots, np.zeros(0, dtype=int))
    if nzero:
        vals = np.concatenate([vals, [0j]])
        mults = np.concatenate([mults, [nzero]])
    return RootSet(vals, mults.astype(int), leading, degree)


def classify_unit_circle(rs: RootSet, n0: int, tau_unit=TAU_UNIT):
    """Split into ``(inside, outside)`` lists of ``(value, multiplicity)``.

    Raises :class:`BoundaryRootError` if some root has ``||a| - 1| <= tau_unit``
    and :class:`UnbalancedSplitError` unless exactly ``n0`` roots (with
    multiplicity) lie inside.
    """
    r = np.abs(rs.values)
    bad = np.abs(r - 1) <= tau_unit
    if bad.any():
        raise BoundaryRootError(
            f"root {rs.values[bad][0]:.6g} lies on the unit circle: the symbol vanishes on the torus")
    inside = [(complex(v), int(m)) for v, m in zip(rs.values, rs.multiplicities) if abs(v) < 1]
    outside = [(complex(v), int(m)) for v, m in zip(rs.values, rs.multiplicities) if abs(v) > 1]
    n_in = sum(m for _, m in inside)
    if n_in != n0:
        raise UnbalancedSplitError(f"{n_in} roots inside the unit disk, expected {n0}")
    return inside, outside


def symbol_roots(f: TrigPoly):
    """Convenience: classified roots of K for a band symbol."""
    p = k_polynomial(f)
    if f.degree == 0:
        return RootSet(np.zeros(0, complex), np.zeros(0, int), complex(p[0]), 0), [], []
    rs = find_roots(p)
    inside, outside = classify_unit_circle(rs, f.degree)
    return rs, inside, outside
