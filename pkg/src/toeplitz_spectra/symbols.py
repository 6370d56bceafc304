"""Symbols on the torus: trigonometric polynomials and smooth callables.

A symbol ``f`` fills the diagonals of ``T_N(f)`` through its Fourier
coefficients ``fhat(j) = (1/2pi) int f(theta) exp(-i j theta) dtheta``.
"""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from numpy.polynomial import chebyshev as npcheb
from numpy.polynomial import polynomial as nppoly

from .errors import SymbolError

CHECK_GRID = 1024
TWO_PI = 2.0 * np.pi


class SymbolKind(enum.Enum):
    TRIGPOLY = "trigpoly"
    SMOOTH = "smooth"


def _grid(n):
    return TWO_PI * np.arange(n) / n


def quadrature_size(N):
    """Smallest power of two >= 8 (N + 1)."""
    target = 8 * (N + 1)
    return 1 << max(0, int(np.ceil(np.log2(target))))


class Symbol:
    """Common interface. Subclasses: :class:`TrigPoly`, :class:`SmoothSymbol`."""

    kind: SymbolKind
    name: str = ""
    has_unique_min: bool | None = None
    critical_set_finite: bool | None = None

    def evaluate(self, theta):
        raise NotImplementedError

    def __call__(self, theta):
        return self.evaluate(theta)

    def fourier_coefficients(self, N):
        raise NotImplementedError

    def real_values(self, theta):
        return np.real(self.evaluate(theta))

    def sample_min_max(self, n=4096):
        v = self.real_values(_grid(n))
        return float(v.min()), float(v.max())

    def argmin(self, n=4096):
        th = _grid(n)
        return float(th[np.argmin(self.real_values(th))])

    def check_unique_min(self, n=CHECK_GRID, rtol=1e-9):
        """Spot check: the grid minimum is attained in a single connected run."""
        v = self.real_values(_grid(n))
        lo, hi = v.min(), v.max()
        near = v <= lo + rtol * (1.0 + hi - lo)
        # runs on a periodic grid
        starts = np.count_nonzero(near & ~np.roll(near, 1))
        return bool(starts <= 1 and not near.all())


@dataclass(frozen=True, eq=False)
class TrigPoly(Symbol):
    """``f(theta) = sum_{j=-n0}^{n0} a_j exp(i j theta)``.

    ``coeffs[j + n0] = a_j``. Trailing zero pairs are trimmed so that
    ``degree`` is the true bandwidth.
    """

    coeffs: np.ndarray
    name: str = ""
    has_unique_min: bool | None = None
    critical_set_finite: bool | None = None
    kind = SymbolKind.TRIGPOLY

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=complex))
        if c.ndim != 1 or c.size % 2 == 0:
            raise SymbolError("trig-poly coefficients need odd length 2*n0+1")
        if not np.all(np.isfinite(c)):
            raise SymbolError("non-finite trig-poly coefficient")
        while c.size > 1 and c[0] == 0 and c[-1] == 0:
            c = c[1:-1]
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_dict(cls, coeffs: dict, **kw):
        n0 = max((abs(int(j)) for j in coeffs), default=0)
        c = np.zeros(2 * n0 + 1, dtype=complex)
        for j, v in coeffs.items():
            c[int(j) + n0] = v
        return cls(c, **kw)

    @classmethod
    def from_cosine(cls, cos_coeffs, **kw):
        """Even real symbol ``a_0 + 2 sum_j a_j cos(j theta)``."""
        a = np.asarray(cos_coeffs, dtype=float)
        c = np.concatenate([a[:0:-1], a]).astype(complex)
        return cls(c, **kw)

    @classmethod
    def constant(cls, value, **kw):
        return cls(np.array([value], dtype=complex), **kw)

    @classmethod
    def from_offset(cls, coeffs, offset, **kw):
        """Coefficient list starting at index ``offset`` (JSON form)."""
        coeffs = list(coeffs)
        offset = int(offset)
        top = offset + len(coeffs) - 1
        n0 = max(abs(offset), abs(top))
        c = np.zeros(2 * n0 + 1, dtype=complex)
        for i, v in enumerate(coeffs):
            c[offset + i + n0] = v
        return cls(c, **kw)

    @property
    def degree(self):
        return (self.coeffs.size - 1) // 2

    def coeff(self, j):
        n0 = self.degree
        if abs(j) > n0:
            return 0j
        return complex(self.coeffs[j + n0])

    @property
    def is_real(self):
        c = self.coeffs
        return bool(np.allclose(c, np.conj(c[::-1]), rtol=0, atol=1e-14 * (1 + np.abs(c).max())))

    @property
    def is_even(self):
        c = self.coeffs
        scale = 1e-14 * (1 + np.abs(c).max())
        return bool(self.is_real and np.allclose(c, c[::-1], rtol=0, atol=scale)
                    and np.abs(c.imag).max() <= scale)

    @property
    def is_constant(self):
        return self.degree == 0

    def evaluate(self, theta):
        """Horner in ``z = exp(i theta)`` on ``z^{n0} f``."""
        theta = np.asarray(theta, dtype=float)
        z = np.exp(1j * theta)
        acc = np.zeros_like(z)
        for a in self.coeffs[::-1]:
            acc = acc * z + a
        out = acc * np.exp(-1j * self.degree * theta)
        return out if out.ndim else complex(out)

    def fourier_coefficients(self, N):
        if N < 0:
            raise SymbolError("order must be >= 0")
        out = np.zeros(2 * N + 1, dtype=complex)
        n0 = self.degree
        m = min(n0, N)
        out[N - m:N + m + 1] = self.coeffs[n0 - m:n0 + m + 1]
        return out

    def cosine_coefficients(self):
        """``a_0..a_r`` of an even real symbol."""
        if not self.is_even:
            raise SymbolError("symbol is not even and real")
        return self.coeffs[self.degree:].real.copy()

    def k_coefficients(self):
        """Ascending coefficients of ``K(z) = z^{n0} f(z)``."""
        return self.coeffs.copy()

    def scaled(self, s):
        return TrigPoly(self.coeffs * s, name=self.name, has_unique_min=self.has_unique_min,
                        critical_set_finite=self.critical_set_finite)

    def shifted(self, level):
        c = self.coeffs.copy()
        c[self.degree] -= level
        return TrigPoly(c, name=self.name)

    def to_json(self):
        return {"kind": "trigpoly", "coeffs": [[float(v.real), float(v.imag)] for v in self.coeffs],
                "offset": -self.degree}


@dataclass(frozen=True, eq=False)
class SmoothSymbol(Symbol):
    """Evaluable smooth symbol with caller-declared structural flags.

    ``func`` must accept a numpy array of angles. The declared ``is_real``
    and ``is_even`` flags are spot-checked on a 1024-point grid.
    """

    func: Callable = field(repr=False)
    smoothness: int = 2
    name: str = ""
    is_real: bool = True
    is_even: bool = False
    has_unique_min: bool | None = None
    critical_set_finite: bool | None = None
    params: dict = field(default_factory=dict)
    min_grid: int = 0
    kind = SymbolKind.SMOOTH

    def __post_init__(self):
        th = _grid(CHECK_GRID)
        v = np.asarray(self.func(th), dtype=complex)
        if not np.all(np.isfinite(v)):
            raise SymbolError(f"non-finite value of symbol {self.name!r} on check grid")
        if self.is_real and np.any(np.abs(v.imag) > 1e-12 * (1 + np.abs(v))):
            raise SymbolError(f"symbol {self.name!r} declared real but has imaginary part")
        if self.is_even:
            w = np.asarray(self.func(TWO_PI - th), dtype=complex)
            if np.any(np.abs(v - w) > 1e-12 * (1 + np.abs(v))):
                raise SymbolError(f"symbol {self.name!r} declared even but f(t) != f(2pi - t)")

    def evaluate(self, theta):
        theta = np.asarray(theta, dtype=float)
        v = np.asarray(self.func(theta), dtype=complex)
        return v if v.ndim else complex(v)

    def fourier_coefficients(self, N, grid_size=None):
        """Trapezoid rule on ``max(quadrature_size(N), min_grid)`` points unless overridden."""
        if N < 0:
            raise SymbolError("order must be >= 0")
        L = grid_size or max(quadrature_size(N), self.min_grid)
        if L < 2 * N + 1:
            raise SymbolError("quadrature grid too small for requested order")
        v = np.asarray(self.func(_grid(L)), dtype=complex)
        if not np.all(np.isfinite(v)):
            raise SymbolError(f"non-finite value of symbol {self.name!r} on quadrature grid")
        F = np.fft.fft(v) / L
        k = np.arange(-N, N + 1)
        out = F[k % L]
        if self.is_real:
            # enforce fhat(-k) = conj(fhat(k)) exactly
            out = 0.5 * (out + np.conj(out[::-1]))
        return out

    def to_json(self):
        return {"kind": "builtin", "name": self.name, "params": dict(self.params)}


@dataclass(frozen=True)
class ChebForm:
    """Polynomial ``f1`` with ``f(theta) = f1(1 - cos theta)``; ascending coefficients."""

    coeffs: np.ndarray

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def __call__(self, x):
        return nppoly.polyval(x, self.coeffs)

    def derivative(self):
        return ChebForm(nppoly.polyder(self.coeffs))

    def preimages(self, level):
        """All complex roots of ``f1(x) = level``."""
        c = np.array(self.coeffs, dtype=complex)
        c[0] -= level
        return nppoly.polyroots(c)


# ----------------------------------------------------------------------------
# module-level operations

def fourier_coefficients(f: Symbol, N: int):
    """``fhat(-N..N)`` as an array indexed ``k + N``."""
    return f.fourier_coefficients(N)


def evaluate(f: Symbol, theta):
    return f.evaluate(theta)


def to_cheb_form(f: Symbol) -> ChebForm:
    """Change of basis ``cos(j theta) = T_j(1 - x)``, ``x = 1 - cos theta``."""
    if not isinstance(f, TrigPoly):
        raise SymbolError("to_cheb_form needs a trigonometric polynomial")
    if not f.is_even:
        raise SymbolError("to_cheb_form needs an even real symbol")
    a = f.cosine_coefficients()
    cheb = np.concatenate([a[:1], 2.0 * a[1:]])
    in_t = npcheb.cheb2poly(cheb)  # polynomial in t = cos(theta)
    out = np.zeros(len(in_t))
    # substitute t = 1 - x
    for j, cj in enumerate(in_t):
        out[:j + 1] += cj * nppoly.polypow([1.0, -1.0], j)
    return ChebForm(out)


def from_inside_roots(roots, scale=1.0, name=""):
    """Positive band symbol ``scale * prod_i |exp(i theta) - alpha_i|^2``.

    Every ``alpha_i`` must satisfy ``|alpha_i| < 1``; the associated
    polynomial K then has inside roots ``alpha_i`` and outside roots
    ``1 / conj(alpha_i)``.
    """
    roots = np.asarray(roots, dtype=complex)
    if np.any(np.abs(roots) >= 1):
        raise SymbolError("planted roots must lie inside the unit disk")
    k = np.array([1.0 + 0j])
    for a in roots:
        k = nppoly.polymul(k, [-a, 1.0])
        k = nppoly.polymul(k, [-1.0 / np.conj(a), 1.0])
    k = k * scale * np.prod(-np.conj(roots))
    k = 0.5 * (k + np.conj(k[::-1]))
    return TrigPoly(k, name=name)


# ----------------------------------------------------------------------------
# builtins

def _exp_cos(a=1.0):
    a = float(a)
    return SmoothSymbol(lambda t: np.exp(a * np.cos(t)), smoothness=10**9, name="exp_cos",
                        is_real=True, is_even=True, has_unique_min=True,
                        critical_set_finite=True, params={"a": a})


def _laplace(scale=1.0):
    s = float(scale)
    return TrigPoly.from_cosine([2.0 * s, -s], name="laplace", has_unique_min=True,
                                critical_set_finite=True)


def _kms(rho=0.5):
    r = float(rho)
    if not 0.0 <= r < 1.0:
        raise SymbolError("kms needs 0 <= rho < 1")
    return TrigPoly.from_cosine([1.0 + r * r, -r], name="kms", has_unique_min=r > 0,
                                critical_set_finite=r > 0)


BUILTINS = {"exp_cos": _exp_cos, "laplace": _laplace, "kms": _kms}

# declared annulus radius rho_2 of positivity, where known analytically
DECLARED_RHO2 = {"exp_cos": float("inf")}


def builtin(name, **params):
    try:
        factory = BUILTINS[name]
    except KeyError:
        raise SymbolError(f"unknown builtin symbol {name!r}; choose from {sorted(BUILTINS)}") from None
    try:
        return factory(**params)
    except TypeError as exc:
        raise SymbolError(f"bad parameters for builtin {name!r}: {exc}") from None


def symbol_from_json(obj) -> Symbol:
    """Parse ``{"kind": "trigpoly", ...}`` or ``{"kind": "builtin", ...}``."""
    if isinstance(obj, str):
        try:
            obj = json.loads(obj)
        except json.JSONDecodeError as exc:
            raise SymbolError(f"malformed symbol JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise SymbolError("symbol JSON must be an object")
    kind = obj.get("kind")
    if kind == "trigpoly":
        unknown = set(obj) - {"kind", "coeffs", "offset", "name"}
        if unknown:
            raise SymbolError(f"unknown symbol fields {sorted(unknown)}")
        try:
            coeffs = [complex(float(re), float(im)) for re, im in obj["coeffs"]]
            offset = int(obj.get("offset", -((len(coeffs) - 1) // 2)))
        except (KeyError, TypeError, ValueError) as exc:
            raise SymbolError(f"bad trigpoly description: {exc}") from None
        return TrigPoly.from_offset(coeffs, offset, name=obj.get("name", ""))
    if kind == "builtin":
        unknown = set(obj) - {"kind", "name", "params"}
        if unknown:
            raise SymbolError(f"unknown symbol fields {sorted(unknown)}")
        params = obj.get("params") or {}
        if not isinstance(params, dict):
            raise SymbolError("builtin params must be an object")
        return builtin(obj.get("name"), **params)
    raise SymbolError(f"unknown symbol kind {kind!r}")
