"""Closed-form inverse of Hermitian band Toeplitz matrices.

For a band symbol with simple inside roots ``a_i`` (``b_i = conj(a_i)``)::

    T_N(f)^{-1} = T1 + T2
    T1 = T_N(1/g1) T_N(1/g2)                         (principal term)
    T2 = -R^T (I - M)^{-1} X                         (rank-r Hankel correction)

``M`` is the r x r matrix of the composed Hankel map ``Ht H`` on the basis
``e_j = 1/(1 - b_j chi)``; its norm is ``O(rho^{2N})`` with
``rho = max |a_i|``. Every entry costs ``O(r^2)`` after an ``O(r^3)`` setup.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import MultipleRootError, SingularCorrectionError, SymbolError
from .factorization import WienerHopfFactorization, factorize
from .polyroots import RootSet
from .symbols import TrigPoly, TWO_PI

SIGMA_MIN = 1e-10
DECAY_EXPONENT = 0.9
NOISE_RTOL_DENSE = 1e-13


def _prod_except(v, j, z):
    """``prod_{n != j} (1 - v_n z)``."""
    out = 1.0 + 0j
    for n, x in enumerate(v):
        if n != j:
            out *= 1.0 - x * z
    return out


def _unnormalized_kres(fac):
    return fac.kres.simple * fac.kres.scale * fac.const


# ----------------------------------------------------------------------------
# Hankel block


def hankel_matrix(alpha, beta, hres, kres_u, N):
    """``M[i, j] = K_i b_i^{N+2} sum_h H_h a_h^{N+2} Qt_h(b_i) Q_j(a_h)``.

    ``Q_j(z) = prod_{n != j}(1 - b_n z)``, ``Qt_h(z) = prod_{n != h}(1 - a_n z)``;
    ``kres_u`` are the residues of ``1/prod(1 - b_n chi)`` (no constant).
    """
    r = len(alpha)
    Q = np.array([[_prod_except(beta, j, alpha[h]) for h in range(r)] for j in range(r)])
    Qt = np.array([[_prod_except(alpha, h, beta[i]) for i in range(r)] for h in range(r)])
    ha = hres * alpha ** (N + 2)
    M = np.empty((r, r), dtype=complex)
    for i in range(r):
        for j in range(r):
            M[i, j] = kres_u[i] * beta[i] ** (N + 2) * np.sum(ha * Qt[:, i] * Q[j, :])
    return M


@dataclass(frozen=True)
class HankelBlock:
    N: int
    matrix: np.ndarray

    @property
    def r(self):
        return self.matrix.shape[0]

    @property
    def norm(self):
        return float(np.linalg.norm(self.matrix, 2)) if self.r else 0.0

    @property
    def sigma_min(self):
        """Smallest singular value of ``I - M``."""
        if not self.r:
            return 1.0
        return float(np.linalg.svd(np.eye(self.r) - self.matrix, compute_uv=False).min())


def hankel_block(fac: WienerHopfFactorization, N: int) -> HankelBlock:
    _require_simple(fac)
    if fac.r == 0:
        return HankelBlock(N, np.zeros((0, 0), complex))
    return HankelBlock(N, hankel_matrix(fac.alpha, fac.beta, fac.hres.simple,
                                        _unnormalized_kres(fac), N))


def _require_simple(fac):
    if not fac.simple_roots:
        raise MultipleRootError(
            "closed-form inverse needs simple inside roots; found multiplicities "
            f"{fac.multiplicities.tolist()} (perturb coefficients by ~{MultipleRootError.suggested_eps:g} "
            "or use the dense oracle)")


# ----------------------------------------------------------------------------
# entries


def t1_entry(fac: WienerHopfFactorization, k: int, l: int) -> complex:
    """Entry of ``T_N(1/g1) T_N(1/g2)`` (independent of N for k, l <= N)."""
    _require_simple(fac)
    if fac.r == 0:
        return complex(1.0 / fac.const) if k == l else 0j
    a, b = fac.alpha, fac.beta
    H = fac.hres.simple
    K = fac.kres.simple * fac.kres.scale
    m = min(k, l)
    ab = a[:, None] * b[None, :]
    w = H[:, None] * K[None, :] * (1.0 - ab ** (m + 1)) / (1.0 - ab)
    return complex(np.sum(w * a[:, None] ** (l - m) * b[None, :] ** (k - m)))


@dataclass(frozen=True)
class BandInverse:
    """Lazy entry provider for ``T_N(f)^{-1}``; setup happens once."""

    fac: WienerHopfFactorization
    N: int
    hankel: HankelBlock
    _solve: np.ndarray = field(repr=False)  # (I - M)^{-1}
    _Q: np.ndarray = field(repr=False)      # Q_j(a_h)
    _G2: np.ndarray = field(repr=False)     # prod_i (1 - a_i b_j)

    @property
    def size(self):
        return self.N + 1

    @property
    def rho_theory(self):
        return self.fac.rho

    @property
    def sigma_min(self):
        return self.hankel.sigma_min

    def _x(self, l):
        a, b = self.fac.alpha, self.fac.beta
        H = self.fac.hres.simple
        K = self.fac.kres.simple * self.fac.kres.scale
        ab = a[:, None] * b[None, :]  # [i, j]
        s = np.sum(H[:, None] * (1.0 - ab ** (l + 1)) / (1.0 - ab), axis=0)
        return K * self._G2 * b ** (self.N + 1 - l) * s

    def _r(self, k):
        a, b = self.fac.alpha, self.fac.beta
        N = self.N
        H = self.fac.hres.simple
        Ku = _unnormalized_kres(self.fac)
        first = np.sum(H[None, :] * a[None, :] ** (N + 1 - k) / (1.0 - a[None, :] * b[:, None]), axis=1)
        inner = np.sum(Ku[None, :] * b[None, :] ** (k + 1) / (1.0 - a[:, None] * b[None, :]), axis=1)  # [h]
        second = np.sum(H[None, :] * self._Q * a[None, :] ** (N + 2) * inner[None, :], axis=1)
        return first - second

    def t1(self, k, l):
        return t1_entry(self.fac, k, l)

    def t2(self, k, l):
        if self.fac.r == 0:
            return 0j
        return complex(-self._r(k) @ (self._solve @ self._x(l)))

    def entry(self, k, l):
        if not (0 <= k <= self.N and 0 <= l <= self.N):
            raise IndexError(f"entry ({k}, {l}) outside a {self.N + 1}x{self.N + 1} matrix")
        return self.t1(k, l) + self.t2(k, l)

    def __getitem__(self, kl):
        return self.entry(*kl)

    def t1_dense(self):
        n = self.N + 1
        if self.fac.r == 0:
            return np.eye(n, dtype=complex) / self.fac.const
        K = self.fac.kres.simple * self.fac.kres.scale
        return np.asarray(kernels.band_t1(self.fac.alpha, self.fac.beta, self.fac.hres.simple,
                                          np.ascontiguousarray(K), self.N))

    def t2_dense(self):
        n = self.N + 1
        if self.fac.r == 0:
            return np.zeros((n, n), dtype=complex)
        X = np.stack([self._x(l) for l in range(n)], axis=1)
        R = np.stack([self._r(k) for k in range(n)], axis=1)
        return -R.T @ (self._solve @ X)

    def dense(self):
        return self.t1_dense() + self.t2_dense()


def setup(fac: WienerHopfFactorization, N: int) -> BandInverse:
    _require_simple(fac)
    hb = hankel_block(fac, N)
    r = fac.r
    if r == 0:
        z = np.zeros((0, 0), complex)
        return BandInverse(fac, N, hb, z, z, np.zeros(0, complex))
    smin = hb.sigma_min
    if not smin > SIGMA_MIN:
        raise SingularCorrectionError(
            f"I - H is numerically singular at N={N} (sigma_min={smin:.3g}); increase N")
    a, b = fac.alpha, fac.beta
    Q = np.array([[_prod_except(b, j, a[h]) for h in range(r)] for j in range(r)])
    G2 = np.array([np.prod(1.0 - a * b[j]) for j in range(r)])
    solve = np.linalg.inv(np.eye(r) - hb.matrix)
    return BandInverse(fac, N, hb, solve, Q, G2)


def invert_band(f: TrigPoly, N: int) -> BandInverse:
    """Closed-form inverse provider of ``T_N(f)`` for a Hermitian band symbol."""
    if not isinstance(f, TrigPoly):
        raise SymbolError("invert_band needs a band (trig-poly) symbol")
    if N < 0:
        raise ValueError("order must be >= 0")
    return setup(factorize(f), N)


def t2_entry(fac: WienerHopfFactorization, N: int, k: int, l: int) -> complex:
    return setup(fac, N).t2(k, l)


# ----------------------------------------------------------------------------
# composed Hankel map in the Fourier domain


def hankel_pair_apply(fac: WienerHopfFactorization, N: int, psi, L: int = 4096):
    """``pi_+( Phit pi_-( Phi psi ) )`` on an L-point grid.

    ``Phi = chi^{N+1} g1/g2``, ``Phit = chi^{-N-1} g2/g1``; ``psi`` is a
    callable of ``chi`` (an element of H+). Returns grid samples.
    """
    chi = np.exp(1j * TWO_PI * np.arange(L) / L)
    g1, g2 = fac.g1(chi), fac.g2(chi)
    freq = np.fft.fftfreq(L, d=1.0 / L)
    u = chi ** (N + 1) * g1 / g2 * psi(chi)
    U = np.fft.fft(u)
    U[freq >= 0] = 0
    v = np.fft.ifft(U) * chi ** (-(N + 1)) * g2 / g1
    V = np.fft.fft(v)
    V[freq < 0] = 0
    return np.fft.ifft(V)


def hankel_stability(fac: WienerHopfFactorization, N: int, L: int = 4096):
    """Apply ``Ht H`` to every basis element ``(1 - b_j chi)^{-n}``, n <= s_j.

    Returns ``(coefficients, residual)``: the coefficient matrix in the same
    basis (columns = inputs) and the largest part left outside it, relative
    to the sup norm of the input element.
    """
    chi = np.exp(1j * TWO_PI * np.arange(L) / L)
    basis = [(b, n) for b, s in zip(fac.beta, fac.multiplicities) for n in range(1, s + 1)]
    B = np.stack([(1.0 - b * chi) ** (-n) for b, n in basis], axis=1) if basis else \
        np.zeros((L, 0), complex)
    cols, worst = [], 0.0
    for b, n in basis:
        out = hankel_pair_apply(fac, N, lambda z, b=b, n=n: (1.0 - b * z) ** (-n), L)
        coef = np.linalg.lstsq(B, out, rcond=None)[0]
        inp = np.abs((1.0 - b * chi) ** (-n)).max()
        worst = max(worst, float(np.abs(B @ coef - out).max() / inp))
        cols.append(coef)
    C = np.stack(cols, axis=1) if cols else np.zeros((0, 0), complex)
    return C, worst


def hankel_norm_scan(f: TrigPoly, Ns):
    """``[(N, ||M_N||_2)]`` and the least-squares slope of log-norm vs N."""
    fac = factorize(f)
    rows = [(int(N), hankel_block(fac, int(N)).norm) for N in Ns]
    logs = [(N, np.log(v)) for N, v in rows if v > 0]
    slope = float(np.polyfit(*zip(*logs), 1)[0]) if len(logs) >= 2 else float("nan")
    return rows, slope


# ----------------------------------------------------------------------------
# decay certificate


@dataclass(frozen=True)
class DecayReport:
    N: int
    n0: int
    rho_theory: float
    rho_hat: float
    window: str
    passed: bool
    intercept: float = float("nan")
    diagonals: tuple = ()

    def to_json(self):
        return {"N": self.N, "n0": self.n0, "rho_theory": self.rho_theory,
                "rho_hat": self.rho_hat, "window": self.window, "pass": self.passed}


def diagonal_maxima(A):
    """``max_k |A[k, k+d]|, |A[k+d, k]|`` for d = 0..n-1."""
    A = np.abs(np.asarray(A))
    n = A.shape[0]
    return np.array([max(np.diagonal(A, d).max(), np.diagonal(A, -d).max()) for d in range(n)])


def fit_decay(A, N, noise_floor=0.0):
    """Log-linear fit of per-diagonal maxima over ``|k - l| >= N/4``.

    Diagonals at or below the noise floor are dropped; if fewer than three
    survive in that window, the fit falls back to the above-floor diagonals
    ``d >= 1``. Returns ``(rho_hat, intercept, window, ds, ms)``.
    """
    m = diagonal_maxima(A)
    d = np.arange(len(m))
    lo = int(np.ceil(N / 4))
    sel = (d >= lo) & (m > noise_floor)
    window = f"|k-l|>={lo}"
    if sel.sum() < 3:
        sel = (d >= 1) & (m > noise_floor)
        # keep the contiguous run from d = 1 until the floor is reached
        stop = np.flatnonzero(~sel[1:])
        if stop.size:
            sel[stop[0] + 1:] = False
        if sel.sum() < 2:
            return float("nan"), float("nan"), "none above noise floor", d[sel], m[sel]
        window = f"1<=|k-l|<={int(d[sel].max())} (above noise floor)"
    slope, icpt = np.polyfit(d[sel], np.log(m[sel]), 1)
    return float(np.exp(slope)), float(icpt), window, d[sel], m[sel]


def decay_certificate(inv, rs_or_rho, N=None, n0=None, noise_floor=None,
                      a=DECAY_EXPONENT) -> DecayReport:
    """Fit the off-diagonal decay of an inverse and check it against theory.

    ``inv`` is a :class:`BandInverse` or a dense matrix; ``rs_or_rho`` is a
    :class:`RootSet` (inside roots give ``rho``), ``rho`` itself, or None for a
    root-free symbol. Passes iff
    every window entry obeys ``|entry| <= 10 exp(intercept) rho^{a |k-l|}``.
    """
    if isinstance(inv, BandInverse):
        A = inv.dense()
        N = inv.N if N is None else N
        n0 = inv.fac.n0 if n0 is None else n0
        floor = 0.0 if noise_floor is None else noise_floor
    else:
        A = np.asarray(inv)
        N = A.shape[0] - 1 if N is None else N
        floor = NOISE_RTOL_DENSE * np.abs(A).max() if noise_floor is None else noise_floor
    if isinstance(rs_or_rho, RootSet):
        inside = np.abs(rs_or_rho.values)[np.abs(rs_or_rho.values) < 1]
        rho = float(inside.max(initial=0.0))
        n0 = rs_or_rho.degree // 2 if n0 is None else n0
    elif rs_or_rho is None:
        rho = inv.rho_theory if isinstance(inv, BandInverse) else 0.0
    else:
        rho = float(rs_or_rho)
    n0 = 0 if n0 is None else int(n0)
    d_all = diagonal_maxima(A)
    lo = int(np.ceil(N / 4))
    if np.all(d_all[max(lo, 1):] == 0):
        return DecayReport(int(N), n0, rho, 0.0, f"|k-l|>={lo}", True, float("-inf"))
    rho_hat, icpt, window, ds, ms = fit_decay(A, N, floor)
    if not np.isfinite(icpt):
        return DecayReport(int(N), n0, rho, rho_hat, window, False, icpt)
    d = np.arange(len(d_all))
    # entries at or below the noise floor carry no information
    win = (d >= ds.min()) & (d_all > floor)
    bound = 10.0 * np.exp(icpt) * rho ** (a * d[win])
    ok = bool(np.all(d_all[win] <= bound)) if rho > 0 else not win.any()
    return DecayReport(int(N), n0, rho, rho_hat, window, ok, icpt,
                       tuple(zip(ds.tolist(), ms.tolist())))
