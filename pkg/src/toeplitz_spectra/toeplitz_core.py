"""Toeplitz matrices, dense oracles and the Levinson predictor polynomial.

Convention: ``T_N(f)`` is ``(N+1) x (N+1)`` with ``T[k, l] = fhat(k - l)``
(0-based here; the 1-based entry ``(k+1, l+1)``).
"""
from __future__ import annotations

import csv
import io
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import kernels
from .errors import BreakdownError, NotHermitianError, SingularMatrixError, SymbolError
from .symbols import Symbol, TWO_PI

PIVOT_RTOL = 1e-13


@dataclass(frozen=True)
class ToeplitzMatrix:
    """Diagonal-compressed Toeplitz matrix; ``diagonals[j + N] = d_j``."""

    N: int
    diagonals: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.diagonals, dtype=complex)
        if d.shape != (2 * self.N + 1,):
            raise ValueError(f"need {2 * self.N + 1} diagonals, got {d.shape}")
        d.setflags(write=False)
        object.__setattr__(self, "diagonals", d)

    @property
    def size(self):
        return self.N + 1

    def diag(self, j):
        return complex(self.diagonals[j + self.N]) if abs(j) <= self.N else 0j

    @property
    def is_hermitian(self):
        d = self.diagonals
        return bool(np.allclose(d, np.conj(d[::-1]), rtol=0, atol=1e-13 * (1 + np.abs(d).max())))

    def dense(self):
        d = self.diagonals
        n = self.N
        return scipy.linalg.toeplitz(d[n:], d[n::-1])

    def matvec(self, x):
        return self.dense() @ x

    def to_json(self):
        return {"n": self.N, "diagonals": [[float(v.real), float(v.imag)] for v in self.diagonals]}

    @classmethod
    def from_json(cls, obj):
        return cls(int(obj["n"]), np.array([complex(a, b) for a, b in obj["diagonals"]]))


def build(f: Symbol, N: int) -> ToeplitzMatrix:
    if N < 0:
        raise ValueError("order must be >= 0")
    return ToeplitzMatrix(N, f.fourier_coefficients(N))


def _as_dense(T):
    return T.dense() if isinstance(T, ToeplitzMatrix) else np.asarray(T)


def dense_inverse(T) -> np.ndarray:
    """LU inverse; refuses matrices whose smallest pivot is below 1e-13 ||T||."""
    A = _as_dense(T).astype(complex)
    norm = np.abs(A).max() if A.size else 0.0
    with warnings.catch_warnings():
        # exact zero pivots are reported below as SingularMatrixError
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(A, check_finite=True)
    if norm == 0.0 or np.abs(np.diag(lu)).min() <= PIVOT_RTOL * norm:
        raise SingularMatrixError("matrix is singular to working tolerance")
    return scipy.linalg.lu_solve((lu, piv), np.eye(A.shape[0], dtype=complex))


def hermitian_eigenvalues(T) -> np.ndarray:
    """Ascending eigenvalues of a Hermitian matrix (LAPACK ``heevd``)."""
    A = _as_dense(T)
    scale = 1.0 + np.abs(A).max()
    if np.abs(A - A.conj().T).max() > 1e-12 * scale:
        raise NotHermitianError("matrix is not Hermitian")
    return np.linalg.eigvalsh(A)


# ----------------------------------------------------------------------------
# predictor polynomial


@dataclass(frozen=True)
class PredictorPolynomial:
    """``P_M(theta) = sum_{u=0}^M beta_u exp(i u theta)``."""

    beta: np.ndarray
    prediction_error: float = float("nan")

    @property
    def degree(self):
        return len(self.beta) - 1

    def evaluate(self, theta):
        z = np.exp(1j * np.asarray(theta, dtype=float))
        return np.polynomial.polynomial.polyval(z, self.beta)

    def roots(self):
        from .polyroots import find_roots
        if self.degree == 0:
            return np.array([], dtype=complex)
        return find_roots(self.beta).values

    def square_modulus_coefficients(self):
        """Coefficients ``c_{-M..M}`` of ``|P_M|^2`` (index ``j + M``)."""
        b = self.beta
        full = np.convolve(b, np.conj(b[::-1]))
        return full


def _check_positive(h: Symbol):
    lo, _ = h.sample_min_max(1024)
    if not lo > 0:
        raise SymbolError("predictor polynomial needs a strictly positive symbol")


def levinson_predictor(h: Symbol, M: int) -> PredictorPolynomial:
    """``beta_u = T_M^{-1}(h)[u, 0] / sqrt(T_M^{-1}(h)[0, 0])`` via Levinson-Durbin.

    The recursion gives ``T_M a = E e_1`` with ``a_0 = 1``; the first column
    of the inverse is ``a / E`` so ``beta = a / sqrt(E)``.
    """
    if M < 0:
        raise ValueError("degree must be >= 0")
    _check_positive(h)
    fh = h.fourier_coefficients(M)
    r = np.ascontiguousarray(fh[M:])
    a, E, status = kernels.levinson(r)
    if status >= 0:
        raise BreakdownError(f"Levinson recursion broke down at order {status}: "
                             "T_M(h) is not positive definite")
    return PredictorPolynomial(np.asarray(a) / np.sqrt(E), float(E))


def definitional_predictor(h: Symbol, M: int) -> PredictorPolynomial:
    """Same coefficients straight from the dense inverse (oracle route)."""
    inv = dense_inverse(build(h, M))
    col = inv[:, 0]
    return PredictorPolynomial(col / np.sqrt(col[0].real), 1.0 / col[0].real)


def verify_predictor_moments(h: Symbol, P: PredictorPolynomial, grid_size=None) -> float:
    """``max_{|s| <= M} |hhat(s) - (1/|P_M|^2)^(s)|`` by trapezoid quadrature."""
    M = P.degree
    L = grid_size or 16 * (M + 1)
    th = TWO_PI * np.arange(L) / L
    w = 1.0 / np.abs(P.evaluate(th)) ** 2
    F = np.fft.fft(w) / L
    s = np.arange(-M, M + 1)
    return float(np.abs(h.fourier_coefficients(M) - F[s % L]).max())


# ----------------------------------------------------------------------------
# export


def _cell(v):
    v = complex(v)
    return f"{v.real:.17g}{v.imag:+.17g}j"


def matrix_to_csv(A) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for row in np.asarray(A):
        w.writerow([_cell(v) for v in row])
    return buf.getvalue()


def matrix_from_csv(text: str) -> np.ndarray:
    rows = [r for r in csv.reader(io.StringIO(text)) if r]
    return np.array([[complex(c) for c in r] for r in rows])
