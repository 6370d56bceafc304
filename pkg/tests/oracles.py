"""Independent reference computations used only by the tests."""
import math

import numpy as np


def quadrature_coefficients(func, N, L):
    """Fourier coefficients by an explicit (non-FFT) Riemann sum on ``L`` points."""
    th = 2.0 * np.pi * np.arange(L) / L
    v = func(th)
    k = np.arange(-N, N + 1)
    return np.exp(-1j * np.outer(k, th)) @ v / L


def sturm_count(diag, off, x):
    """Number of eigenvalues below ``x`` of a real symmetric tridiagonal matrix."""
    count, q = 0, 1.0
    for i, d in enumerate(diag):
        b2 = off[i - 1] ** 2 if i else 0.0
        q = d - x - (b2 / q if i else 0.0)
        if q == 0.0:
            q = 1e-300
        count += q < 0
    return count


def tridiagonal_eigenvalues(diag, off, tol=1e-14):
    """All eigenvalues by bisection on the characteristic-recursion sign count."""
    diag, off = np.asarray(diag, float), np.asarray(off, float)
    n = len(diag)
    r = np.abs(np.concatenate([[0], off])) + np.abs(np.concatenate([off, [0]]))
    lo0, hi0 = float((diag - r).min()), float((diag + r).max())
    out = []
    for j in range(n):
        lo, hi = lo0, hi0
        while hi - lo > tol * max(1.0, abs(hi)):
            mid = 0.5 * (lo + hi)
            if sturm_count(diag, off, mid) > j:
                hi = mid
            else:
                lo = mid
        out.append(0.5 * (lo + hi))
    return np.array(out)


def projection_by_fft(alpha, r, m, terms=200, L=8192):
    """Coefficients of ``chi^{-1-v}`` in the negative part of ``chi^r (1 - alpha/chi)^{-m}``."""
    chi = np.exp(2j * np.pi * np.arange(L) / L)
    F = np.fft.fft(chi ** r / (1.0 - alpha / chi) ** m) / L
    return F[(-1 - np.arange(terms)) % L]


def cheb_fit(f, npts=64, degree=None):
    """Least-squares polynomial in ``x = 1 - cos theta`` fitted to samples of ``f``."""
    th = np.linspace(0.05, np.pi - 0.05, npts)
    x = 1.0 - np.cos(th)
    return np.polynomial.polynomial.polyfit(x, np.real(f(th)), degree)


def laplace_eigenvalues(N):
    return 2.0 - 2.0 * np.cos(np.arange(1, N + 2) * np.pi / (N + 2))


def binom_series_negative_part(alpha, r, m, terms=200):
    u = r + 1 + np.arange(terms)
    return np.array([math.comb(int(x) + m - 1, m - 1) for x in u], float) * alpha ** u
