"""Regular (smooth, strictly positive) symbols: approximation by ``|P|^2`` and
decay of ``T_N(f)^{-1}`` entries.

``P`` is the predictor polynomial of ``h = 1/f``: its inverse square modulus
reproduces the moments of ``1/f`` up to order M, so ``|P_M|^2 -> f``. Once
``sup ||P|^2 - f| < min(f)/2`` the inverse of ``T_N(f)`` is a Neumann-series
perturbation of the band inverse of ``T_N(|P|^2)`` and inherits its
exponential off-diagonal decay.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .band_inverse import DecayReport, NOISE_RTOL_DENSE, decay_certificate, invert_band
from .errors import ApproximationError, MarginError, SymbolError
from .polyroots import classify_unit_circle, find_roots
from .symbols import SmoothSymbol, Symbol, TrigPoly, TWO_PI
from .toeplitz_core import PredictorPolynomial, build, dense_inverse, levinson_predictor

EPS_GRID = 4096
M_MAX = 64
ROOT_TOL = 1e-8


@dataclass(frozen=True)
class RegularApproximation:
    target: Symbol
    P: PredictorPolynomial
    eps: float
    m: float

    @property
    def M(self):
        return self.P.degree

    @property
    def margin_ok(self):
        return self.eps < self.m / 2

    def square_modulus(self) -> TrigPoly:
        """``|P|^2`` as a band symbol of degree M."""
        c = self.P.square_modulus_coefficients()
        c = 0.5 * (c + np.conj(c[::-1]))
        return TrigPoly(c, name=f"|P_{self.M}|^2")

    def to_json(self):
        return {"M": self.M, "eps": self.eps, "min_f": self.m, "margin_ok": self.margin_ok,
                "beta": [[float(b.real), float(b.imag)] for b in self.P.beta]}


def reciprocal(f: Symbol) -> SmoothSymbol:
    """``1/f`` with a 4096-point quadrature floor for its coefficients."""
    return SmoothSymbol(lambda t: 1.0 / f.real_values(t), smoothness=getattr(f, "smoothness", 2),
                        name=f"1/{f.name or 'f'}", is_real=True,
                        is_even=bool(getattr(f, "is_even", False)), min_grid=EPS_GRID)


def _check_regular(f: Symbol):
    th = TWO_PI * np.arange(EPS_GRID) / EPS_GRID
    v = f.evaluate(th)
    if np.any(np.abs(np.imag(v)) > 1e-12 * (1 + np.abs(v))):
        raise SymbolError("regular symbol must be real")
    m = float(np.real(v).min())
    if not m > 0:
        raise SymbolError(f"regular symbol must be strictly positive (min {m:.3g})")
    return np.real(v), m


def approx_at_degree(f: Symbol, M: int) -> RegularApproximation:
    fv, m = _check_regular(f)
    P = levinson_predictor(reciprocal(f), M)
    th = TWO_PI * np.arange(EPS_GRID) / EPS_GRID
    eps = float(np.abs(np.abs(P.evaluate(th)) ** 2 - fv).max())
    return RegularApproximation(f, P, eps, m)


def approx_by_square_modulus(f: Symbol, eps_target: float, M_max: int = M_MAX) -> RegularApproximation:
    """Smallest ``M <= M_max`` with ``sup ||P_M|^2 - f| <= eps_target``."""
    if not eps_target > 0:
        raise ValueError("eps_target must be positive")
    best = None
    for M in range(M_max + 1):
        ap = approx_at_degree(f, M)
        if ap.eps <= eps_target:
            _check_roots(ap.P)
            return ap
        best = ap if best is None or ap.eps < best.eps else best
    raise ApproximationError(f"sup error {best.eps:.3g} at best (M={best.M}) exceeds {eps_target:g}")


def _check_roots(P: PredictorPolynomial):
    if P.degree == 0:
        return
    r = np.abs(P.roots())
    if np.any(np.abs(r - 1) <= ROOT_TOL):
        raise ApproximationError("approximant has a root on the unit circle")


@dataclass(frozen=True)
class RegularDecayReport:
    decay: DecayReport           # dense inverse of T_N(f)
    band: DecayReport            # closed-form inverse of T_N(|P|^2)
    approx: RegularApproximation
    rho_probe: float
    bounded: bool                # entries <= C (1/rho_probe)^{|k-l|} in the window
    declared_rho2: float | None = None

    @property
    def slope(self):
        return float(np.log(self.decay.rho_hat)) if self.decay.rho_hat > 0 else float("-inf")

    @property
    def passed(self):
        return bool(self.slope < 0 and self.bounded)

    def to_json(self):
        return {"decay": self.decay.to_json(), "band": self.band.to_json(),
                "approximation": self.approx.to_json(), "rho_probe": self.rho_probe,
                "declared_rho2": self.declared_rho2, "slope": self.slope,
                "bounded": self.bounded, "pass": self.passed}


def neumann_decay_report(f: Symbol, N: int, rho_probe: float | None = None, M: int = 8,
                         approx: RegularApproximation | None = None) -> RegularDecayReport:
    """Fit the decay of ``T_N(f)^{-1}`` and compare it with the ``|P_M|^2`` band rate.

    ``rho_probe`` defaults to ``1 / max |a|`` over the inside roots of the
    approximant's K polynomial.
    """
    approx = approx_at_degree(f, M) if approx is None else approx
    if not approx.margin_ok:
        raise MarginError(f"sup error {approx.eps:.3g} is not below min(f)/2 = {approx.m / 2:.3g}")
    sq = approx.square_modulus()
    if sq.degree:
        rs = find_roots(sq.k_coefficients())
        inside, _ = classify_unit_circle(rs, sq.degree)
        rho_band = max(abs(v) for v, _ in inside)
    else:
        rho_band = 0.0
    if rho_probe is None:
        rho_probe = 1.0 / rho_band if rho_band > 0 else float("inf")
    A = dense_inverse(build(f, N))
    floor = NOISE_RTOL_DENSE * np.abs(A).max()
    dec = decay_certificate(A, 1.0 / rho_probe, N=N, n0=0, noise_floor=floor)
    band = decay_certificate(invert_band(sq, N), rho_band, n0=sq.degree)
    # bound check on entries above the noise floor in the fitted window
    d = np.abs(np.subtract.outer(np.arange(N + 1), np.arange(N + 1)))
    absA = np.abs(A)
    if np.isfinite(dec.intercept):
        lo = int(min(ds for ds, _ in dec.diagonals)) if dec.diagonals else 1
        mask = (d >= lo) & (absA > floor)
        bound = 10.0 * np.exp(dec.intercept) * (1.0 / rho_probe) ** d
        bounded = bool(np.all(absA[mask] <= bound[mask]))
    else:
        bounded = bool(np.all(absA[d >= 1] <= floor))
    from .symbols import DECLARED_RHO2
    return RegularDecayReport(dec, band, approx, float(rho_probe), bounded,
                              DECLARED_RHO2.get(getattr(f, "name", ""), None))
