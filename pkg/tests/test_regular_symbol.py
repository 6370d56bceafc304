import numpy as np
import pytest

from toeplitz_spectra.errors import ApproximationError, MarginError, SymbolError
from toeplitz_spectra.regular_symbol import (approx_at_degree, approx_by_square_modulus,
                                             neumann_decay_report)
from toeplitz_spectra.symbols import SmoothSymbol, TrigPoly, builtin


def test_constant_four():
    ap = approx_by_square_modulus(TrigPoly.constant(4.0), 1e-12)
    assert ap.M == 0 and abs(ap.P.beta[0] - 2) < 1e-14 and ap.eps <= 1e-14


def test_kms_recovered_at_m1():
    ap = approx_by_square_modulus(TrigPoly.from_cosine([1.25, -0.5]), 1e-10)
    assert ap.M == 1 and ap.eps <= 1e-10
    np.testing.assert_allclose(ap.P.beta, [1.0, -0.5], atol=1e-12)


def test_exp_cos_eps_decreasing(exp_cos):
    eps = [approx_at_degree(exp_cos, M).eps for M in (4, 8, 16)]
    assert eps[0] > eps[1] > eps[2]


def test_square_modulus_is_band(exp_cos):
    ap = approx_at_degree(exp_cos, 6)
    sq = ap.square_modulus()
    th = np.linspace(0, 2 * np.pi, 50)
    assert sq.degree == 6 and sq.is_real
    np.testing.assert_allclose(sq.evaluate(th).real, np.abs(ap.P.evaluate(th)) ** 2, atol=1e-13)


def test_unreachable_target(exp_cos):
    with pytest.raises(ApproximationError):
        approx_by_square_modulus(exp_cos, 1e-30, M_max=4)


def test_not_positive():
    with pytest.raises(SymbolError):
        approx_at_degree(builtin("laplace"), 3)


def test_margin_error(exp_cos):
    with pytest.raises(MarginError):
        neumann_decay_report(exp_cos, 32, M=0)


def test_kms_decay_rate():
    rep = neumann_decay_report(TrigPoly.from_cosine([1.25, -0.5]), 128, M=1)
    assert abs(rep.decay.rho_hat - 0.5) <= 0.025 and rep.passed


def test_constant_trivial():
    rep = neumann_decay_report(TrigPoly.constant(3.0), 32, M=0)
    assert rep.decay.rho_hat == 0 and rep.decay.passed and rep.passed


def test_exp_cos_below_band_rate(exp_cos):
    rep = neumann_decay_report(exp_cos, 128, M=8)
    assert rep.slope < 0 and rep.bounded
    assert rep.decay.rho_hat <= 1.1 * rep.band.rho_hat


def test_smooth_positive_symbol():
    f = SmoothSymbol(lambda t: 2.0 + np.cos(t) + 0.3 * np.cos(2 * t), is_even=True, name="s")
    rep = neumann_decay_report(f, 64, M=12)
    assert rep.passed
    js = rep.to_json()
    assert set(js) >= {"decay", "band", "approximation", "pass"}
