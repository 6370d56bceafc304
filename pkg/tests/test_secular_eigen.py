import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from toeplitz_spectra.errors import ExcludedLevelError, SymbolError
from toeplitz_spectra.secular_eigen import (chi_of_lambda, localize, locate_eigenvalues,
                                            secular_determinant, weyl_statistic)
from toeplitz_spectra.symbols import TrigPoly
from toeplitz_spectra.toeplitz_core import build, hermitian_eigenvalues

from corpus import corpus
from oracles import laplace_eigenvalues, tridiagonal_eigenvalues


@pytest.mark.parametrize("lp,want", [(0.0, 1.0), (1.0, 1j), (2.0, -1.0),
                                     (2.5, (-3 + np.sqrt(5)) / 2)])
def test_chi_of_lambda(lp, want):
    assert abs(chi_of_lambda(lp) - want) < 1e-14


@given(st.floats(-5, 5))
@settings(max_examples=60, deadline=None)
def test_chi_solves_quadratic(lp):
    chi = chi_of_lambda(lp)
    assert abs(chi) <= 1 + 1e-12
    assert abs(chi * chi - 2 * (1 - lp) * chi + 1) <= 1e-10 * (1 + abs(lp))


def test_laplace_dense_levels_zero_determinant(laplace):
    for lam in laplace_eigenvalues(9):
        assert abs(secular_determinant(laplace, lam, 9).D) <= 1e-8


def test_above_range_no_root(laplace):
    s = secular_determinant(laplace, 4.3, 9)
    assert np.all(np.abs(s.chi) < 1)
    rho = np.abs(s.chi).max()
    assert abs(s.D - 1) <= rho ** 18


def test_excluded_level(laplace):
    with pytest.raises(ExcludedLevelError):
        secular_determinant(laplace, 0.0, 9)


@pytest.mark.parametrize("cos", [[6.0, -4.0, 1.0], [3.0, -1.5, 0.2]])
def test_sign_changes_bracket_all_roots(cos):
    f, N = TrigPoly.from_cosine(cos), 16
    n = 4 * (N + 1)
    grid = np.sort(f.evaluate(np.pi * (np.arange(n) + 0.5) / n).real)
    v = np.array([secular_determinant(f, x, N).value for x in grid])
    assert np.sum(np.sign(v[1:]) != np.sign(v[:-1])) == N + 1


def test_locate_laplace(laplace):
    eigs = locate_eigenvalues(laplace, 9)
    ref = tridiagonal_eigenvalues(2 * np.ones(10), -np.ones(9))
    np.testing.assert_allclose(eigs, ref, atol=1e-9)


def test_locate_constant_rejected():
    with pytest.raises(SymbolError):
        locate_eigenvalues(TrigPoly.constant(2.0), 5)


@pytest.mark.parametrize("f", corpus())
def test_locate_matches_dense(f):
    eigs = locate_eigenvalues(f, 16)
    dense = hermitian_eigenvalues(build(f, 16))
    assert len(eigs) == 17
    assert np.abs(eigs - dense).max() <= 1e-8


def test_localize_laplace(laplace):
    rep = localize(laplace_eigenvalues(9), laplace, 9)
    assert rep.bijective and rep.max_abs_theta < 1
    assert sorted(rep.k.tolist()) == list(range(1, 11))


def test_localize_min_at_pi():
    f, N = TrigPoly.from_cosine([3.0, 1.0]), 32
    rep = localize(hermitian_eigenvalues(build(f, N)), f, N)
    assert rep.bijective and rep.k_min >= N - 1


def test_localize_perfect_grid():
    f, N = TrigPoly.from_cosine([1.9, -0.2, -0.25]), 24
    eigs = np.sort(f.evaluate(np.arange(1, N + 2) * np.pi / (N + 2)).real)
    rep = localize(eigs, f, N)
    assert rep.bijective and rep.max_abs_theta <= 1e-8


def test_localize_report_json():
    f = TrigPoly.from_cosine([1.25, -0.5])
    js = localize(hermitian_eigenvalues(build(f, 16)), f, 16).to_json()
    assert js["pass"] is True and len(js["assignments"]) == 17


def test_weyl_constant():
    f = TrigPoly.constant(3.0)
    stats = weyl_statistic(np.full(11, 3.0), f, 10)
    assert all(abs(v) <= 1e-14 for v in stats.values())


def test_weyl_trace_identity(laplace):
    # sum of eigenvalues = (N+1) fhat(0), so h = x is exact up to rounding
    vals = [weyl_statistic(hermitian_eigenvalues(build(laplace, N)), laplace, N)["x"]
            for N in (32, 64, 128)]
    assert max(vals) <= 1e-12


@pytest.mark.parametrize("f", corpus())
def test_weyl_decreasing(f):
    s = [weyl_statistic(hermitian_eigenvalues(build(f, N)), f, N) for N in (32, 64, 128)]
    for h in ("x", "x2", "cos"):
        for a, b in zip(s, s[1:]):
            assert b[h] <= 1.1 * a[h] + 1e-12


def test_weyl_smooth_symbol(exp_cos):
    s = [weyl_statistic(hermitian_eigenvalues(build(exp_cos, N)), exp_cos, N)["x2"]
         for N in (32, 64, 128)]
    assert s[2] < s[0]
