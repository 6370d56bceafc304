import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from toeplitz_spectra.factorization import (check_phi_identity, factorize, partial_fractions,
                                            phi_km, phi_value, project_minus_closed,
                                            project_minus_series, series_residues, tau,
                                            wiener_hopf_split)
from toeplitz_spectra.polyroots import symbol_roots
from toeplitz_spectra.symbols import TrigPoly, from_inside_roots

from corpus import band_corpus
from oracles import projection_by_fft

KMS = TrigPoly.from_cosine([1.25, -0.5])


def test_kms_split():
    fac = factorize(KMS)
    assert fac.const == pytest.approx(1.0)
    chi = np.exp(1j * np.linspace(0, 6, 9))
    np.testing.assert_allclose(fac.g1(chi), 1 - chi / 2, atol=1e-14)
    np.testing.assert_allclose(fac.g2(chi), 1 - np.conj(chi) / 2, atol=1e-14)
    # c |1 - e^{i0}/2|^2 = 1/4 = f(0)
    assert fac.const * 0.25 == pytest.approx(KMS.evaluate(0.0).real)


def test_constant_split():
    fac = factorize(TrigPoly.constant(4.0))
    assert fac.r == 0
    chi = np.exp(1j * np.linspace(0, 6, 5))
    np.testing.assert_allclose(fac.g1(chi), 4.0)
    np.testing.assert_allclose(fac.g2(chi), 1.0)


@pytest.mark.parametrize("f", band_corpus())
def test_product_invariant(f):
    fac = wiener_hopf_split(symbol_roots(f)[0], f)
    assert fac.product_error(f, 256) <= 1e-10
    assert max(fac.residue_errors(64)) <= 1e-10


def test_single_pole_residue():
    t = partial_fractions([(0.4, 1)])
    assert t.residues[0][0] == pytest.approx(1.0)


def test_two_pole_residues():
    t = partial_fractions([(0.5, 1), (1 / 3, 1)])
    np.testing.assert_allclose(t.simple, [3.0, -2.0], atol=1e-13)
    for x in (0.0, -1.0):
        want = 1 / ((1 - x / 2) * (1 - x / 3))
        assert t.evaluate(x) == pytest.approx(want, abs=1e-13)


def test_double_pole_series_oracle():
    t = partial_fractions([(0.5, 2), (-0.25, 1)])
    ref = series_residues(0.5, 2, [(-0.25, 1)])
    np.testing.assert_allclose(t.residues[0], ref, atol=1e-9)
    assert t.max_error() <= 1e-10


def test_double_pole_hand_oracle():
    # 1/((1-px)^2 (1-qx)): residues at 1/p by direct Laurent expansion in u = 1-px
    p, q = 0.5, -0.25
    # (1-qx) = (1 - q/p) + (q/p) u ; A2 = 1/(1-q/p), A1 = -(q/p)/(1-q/p)^2
    k = q / p
    t = partial_fractions([(p, 2), (q, 1)])
    np.testing.assert_allclose(t.residues[0], [-k / (1 - k) ** 2, 1 / (1 - k)], atol=1e-9)


def test_coincident_poles_rejected():
    with pytest.raises(ValueError):
        partial_fractions([(0.5, 1), (0.5, 1)])


@given(st.lists(st.complex_numbers(max_magnitude=0.9, min_magnitude=0.05), min_size=1, max_size=5))
@settings(max_examples=50, deadline=None)
def test_partial_fraction_identity(poles):
    poles = np.array(poles)
    d = np.abs(poles[:, None] - poles[None, :]) + np.eye(len(poles))
    if d.min() < 1e-2:
        return
    t = partial_fractions([(p, 1) for p in poles])
    assert t.max_error() <= 1e-8


@pytest.mark.parametrize("m,u,want", [(1, 5, 1), (2, 3, 4), (3, 2, 12)])
def test_tau(m, u, want):
    assert tau(m, u) == want


def test_tau_generating_function():
    x = Fraction(1, 3)
    for m in range(1, 5):
        s = sum(tau(m, u) * x ** u for u in range(200))
        assert float(s) == pytest.approx(math.factorial(m - 1) / (1 - float(x)) ** m, rel=1e-12)


def test_phi_m1():
    assert phi_km(1, 1) == (1,)


def test_phi_m2():
    assert phi_km(2, 1) == (0, 1) and phi_km(2, 2) == (1,)


def test_phi_m3_at_4_7():
    w, r = 4, 7
    assert tau(3, w + r) == sum(phi_value(3, k, r) * tau(k, w) for k in (1, 2, 3))


@pytest.mark.parametrize("m", [1, 2, 3, 4, 5])
def test_phi_identity_exact(m):
    pairs = [(w, r) for w in range(12) for r in range(12)]
    assert check_phi_identity(m, pairs)
    for k in range(1, m + 1):
        assert len(phi_km(m, k)) - 1 == m - k


@pytest.mark.parametrize("m", [1, 2, 3, 4, 5])
def test_phi_binomial_form(m):
    # phi_{k,m}(r) = C(r+m-k-1, m-k) (m-1)!/(k-1)!
    for r in range(1, 15):
        for k in range(1, m + 1):
            want = math.comb(r + m - k - 1, m - k) * Fraction(math.factorial(m - 1), math.factorial(k - 1))
            assert phi_value(m, k, r) == want


@given(st.complex_numbers(max_magnitude=0.9), st.integers(0, 40), st.integers(1, 4))
@settings(max_examples=60, deadline=None)
def test_projection_closed_form(alpha, r, m):
    closed = project_minus_closed(alpha, r, m)
    assert np.abs(closed - project_minus_series(alpha, r, m)).max() <= 1e-10
    assert np.abs(closed - projection_by_fft(alpha, r, m)).max() <= 1e-10


def test_split_requires_real():
    from toeplitz_spectra.errors import NotHermitianError
    with pytest.raises(NotHermitianError):
        factorize(TrigPoly([1.0, 2.0, 0.5]))


def test_multiple_inside_root_split():
    f = from_inside_roots([0.4, 0.4, -0.3])
    fac = factorize(f)
    assert sorted(fac.multiplicities.tolist()) == [1, 2]
    assert fac.product_error(f) <= 1e-9
