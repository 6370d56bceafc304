import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from toeplitz_spectra.band_inverse import (decay_certificate, hankel_block, hankel_norm_scan,
                                           hankel_stability, invert_band, t1_entry, t2_entry)
from toeplitz_spectra.errors import BoundaryRootError, MultipleRootError
from toeplitz_spectra.factorization import factorize
from toeplitz_spectra.symbols import TrigPoly, builtin, from_inside_roots
from toeplitz_spectra.toeplitz_core import build, dense_inverse

from corpus import band_corpus

KMS = TrigPoly.from_cosine([1.25, -0.5])
DEG2 = TrigPoly.from_cosine([41 / 20, -1.0, 0.2])


def test_constant_inverse():
    inv = invert_band(TrigPoly.constant(2.5), 6)
    np.testing.assert_allclose(inv.dense(), np.eye(7) / 2.5, atol=0)


def test_constant_t1_t2():
    fac = factorize(TrigPoly.constant(4.0))
    assert t1_entry(fac, 2, 2) == pytest.approx(0.25) and t1_entry(fac, 2, 1) == 0
    assert t2_entry(fac, 5, 1, 3) == 0


def test_kms_n8():
    A = invert_band(KMS, 8).dense()
    assert np.abs(A - dense_inverse(build(KMS, 8))).max() <= 1e-10


def test_deg2_n32():
    A = invert_band(DEG2, 32).dense()
    assert np.abs(A - dense_inverse(build(DEG2, 32))).max() <= 1e-8


def test_t1_corner_kms():
    fac = factorize(KMS)
    ref = dense_inverse(build(KMS, 64))[0, 0]
    assert abs(t1_entry(fac, 0, 0) - ref) <= 1e-9


@pytest.mark.parametrize("f", band_corpus())
def test_entries_match_dense(f):
    inv = invert_band(f, 20)
    A = dense_inverse(build(f, 20))
    for k, l in [(0, 0), (3, 17), (20, 0), (11, 11), (19, 2)]:
        assert abs(inv[k, l] - A[k, l]) <= 1e-10
        assert abs(inv.t1(k, l) + inv.t2(k, l) - A[k, l]) <= 1e-10


def test_entry_out_of_range():
    with pytest.raises(IndexError):
        invert_band(KMS, 4).entry(5, 0)


def test_boundary_root_rejected():
    with pytest.raises(BoundaryRootError):
        invert_band(builtin("laplace"), 8)


def test_multiple_root_rejected():
    with pytest.raises(MultipleRootError) as exc:
        invert_band(from_inside_roots([0.4, 0.4]), 8)
    assert exc.value.exit_code == 4


@given(st.lists(st.complex_numbers(min_magnitude=0.05, max_magnitude=0.8), min_size=1, max_size=3),
       st.integers(2, 24))
@settings(max_examples=40, deadline=None)
def test_random_planted_symbols(roots, N):
    roots = np.array(roots)
    d = np.abs(roots[:, None] - roots[None, :]) + np.eye(len(roots))
    if d.min() < 0.05:
        return
    f = from_inside_roots(roots)
    T = build(f, N).dense()
    A = invert_band(f, N).dense()
    assert np.abs(T @ A - np.eye(N + 1)).max() <= 1e-8


def test_hermitian_symmetry():
    A = invert_band(band_corpus()[2], 16).dense()
    np.testing.assert_allclose(A, A.conj().T, atol=1e-13)


def test_decay_kms():
    A = dense_inverse(build(KMS, 128))
    rep = decay_certificate(A, 0.5, N=128, n0=1)
    assert 0.475 <= rep.rho_hat <= 0.525 and rep.passed


def test_decay_constant():
    inv = invert_band(TrigPoly.constant(2.0), 16)
    rep = decay_certificate(inv, None, 16)
    assert rep.passed and rep.rho_hat == 0


def test_decay_two_root():
    f = from_inside_roots([0.5, 1 / 3])
    inv = invert_band(f, 128)
    rep = decay_certificate(inv, inv.fac.roots, 128)
    assert abs(rep.rho_hat - 0.5) <= 0.025 and rep.passed


def test_decay_report_keys():
    inv = invert_band(KMS, 64)
    keys = set(decay_certificate(inv, inv.fac.roots, 64).to_json())
    assert keys == {"N", "n0", "rho_theory", "rho_hat", "window", "pass"}


def test_hankel_slope_kms():
    _, slope = hankel_norm_scan(KMS, [8, 16, 32, 64])
    lo, hi = 2 * np.log(0.5) * 1.1, 2 * np.log(0.5) * 0.9
    assert lo <= slope <= hi


def test_hankel_slope_two_root():
    _, slope = hankel_norm_scan(from_inside_roots([0.5, 1 / 3]), [8, 16, 32, 64])
    assert slope == pytest.approx(2 * np.log(0.5), rel=0.1)


def test_hankel_constant_zero():
    rows, _ = hankel_norm_scan(TrigPoly.constant(3.0), [8, 16])
    assert all(v == 0 for _, v in rows)


@pytest.mark.parametrize("f", band_corpus())
def test_hankel_basis_stability(f):
    # the composed Hankel map keeps the pole basis invariant
    _, resid = hankel_stability(factorize(f), 8)
    assert resid <= 1e-9


def test_hankel_block_shape():
    H = hankel_block(factorize(DEG2), 10)
    assert H.matrix.shape == (2, 2) and H.norm > 0
