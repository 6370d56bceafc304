"""Loop (numba) and vectorized kernels must agree."""
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from toeplitz_spectra import kernels
from toeplitz_spectra._accel import HAS_NUMBA, USE_JIT
from toeplitz_spectra.factorization import factorize
from toeplitz_spectra.symbols import TrigPoly

from corpus import band_corpus


@given(st.floats(0.05, 0.9), st.integers(1, 30))
@settings(max_examples=30, deadline=None)
def test_levinson_paths_agree(r, M):
    k = np.arange(M + 1)
    col = (r ** k / (1 - r * r)).astype(complex)
    a1 = kernels.levinson_loops(col)
    a2 = kernels.levinson_numpy(col)
    for x, y in zip(a1, a2):
        np.testing.assert_allclose(x, y, rtol=1e-12, atol=1e-12)


@given(st.lists(st.complex_numbers(max_magnitude=3), min_size=2, max_size=10))
@settings(max_examples=40, deadline=None)
def test_aberth_paths_agree(roots):
    roots = np.array(roots)
    d = np.abs(roots[:, None] - roots[None, :]) + np.eye(len(roots)) * 9
    if d.min() < 0.05:
        return
    p = np.polynomial.polynomial.polyfromroots(roots).astype(complex)
    z0 = 1.3 * np.exp(1j * (2 * np.pi * np.arange(len(roots)) / len(roots) + 0.4))
    za, _, ca = kernels.aberth_loops(p, z0, 500, 1e-13)
    zb, _, cb = kernels.aberth_numpy(p, z0, 500, 1e-13)
    if ca and cb:
        assert max(np.abs(zb - z).min() for z in za) <= 1e-8
        assert max(np.abs(za - z).min() for z in zb) <= 1e-8


@pytest.mark.parametrize("f", band_corpus())
def test_band_t1_paths_agree(f):
    fac = factorize(f)
    args = (np.asarray(fac.alpha, complex), np.asarray(fac.beta, complex),
            np.asarray(fac.hres.simple, complex), np.asarray(fac.kres.simple, complex), 24)
    np.testing.assert_allclose(kernels.band_t1_loops(*args), kernels.band_t1_numpy(*args), atol=1e-14)


@pytest.mark.parametrize("cos", [[1.25, -0.5], [1.9, -0.2, -0.25], [3.0, 1.0]])
def test_theta_offsets_paths_agree(cos):
    f = TrigPoly.from_cosine(cos)
    from toeplitz_spectra.toeplitz_core import build, hermitian_eigenvalues
    N = 24
    lam = hermitian_eigenvalues(build(f, N))
    a = np.asarray(f.cosine_coefficients(), float)
    t1, r1, b1 = kernels.theta_offsets_loops(a, lam, N)
    t2, r2, b2 = kernels.theta_offsets_numpy(a, lam, N)
    np.testing.assert_array_equal(b1, b2)
    np.testing.assert_allclose(t1, t2, atol=1e-10)


def test_dispatch_flag():
    assert USE_JIT == (kernels.levinson is kernels.levinson_loops) or not HAS_NUMBA


def test_benchmark_runs(tmp_path):
    import runpy
    from pathlib import Path
    path = Path(__file__).resolve().parents[1] / "benchmarks" / "bench_kernels.py"
    mod = runpy.run_path(str(path))
    rows = mod["main"](["--repeat", "1", "--json", str(tmp_path / "t.json")])
    assert {r["kernel"] for r in rows} == set(kernels.KERNELS)
