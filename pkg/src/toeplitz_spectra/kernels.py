"""Hot numeric kernels.

Every kernel has two implementations with identical signatures:
``<name>_loops`` (plain loops, numba-compiled) and ``<name>_numpy``
(vectorized). The public name is bound to one of them according to
``TOEPLITZ_SPECTRA_JIT``; ``benchmarks/bench_kernels.py`` times both.
"""
import numpy as np

from ._accel import USE_JIT, njit, prange

# ----------------------------------------------------------------------------
# Levinson-Durbin: T_M a = E e_1 with a_0 = 1, entry (k, l) = r_{k-l}


@njit
def levinson_loops(r):
    M = r.shape[0] - 1
    a = np.zeros(M + 1, dtype=np.complex128)
    tmp = np.zeros(M + 1, dtype=np.complex128)
    a[0] = 1.0
    E = r[0].real
    if E <= 0.0:
        return a, E, 0
    for m in range(M):
        delta = 0j
        for l in range(m + 1):
            delta += r[m + 1 - l] * a[l]
        kappa = delta / E
        for l in range(m + 2):
            tmp[l] = a[l]
        for l in range(1, m + 2):
            tmp[l] -= kappa * np.conj(a[m + 1 - l])
        for l in range(m + 2):
            a[l] = tmp[l]
        E = E * (1.0 - (kappa.real * kappa.real + kappa.imag * kappa.imag))
        if E <= 1e-15 * r[0].real:
            return a, E, m + 1
    return a, E, -1


def levinson_numpy(r):
    r = np.asarray(r, dtype=complex)
    M = r.shape[0] - 1
    a = np.zeros(M + 1, dtype=complex)
    a[0] = 1.0
    E = r[0].real
    if E <= 0.0:
        return a, E, 0
    for m in range(M):
        delta = np.dot(r[m + 1:0:-1], a[:m + 1])
        kappa = delta / E
        a[1:m + 2] = a[1:m + 2] - kappa * np.conj(a[m::-1])
        E = E * (1.0 - abs(kappa) ** 2)
        if E <= 1e-15 * r[0].real:
            return a, E, m + 1
    return a, E, -1


# ----------------------------------------------------------------------------
# Aberth-Ehrlich simultaneous iteration on ascending coefficients p


@njit
def aberth_loops(p, z0, maxiter, tol):
    n = p.shape[0] - 1
    z = z0.copy()
    absp = np.abs(p)
    for it in range(maxiter):
        done = True
        for k in range(n):
            zk = z[k]
            v = p[n]
            d = 0j
            s = absp[n]
            az = abs(zk)
            for i in range(n - 1, -1, -1):
                d = d * zk + v
                v = v * zk + p[i]
                s = s * az + absp[i]
            if abs(v) <= tol * s:
                continue
            done = False
            if d == 0:
                continue
            ratio = v / d
            acc = 0j
            for j in range(n):
                if j != k and z[j] != zk:
                    acc += 1.0 / (zk - z[j])
            den = 1.0 - ratio * acc
            # plain Newton step when the Aberth correction degenerates
            z[k] = zk - (ratio / den if den != 0 else ratio)
        if done:
            return z, it, True
    return z, maxiter, False


def _horner_all(p, z):
    n = p.shape[0] - 1
    v = np.full(z.shape, p[n], dtype=complex)
    d = np.zeros(z.shape, dtype=complex)
    s = np.full(z.shape, abs(p[n]))
    az = np.abs(z)
    absp = np.abs(p)
    for i in range(n - 1, -1, -1):
        d = d * z + v
        v = v * z + p[i]
        s = s * az + absp[i]
    return v, d, s


def aberth_numpy(p, z0, maxiter, tol):
    p = np.asarray(p, dtype=complex)
    z = np.array(z0, dtype=complex)
    n = z.shape[0]
    off = ~np.eye(n, dtype=bool)
    for it in range(maxiter):
        v, d, s = _horner_all(p, z)
        active = np.abs(v) > tol * s
        if not active.any():
            return z, it, True
        diff = z[:, None] - z[None, :]
        inv = np.zeros_like(diff)
        nz = off & (diff != 0)
        inv[nz] = 1.0 / diff[nz]
        acc = inv.sum(axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = v / d
            step = ratio / (1.0 - ratio * acc)
        ok = active & np.isfinite(step)
        z = np.where(ok, z - step, z)
    return z, maxiter, False


# ----------------------------------------------------------------------------
# principal term T1 of the band inverse, simple roots
#   T1[k, l] = sum_{i,h} H_i K_h a_i^{l-m} b_h^{k-m} (1 - (a_i b_h)^{m+1}) / (1 - a_i b_h)
#   m = min(k, l)


@njit
def band_t1_loops(alpha, beta, hres, kres, N):
    r = alpha.shape[0]
    out = np.zeros((N + 1, N + 1), dtype=np.complex128)
    apow = np.ones((r, N + 1), dtype=np.complex128)
    bpow = np.ones((r, N + 1), dtype=np.complex128)
    for i in range(r):
        for d in range(1, N + 1):
            apow[i, d] = apow[i, d - 1] * alpha[i]
            bpow[i, d] = bpow[i, d - 1] * beta[i]
    for i in range(r):
        for h in range(r):
            ab = alpha[i] * beta[h]
            w = hres[i] * kres[h] / (1.0 - ab)
            abm = np.ones(N + 2, dtype=np.complex128)
            for m in range(1, N + 2):
                abm[m] = abm[m - 1] * ab
            for k in range(N + 1):
                for l in range(N + 1):
                    m = k if k < l else l
                    out[k, l] += w * apow[i, l - m] * bpow[h, k - m] * (1.0 - abm[m + 1])
    return out


def band_t1_numpy(alpha, beta, hres, kres, N):
    idx = np.arange(N + 1)
    K, L = np.meshgrid(idx, idx, indexing="ij")
    m = np.minimum(K, L)
    out = np.zeros((N + 1, N + 1), dtype=complex)
    for i in range(alpha.shape[0]):
        for h in range(beta.shape[0]):
            ab = alpha[i] * beta[h]
            w = hres[i] * kres[h] / (1.0 - ab)
            out += w * alpha[i] ** (L - m) * beta[h] ** (K - m) * (1.0 - ab ** (m + 1))
    return out


# ----------------------------------------------------------------------------
# per-(eigenvalue, k) angular offset for even symbols
#   g(t) = f(k pi/(N+2) + t pi/N) - lam,  t in [-1, 1], f = a0 + 2 sum a_j cos(j theta)
# returns the root of smallest |t| (bisection in 8 cells), |g| there and a
# bracketed mask; unbracketed pairs report the best sample and its |g|.

NCELLS = 8
BISECT_STEPS = 60


@njit
def _cos_eval(a, th):
    acc = a[0]
    for j in range(1, a.shape[0]):
        acc += 2.0 * a[j] * np.cos(j * th)
    return acc


@njit(parallel=True)
def theta_offsets_loops(a, lam, N):
    E = lam.shape[0]
    K = N + 1
    theta = np.zeros((E, K))
    resid = np.zeros((E, K))
    bracketed = np.zeros((E, K), dtype=np.bool_)
    h = 2.0 / NCELLS
    for e in prange(E):
        for kk in range(K):
            base = (kk + 1) * np.pi / (N + 2)
            best_t = 10.0
            best_r = np.inf
            for c in range(NCELLS):
                t0 = -1.0 + c * h
                t1 = t0 + h
                g0 = _cos_eval(a, base + t0 * np.pi / N) - lam[e]
                g1 = _cos_eval(a, base + t1 * np.pi / N) - lam[e]
                if g0 * g1 <= 0.0:
                    lo, hi, glo = t0, t1, g0
                    for _ in range(BISECT_STEPS):
                        mid = 0.5 * (lo + hi)
                        gm = _cos_eval(a, base + mid * np.pi / N) - lam[e]
                        if glo * gm <= 0.0:
                            hi = mid
                        else:
                            lo, glo = mid, gm
                    t = 0.5 * (lo + hi)
                    rr = abs(_cos_eval(a, base + t * np.pi / N) - lam[e])
                    if best_t > 5.0 or abs(t) < abs(best_t):
                        best_t = t
                        best_r = rr
            if best_t > 5.0:
                for c in range(NCELLS + 1):
                    t = -1.0 + c * h
                    rr = abs(_cos_eval(a, base + t * np.pi / N) - lam[e])
                    if rr < best_r:
                        best_r = rr
                        best_t = t
            else:
                bracketed[e, kk] = True
            theta[e, kk] = best_t
            resid[e, kk] = best_r
    return theta, resid, bracketed


def _cos_eval_np(a, th):
    acc = np.full(np.shape(th), a[0], dtype=float)
    for j in range(1, a.shape[0]):
        acc = acc + 2.0 * a[j] * np.cos(j * th)
    return acc


def theta_offsets_numpy(a, lam, N):
    a = np.asarray(a, dtype=float)
    lam = np.asarray(lam, dtype=float)
    K = N + 1
    base = (np.arange(1, K + 1) * np.pi / (N + 2))[None, :, None]
    lv = lam[:, None, None]
    edges = np.linspace(-1.0, 1.0, NCELLS + 1)
    g = _cos_eval_np(a, base + edges[None, None, :] * np.pi / N) - lv  # E, K, 9
    g0, g1 = g[..., :-1], g[..., 1:]
    bracket = g0 * g1 <= 0.0
    lo = np.broadcast_to(edges[:-1], g0.shape).copy()
    hi = np.broadcast_to(edges[1:], g0.shape).copy()
    glo = g0.copy()
    for _ in range(BISECT_STEPS):
        mid = 0.5 * (lo + hi)
        gm = _cos_eval_np(a, base + mid * np.pi / N) - lv
        left = glo * gm <= 0.0
        hi = np.where(left, mid, hi)
        lo = np.where(left, lo, mid)
        glo = np.where(left, glo, gm)
    t = 0.5 * (lo + hi)
    r = np.abs(_cos_eval_np(a, base + t * np.pi / N) - lv)
    tsel = np.where(bracket, np.abs(t), np.inf)
    pick = np.argmin(tsel, axis=2)
    any_b = bracket.any(axis=2)
    theta = np.take_along_axis(t, pick[..., None], 2)[..., 0]
    resid = np.take_along_axis(r, pick[..., None], 2)[..., 0]
    gabs = np.abs(g)
    spick = np.argmin(gabs, axis=2)
    theta = np.where(any_b, theta, edges[spick])
    resid = np.where(any_b, resid, np.take_along_axis(gabs, spick[..., None], 2)[..., 0])
    return theta, resid, any_b


if USE_JIT:
    levinson = levinson_loops
    aberth = aberth_loops
    band_t1 = band_t1_loops
    theta_offsets = theta_offsets_loops
else:
    levinson = levinson_numpy
    aberth = aberth_numpy
    band_t1 = band_t1_numpy
    theta_offsets = theta_offsets_numpy

KERNELS = {
    "levinson": (levinson_loops, levinson_numpy),
    "aberth": (aberth_loops, aberth_numpy),
    "band_t1": (band_t1_loops, band_t1_numpy),
    "theta_offsets": (theta_offsets_loops, theta_offsets_numpy),
}
