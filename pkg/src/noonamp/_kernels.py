"""Hot kernels for the master-equation integrator.

The single-mode gain/loss generator applied to a two-mode density tensor
rho[n, m, p, q] dominates the integrator's runtime.  Both a numba-jitted
and a pure-numpy implementation are provided; the numba path is used when
numba imports cleanly and the NOONAMP_NO_NUMBA environment variable is
unset.  Both accumulate into ``out`` (callers zero it first), so the two
mode generators can be summed without temporaries.

Generator convention, per amplified mode (kn1 = kappa*N1, kn2 = kappa*N2):

    d rho = kn1 (2 adag rho a - a adag rho - rho a adag)
          + kn2 (2 a rho adag - adag a rho - rho adag a)

Creation out of the top retained Fock level is dropped; the leak monitor
in the integrator watches the resulting trace loss.
"""

import numpy as np

from . import config


def gen_mode_a_numpy(rho, out, kn1, kn2, sq):
    """Accumulate the mode-a generator; sq[k] = sqrt(k), len = cutoff_a."""
    da = rho.shape[0]
    n = np.arange(da, dtype=np.float64)
    up = sq[1:, None, None, None] * sq[None, None, 1:, None]
    out[1:, :, 1:, :] += (2.0 * kn1) * up * rho[:-1, :, :-1, :]
    out -= kn1 * ((n + 1.0)[:, None, None, None] + (n + 1.0)[None, None, :, None]) * rho
    if kn2 != 0.0:
        out[:-1, :, :-1, :] += (2.0 * kn2) * up * rho[1:, :, 1:, :]
        out -= kn2 * (n[:, None, None, None] + n[None, None, :, None]) * rho
    return out


def gen_mode_b_numpy(rho, out, kn1, kn2, sq):
    """Accumulate the mode-b generator; sq[k] = sqrt(k), len = cutoff_b."""
    db = rho.shape[1]
    m = np.arange(db, dtype=np.float64)
    up = sq[None, 1:, None, None] * sq[None, None, None, 1:]
    out[:, 1:, :, 1:] += (2.0 * kn1) * up * rho[:, :-1, :, :-1]
    out -= kn1 * ((m + 1.0)[None, :, None, None] + (m + 1.0)[None, None, None, :]) * rho
    if kn2 != 0.0:
        out[:, :-1, :, :-1] += (2.0 * kn2) * up * rho[:, 1:, :, 1:]
        out -= kn2 * (m[None, :, None, None] + m[None, None, None, :]) * rho
    return out


_HAVE_NUMBA = False
if not config.numba_disabled():
    try:
        import numba

        _HAVE_NUMBA = True
    except ImportError:
        _HAVE_NUMBA = False

if _HAVE_NUMBA:

    @numba.njit(cache=True, fastmath=True)
    def gen_mode_a_numba(rho, out, kn1, kn2, sq):
        da, db = rho.shape[0], rho.shape[1]
        for n in range(da):
            for m in range(db):
                for p in range(da):
                    for q in range(db):
                        acc = -(kn1 * (n + p + 2.0) + kn2 * (n + p)) * rho[n, m, p, q]
                        if n > 0 and p > 0:
                            acc += 2.0 * kn1 * sq[n] * sq[p] * rho[n - 1, m, p - 1, q]
                        if n + 1 < da and p + 1 < da:
                            acc += 2.0 * kn2 * sq[n + 1] * sq[p + 1] * rho[n + 1, m, p + 1, q]
                        out[n, m, p, q] += acc
        return out

    @numba.njit(cache=True, fastmath=True)
    def gen_mode_b_numba(rho, out, kn1, kn2, sq):
        da, db = rho.shape[0], rho.shape[1]
        for n in range(da):
            for m in range(db):
                for p in range(da):
                    for q in range(db):
                        acc = -(kn1 * (m + q + 2.0) + kn2 * (m + q)) * rho[n, m, p, q]
                        if m > 0 and q > 0:
                            acc += 2.0 * kn1 * sq[m] * sq[q] * rho[n, m - 1, p, q - 1]
                        if m + 1 < db and q + 1 < db:
                            acc += 2.0 * kn2 * sq[m + 1] * sq[q + 1] * rho[n, m + 1, p, q + 1]
                        out[n, m, p, q] += acc
        return out

    gen_mode_a = gen_mode_a_numba
    gen_mode_b = gen_mode_b_numba
    BACKEND = "numba"
else:
    gen_mode_a = gen_mode_a_numpy
    gen_mode_b = gen_mode_b_numpy
    BACKEND = "numpy"
