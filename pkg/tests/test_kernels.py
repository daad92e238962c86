import math
import os
import subprocess
import sys

import numpy as np
import pytest

from noonamp import _kernels, config


def random_hermitian_tensor(da, db, rng):
    d = da * db
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    h = (g + g.conj().T) / 2
    return np.ascontiguousarray(h.reshape(da, db, da, db))


def creation(dim):
    op = np.zeros((dim, dim), dtype=complex)
    for n in range(1, dim):
        op[n, n - 1] = math.sqrt(n)
    return op


def dense_generator(rho_mat, adag, kn1, kn2):
    a = adag.conj().T
    gain = 2 * adag @ rho_mat @ a - a @ adag @ rho_mat - rho_mat @ a @ adag
    loss = 2 * a @ rho_mat @ adag - adag @ a @ rho_mat - rho_mat @ adag @ a
    return kn1 * gain + kn2 * loss


@pytest.mark.parametrize("mode", ["a", "b"])
def test_kernel_matches_dense_operator_algebra(mode):
    """The kernel acts as: exact generator on the zero-padded state, then
    cropped back to the box.  Build that reference with explicit ladder
    matrices in an enlarged space."""
    rng = np.random.default_rng(23)
    da, db = 7, 5
    rho = random_hermitian_tensor(da, db, rng)
    kn1, kn2 = 1.3, 0.4

    ea, eb = da + 1, db + 1
    big = np.zeros((ea, eb, ea, eb), dtype=complex)
    big[:da, :db, :da, :db] = rho
    if mode == "a":
        adag = np.kron(creation(ea), np.eye(eb))
        sq = np.sqrt(np.arange(da, dtype=float))
        kernel = _kernels.gen_mode_a
    else:
        adag = np.kron(np.eye(ea), creation(eb))
        sq = np.sqrt(np.arange(db, dtype=float))
        kernel = _kernels.gen_mode_b

    ref = dense_generator(big.reshape(ea * eb, ea * eb), adag, kn1, kn2)
    cropped = ref.reshape(ea, eb, ea, eb)[:da, :db, :da, :db]
    out = np.zeros_like(rho)
    kernel(rho, out, kn1, kn2, sq)
    assert np.abs(out - cropped).max() <= 1e-12


@pytest.mark.parametrize("mode", ["a", "b"])
def test_numpy_and_numba_paths_agree(mode):
    if _kernels.BACKEND != "numba":
        pytest.skip("numba backend unavailable")
    rng = np.random.default_rng(29)
    da, db = 9, 6
    rho = random_hermitian_tensor(da, db, rng)
    kn1, kn2 = 0.9, 0.2
    if mode == "a":
        fns = (_kernels.gen_mode_a_numba, _kernels.gen_mode_a_numpy)
        sq = np.sqrt(np.arange(da, dtype=float))
    else:
        fns = (_kernels.gen_mode_b_numba, _kernels.gen_mode_b_numpy)
        sq = np.sqrt(np.arange(db, dtype=float))
    outs = []
    for fn in fns:
        out = np.zeros_like(rho)
        fn(rho, out, kn1, kn2, sq)
        outs.append(out)
    assert np.abs(outs[0] - outs[1]).max() <= 1e-13


def test_kernels_accumulate():
    rng = np.random.default_rng(31)
    rho = random_hermitian_tensor(4, 4, rng)
    sq = np.sqrt(np.arange(4, dtype=float))
    out = np.zeros_like(rho)
    _kernels.gen_mode_a(rho, out, 1.0, 0.0, sq)
    first = out.copy()
    _kernels.gen_mode_b(rho, out, 1.0, 0.0, sq)
    second = np.zeros_like(rho)
    _kernels.gen_mode_b(rho, second, 1.0, 0.0, sq)
    assert np.abs(out - (first + second)).max() <= 1e-14


def test_env_flag_selects_numpy_backend():
    env = dict(os.environ)
    env[config.NUMBA_DISABLE_ENV] = "1"
    code = ("from noonamp import _kernels; "
            "print(_kernels.BACKEND); "
            "print(_kernels.gen_mode_a is _kernels.gen_mode_a_numpy)")
    proc = subprocess.run([sys.executable, "-c", code], env=env,
                          capture_output=True, text=True, check=True)
    backend, same = proc.stdout.split()
    assert backend == "numpy"
    assert same == "True"
