"""Numba kernels for batched tridiagonal Cayley sweeps.

A sweep applies ``(1 + i a H)^-1 (1 - i a H)`` along axis 0 of a 2-D array,
independently for every column.  ``H`` is Hermitian tridiagonal with real
diagonal ``d[i]`` and coupling ``c[i] = H[i, i+1]`` (so ``H[i+1, i] =
conj(c[i])``).  Columns are processed in a fixed order, vectorized along the
contiguous axis, so results are bit-reproducible.
"""
import numpy as np
from numba import njit


@njit(cache=True)
def factor(c, d, a):
    """Inverse pivots of the Thomas factorization of ``1 + i a H``."""
    n, nl = d.shape
    inv_d = np.empty(d.shape, dtype=np.complex128)
    for l in range(nl):
        inv_d[0, l] = 1.0 / (1.0 + 1j * a * d[0, l])
    for i in range(1, n):
        for l in range(nl):
            sub = 1j * a * np.conj(c[i - 1, l])
            sup_prev = 1j * a * c[i - 1, l] * inv_d[i - 1, l]
            inv_d[i, l] = 1.0 / (1.0 + 1j * a * d[i, l] - sub * sup_prev)
    return inv_d


@njit(cache=True, fastmath=True, error_model="numpy")
def sweep(psi, c, d, inv_d, a, prev):
    """In place ``psi <- (1 + i a H)^-1 (1 - i a H) psi`` along axis 0.

    The forward-eliminated values overwrite ``psi`` as they are produced;
    ``prev`` (length = number of columns) keeps the overwritten original.
    """
    n, nl = psi.shape
    ia = 1j * a
    for l in range(nl):
        old = psi[0, l]
        v = (1.0 - ia * d[0, l]) * old - ia * c[0, l] * psi[1, l]
        prev[l] = old
        psi[0, l] = v * inv_d[0, l]
    for i in range(1, n - 1):
        for l in range(nl):
            cc = np.conj(c[i - 1, l])
            old = psi[i, l]
            v = (1.0 - ia * d[i, l]) * old - ia * (cc * prev[l] + c[i, l] * psi[i + 1, l])
            prev[l] = old
            psi[i, l] = (v - ia * cc * psi[i - 1, l]) * inv_d[i, l]
    i = n - 1
    for l in range(nl):
        cc = np.conj(c[i - 1, l])
        v = (1.0 - ia * d[i, l]) * psi[i, l] - ia * cc * prev[l]
        psi[i, l] = (v - ia * cc * psi[i - 1, l]) * inv_d[i, l]
    for i in range(n - 2, -1, -1):
        for l in range(nl):
            psi[i, l] = psi[i, l] - ia * c[i, l] * inv_d[i, l] * psi[i + 1, l]


@njit(cache=True, fastmath=True, error_model="numpy")
def sweep_t(psi, c, d, inv_d, a, block):
    """Same as :func:`sweep` but along axis 1; ``c, d, inv_d`` are laid out (n, lines).

    Rows are processed in blocks of ``block`` through a small transposed
    buffer so the recurrence stays vectorized and cache resident.
    """
    nl, n = psi.shape
    buf = np.empty((n, block), dtype=np.complex128)
    prev = np.empty(block, dtype=np.complex128)
    for r0 in range(0, nl, block):
        nb = min(block, nl - r0)
        for b in range(nb):
            for i in range(n):
                buf[i, b] = psi[r0 + b, i]
        sweep(buf[:, :nb], c[:, r0:r0 + nb], d[:, r0:r0 + nb], inv_d[:, r0:r0 + nb], a, prev)
        for b in range(nb):
            for i in range(n):
                psi[r0 + b, i] = buf[i, b]
