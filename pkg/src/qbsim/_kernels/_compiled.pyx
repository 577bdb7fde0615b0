# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled RK4 propagation kernels; see _pure.py for the reference semantics."""

import numpy as np

cimport numpy as cnp
from libc.string cimport memcpy
from scipy.linalg.cython_blas cimport zgemm

cnp.import_array()

ctypedef double complex zdouble

USING_COMPILED = True


cdef inline void _rhs_schrodinger(
    zdouble* out, zdouble* psi,
    zdouble* atom, zdouble* coup,
    zdouble* diag, int use_diag,
    double omega0, double xi,
    int na, int n,
) noexcept nogil:
    cdef int i, j, m
    cdef zdouble acc
    cdef zdouble minus_i = -1j
    for i in range(na):
        acc = 0
        for j in range(na):
            acc += atom[i * na + j] * psi[j]
        for m in range(n):
            acc += coup[i * n + m] * psi[na + m]
        out[i] = minus_i * acc
    if use_diag:
        for m in range(n):
            acc = diag[m] * psi[na + m]
            for i in range(na):
                acc += coup[i * n + m] * psi[i]
            out[na + m] = minus_i * acc
    else:
        for m in range(n):
            acc = omega0 * psi[na + m]
            acc -= xi * (psi[na + (m - 1 + n) % n] + psi[na + (m + 1) % n])
            for i in range(na):
                acc += coup[i * n + m] * psi[i]
            out[na + m] = minus_i * acc


cdef inline double _norm2(zdouble* psi, int dim) noexcept nogil:
    cdef int i
    cdef double s = 0.0
    for i in range(dim):
        s += psi[i].real * psi[i].real + psi[i].imag * psi[i].imag
    return s


def rk4_schrodinger(
    cnp.ndarray[zdouble, ndim=2, mode="c"] atom_block,
    cnp.ndarray[zdouble, ndim=2, mode="c"] coupling,
    photon_diag,
    double omega0,
    double xi,
    cnp.ndarray[zdouble, ndim=1] psi0,
    double dt,
    int n_sub,
    int n_samples,
    double norm_tol=0.0,
):
    cdef int na = atom_block.shape[0]
    cdef int n = coupling.shape[1]
    cdef int dim = na + n
    cdef int use_diag = photon_diag is not None
    cdef cnp.ndarray[zdouble, ndim=1, mode="c"] diag_arr
    if use_diag:
        diag_arr = np.ascontiguousarray(photon_diag, dtype=np.complex128)
    else:
        diag_arr = np.zeros(1, dtype=np.complex128)

    cdef cnp.ndarray[zdouble, ndim=1, mode="c"] psi = np.ascontiguousarray(psi0, dtype=np.complex128).copy()
    cdef cnp.ndarray[zdouble, ndim=2, mode="c"] atom_out = np.empty((n_samples, na), dtype=np.complex128)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] norm_out = np.empty(n_samples, dtype=np.float64)
    cdef cnp.ndarray[zdouble, ndim=1, mode="c"] k = np.empty(dim, dtype=np.complex128)
    cdef cnp.ndarray[zdouble, ndim=1, mode="c"] y = np.empty(dim, dtype=np.complex128)
    cdef cnp.ndarray[zdouble, ndim=1, mode="c"] acc = np.empty(dim, dtype=np.complex128)

    cdef zdouble* p_psi = &psi[0]
    cdef zdouble* p_k = &k[0]
    cdef zdouble* p_y = &y[0]
    cdef zdouble* p_acc = &acc[0]
    cdef zdouble* p_atom = &atom_block[0, 0]
    cdef zdouble* p_coup = &coupling[0, 0] if n > 0 else NULL
    cdef zdouble* p_diag = &diag_arr[0]

    cdef int i, s, sub
    cdef double prev_norm, cur, growth = -1.0
    cdef double half_dt = 0.5 * dt
    cdef double sixth_dt = dt / 6.0

    for i in range(na):
        atom_out[0, i] = psi[i]
    prev_norm = _norm2(p_psi, dim)
    norm_out[0] = prev_norm

    for s in range(1, n_samples):
        with nogil:
            for sub in range(n_sub):
                # k1
                _rhs_schrodinger(p_k, p_psi, p_atom, p_coup, p_diag, use_diag, omega0, xi, na, n)
                for i in range(dim):
                    p_acc[i] = p_k[i]
                    p_y[i] = p_psi[i] + half_dt * p_k[i]
                # k2
                _rhs_schrodinger(p_k, p_y, p_atom, p_coup, p_diag, use_diag, omega0, xi, na, n)
                for i in range(dim):
                    p_acc[i] += 2.0 * p_k[i]
                    p_y[i] = p_psi[i] + half_dt * p_k[i]
                # k3
                _rhs_schrodinger(p_k, p_y, p_atom, p_coup, p_diag, use_diag, omega0, xi, na, n)
                for i in range(dim):
                    p_acc[i] += 2.0 * p_k[i]
                    p_y[i] = p_psi[i] + dt * p_k[i]
                # k4
                _rhs_schrodinger(p_k, p_y, p_atom, p_coup, p_diag, use_diag, omega0, xi, na, n)
                for i in range(dim):
                    p_psi[i] += sixth_dt * (p_acc[i] + p_k[i])
                if norm_tol > 0.0:
                    cur = _norm2(p_psi, dim)
                    if cur > prev_norm * (1.0 + norm_tol):
                        growth = cur / prev_norm - 1.0
                        break
                    prev_norm = cur
            if growth >= 0.0:
                break
        if growth >= 0.0:
            raise RuntimeError(f"norm^2 grew by {growth:.3e} in one step")
        for i in range(na):
            atom_out[s, i] = psi[i]
        norm_out[s] = _norm2(p_psi, dim)
    if growth >= 0.0:
        raise RuntimeError(f"norm^2 grew by {growth:.3e} in one step")
    return atom_out, norm_out, psi


cdef inline void _zgemm_rowmajor(
    zdouble alpha, zdouble* a, zdouble* b, zdouble beta, zdouble* c, int dim
) noexcept nogil:
    # Row-major C = alpha * A @ B + beta * C via Fortran zgemm on the
    # transposed views.
    cdef char trans = b'N'
    zgemm(&trans, &trans, &dim, &dim, &dim, &alpha, b, &dim, a, &dim, &beta, c, &dim)


DEF TILE = 32


cdef inline void _lindblad_rhs(
    zdouble* out, zdouble* r, zdouble* h, zdouble* work,
    double kappa, int d_index, int sink_index, int dephasing, int dim,
) noexcept nogil:
    # out = -i*(W - W^dag) with W = H @ r, built tile-by-tile so the
    # transposed reads of W stay cache-resident.
    cdef int i, j, ib, jb, imax, jmax
    cdef zdouble minus_i = -1j
    cdef zdouble zero = 0.0
    cdef zdouble one = 1.0
    cdef double half = 0.5 * kappa
    _zgemm_rowmajor(one, h, r, zero, work, dim)
    for ib in range(0, dim, TILE):
        imax = min(ib + TILE, dim)
        for jb in range(0, dim, TILE):
            jmax = min(jb + TILE, dim)
            for i in range(ib, imax):
                for j in range(jb, jmax):
                    out[i * dim + j] = minus_i * (
                        work[i * dim + j] - work[j * dim + i].conjugate()
                    )
    if kappa != 0.0:
        for j in range(dim):
            out[d_index * dim + j] -= half * r[d_index * dim + j]
            out[j * dim + d_index] -= half * r[j * dim + d_index]
        if dephasing:
            out[d_index * dim + d_index] += kappa * r[d_index * dim + d_index]
        else:
            out[sink_index * dim + sink_index] += kappa * r[d_index * dim + d_index]


def rk4_lindblad(
    cnp.ndarray[zdouble, ndim=2, mode="c"] h_real,
    double kappa,
    int d_index,
    int sink_index,
    cnp.ndarray[zdouble, ndim=2] rho0,
    double dt,
    int n_sub,
    int n_samples,
    bint dephasing=False,
):
    cdef int dim = h_real.shape[0]
    cdef cnp.ndarray[zdouble, ndim=2, mode="c"] rho = np.ascontiguousarray(rho0, dtype=np.complex128).copy()
    cdef cnp.ndarray[zdouble, ndim=3, mode="c"] rho_out = np.empty((n_samples, dim, dim), dtype=np.complex128)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] tr_out = np.empty(n_samples, dtype=np.float64)
    cdef cnp.ndarray[zdouble, ndim=2, mode="c"] k = np.empty((dim, dim), dtype=np.complex128)
    cdef cnp.ndarray[zdouble, ndim=2, mode="c"] y = np.empty((dim, dim), dtype=np.complex128)
    cdef cnp.ndarray[zdouble, ndim=2, mode="c"] acc = np.empty((dim, dim), dtype=np.complex128)
    cdef cnp.ndarray[zdouble, ndim=2, mode="c"] work = np.empty((dim, dim), dtype=np.complex128)

    cdef zdouble* p_rho = &rho[0, 0]
    cdef zdouble* p_h = &h_real[0, 0]
    cdef zdouble* p_k = &k[0, 0]
    cdef zdouble* p_y = &y[0, 0]
    cdef zdouble* p_acc = &acc[0, 0]
    cdef zdouble* p_work = &work[0, 0]

    cdef int i, j, s, sub, ib, jb, sz = dim * dim
    cdef double half_dt = 0.5 * dt
    cdef double sixth_dt = dt / 6.0
    cdef double tr
    cdef zdouble tmp

    memcpy(&rho_out[0, 0, 0], p_rho, sz * sizeof(zdouble))
    tr = 0.0
    for i in range(dim):
        tr += rho[i, i].real
    tr_out[0] = tr

    for s in range(1, n_samples):
        with nogil:
            for sub in range(n_sub):
                _lindblad_rhs(p_k, p_rho, p_h, p_work, kappa, d_index, sink_index, dephasing, dim)
                for i in range(sz):
                    p_acc[i] = p_k[i]
                    p_y[i] = p_rho[i] + half_dt * p_k[i]
                _lindblad_rhs(p_k, p_y, p_h, p_work, kappa, d_index, sink_index, dephasing, dim)
                for i in range(sz):
                    p_acc[i] += 2.0 * p_k[i]
                    p_y[i] = p_rho[i] + half_dt * p_k[i]
                _lindblad_rhs(p_k, p_y, p_h, p_work, kappa, d_index, sink_index, dephasing, dim)
                for i in range(sz):
                    p_acc[i] += 2.0 * p_k[i]
                    p_y[i] = p_rho[i] + dt * p_k[i]
                _lindblad_rhs(p_k, p_y, p_h, p_work, kappa, d_index, sink_index, dephasing, dim)
                for i in range(sz):
                    p_rho[i] += sixth_dt * (p_acc[i] + p_k[i])
                # re-Hermitize (tiled for the transposed reads)
                for ib in range(0, dim, TILE):
                    for jb in range(ib, dim, TILE):
                        for i in range(ib, min(ib + TILE, dim)):
                            for j in range(max(jb, i), min(jb + TILE, dim)):
                                tmp = 0.5 * (p_rho[i * dim + j] + p_rho[j * dim + i].conjugate())
                                p_rho[i * dim + j] = tmp
                                p_rho[j * dim + i] = tmp.conjugate()
        memcpy(&rho_out[s, 0, 0], p_rho, sz * sizeof(zdouble))
        tr = 0.0
        for i in range(dim):
            tr += rho[i, i].real
        tr_out[s] = tr
    return rho_out, tr_out
