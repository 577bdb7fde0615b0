#!/usr/bin/env python3
"""Benchmark the compiled RK4 kernels against the pure-numpy fallback.

Times the three hot loops on representative problem sizes and prints a
table.  Both implementations are imported directly, so no reinstall or
environment variable is needed.
"""

import time

import numpy as np

from qbsim import SystemParams
from qbsim._kernels import _pure

try:
    from qbsim._kernels import _compiled
except ImportError:
    _compiled = None


def params(n: int) -> SystemParams:
    return SystemParams.with_dark_coupling(
        g=0.3, omega0=100.0 / 3.0, xi=1.0, n_cavities=n,
        omega_p_rabi=50.0 / 3.0, omega_c_rabi=5.0 / 3.0,
        omega_d_real=106.0 / 3.0, kappa=20.0 / 3.0,
        omega_e_level=50.0, omega_m_level=106.0 / 3.0, delta_e=50.0)


def schrodinger_args(n: int, full: bool):
    p = params(n)
    if full:
        atom = np.array([[p.omega_d, p.omega_p_rabi, 0.0],
                         [p.omega_p_rabi, p.delta_e, p.omega_c_rabi],
                         [0.0, p.omega_c_rabi, p.omega_m_level]], dtype=complex)
        coup = np.zeros((3, n), dtype=complex)
        coup[0, 0] = p.g1
        coup[2, 0] = p.g2
        psi0 = np.zeros(n + 3, dtype=complex)
        psi0[2] = 1.0
        return atom, coup, None, p.omega0, p.xi, psi0
    atom = np.array([[35.3278 - 0.0321j]], dtype=complex)
    coup = np.full((1, n), p.j_coupling, dtype=complex)
    psi0 = np.zeros(n + 1, dtype=complex)
    psi0[1:] = 1.0 / np.sqrt(n)
    return atom, coup, p.mode_frequencies().astype(complex), 0.0, p.xi, psi0


def lindblad_args(n: int):
    p = params(n)
    dim = n + 4
    rng = np.random.default_rng(0)
    h = rng.normal(size=(dim, dim))
    h = ((h + h.T) / 2).astype(complex)
    rho0 = np.zeros((dim, dim), dtype=complex)
    rho0[4, 4] = 1.0
    return h, p.kappa, 1, 0, rho0


def bench(label, fn_pure, fn_comp, args, kwargs):
    t0 = time.perf_counter()
    out_pure = fn_pure(*args, **kwargs)
    t_pure = time.perf_counter() - t0
    if fn_comp is None:
        print(f"{label:38s} pure {t_pure:8.3f} s   compiled    (unavailable)")
        return
    t0 = time.perf_counter()
    out_comp = fn_comp(*args, **kwargs)
    t_comp = time.perf_counter() - t0
    diff = max(np.max(np.abs(a - b)) for a, b in zip(out_pure, out_comp))
    print(f"{label:38s} pure {t_pure:8.3f} s   compiled {t_comp:8.3f} s   "
          f"speedup {t_pure / t_comp:5.1f}x   max|diff| {diff:.1e}")


def main():
    print(f"compiled extension available: {_compiled is not None}\n")

    args = schrodinger_args(253, full=False)
    bench("effective model, N=253, 40k steps",
          _pure.rk4_schrodinger,
          _compiled.rk4_schrodinger if _compiled else None,
          args, dict(dt=5e-4, n_sub=100, n_samples=401))

    args = schrodinger_args(253, full=True)
    bench("full model, N=253, 40k steps",
          _pure.rk4_schrodinger,
          _compiled.rk4_schrodinger if _compiled else None,
          args, dict(dt=5e-4, n_sub=100, n_samples=401))

    # The master-equation loop is dominated by the dense H @ rho products,
    # so both implementations sit on the same BLAS and roughly tie.
    args = lindblad_args(53)
    bench("Lindblad, dim=57, 4k steps",
          _pure.rk4_lindblad,
          _compiled.rk4_lindblad if _compiled else None,
          args, dict(dt=1e-3, n_sub=10, n_samples=401))

    args = lindblad_args(253)
    bench("Lindblad, dim=257, 400 steps",
          _pure.rk4_lindblad,
          _compiled.rk4_lindblad if _compiled else None,
          args, dict(dt=1e-3, n_sub=1, n_samples=401))


if __name__ == "__main__":
    main()
