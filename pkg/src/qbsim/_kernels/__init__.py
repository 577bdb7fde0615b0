"""Hot propagation kernels: compiled extension with pure-numpy fallback.

Importing this package selects the Cython build of the RK4 loops when it
is available and falls back to the numpy implementation otherwise.  Set
``QBSIM_PURE_PYTHON=1`` to force the fallback (used by the benchmark to
compare both).
"""

from __future__ import annotations

import os

if os.environ.get("QBSIM_PURE_PYTHON", "") == "1":
    from ._pure import rk4_lindblad, rk4_schrodinger

    USING_COMPILED = False
else:
    try:
        from ._compiled import rk4_lindblad, rk4_schrodinger  # type: ignore[attr-defined]

        USING_COMPILED = True
    except ImportError:
        from ._pure import rk4_lindblad, rk4_schrodinger

        USING_COMPILED = False

__all__ = ["rk4_schrodinger", "rk4_lindblad", "USING_COMPILED"]
