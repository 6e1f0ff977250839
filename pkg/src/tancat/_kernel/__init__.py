"""Kernel selection: compiled extension when available, pure Python otherwise.

Set TANCAT_PURE=1 to force the pure-Python kernel (used by the benchmark and
by tests that compare the two backends).
"""

import os

if os.environ.get("TANCAT_PURE") == "1":
    from . import _poly_py as impl
else:
    try:
        from . import _poly_cy as impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _poly_py as impl

BACKEND = impl.BACKEND
poly_add = impl.poly_add
poly_sub = impl.poly_sub
poly_neg = impl.poly_neg
poly_scale = impl.poly_scale
poly_mul = impl.poly_mul
poly_pow = impl.poly_pow
poly_compose = impl.poly_compose
poly_eval = impl.poly_eval
