"""Max-plus kernels with the compiled extension chosen at import.

Set ``NAGRADED_PURE=1`` to force the pure-Python implementation.
"""

import os
from fractions import Fraction
from math import lcm

from . import _kernels_py

if os.environ.get("NAGRADED_PURE"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        _impl = _kernels_py

BACKEND = "compiled" if _impl is not _kernels_py else "python"
NEG = _kernels_py.NEG
_LIMIT = 1 << 60


def _conv(a, b, dim, impl):
    if dim == 1:
        return impl.maxplus_conv1(a, b)
    return impl.maxplus_conv2(a, b)


def maxplus_conv(a, b, dim: int, impl=None):
    """Max-plus convolution of dense int grids (``NEG`` = minus infinity)."""
    impl = impl or _impl
    if impl is not _kernels_py:
        flat = a if dim == 1 else [x for r in a for x in r]
        flat2 = b if dim == 1 else [x for r in b for x in r]
        big = max((abs(x) for x in flat + flat2 if x != NEG), default=0)
        if 2 * big >= _LIMIT:
            impl = _kernels_py
    return _conv(a, b, dim, impl)


def maxplus_power(a, r: int, dim: int, impl=None):
    """r-fold max-plus self-convolution by repeated squaring."""
    if r < 1:
        raise ValueError("r >= 1")
    out, base = None, a
    while r:
        if r & 1:
            out = base if out is None else maxplus_conv(out, base, dim, impl)
        r >>= 1
        if r:
            base = maxplus_conv(base, base, dim, impl)
    return out


def scale_to_ints(values):
    """Common denominator ``D`` and the integers ``D * v``."""
    D = lcm(*[Fraction(v).denominator for v in values]) if values else 1
    return D, [int(Fraction(v) * D) for v in values]
