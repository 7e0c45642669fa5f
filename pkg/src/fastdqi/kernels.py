"""Select the modular kernel backend at import time.

The compiled extension is used when it was built; setting
``FASTDQI_PURE_PYTHON=1`` forces the numpy fallback.
"""

import os

from . import _kernels_py

if os.environ.get("FASTDQI_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
else:
    try:
        from . import _ckernels as _impl
    except ImportError:
        _impl = _kernels_py

BACKEND = _impl.BACKEND
mulmod = _impl.mulmod
poly_mul = _impl.poly_mul
poly_divmod = _impl.poly_divmod
series_div = _impl.series_div
dft = _impl.dft
cyclic_conv = _impl.cyclic_conv
butterfly_pass = _impl.butterfly_pass


def available_backends():
    out = {"python": _kernels_py}
    try:
        from . import _ckernels

        out["cython"] = _ckernels
    except ImportError:
        pass
    return out
