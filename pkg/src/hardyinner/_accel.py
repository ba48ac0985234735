"""Select the compiled core if it was built, else the numpy fallback.

Set ``HARDYINNER_PURE=1`` to force the fallback.
"""

import os

from . import _fallback

if os.environ.get("HARDYINNER_PURE", "") not in ("", "0"):
    _impl = _fallback
    BACKEND = "python"
else:
    try:
        from . import _ext as _impl

        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _fallback
        BACKEND = "python"

horner = _impl.horner
wdot = _impl.wdot
moments = _impl.moments
residual_jacobian = _impl.residual_jacobian
