"""Hot numerical kernels with a compiled core and a pure-Python fallback.

The compiled extension ``_ckernels`` is used when it imports cleanly. Set
``RANKONE_KERNELS=python`` to force the fallback (``compiled`` makes a
missing extension an error instead of a silent downgrade).
"""

import os

from . import _pykernels

_choice = os.environ.get("RANKONE_KERNELS", "auto").strip().lower()

if _choice == "python":
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:
        if _choice == "compiled":
            raise
        _impl = _pykernels

BACKEND = "compiled" if _impl is not _pykernels else "python"

OK = _pykernels.OK
STEP_COLLAPSE = _pykernels.STEP_COLLAPSE
MAX_STEPS = _pykernels.MAX_STEPS
NON_FINITE = _pykernels.NON_FINITE

hc_coefficients = _impl.hc_coefficients
mode_series_coefficients = _impl.mode_series_coefficients
hyp2f1_sum = _impl.hyp2f1_sum
integrate_radial = _impl.integrate_radial

__all__ = [
    "BACKEND", "OK", "STEP_COLLAPSE", "MAX_STEPS", "NON_FINITE",
    "hc_coefficients", "mode_series_coefficients", "hyp2f1_sum",
    "integrate_radial",
]
