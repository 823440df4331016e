"""Statevector update kernels with backend selection at import.

The compiled Cython backend is used when built; otherwise the pure-numpy
fallback.  Set QMCI_KERNELS=py or QMCI_KERNELS=cy to force a backend
(cy raises if the extension is missing).  Both backends are bit-identical.
"""

import os

from . import pykernels

_forced = os.environ.get("QMCI_KERNELS", "").lower()

if _forced == "py":
    _impl = pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl

        BACKEND = "cython"
    except ImportError:
        if _forced == "cy":
            raise
        _impl = pykernels
        BACKEND = "python"

apply_2x2 = _impl.apply_2x2
apply_kq = _impl.apply_kq
apply_sign_flip = _impl.apply_sign_flip
