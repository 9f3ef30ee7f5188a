"""Pick the kernel implementation at import time.

The compiled extension is used when it imports; set ``DEPTHMOD_BACKEND=python``
to force the pure-Python kernels (handy for debugging and for the benchmark).
"""

import os

from . import _pykernels

if os.environ.get("DEPTHMOD_BACKEND", "").lower() == "python":
    kernels = _pykernels
else:
    try:
        from . import _kernels as kernels
    except ImportError:  # extension not built
        kernels = _pykernels

BACKEND = kernels.BACKEND


def compiled_kernels():
    """The compiled module, or ``None`` if it was not built."""
    try:
        from . import _kernels
    except ImportError:
        return None
    return _kernels
