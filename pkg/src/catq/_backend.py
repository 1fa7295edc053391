"""Pick the kernel implementation at import time.

Set ``CATQ_PURE_PYTHON=1`` to force the numpy fallback even when the
compiled extension is available.
"""

import os

from . import _kernels_py

if os.environ.get("CATQ_PURE_PYTHON", "") == "1":
    kernels = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as kernels  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        kernels = _kernels_py
        BACKEND = "python"

pga_ascent = kernels.pga_ascent
probability_current = kernels.probability_current
