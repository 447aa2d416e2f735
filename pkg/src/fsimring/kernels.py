"""Select the gate kernel at import time.

The compiled Cython extension is preferred; the numpy fallback is used when
it is absent. Set FSIMRING_KERNEL=python or =cython to force a backend
(cython raises if the extension was not built).
"""

import os

_requested = os.environ.get("FSIMRING_KERNEL", "auto").lower()

if _requested not in ("auto", "cython", "python"):
    raise ValueError(f"FSIMRING_KERNEL must be auto|cython|python, got {_requested!r}")

if _requested in ("auto", "cython"):
    try:
        from ._kernels import apply_gate  # noqa: F401

        ACTIVE_KERNEL = "cython"
    except ImportError:
        if _requested == "cython":
            raise
        from ._kernels_py import apply_gate  # noqa: F401

        ACTIVE_KERNEL = "python"
else:
    from ._kernels_py import apply_gate  # noqa: F401

    ACTIVE_KERNEL = "python"
