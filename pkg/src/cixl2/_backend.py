"""Kernel backend selection.

The compiled extension is preferred when importable; the numpy fallback is
always available. Set CIXL2_BACKEND=python to force the fallback or
CIXL2_BACKEND=compiled to fail loudly if the extension is missing.
"""

import os

_requested = os.environ.get("CIXL2_BACKEND", "").strip().lower()

if _requested in ("", "compiled"):
    try:
        from . import _kernels as kernels
    except ImportError:
        if _requested == "compiled":
            raise ImportError(
                "CIXL2_BACKEND=compiled but the compiled kernel extension is not importable"
            )
        from . import _kernels_py as kernels
elif _requested == "python":
    from . import _kernels_py as kernels
else:
    raise ValueError(
        f"unrecognized CIXL2_BACKEND value {_requested!r}; use 'compiled' or 'python'"
    )

BACKEND = kernels.BACKEND_NAME
