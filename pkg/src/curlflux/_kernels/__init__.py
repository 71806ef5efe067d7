"""Kernel selection: compiled extension when built, pure Python otherwise.

Set ``CURLFLUX_FORCE_PYTHON=1`` to skip the extension (used by the
benchmark and the cross-checking tests).
"""

import os

from curlflux._kernels import _fallback

if os.environ.get("CURLFLUX_FORCE_PYTHON") == "1":
    _impl = _fallback
    BACKEND = "python"
else:
    try:
        from curlflux._kernels import _core as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        _impl = _fallback
        BACKEND = "python"

free_reduce = _impl.free_reduce
apply_images = _impl.apply_images
dp_step = _impl.dp_step

__all__ = ["BACKEND", "free_reduce", "apply_images", "dp_step"]
