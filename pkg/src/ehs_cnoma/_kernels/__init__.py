"""Chunk accumulation kernels: compiled core with a vectorized fallback.

The compiled kernel is used when its extension module built; otherwise the
numpy implementation takes over with identical semantics. Set
EHS_CNOMA_BACKEND=python or EHS_CNOMA_BACKEND=compiled to force a choice.
"""

from __future__ import annotations

import os

_requested = os.environ.get("EHS_CNOMA_BACKEND", "").strip().lower()

if _requested == "python":
    from .numpy_impl import accumulate_chunk

    BACKEND = "python"
elif _requested == "compiled":
    from ._compiled import accumulate_chunk

    BACKEND = "compiled"
elif _requested:
    raise ImportError(
        f"EHS_CNOMA_BACKEND must be 'python' or 'compiled', got {_requested!r}"
    )
else:
    try:
        from ._compiled import accumulate_chunk

        BACKEND = "compiled"
    except ImportError:
        from .numpy_impl import accumulate_chunk

        BACKEND = "python"


def active_backend() -> str:
    """Name of the kernel implementation selected at import time."""
    return BACKEND


__all__ = ["accumulate_chunk", "active_backend", "BACKEND"]
