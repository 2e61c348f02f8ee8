from __future__ import annotations

from typing import Any

import numpy as np


def readonly_array(value: Any, *, dtype: Any = float, ndim: int | None = None) -> np.ndarray:
    """Copy ``value`` into a read-only numpy array, checking its rank."""
    array = np.array(value, dtype=dtype, copy=True)
    if ndim is not None and array.ndim != ndim:
        raise ValueError(f"Expected a {ndim}-d array, got shape {array.shape}")
    array.setflags(write=False)
    return array
