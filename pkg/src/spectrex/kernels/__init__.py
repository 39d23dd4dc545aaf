"""Hot-kernel backend selection.

The compiled Cython extension is preferred when it imports; otherwise the
pure-Python fallback is used.  ``SPECTREX_KERNELS=pure`` (or ``fast``)
forces a backend.  Both backends implement identical semantics, so all
outputs are byte-stable across the choice.
"""

from __future__ import annotations

import os

from ._pure import (
    ABSENT,
    CANON_NODE_BUDGET,
    PRESENT,
    UNKNOWN,
    CanonicalizationError,
)
from . import _pure

_choice = os.environ.get("SPECTREX_KERNELS", "").lower()

if _choice == "pure":
    _impl = _pure
else:
    try:
        from . import _fast as _impl  # type: ignore[no-redef]
    except ImportError:
        if _choice == "fast":
            raise ImportError(
                "SPECTREX_KERNELS=fast but the compiled extension is not built; "
                "run `pip install -e . --no-build-isolation`"
            )
        _impl = _pure

BACKEND = _impl.BACKEND_NAME


def canonical_rows(n: int, rows: tuple[int, ...]) -> tuple[int, ...]:
    return _impl.canonical_rows(n, rows)


def cycle_search(
    n: int, rows: tuple[int, ...], length: int, budget: int
) -> tuple[int, tuple[int, ...] | None, int]:
    if n <= 64 or _impl is _pure:
        return _impl.cycle_search(n, rows, length, budget)
    return _pure.cycle_search(n, rows, length, budget)


__all__ = [
    "ABSENT",
    "BACKEND",
    "CANON_NODE_BUDGET",
    "CanonicalizationError",
    "PRESENT",
    "UNKNOWN",
    "canonical_rows",
    "cycle_search",
]
