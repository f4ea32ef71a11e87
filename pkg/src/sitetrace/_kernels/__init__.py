"""Hot-loop kernels: compiled core with a pure-numpy fallback.

The compiled extension (`_native`, Cython) and the fallback implement the
same three operations with identical semantics:

    fill_disc(img, cx, cy, r, scale)
    fill_segment(img, ax, ay, bx, by, half_width, scale)
    layout_step(pos, prev, force, indptr, indices,
                k_attract, rest_len, k_repel, damping, dt2, min_d2) -> float

Pixel fills are exact integer arithmetic on coordinates pre-scaled by
`scale`, so both backends produce byte-identical images. The layout step
accumulates forces in ascending node-id order in both backends; see the
module docstrings for the one sign-of-zero caveat.

Selection: the compiled core when importable, else the fallback. Override
with SITETRACE_BACKEND=native|python|auto (useful for benchmarks).
"""

import os

_requested = os.environ.get("SITETRACE_BACKEND", "auto")
if _requested not in ("auto", "native", "python"):
    raise ImportError(f"SITETRACE_BACKEND must be auto|native|python, got {_requested!r}")

if _requested == "python":
    from . import _fallback as _impl

    BACKEND = "python"
else:
    try:
        from . import _native as _impl  # type: ignore[attr-defined]

        BACKEND = "native"
    except ImportError:
        if _requested == "native":
            raise
        from . import _fallback as _impl

        BACKEND = "python"

fill_disc = _impl.fill_disc
fill_segment = _impl.fill_segment
layout_step = _impl.layout_step

__all__ = ["BACKEND", "fill_disc", "fill_segment", "layout_step"]
