"""Selects the compiled metric core, falling back to the pure twin.

Set ``QUASICOP_PURE=1`` to force the pure lane (used by the benchmark and the
cross-lane equivalence tests).  Either lane exposes the same functions; the
packed-code helpers always come from the pure module since they are cheap.
"""

from __future__ import annotations

import os

from ._lampcore_py import decode_vertex, encode_vertex, window_params

if os.environ.get("QUASICOP_PURE") == "1":
    from . import _lampcore_py as _impl
else:
    try:
        from . import _lampcore as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _lampcore_py as _impl

IMPLEMENTATION = _impl.IMPLEMENTATION
ball_table = _impl.ball_table
hull_pair_sweep = _impl.hull_pair_sweep
band_pair_sweep = _impl.band_pair_sweep
distance_codes = _impl.distance_codes

__all__ = [
    "IMPLEMENTATION",
    "ball_table",
    "band_pair_sweep",
    "decode_vertex",
    "distance_codes",
    "encode_vertex",
    "hull_pair_sweep",
    "window_params",
]
