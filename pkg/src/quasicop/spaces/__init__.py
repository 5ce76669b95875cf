"""Vertex spaces: infinite vertex-transitive graphs with exact metric oracles."""

from __future__ import annotations

from ..errors import MalformedSpecError
from .base import BALL_VERTEX_LIMIT, Space, dumps_canonical
from .bs import BsSpace, BsVertex
from .grid import GridSpace, make_line
from .gridvar import GridVariationSpace
from .lamplighter import LamplighterSpace, LampVertex
from .tree import FreeTreeSpace

__all__ = [
    "BALL_VERTEX_LIMIT",
    "BsSpace",
    "BsVertex",
    "FreeTreeSpace",
    "GridSpace",
    "GridVariationSpace",
    "LamplighterSpace",
    "LampVertex",
    "Space",
    "dumps_canonical",
    "make_line",
    "parse_space_spec",
]


def parse_space_spec(spec: str) -> Space:
    """Build a space from a colon-separated description.

    Accepted forms: ``line``, ``grid:<dim>``, ``gridvar:<m>``,
    ``lamp:<q>[:<j>]``, ``bs:<m>``, ``free-tree:<rank>``.
    """
    parts = spec.split(":")
    name, args = parts[0], parts[1:]
    try:
        nums = [int(p, 10) for p in args]
        if name == "line" and not nums:
            return make_line()
        if name == "grid" and len(nums) == 1:
            return GridSpace(nums[0])
        if name == "gridvar" and len(nums) == 1:
            return GridVariationSpace(nums[0])
        if name == "lamp" and len(nums) in (1, 2):
            return LamplighterSpace(nums[0], nums[1] if len(nums) == 2 else 1)
        if name == "bs" and len(nums) == 1:
            return BsSpace(nums[0])
        if name == "free-tree" and len(nums) == 1:
            return FreeTreeSpace(nums[0])
    except ValueError as exc:
        raise MalformedSpecError(f"bad space spec {spec!r}: {exc}") from exc
    raise MalformedSpecError(f"unknown space spec {spec!r}")
