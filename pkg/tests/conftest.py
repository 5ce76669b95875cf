"""Shared helpers: independent BFS oracles the implementation never sees."""

from collections import deque

import pytest

from quasicop.spaces import parse_space_spec


def bfs_distance(space, u, w, cutoff=64):
    """Plain one-sided BFS; deliberately dumber than the library's search."""
    if u == w:
        return 0
    seen = {space.serialize(u)}
    frontier = deque([(u, 0)])
    while frontier:
        v, d = frontier.popleft()
        if d >= cutoff:
            continue
        for nb in space.neighbors(v):
            key = space.serialize(nb)
            if key in seen:
                continue
            if nb == w:
                return d + 1
            seen.add(key)
            frontier.append((nb, d + 1))
    return None


def bfs_ball(space, center, radius):
    out = {space.serialize(center): center}
    frontier = [center]
    for _ in range(radius):
        nxt = []
        for v in frontier:
            for nb in space.neighbors(v):
                key = space.serialize(nb)
                if key not in out:
                    out[key] = nb
                    nxt.append(nb)
        frontier = nxt
    return list(out.values())


@pytest.fixture
def grid2():
    return parse_space_spec("grid:2")


@pytest.fixture
def line():
    return parse_space_spec("line")


@pytest.fixture
def lamp2():
    return parse_space_spec("lamp:2")
