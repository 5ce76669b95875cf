import random
import subprocess
import sys

import numpy as np
import pytest

import quasicop._lampcore_py as pure
import quasicop.lampcore as lampcore
from quasicop.spaces import parse_space_spec

try:
    import quasicop._lampcore as compiled
except ImportError:
    compiled = None

needs_compiled = pytest.mark.skipif(compiled is None,
                                    reason="compiled lane not built")


def test_selected_lane_is_reported():
    assert lampcore.IMPLEMENTATION in ("compiled", "pure")
    if compiled is not None:
        assert lampcore.IMPLEMENTATION == "compiled"


def test_pure_env_forces_fallback():
    out = subprocess.run(
        [sys.executable, "-c",
         "import quasicop.lampcore as lc; print(lc.IMPLEMENTATION)"],
        env={"QUASICOP_PURE": "1", "PATH": "/usr/bin:/bin"},
        capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "pure"


@pytest.mark.parametrize("j", [1, 2, 3])
def test_codec_round_trip(j):
    lo, width, plo = pure.window_params(j, 4)
    rng = random.Random(j)
    for _ in range(50):
        sites = rng.sample(range(lo, lo + width), rng.randint(0, 5))
        lamps = sorted((s, rng.randint(1, (1 << j) - 1)) for s in sites)
        pos = rng.randint(plo, plo + 8)
        code = pure.encode_vertex((lamps, pos), j, lo, width, plo)
        got_lamps, got_pos = pure.decode_vertex(code, j, lo, width, plo)
        assert (list(got_lamps), got_pos) == (lamps, pos)


def test_encode_rejects_out_of_window():
    lo, width, plo = pure.window_params(1, 2)
    with pytest.raises(ValueError):
        pure.encode_vertex(([(lo + width, 1)], 0), 1, lo, width, plo)


@pytest.mark.parametrize("j,radius", [(1, 3), (2, 2), (3, 2)])
def test_ball_table_matches_space_bfs(j, radius):
    codes, dists, lo, width, plo = lampcore.ball_table(j, radius)
    spec = "lamp:2" if j == 1 else f"lamp:2:{j}"
    space = parse_space_spec(spec)
    want = {}
    frontier = [space.base]
    want[space.serialize(space.base)] = (space.base, 0)
    for depth in range(1, radius + 1):
        nxt = []
        for v in frontier:
            for nb in space.neighbors(v):
                key = space.serialize(nb)
                if key not in want:
                    want[key] = (nb, depth)
                    nxt.append(nb)
        frontier = nxt
    assert len(codes) == len(want)
    by_code = {}
    for v, depth in want.values():
        lamps, pos = v
        packed = [(site, val) for site, val in lamps]
        code = pure.encode_vertex((packed, pos), j, lo, width, plo)
        by_code[code] = depth
    for code, dist in zip(codes, dists):
        assert by_code[int(code)] == int(dist)


@pytest.mark.parametrize("j,radius", [(1, 4), (2, 3), (3, 2)])
def test_lanes_agree_on_hull_sweep(j, radius):
    if compiled is None:
        pytest.skip("compiled lane not built")
    assert compiled.hull_pair_sweep(j, radius) == pure.hull_pair_sweep(j, radius)


@pytest.mark.parametrize("j,radius", [(2, 3), (3, 2)])
def test_lanes_agree_on_band_sweep(j, radius):
    if compiled is None:
        pytest.skip("compiled lane not built")
    ball_c, pairs_c, hist_c = compiled.band_pair_sweep(j, radius)
    ball_p, pairs_p, hist_p = pure.band_pair_sweep(j, radius)
    assert (ball_c, pairs_c) == (ball_p, pairs_p)
    assert dict(hist_c) == dict(hist_p)


@pytest.mark.parametrize("j,radius", [(1, 5), (2, 4)])
def test_hull_walk_distance_is_exact(j, radius):
    ball, pairs, mismatches = lampcore.hull_pair_sweep(j, radius)
    assert mismatches == 0
    assert pairs == ball * ball


def test_distance_codes_matches_space():
    j = 2
    codes, dists, lo, width, plo = lampcore.ball_table(j, 3)
    space = parse_space_spec("lamp:2:2")
    rng = random.Random(2)
    idx = [rng.randrange(len(codes)) for _ in range(40)]
    jdx = [rng.randrange(len(codes)) for _ in range(40)]
    u = np.asarray(codes)[idx]
    w = np.asarray(codes)[jdx]
    got = lampcore.distance_codes(j, lo, width, plo, u, w)
    for a, b, d in zip(u, w, got):
        va = pure.decode_vertex(int(a), j, lo, width, plo)
        vb = pure.decode_vertex(int(b), j, lo, width, plo)
        assert space.distance(va, vb) == int(d)
