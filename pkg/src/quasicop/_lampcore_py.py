"""Pure fallback for the compiled mod-2 lamplighter sweeps.

Same packed-code layout and call signatures as the compiled module: ``j``
bits per lamp site over ``width`` sites starting at ``lo``, walker position
stored above the lamp bits as ``pos - plo``.  The sweeps are vectorized with
numpy; the breadth-first table is a plain dict walk, which is the part the
compiled core exists to speed up.
"""

from __future__ import annotations

import numpy as np


def window_params(j: int, radius: int):
    """Window that a radius-bounded walk from the base cannot leave."""
    return -radius, 2 * radius, -radius


def encode_vertex(v, j: int, lo: int, width: int, plo: int) -> int:
    lamps, pos = v
    code = 0
    for site, val in lamps:
        if not lo <= site < lo + width:
            raise ValueError(f"site {site} outside window")
        code |= val << (j * (site - lo))
    if not 0 <= pos - plo < (1 << 62 - j * width):
        raise ValueError(f"position {pos} outside window")
    return code | (pos - plo) << (j * width)


def decode_vertex(code: int, j: int, lo: int, width: int, plo: int):
    lamps = []
    for i in range(width):
        val = (code >> (j * i)) & ((1 << j) - 1)
        if val:
            lamps.append((lo + i, val))
    return (tuple(lamps), (code >> (j * width)) + plo)


def _check_window(j: int, radius: int):
    if j < 1 or radius < 1 or j * 2 * radius + 8 > 63:
        raise ValueError("window too wide for 64-bit codes")


def ball_table(j: int, radius: int):
    """BFS distance table for lamp:2:<j>: (codes, dists, lo, width, plo)."""
    _check_window(j, radius)
    lo, width, plo = window_params(j, radius)
    lampbits = j * width
    nvals = 1 << j
    sitemask = nvals - 1
    base = (0 - plo) << lampbits
    dist = {base: 0}
    order = [base]
    start = 0
    for depth in range(1, radius + 1):
        end = len(order)
        for idx in range(start, end):
            code = order[idx]
            pos = (code >> lampbits) + plo
            mask = code & ((1 << lampbits) - 1)
            for site, npos in ((pos, pos + 1), (pos - 1, pos - 1)):
                assert lo <= site < lo + width, "window clipped during BFS"
                cleared = mask & ~(sitemask << (j * (site - lo)))
                posbits = (npos - plo) << lampbits
                for val in range(nvals):
                    nxt = cleared | (val << (j * (site - lo))) | posbits
                    if nxt not in dist:
                        dist[nxt] = depth
                        order.append(nxt)
        start = end
    codes = np.array(order, dtype=np.uint64)
    dists = np.empty(len(order), dtype=np.uint8)
    for i, c in enumerate(order):
        dists[i] = dist[c]
    return codes, dists, lo, width, plo


def _floor_log2(x: np.ndarray) -> np.ndarray:
    # exact for values below 2**53: float conversion is lossless there
    _, e = np.frexp(x.astype(np.float64))
    return e.astype(np.int64) - 1


def _closed_form_arrays(xor_mask, n, m, j, lo):
    """Vectorized hull walk; xor_mask uint64, n/m int64 (scalars broadcast)."""
    x = np.asarray(xor_mask, dtype=np.uint64)
    n = np.asarray(n, dtype=np.int64)
    m = np.asarray(m, dtype=np.int64)
    lowbit = x & (np.uint64(0) - x)
    site_lo = lo + _floor_log2(lowbit) // j
    site_hi = lo + _floor_log2(x) // j + 1
    a = np.minimum(np.minimum(site_lo, n), m)
    b = np.maximum(np.maximum(site_hi, n), m)
    walk = (b - a) + np.minimum((n - a) + (b - m), (b - n) + (m - a))
    return np.where(x == 0, np.abs(n - m), walk)


def distance_codes(j, lo, width, plo, u_codes, w_codes):
    """Hull-walk distances for parallel arrays of packed vertices."""
    u = np.ascontiguousarray(u_codes, dtype=np.uint64)
    w = np.ascontiguousarray(w_codes, dtype=np.uint64)
    if u.shape != w.shape or u.ndim != 1:
        raise ValueError("need two equal-length 1-d code arrays")
    lampbits = j * width
    lampmask = np.uint64((1 << lampbits) - 1)
    shift = np.uint64(lampbits)
    n = (u >> shift).astype(np.int64) + plo
    m = (w >> shift).astype(np.int64) + plo
    return _closed_form_arrays((u ^ w) & lampmask, n, m, j, lo).astype(np.int64)


def hull_pair_sweep(j: int, radius: int):
    """Compare hull-walk and BFS distances on every ordered pair in B_radius.

    True distances come from a BFS table of radius 2*radius: by
    vertex-transitivity d(u, w) equals the table distance of the difference
    u^-1 w.  Returns (ball_size, pairs, mismatches).
    """
    codes, dists, lo, width, plo = ball_table(j, 2 * radius)
    lampbits = j * width
    lampmask = np.uint64((1 << lampbits) - 1)
    shift = np.uint64(lampbits)

    sort_idx = np.argsort(codes)
    codes_sorted = codes[sort_idx]
    dists_sorted = dists[sort_idx].astype(np.int64)

    small = codes[dists <= radius]
    pos = (small >> shift).astype(np.int64) + plo
    lamp = small & lampmask

    pairs = 0
    mismatches = 0
    for ui in range(small.shape[0]):
        nu = int(pos[ui])
        x = lamp[ui] ^ lamp
        d_closed = _closed_form_arrays(x, nu, pos, j, lo)
        if nu >= 0:
            moved = x >> np.uint64(j * nu)
        else:
            moved = x << np.uint64(j * (-nu))
        diff = moved | ((pos - nu - plo).astype(np.uint64) << shift)
        at = np.searchsorted(codes_sorted, diff)
        found = codes_sorted[np.minimum(at, codes_sorted.shape[0] - 1)] == diff
        d_true = dists_sorted[np.minimum(at, codes_sorted.shape[0] - 1)]
        pairs += diff.shape[0]
        mismatches += int(np.count_nonzero(~found | (d_true != d_closed)))
    return small.shape[0], pairs, mismatches


def band_pair_sweep(j: int, radius: int):
    """Tally gap = d_image - j*d over every unordered pair in B_radius.

    d is the lamp:2:<j> hull-walk distance, d_image the lamp:2 distance
    between the block-expanded images.  Returns (ball_size, pairs, histogram)
    with histogram a dict gap -> pair count, so any claimed band can be
    audited from one sweep.
    """
    codes, _, lo, width, plo = ball_table(j, radius)
    lampbits = j * width
    lampmask = np.uint64((1 << lampbits) - 1)
    shift = np.uint64(lampbits)
    pos = (codes >> shift).astype(np.int64) + plo
    lamp = codes & lampmask

    nb = codes.shape[0]
    pairs = 0
    hist: dict = {}
    for ui in range(nb):
        x = lamp[ui] ^ lamp[ui:]
        m = pos[ui:]
        nu = int(pos[ui])
        d_delta = _closed_form_arrays(x, nu, m, j, lo)
        d_gamma = _closed_form_arrays(x, j * nu, j * m, 1, j * lo)
        gap = d_gamma - j * d_delta
        pairs += x.shape[0]
        vals, counts = np.unique(gap, return_counts=True)
        for v, c in zip(vals.tolist(), counts.tolist()):
            hist[v] = hist.get(v, 0) + c
    return nb, pairs, hist


IMPLEMENTATION = "pure"
