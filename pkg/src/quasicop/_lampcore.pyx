# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled sweeps for mod-2 lamplighter metrics.

Vertices of lamp:2:<j> near the base are packed into 64-bit codes:
``j`` bits per lamp site over a fixed window of ``width`` sites starting at
``lo``, with the walker position stored above the lamp bits as ``pos - plo``.
Only the two-setting dial case is compiled; other alphabets take the pure
Python path.

Functions here exist for the exhaustive gates and large verification sweeps:
breadth-first distance tables, hull-walk-vs-BFS pair sweeps, and the block
embedding band sweep.  They are cross-checked against the pure implementation
in ``_lampcore_py``.
"""

from libc.stdint cimport int64_t, uint8_t, uint64_t
from libcpp.vector cimport vector

import numpy as np

cdef extern from *:
    """
    #include <cstdint>
    #include <vector>

    static inline int qc_ctz64(unsigned long long x) { return __builtin_ctzll(x); }
    static inline int qc_clz64(unsigned long long x) { return __builtin_clzll(x); }

    struct QcTable {
        std::vector<uint64_t> keys;
        std::vector<uint8_t> vals;
        uint64_t mask = 0;
        size_t filled = 0;

        void init(size_t cap) {
            keys.assign(cap, UINT64_MAX);
            vals.assign(cap, 0);
            mask = cap - 1;
            filled = 0;
        }
        size_t slot(uint64_t key) const {
            uint64_t h = key * 0x9E3779B97F4A7C15ULL;
            h ^= h >> 32;  // packed keys carry their entropy in the high bits
            size_t i = (size_t)(h & mask);
            while (keys[i] != UINT64_MAX && keys[i] != key) i = (i + 1) & mask;
            return i;
        }
        int get(uint64_t key) const {
            size_t i = slot(key);
            return keys[i] == UINT64_MAX ? -1 : (int)vals[i];
        }
        // insert if absent; returns 1 when newly inserted
        int put_new(uint64_t key, uint8_t val) {
            size_t i = slot(key);
            if (keys[i] != UINT64_MAX) return 0;
            keys[i] = key;
            vals[i] = val;
            filled++;
            if (3 * filled > 2 * (mask + 1)) grow();
            return 1;
        }
        void grow() {
            QcTable fresh;
            fresh.init(2 * (mask + 1));
            for (size_t i = 0; i <= mask; i++)
                if (keys[i] != UINT64_MAX) {
                    size_t s = fresh.slot(keys[i]);
                    fresh.keys[s] = keys[i];
                    fresh.vals[s] = vals[i];
                }
            keys.swap(fresh.keys);
            vals.swap(fresh.vals);
            mask = fresh.mask;
        }
    };
    """
    int qc_ctz64(unsigned long long x) nogil
    int qc_clz64(unsigned long long x) nogil
    cppclass QcTable:
        QcTable() nogil
        void init(size_t cap) nogil
        int get(uint64_t key) nogil
        int put_new(uint64_t key, uint8_t val) nogil


cdef inline long _labs(long x) nogil:
    return -x if x < 0 else x


cdef inline long _lmin(long a, long b) nogil:
    return a if a < b else b


cdef inline long _lmax(long a, long b) nogil:
    return a if a > b else b


cdef inline long closed_form(uint64_t cu, uint64_t cw, int j, long lo,
                             long plo, int width) nogil:
    """Hull-walk distance between two packed lamp:2:<j> vertices."""
    cdef int lampbits = j * width
    cdef uint64_t lampmask = ((<uint64_t>1) << lampbits) - 1
    cdef uint64_t x = (cu ^ cw) & lampmask
    cdef long n = <long>(cu >> lampbits) + plo
    cdef long m = <long>(cw >> lampbits) + plo
    cdef long a, b, site_lo, site_hi
    if x == 0:
        return _labs(n - m)
    site_lo = lo + qc_ctz64(x) // j
    site_hi = lo + (63 - qc_clz64(x)) // j + 1
    a = _lmin(site_lo, _lmin(n, m))
    b = _lmax(site_hi, _lmax(n, m))
    return (b - a) + _lmin((n - a) + (b - m), (b - n) + (m - a))


cdef inline long gamma_closed_form(uint64_t xor_mask, long n, long m, int j,
                                   long lo) nogil:
    """Hull-walk distance between the single-dial images of two vertices.

    The packed lamp bits of lamp:2:<j> read verbatim as lamp:2 sites
    ``j*lo + bit`` and the walker maps to position ``j*pos``.
    """
    cdef long gn = j * n
    cdef long gm = j * m
    cdef long a, b, site_lo, site_hi
    if xor_mask == 0:
        return _labs(gn - gm)
    site_lo = j * lo + qc_ctz64(xor_mask)
    site_hi = j * lo + (63 - qc_clz64(xor_mask)) + 1
    a = _lmin(site_lo, _lmin(gn, gm))
    b = _lmax(site_hi, _lmax(gn, gm))
    return (b - a) + _lmin((gn - a) + (b - gm), (b - gn) + (gm - a))


cdef int bfs_fill(int j, int radius, QcTable* table,
                  vector[uint64_t]* order, vector[uint8_t]* dists) except -1:
    """Breadth-first distances from the base out to the given radius.

    Window: sites [-radius, radius-1], positions [-radius, radius].  A walk of
    length <= radius from the base cannot leave it, so nothing is clipped.
    """
    cdef int width = 2 * radius
    cdef long lo = -radius
    cdef long plo = -radius
    cdef int lampbits = j * width
    cdef int nvals = 1 << j
    cdef uint64_t base = (<uint64_t>(-plo)) << lampbits
    table.init(1 << 12)

    cdef size_t level_start = 0, level_end, idx
    cdef int depth, dirn, val
    cdef long pos, site
    cdef uint64_t code, mask, cleared, nxt, posbits

    order.push_back(base)
    dists.push_back(0)
    table.put_new(base, 0)

    for depth in range(1, radius + 1):
        level_end = order.size()
        for idx in range(level_start, level_end):
            code = order[0][idx]
            pos = <long>(code >> lampbits) + plo
            mask = code & (((<uint64_t>1) << lampbits) - 1)
            for dirn in range(2):
                # moving right rewrites the departed site, moving left the
                # arrival site; both are the lower end of the eaten edge
                site = pos if dirn == 0 else pos - 1
                if site < lo or site >= lo + width:
                    raise AssertionError("window clipped during BFS")
                posbits = (<uint64_t>(pos + 1 - plo if dirn == 0 else pos - 1 - plo)) << lampbits
                cleared = mask & ~((((<uint64_t>1) << j) - 1) << (j * (site - lo)))
                for val in range(nvals):
                    nxt = cleared | ((<uint64_t>val) << (j * (site - lo))) | posbits
                    if table.put_new(nxt, <uint8_t>depth):
                        order.push_back(nxt)
                        dists.push_back(<uint8_t>depth)
        level_start = level_end
    return 0


def ball_table(int j, int radius):
    """BFS distance table for lamp:2:<j>: (codes, dists, lo, width, plo)."""
    if j < 1 or j > 8:
        raise ValueError("block width out of compiled range")
    if radius < 1 or j * 2 * radius + 8 > 63:
        raise ValueError("radius out of compiled range")
    cdef QcTable table
    cdef vector[uint64_t] order
    cdef vector[uint8_t] dists
    bfs_fill(j, radius, &table, &order, &dists)
    cdef size_t n = order.size()
    codes_np = np.empty(n, dtype=np.uint64)
    dists_np = np.empty(n, dtype=np.uint8)
    cdef uint64_t[::1] cv = codes_np
    cdef uint8_t[::1] dv = dists_np
    cdef size_t i
    for i in range(n):
        cv[i] = order[i]
        dv[i] = dists[i]
    return codes_np, dists_np, -radius, 2 * radius, -radius


def hull_pair_sweep(int j, int radius):
    """Compare hull-walk and BFS distances on every ordered pair in B_radius.

    True distances come from a BFS table of radius 2*radius: by
    vertex-transitivity d(u, w) equals the table distance of the difference
    u^-1 w.  Returns (ball_size, pairs, mismatches).
    """
    if j < 1 or radius < 1 or j * 4 * radius + 8 > 63:
        raise ValueError("radius out of compiled range")
    cdef QcTable table
    cdef vector[uint64_t] order
    cdef vector[uint8_t] dists
    bfs_fill(j, 2 * radius, &table, &order, &dists)

    cdef int width = 4 * radius
    cdef long lo = -2 * radius
    cdef long plo = -2 * radius
    cdef int lampbits = j * width
    cdef uint64_t lampmask = ((<uint64_t>1) << lampbits) - 1

    cdef vector[uint64_t] small
    cdef size_t i
    for i in range(order.size()):
        if dists[i] <= radius:
            small.push_back(order[i])

    cdef size_t nb = small.size()
    cdef long long pairs = 0, mismatches = 0
    cdef size_t ui, wi
    cdef uint64_t cu, cw, x, diff
    cdef long nu, nw, d_closed
    cdef int d_true
    with nogil:
        for ui in range(nb):
            cu = small[ui]
            nu = <long>(cu >> lampbits) + plo
            for wi in range(nb):
                cw = small[wi]
                x = (cu ^ cw) & lampmask
                # difference u^-1 w: sites shift by -nu, positions subtract
                if nu >= 0:
                    diff = x >> (j * nu)
                else:
                    diff = x << (j * (-nu))
                nw = <long>(cw >> lampbits) + plo
                diff |= (<uint64_t>(nw - nu - plo)) << lampbits
                d_true = table.get(diff)
                d_closed = closed_form(cu, cw, j, lo, plo, width)
                pairs += 1
                if d_true < 0 or d_closed != d_true:
                    mismatches += 1
    return <long>nb, pairs, mismatches


def band_pair_sweep(int j, int radius):
    """Tally gap = d_image - j*d over every unordered pair in B_radius.

    d is the lamp:2:<j> hull-walk distance, d_image the lamp:2 distance
    between the block-expanded images.  Returns (ball_size, pairs, histogram)
    with histogram a dict gap -> pair count, so any claimed band can be
    audited from one sweep.
    """
    if j < 1 or radius < 1 or j * 2 * radius + 8 > 63:
        raise ValueError("radius out of compiled range")
    cdef QcTable table
    cdef vector[uint64_t] order
    cdef vector[uint8_t] dists
    bfs_fill(j, radius, &table, &order, &dists)

    cdef int width = 2 * radius
    cdef long lo = -radius
    cdef long plo = -radius
    cdef int lampbits = j * width
    cdef uint64_t lampmask = ((<uint64_t>1) << lampbits) - 1

    cdef size_t nb = order.size()
    cdef long long pairs = 0
    # gaps are bounded by the window span, far below the bias
    cdef long long hist[513]
    cdef int bias = 256
    cdef size_t hi_
    for hi_ in range(513):
        hist[hi_] = 0
    cdef size_t ui, wi
    cdef uint64_t cu, cw, x
    cdef long nu, nw, d_delta, d_gamma, gap
    with nogil:
        for ui in range(nb):
            cu = order[ui]
            nu = <long>(cu >> lampbits) + plo
            for wi in range(ui, nb):
                cw = order[wi]
                x = (cu ^ cw) & lampmask
                nw = <long>(cw >> lampbits) + plo
                d_delta = closed_form(cu, cw, j, lo, plo, width)
                d_gamma = gamma_closed_form(x, nu, nw, j, lo)
                gap = d_gamma - j * d_delta
                pairs += 1
                hist[gap + bias] += 1
    out = {}
    for hi_ in range(513):
        if hist[hi_]:
            out[<long>hi_ - bias] = hist[hi_]
    return <long>nb, pairs, out


def distance_codes(int j, long lo, int width, long plo, u_codes, w_codes):
    """Hull-walk distances for parallel arrays of packed vertices."""
    u = np.ascontiguousarray(u_codes, dtype=np.uint64)
    w = np.ascontiguousarray(w_codes, dtype=np.uint64)
    if u.shape != w.shape or u.ndim != 1:
        raise ValueError("need two equal-length 1-d code arrays")
    if j < 1 or j * width + 8 > 63:
        raise ValueError("window out of compiled range")
    out = np.empty(u.shape[0], dtype=np.int64)
    cdef uint64_t[::1] uv = u
    cdef uint64_t[::1] wv = w
    cdef int64_t[::1] ov = out
    cdef size_t i
    with nogil:
        for i in range(<size_t>uv.shape[0]):
            ov[i] = closed_form(uv[i], wv[i], j, lo, plo, width)
    return out

IMPLEMENTATION = "compiled"
