"""numba kernels for the bit-serial hot loops.

Bit sets are little-endian arrays of uint64 words indexed by absolute bit
position (bit ``p`` lives in word ``p >> 6`` at offset ``p & 63``).
"""

import numpy as np
from numba import njit

U1 = np.uint64(1)
U0 = np.uint64(0)
ALL = np.uint64(0xFFFFFFFFFFFFFFFF)

STATUS_OK = 0
STATUS_INCONSISTENT = 1
STATUS_DEFICIT = 2
STATUS_OVERFLOW = 3


@njit(cache=True, inline="always")
def parity64(x):
    x = np.uint64(x)
    x ^= x >> np.uint64(32)
    x ^= x >> np.uint64(16)
    x ^= x >> np.uint64(8)
    x ^= x >> np.uint64(4)
    x ^= x >> np.uint64(2)
    x ^= x >> np.uint64(1)
    return np.int64(x & U1)


@njit(cache=True, inline="always")
def highbit64(x):
    # x != 0
    x = np.uint64(x)
    n = 0
    if x >> np.uint64(32):
        x >>= np.uint64(32)
        n += 32
    if x >> np.uint64(16):
        x >>= np.uint64(16)
        n += 16
    if x >> np.uint64(8):
        x >>= np.uint64(8)
        n += 8
    if x >> np.uint64(4):
        x >>= np.uint64(4)
        n += 4
    if x >> np.uint64(2):
        x >>= np.uint64(2)
        n += 2
    if x >> np.uint64(1):
        n += 1
    return n


@njit(cache=True, inline="always")
def lowbit64(x):
    x = np.uint64(x)
    return highbit64(x & (~x + U1))


@njit(cache=True, inline="always")
def lowmask(r):
    # bits [0, r) set, 0 <= r <= 64
    if r >= 64:
        return ALL
    return (U1 << np.uint64(r)) - U1


# --------------------------------------------------------------------------
# encoder / LFSR


@njit(cache=True)
def encode_shiftreg(msg, k, n, mem, polys):
    """Zero-tail feedforward encoding; ``polys[i, j]`` bit d is f_ij[d]."""
    T = msg.size // k
    S = T + mem
    out = np.zeros(S * n, dtype=np.uint8)
    regs = np.zeros(k, dtype=np.int64)
    mask = (np.int64(1) << (mem + 1)) - 1
    for t in range(S):
        for i in range(k):
            b = np.int64(msg[t * k + i]) if t < T else np.int64(0)
            regs[i] = ((regs[i] << 1) | b) & mask
        for j in range(n):
            acc = 0
            for i in range(k):
                acc ^= parity64(regs[i] & polys[i, j])
            out[t * n + j] = acc
    return out


@njit(cache=True)
def lfsr_filter_stream(regs, taps, lens, bf, count):
    """Step the four registers ``count`` times; ``regs`` is updated in place."""
    out = np.empty(count, dtype=np.uint8)
    for t in range(count):
        idx = 0
        for r in range(4):
            s = regs[r]
            fb = parity64(s & taps[r])
            idx = (idx << 1) | (s & 1)
            regs[r] = (s >> 1) | (fb << (lens[r] - 1))
        out[t] = bf[idx]
    return out


@njit(cache=True)
def lfsr_period(state, tap, length, limit):
    """Steps until a single register returns to ``state`` (or ``limit``)."""
    s = state
    for t in range(1, limit + 1):
        fb = parity64(s & tap)
        s = (s >> 1) | (fb << (length - 1))
        if s == state:
            return t
    return -1


# --------------------------------------------------------------------------
# linear decoders
#
# Unknown (t, i) of a k-input message lives at absolute index pad + t*k + i
# with pad = mem*k; indices below pad and at/after end = pad + T*k are the
# zero register fill and flush, known to be zero.  The equation of output j at
# section s touches [s*k, s*k + W) with W = k*(mem+1); ``templates[j]`` holds
# its coefficient pattern relative to s*k.


@njit(cache=True, inline="always")
def _place(tpl, r, w):
    # word w of the template shifted left by r bits
    if r == 0:
        if w < tpl.size:
            return tpl[w]
        return U0
    out = U0
    if w < tpl.size:
        out = tpl[w] << np.uint64(r)
    if w >= 1 and w - 1 < tpl.size:
        out |= tpl[w - 1] >> np.uint64(64 - r)
    return out


@njit(cache=True)
def solve_stream(symbols, k, n, mem, T, templates, W, cap):
    """Forward elimination with on-line substitution of solved unknowns.

    Pending equations are kept in highest-index echelon form over the
    unsolved unknowns; the oldest unsolved unknown is fixed as soon as a
    pending row has it as its top bit.  ``cap`` (a power of two, in bits)
    bounds how far the unsolved window may trail the newest unknown.
    """
    pad = mem * k
    end = pad + T * k
    total = (T + 2 * mem) * k
    vals = np.zeros((total >> 6) + 3, dtype=np.uint64)
    nwc = (cap >> 6) + 2
    prow = np.zeros((cap, nwc), dtype=np.uint64)
    pbase = np.zeros(cap, dtype=np.int64)
    plen = np.zeros(cap, dtype=np.int64)
    prhs = np.zeros(cap, dtype=np.int64)
    phas = np.zeros(cap, dtype=np.bool_)
    cur = np.zeros(nwc + 2, dtype=np.uint64)
    cmask = cap - 1
    frontier = pad
    npending = 0
    ntw = templates.shape[1]
    endw = end >> 6
    endmask = lowmask(end & 63)

    for s in range(T + mem):
        if frontier >= end:
            break
        low = s * k
        top = low + W - 1
        if top >= end:
            top = end - 1
        if top < frontier:
            continue
        fb = frontier >> 6
        topw = top >> 6
        ncur = topw - fb + 1
        if ncur > nwc or top - frontier >= cap - 64:
            return STATUS_OVERFLOW, vals, 0
        lw = low >> 6
        r = low & 63
        for j in range(n):
            e = symbols[s * n + j]
            if e < 0:
                continue
            if frontier >= end:
                break
            if top < frontier:
                break
            fb = frontier >> 6
            ncur = topw - fb + 1
            rhs = np.int64(e)
            for q in range(ncur):
                cur[q] = U0
            for w in range(ntw + 1):
                aw = lw + w
                if aw > topw:
                    break
                word = _place(templates[j], r, w)
                if word == U0:
                    continue
                if aw < fb:
                    rhs ^= parity64(word & vals[aw])
                else:
                    cur[aw - fb] ^= word
            if topw == endw:
                cur[topw - fb] &= endmask
            # fold the solved part of the frontier word
            rhs ^= parity64(cur[0] & vals[fb])
            cur[0] &= ~lowmask(frontier & 63)

            while True:
                hw = ncur - 1
                while hw >= 0 and cur[hw] == U0:
                    hw -= 1
                if hw < 0:
                    if rhs != 0:
                        return STATUS_INCONSISTENT, vals, 0
                    break
                h = ((fb + hw) << 6) + highbit64(cur[hw])
                slot = h & cmask
                if phas[slot]:
                    pb = pbase[slot]
                    for q in range(plen[slot]):
                        aw = pb + q
                        if aw < fb:
                            rhs ^= parity64(prow[slot, q] & vals[aw])
                        else:
                            cur[aw - fb] ^= prow[slot, q]
                    rhs ^= prhs[slot]
                    rhs ^= parity64(cur[0] & vals[fb])
                    cur[0] &= ~lowmask(frontier & 63)
                    continue
                ln = hw + 1
                for q in range(ln):
                    prow[slot, q] = cur[q]
                pbase[slot] = fb
                plen[slot] = ln
                prhs[slot] = rhs
                phas[slot] = True
                npending += 1
                while frontier < end and phas[frontier & cmask]:
                    sl = frontier & cmask
                    v = prhs[sl]
                    pb = pbase[sl]
                    for q in range(plen[sl]):
                        v ^= parity64(prow[sl, q] & vals[pb + q])
                    if v:
                        vals[frontier >> 6] |= U1 << np.uint64(frontier & 63)
                    phas[sl] = False
                    npending -= 1
                    frontier += 1
                break

    if frontier < end:
        return STATUS_DEFICIT, vals, (end - frontier) - npending
    return STATUS_OK, vals, 0


@njit(cache=True)
def solve_band(symbols, k, n, mem, T, templates, W):
    """Lowest-index echelon elimination over the whole band, then back-substitution.

    Every stored row stays inside the span of the equation it came from, so
    rows never exceed W bits whatever the decoding delay of the code.
    """
    pad = mem * k
    end = pad + T * k
    total = (T + 2 * mem) * k
    nw = ((W + 63) >> 6) + 1
    prow = np.zeros((total, nw), dtype=np.uint64)
    prhs = np.zeros(total, dtype=np.int64)
    phas = np.zeros(total, dtype=np.bool_)
    vals = np.zeros((total >> 6) + nw + 2, dtype=np.uint64)
    cur = np.zeros(nw + 1, dtype=np.uint64)
    ntw = templates.shape[1]
    padw = pad >> 6
    endw = end >> 6
    endmask = lowmask(end & 63)

    for s in range(T + mem):
        low = s * k
        top = low + W - 1
        if top >= end:
            top = end - 1
        lw = low >> 6
        topw = top >> 6
        ncur = topw - lw + 1
        r = low & 63
        for j in range(n):
            e = symbols[s * n + j]
            if e < 0:
                continue
            rhs = np.int64(e)
            for q in range(ncur):
                word = _place(templates[j], r, q) if q <= ntw else U0
                aw = lw + q
                if aw < padw:
                    word = U0
                elif aw == padw:
                    word &= ~lowmask(pad & 63)
                if aw == endw:
                    word &= endmask
                cur[q] = word
            while True:
                q0 = 0
                while q0 < ncur and cur[q0] == U0:
                    q0 += 1
                if q0 == ncur:
                    if rhs != 0:
                        return STATUS_INCONSISTENT, vals, 0
                    break
                u = ((lw + q0) << 6) + lowbit64(cur[q0])
                if phas[u]:
                    off = (u >> 6) - lw
                    for q in range(nw):
                        if off + q < ncur:
                            cur[off + q] ^= prow[u, q]
                    rhs ^= prhs[u]
                    continue
                off = (u >> 6) - lw
                for q in range(nw):
                    prow[u, q] = cur[off + q] if off + q < ncur else U0
                prhs[u] = rhs
                phas[u] = True
                break

    deficit = 0
    for u in range(pad, end):
        if not phas[u]:
            deficit += 1
    if deficit:
        return STATUS_DEFICIT, vals, deficit
    for u in range(end - 1, pad - 1, -1):
        v = prhs[u]
        base = u >> 6
        for q in range(nw):
            v ^= parity64(prow[u, q] & vals[base + q])
        if v:
            vals[base] |= U1 << np.uint64(u & 63)
    return STATUS_OK, vals, 0


@njit(cache=True)
def viterbi_hard(symbols, k, n, mem, T, polys):
    """Hard-decision Viterbi over the zero-tail trellis.

    ``symbols`` uses -1 for erased positions (zero branch metric).  Among
    equal-metric merges the smallest predecessor state (then input) wins.
    """
    nstates = 1 << (k * mem)
    smask = (np.int64(1) << mem) - 1
    nsec = T + mem
    big = np.int64(1) << 60
    pm = np.full(nstates, big, dtype=np.int64)
    pm[0] = 0
    new = np.empty(nstates, dtype=np.int64)
    pred = np.zeros((nsec, nstates), dtype=np.int32)
    predu = np.zeros((nsec, nstates), dtype=np.int32)
    regs = np.zeros(k, dtype=np.int64)
    for t in range(nsec):
        new[:] = big
        ninputs = (1 << k) if t < T else 1
        for st in range(nstates):
            base = pm[st]
            if base >= big:
                continue
            for u in range(ninputs):
                ns = 0
                for i in range(k):
                    sti = (st >> (i * mem)) & smask
                    reg = (sti << 1) | ((u >> i) & 1)
                    regs[i] = reg
                    ns |= (reg & smask) << (i * mem)
                m = base
                for j in range(n):
                    bit = 0
                    for i in range(k):
                        bit ^= parity64(regs[i] & polys[i, j])
                    e = symbols[t * n + j]
                    if e >= 0 and e != bit:
                        m += 1
                if m < new[ns]:
                    new[ns] = m
                    pred[t, ns] = st
                    predu[t, ns] = u
        pm[:] = new
    msg = np.zeros(T * k, dtype=np.uint8)
    st = 0
    for t in range(nsec - 1, -1, -1):
        u = predu[t, st]
        if t < T:
            for i in range(k):
                msg[t * k + i] = (u >> i) & 1
        st = pred[t, st]
    return msg, pm[0]
