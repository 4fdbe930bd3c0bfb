"""Pure-Python kernels; bit-for-bit twins of ``rsum._ext.kernels``.

Every function takes contiguous 1-D numpy arrays.  Arithmetic happens in
the dtype of the input array: Python floats for float64, numpy float32
scalars for float32 (numpy rounds each scalar operation to single).
"""

import math

import numpy as np

NLIMBS = 68
LIMB_BITS = 32
# Bit offset of 2**-1074 (LSB of the smallest subnormal double) in the limbs.
_SCALE_BITS = 1074


def _scalars(a):
    if a.dtype == np.float32:
        return list(a)  # numpy float32 scalars
    return a.tolist()


def _zero(dtype):
    return np.float32(0.0) if dtype == np.float32 else 0.0


def _bexp_fn(dtype):
    if dtype == np.float32:
        def bexp(x):
            return (int(np.float32(x).view(np.uint32)) >> 23) & 0xFF
        return bexp

    def bexp(x):
        if x != x or x in (math.inf, -math.inf):
            return 0x7FF
        if x == 0.0:
            return 0
        e = math.frexp(x)[1] + 1022
        return e if e > 0 else 0
    return bexp


def naive_sum(a):
    s = _zero(a.dtype)
    for x in _scalars(a):
        s = s + x
    return float(s)


def compensated_sum(a):
    s = _zero(a.dtype)
    error = _zero(a.dtype)
    for x in _scalars(a):
        temp = s
        q = x + error
        s = temp + q
        error = (temp - s) + q
    return float(s), float(error)


def bucket_add_recursive(a, slots, hist, max_level):
    """Insert every term with the recursive ADD; returns the deepest level hit, -1 on overflow of ``max_level``."""
    bexp = _bexp_fn(slots.dtype)
    zero = _zero(slots.dtype)
    tab = _scalars(slots)
    deepest = 0
    counts = {}
    ok = True
    for x in _scalars(a):
        val = x
        e = bexp(val)
        level = 0
        while True:
            q = val + tab[e]
            if q == 0:
                # exact cancellation: nothing left to store
                tab[e] = zero
                break
            eq = bexp(q)
            if eq == e or e == 0:
                tab[e] = q
                break
            tab[e] = zero
            level += 1
            if level > max_level:
                ok = False
                break
            val, e = q, eq
        if not ok:
            break
        counts[level] = counts.get(level, 0) + 1
        if level > deepest:
            deepest = level
    slots[:] = tab
    for level, c in counts.items():
        hist[level] += c
    return deepest if ok else -1


def _relocate(tab, addr, bexp, top, zero):
    v = tab[addr]
    new = bexp(v)
    if new != addr and 0 < new < top:
        tab[addr] = zero
        tab[new] = tab[new] + v
        return 1
    return 0


def bucket_add_nonrecursive(a, slots, correct):
    bexp = _bexp_fn(slots.dtype)
    top = len(slots) - 1
    zero = _zero(slots.dtype)
    tab = _scalars(slots)
    for x in _scalars(a):
        addr = bexp(x)
        tab[addr] = tab[addr] + x
        if correct:
            _relocate(tab, addr, bexp, top, zero)
    slots[:] = tab


def correction_sweep(slots):
    """One ascending pass moving misplaced partial sums to their exponent's slot."""
    bexp = _bexp_fn(slots.dtype)
    top = len(slots) - 1
    zero = _zero(slots.dtype)
    tab = _scalars(slots)
    moved = 0
    for addr in range(len(tab)):
        if tab[addr] != 0:
            moved += _relocate(tab, addr, bexp, top, zero)
    slots[:] = tab
    return moved


def fold_slots(slots):
    """Ascending-index cascaded TwoSum over the table (sum and tail kept apart)."""
    s = _zero(slots.dtype)
    tail = _zero(slots.dtype)
    for x in _scalars(slots):
        if x == 0:
            continue
        t = s + x
        z = t - s
        tail = tail + ((s - (t - z)) + (x - z))
        s = t
    if not math.isfinite(s):
        return float(s)
    return float(s + tail)


def superacc_add(a, limbs):
    """Add finite float64 terms exactly into radix-2**32 signed limbs."""
    total = 0
    for x in a.tolist():
        if x == 0.0:
            continue
        p, q = x.as_integer_ratio()
        total += p << (_SCALE_BITS - (q.bit_length() - 1))
    if total:
        _add_int(limbs, total)


def _limbs_to_int(limbs):
    v = 0
    for i in range(len(limbs) - 1, -1, -1):
        v = (v << LIMB_BITS) + int(limbs[i])
    return v


def _add_int(limbs, value):
    v = _limbs_to_int(limbs) + value
    mask = (1 << LIMB_BITS) - 1
    for i in range(len(limbs) - 1):
        limbs[i] = v & mask
        v >>= LIMB_BITS
    limbs[-1] = v


def superacc_normalize(limbs):
    _add_int(limbs, 0)
