# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled summation kernels.

Same signatures and bit-for-bit results as ``rsum._kernels_py``.  Single
precision kernels run in C ``float`` arithmetic; the extension is built
without fast-math or FMA contraction so every add is one IEEE rounding.
"""

from cython cimport floating
from libc.math cimport isfinite
from libc.stdint cimport int64_t, uint32_t, uint64_t
from libc.string cimport memcpy

import numpy as np

cdef enum:
    LIMB_BITS = 32
    # limbs absorb < 2**32 per term; carry before an int64 limb can overflow
    NORMALIZE_EVERY = 1 << 29

NLIMBS = 68

cdef uint64_t MANT_MASK = (<uint64_t>1 << 52) - 1
cdef uint64_t LOW32 = (<uint64_t>1 << 32) - 1


cdef inline int _bexp(floating x) noexcept nogil:
    cdef uint64_t b64
    cdef uint32_t b32
    if floating is double:
        memcpy(&b64, &x, 8)
        return <int>((b64 >> 52) & 0x7FF)
    else:
        memcpy(&b32, &x, 4)
        return <int>((b32 >> 23) & 0xFF)


def naive_sum(floating[::1] a):
    cdef floating s = 0
    cdef Py_ssize_t i
    with nogil:
        for i in range(a.shape[0]):
            s = s + a[i]
    return s


def compensated_sum(floating[::1] a):
    cdef floating s = 0
    cdef floating error = 0
    cdef floating temp, q
    cdef Py_ssize_t i
    with nogil:
        for i in range(a.shape[0]):
            temp = s
            q = a[i] + error
            s = temp + q
            error = (temp - s) + q
    return s, error


cdef int _add_recursive(floating[::1] a, floating[::1] slots, int64_t[::1] hist,
                        int max_level) noexcept nogil:
    cdef Py_ssize_t i
    cdef floating val, q
    cdef int e, eq, level
    cdef int deepest = 0
    for i in range(a.shape[0]):
        val = a[i]
        e = _bexp(val)
        level = 0
        while True:
            q = val + slots[e]
            if q == 0:
                slots[e] = 0
                break
            eq = _bexp(q)
            if eq == e or e == 0:
                slots[e] = q
                break
            slots[e] = 0
            level += 1
            if level > max_level:
                return -1
            val = q
            e = eq
        hist[level] += 1
        if level > deepest:
            deepest = level
    return deepest


def bucket_add_recursive(floating[::1] a, floating[::1] slots, int64_t[::1] hist, int max_level):
    """Insert every term with the recursive ADD.

    Returns the deepest recursion level reached, or -1 if a chain went past
    ``max_level`` (the table is then left mid-insertion).
    """
    cdef int deepest
    if hist.shape[0] <= max_level:
        raise ValueError("histogram shorter than max_level + 1")
    with nogil:
        deepest = _add_recursive(a, slots, hist, max_level)
    return deepest


cdef inline int _relocate(floating[::1] slots, int addr, int top) noexcept nogil:
    cdef floating v = slots[addr]
    cdef int new = _bexp(v)
    if new != addr and 0 < new < top:
        slots[addr] = 0
        slots[new] = slots[new] + v
        return 1
    return 0


def bucket_add_nonrecursive(floating[::1] a, floating[::1] slots, bint correct):
    cdef Py_ssize_t i
    cdef int addr
    cdef int top = slots.shape[0] - 1
    with nogil:
        if correct:
            for i in range(a.shape[0]):
                addr = _bexp(a[i])
                slots[addr] = slots[addr] + a[i]
                _relocate(slots, addr, top)
        else:
            for i in range(a.shape[0]):
                addr = _bexp(a[i])
                slots[addr] = slots[addr] + a[i]


def correction_sweep(floating[::1] slots):
    cdef int addr
    cdef int top = slots.shape[0] - 1
    cdef int moved = 0
    for addr in range(slots.shape[0]):
        if slots[addr] != 0:
            moved += _relocate(slots, addr, top)
    return moved


def fold_slots(floating[::1] slots):
    cdef floating s = 0
    cdef floating tail = 0
    cdef floating x, t, z
    cdef Py_ssize_t i
    for i in range(slots.shape[0]):
        x = slots[i]
        if x == 0:
            continue
        t = s + x
        z = t - s
        tail = tail + ((s - (t - z)) + (x - z))
        s = t
    if not isfinite(s):
        return s
    return s + tail


cdef void _normalize(int64_t[::1] limbs) noexcept nogil:
    cdef Py_ssize_t i
    cdef int64_t carry
    for i in range(limbs.shape[0] - 1):
        carry = limbs[i] >> LIMB_BITS  # arithmetic shift: floor division
        limbs[i] -= carry << LIMB_BITS
        limbs[i + 1] += carry


def superacc_normalize(int64_t[::1] limbs):
    _normalize(limbs)


def superacc_add(double[::1] a, int64_t[::1] limbs):
    """Add finite doubles exactly into radix-2**32 signed limbs (LSB = 2**-1074)."""
    cdef Py_ssize_t i, idx
    cdef uint64_t bits, m, rest
    cdef int e, off
    cdef int64_t p0, p1, p2
    cdef Py_ssize_t pending = 0
    with nogil:
        for i in range(a.shape[0]):
            memcpy(&bits, &a[i], 8)
            e = <int>((bits >> 52) & 0x7FF)
            m = bits & MANT_MASK
            if e == 0:
                if m == 0:
                    continue
                e = 1
            else:
                m |= (<uint64_t>1) << 52
            # value = m * 2**(e - 1075): LSB sits at bit e - 1 of the accumulator
            idx = (e - 1) >> 5
            off = (e - 1) & 31
            p0 = <int64_t>((m << off) & LOW32)
            rest = m >> (32 - off)
            p1 = <int64_t>(rest & LOW32)
            p2 = <int64_t>(rest >> 32)
            if bits >> 63:
                limbs[idx] -= p0
                limbs[idx + 1] -= p1
                limbs[idx + 2] -= p2
            else:
                limbs[idx] += p0
                limbs[idx + 1] += p1
                limbs[idx + 2] += p2
            pending += 1
            if pending == NORMALIZE_EVERY:
                _normalize(limbs)
                pending = 0
        _normalize(limbs)
