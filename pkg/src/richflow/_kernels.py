"""Compiled inner loops of the synchronous update.

One kernel evaluates a whole step from the step-n field alone: the target
pass picks each vertex's argmax (resolving ties with the per-vertex uniform),
the gather pass rebuilds the step-(n+1) field by scanning each closed
neighborhood for sources. Both passes are sequential with a fixed slot order,
so results are bit-identical regardless of how callers schedule work. The
kernel specializes on the value dtype (int64 exact / float64 real).
"""

import numpy as np
from numba import njit


@njit(cache=True)
def eval_step(C, nbr, counts, u, a, tie_size, nbr_max, C_new, indeg, ev):
    """Fill targets, tie sizes, neighborhood maxima, next field, in-degrees, events.

    Events: 0=A empty, 1=B keeps own only, 2=C receives one other and departs,
    3=D receives from more than one, 4=E departs and receives nothing.
    """
    n = C.shape[0]
    for x in range(n):
        if C[x] <= 0:
            a[x] = x
            tie_size[x] = 1
            nbr_max[x] = C[x]
            continue
        m = C[nbr[x, 0]]
        nt = 1
        for k in range(1, counts[x]):
            v = C[nbr[x, k]]
            if v > m:
                m = v
                nt = 1
            elif v == m:
                nt += 1
        r = int(u[x] * nt)
        if r >= nt:
            r = nt - 1
        seen = 0
        tgt = x
        for k in range(counts[x]):
            y = nbr[x, k]
            if C[y] == m:
                if seen == r:
                    tgt = y
                    break
                seen += 1
        a[x] = tgt
        tie_size[x] = nt
        nbr_max[x] = m
    for y in range(n):
        C_new[y] = 0
        deg = 0
        for k in range(counts[y]):
            z = nbr[y, k]
            if a[z] == y:
                deg += 1
                C_new[y] += C[z]
        indeg[y] = deg
        if C[y] <= 0:
            ev[y] = 0
        elif deg == 0:
            ev[y] = 4
        elif deg > 1:
            ev[y] = 3
        elif a[y] == y:
            ev[y] = 1
        else:
            ev[y] = 2


@njit(cache=True)
def self_max_info(C, nbr, counts, nbr_max, tie_size):
    """Neighborhood maxima and argmax multiplicities without tie resolution."""
    n = C.shape[0]
    for x in range(n):
        m = C[nbr[x, 0]]
        nt = 1
        for k in range(1, counts[x]):
            v = C[nbr[x, k]]
            if v > m:
                m = v
                nt = 1
            elif v == m:
                nt += 1
        nbr_max[x] = m
        tie_size[x] = nt


@njit(cache=True)
def comp_sum(values):
    """Neumaier-compensated sequential sum (the real-mode total-mass audit)."""
    s = 0.0
    c = 0.0
    for i in range(values.shape[0]):
        v = values[i]
        t = s + v
        if abs(s) >= abs(v):
            c += (s - t) + v
        else:
            c += (v - t) + s
        s = t
    return s + c
