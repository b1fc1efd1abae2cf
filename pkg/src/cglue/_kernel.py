"""Compiled depth-first search over the Markov-triple tree.

One node is a triple (x, y, z) with x^2 + y^2 + z^2 = x y z; the three
edges replace one coordinate by the product of the other two minus it.
The search walks the subtree where some coordinate norm stays below 4,
pruning edges certified as escaping (both kept coordinates at or above
the trace floor and the new coordinate's norm not decreasing).

Verdict codes: 0 = QF (region exhausted), 1 = NotQF (forbidden trace
found), 2 = Undecided (node budget hit).  Traversal order is fixed:
children are explored smallest new-coordinate norm first, ties broken
lexicographically by (re, im), which makes node counts reproducible.
"""

from __future__ import annotations

import numpy as np
from numba import njit

QF_CODE = 0
NOT_QF_CODE = 1
UNDECIDED_CODE = 2

REAL_EPS = 1e-9
REGION_BOUND = 4.0


@njit(cache=True, nogil=True)
def _forbidden(w: complex, nw: float) -> bool:
    if nw < 2.0 - REAL_EPS:
        return True
    return abs(w.imag) <= REAL_EPS and -2.0 - REAL_EPS <= w.real <= 2.0 + REAL_EPS


@njit(cache=True, nogil=True)
def bq_search(
    x: complex, y: complex, z: complex, max_nodes: int, trace_floor: float
):
    cap = 2 * max_nodes + 8
    sx = np.empty(cap, np.complex128)
    sy = np.empty(cap, np.complex128)
    sz = np.empty(cap, np.complex128)
    sb = np.empty(cap, np.int8)
    sx[0] = x
    sy[0] = y
    sz[0] = z
    sb[0] = -1
    top = 1
    visited = 0
    min_norm = 1.0e300

    cand_x = np.empty(3, np.complex128)
    cand_y = np.empty(3, np.complex128)
    cand_z = np.empty(3, np.complex128)
    cand_move = np.empty(3, np.int8)
    key_n = np.empty(3, np.float64)
    key_r = np.empty(3, np.float64)
    key_i = np.empty(3, np.float64)

    while top > 0:
        if visited >= max_nodes:
            return UNDECIDED_CODE, visited, min_norm, True
        top -= 1
        cx = sx[top]
        cy = sy[top]
        cz = sz[top]
        banned = sb[top]
        visited += 1

        nx = abs(cx)
        ny = abs(cy)
        nz = abs(cz)
        node_min = min(nx, min(ny, nz))
        if node_min < min_norm:
            min_norm = node_min
        if _forbidden(cx, nx) or _forbidden(cy, ny) or _forbidden(cz, nz):
            return NOT_QF_CODE, visited, min_norm, False

        count = 0
        for move in range(3):
            if move == banned:
                continue
            if move == 0:
                new = cy * cz - cx
                old_norm = nx
                k1, k2 = ny, nz
                ax, ay, az = new, cy, cz
            elif move == 1:
                new = cx * cz - cy
                old_norm = ny
                k1, k2 = nx, nz
                ax, ay, az = cx, new, cz
            else:
                new = cx * cy - cz
                old_norm = nz
                k1, k2 = nx, ny
                ax, ay, az = cx, cy, new
            new_norm = abs(new)
            if min(new_norm, min(k1, k2)) >= REGION_BOUND:
                continue
            if k1 >= trace_floor and k2 >= trace_floor and new_norm >= old_norm:
                continue
            cand_x[count] = ax
            cand_y[count] = ay
            cand_z[count] = az
            cand_move[count] = move
            key_n[count] = new_norm
            key_r[count] = new.real
            key_i[count] = new.imag
            count += 1

        # push largest key first so the smallest pops first
        used = 0
        while used < count:
            best = -1
            for k in range(count):
                if cand_move[k] < 0:
                    continue
                if best < 0:
                    best = k
                    continue
                gt = key_n[k] > key_n[best]
                if key_n[k] == key_n[best]:
                    gt = key_r[k] > key_r[best]
                    if key_r[k] == key_r[best]:
                        gt = key_i[k] > key_i[best]
                if gt:
                    best = k
            sx[top] = cand_x[best]
            sy[top] = cand_y[best]
            sz[top] = cand_z[best]
            sb[top] = cand_move[best]
            cand_move[best] = -1
            top += 1
            used += 1

    return QF_CODE, visited, min_norm, False
