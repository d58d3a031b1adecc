"""Integer table kernels behind exhaustive validation and enumeration.

Each kernel has a numba-compiled path and a pure numpy/Python fallback.
The fallback is used when numba is missing or when ``CIRCORD_NO_NUMBA`` is
set to a truthy value; both paths must return identical results.

Tables hold indices into a Python-side element list, so group arithmetic
stays exact; the kernels only ever see small integers.
"""

from __future__ import annotations

import os
import types

import numpy as np

try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAS_NUMBA = False

_DISABLED = os.environ.get("CIRCORD_NO_NUMBA", "").lower() in ("1", "true", "yes")
USE_NUMBA = HAS_NUMBA and not _DISABLED


def _maybe_jit(fn):
    return njit(cache=True)(fn) if HAS_NUMBA else fn


# -- exhaustive axiom checks on a finite table ------------------------------

def _check_tables_loops(ctab, mtab):
    N = ctab.shape[0]
    counts = np.zeros(3, dtype=np.int64)
    witness = np.full((3, 4), -1, dtype=np.int64)
    for i in range(N):
        for j in range(N):
            for k in range(N):
                v = ctab[i, j, k]
                distinct = i != j and j != k and i != k
                if (v == 0) == distinct or v > 1 or v < -1:
                    if counts[0] == 0:
                        witness[0, 0] = i
                        witness[0, 1] = j
                        witness[0, 2] = k
                    counts[0] += 1
                for l in range(N):
                    s = v - ctab[i, j, l] + ctab[i, k, l] - ctab[j, k, l]
                    if s != 0:
                        if counts[1] == 0:
                            witness[1, 0] = i
                            witness[1, 1] = j
                            witness[1, 2] = k
                            witness[1, 3] = l
                        counts[1] += 1
    for g in range(N):
        for i in range(N):
            a = mtab[g, i]
            if a < 0:
                continue
            for j in range(N):
                b = mtab[g, j]
                if b < 0:
                    continue
                for k in range(N):
                    d = mtab[g, k]
                    if d < 0:
                        continue
                    if ctab[a, b, d] != ctab[i, j, k]:
                        if counts[2] == 0:
                            witness[2, 0] = g
                            witness[2, 1] = i
                            witness[2, 2] = j
                            witness[2, 3] = k
                        counts[2] += 1
    return counts, witness


_check_tables_jit = _maybe_jit(_check_tables_loops)


def _check_tables_numpy(ctab, mtab):
    N = ctab.shape[0]
    c = ctab.astype(np.int64)
    counts = np.zeros(3, dtype=np.int64)
    witness = np.full((3, 4), -1, dtype=np.int64)

    idx = np.arange(N)
    distinct = ((idx[:, None, None] != idx[None, :, None])
                & (idx[None, :, None] != idx[None, None, :])
                & (idx[:, None, None] != idx[None, None, :]))
    bad = ((c == 0) == distinct) | (np.abs(c) > 1)
    counts[0] = int(bad.sum())
    if counts[0]:
        witness[0, :3] = np.argwhere(bad)[0]

    for i in range(N):
        ci = c[i]
        s = ci[:, :, None] - ci[:, None, :] + ci[None, :, :] - c
        nz = np.nonzero(s)
        if len(nz[0]):
            if counts[1] == 0:
                witness[1] = (i, nz[0][0], nz[1][0], nz[2][0])
            counts[1] += len(nz[0])

    for g in range(N):
        mg = mtab[g]
        keep = np.nonzero(mg >= 0)[0]
        if len(keep) == 0:
            continue
        moved = mg[keep]
        before = c[np.ix_(keep, keep, keep)]
        after = c[np.ix_(moved, moved, moved)]
        diff = np.argwhere(before != after)
        if len(diff):
            if counts[2] == 0:
                i, j, k = keep[diff[0]]
                witness[2] = (g, i, j, k)
            counts[2] += len(diff)
    return counts, witness


def check_tables(ctab: np.ndarray, mtab: np.ndarray, use_numba: bool | None = None):
    """Count axiom violations on a finite table.

    ``ctab[i, j, k]`` is the orientation of elements i, j, k; ``mtab[g, i]`` is
    the index of the product g*i or -1 when it leaves the table.  Returns three
    (count, witness indices) pairs: nondegeneracy, cocycle identity, left
    invariance.
    """
    use = USE_NUMBA if use_numba is None else (use_numba and HAS_NUMBA)
    ctab = np.ascontiguousarray(ctab, dtype=np.int8)
    mtab = np.ascontiguousarray(mtab, dtype=np.int64)
    if use:
        counts, witness = _check_tables_jit(ctab, mtab)
    else:
        counts, witness = _check_tables_numpy(ctab, mtab)
    return [(int(counts[a]), tuple(int(v) for v in witness[a] if v >= 0)) for a in range(3)]


# -- left-invariant cyclic arrangements ------------------------------------

def _invariant_mask_loops(perms, n):
    P = perms.shape[0]
    mask = np.ones(P, dtype=np.bool_)
    pos = np.empty(n, dtype=np.int64)
    for p in range(P):
        for i in range(n):
            pos[perms[p, i]] = i
        ok = True
        for g in range(1, n):
            shift = (pos[(perms[p, 0] + g) % n]) % n
            for i in range(1, n):
                if pos[(perms[p, i] + g) % n] != (i + shift) % n:
                    ok = False
                    break
            if not ok:
                break
        mask[p] = ok
    return mask


_invariant_mask_jit = _maybe_jit(_invariant_mask_loops)


def _invariant_mask_numpy(perms, n):
    pos = np.argsort(perms, axis=1)
    ar = np.arange(n)
    mask = np.ones(perms.shape[0], dtype=bool)
    for g in range(1, n):
        moved = np.take_along_axis(pos, (perms + g) % n, axis=1)
        diff = (moved - ar[None, :]) % n
        mask &= np.all(diff == diff[:, :1], axis=1)
    return mask


def invariant_arrangements(perms: np.ndarray, n: int, use_numba: bool | None = None) -> np.ndarray:
    """Mask of arrangements (rows listing residues in circular order) fixed by every translation.

    A translation preserves all orientations iff it acts on positions as a rotation.
    """
    use = USE_NUMBA if use_numba is None else (use_numba and HAS_NUMBA)
    perms = np.ascontiguousarray(perms, dtype=np.int64)
    if use:
        return _invariant_mask_jit(perms, n)
    return _invariant_mask_numpy(perms, n)


# -- ball-restricted positive cone search ----------------------------------

def _assign(val, trail, tlen, e, s, inv):
    val[e] = s
    trail[tlen] = e
    tlen += 1
    j = inv[e]
    val[j] = -s
    trail[tlen] = j
    return tlen + 1


def _propagate(val, trail, tlen, start, inv, occ_ptr, occ_idx, trip):
    """Unit propagation of x>0, y>0 => xy>0 from the entries assigned since ``start``."""
    head = start
    steps = 0
    while head < tlen:
        q = trail[head]
        head += 1
        for t in range(occ_ptr[q], occ_ptr[q + 1]):
            steps += 1
            tr = occ_idx[t]
            x = trip[tr, 0]
            y = trip[tr, 1]
            z = trip[tr, 2]
            vx = val[x]
            vy = val[y]
            vz = val[z]
            if vx == 1 and vy == 1:
                if vz == -1:
                    return False, tlen, steps
                if vz == 0:
                    tlen = _assign(val, trail, tlen, z, 1, inv)
            elif vx == 1 and vz == -1:
                if vy == 1:
                    return False, tlen, steps
                if vy == 0:
                    tlen = _assign(val, trail, tlen, y, -1, inv)
            elif vy == 1 and vz == -1:
                if vx == 1:
                    return False, tlen, steps
                if vx == 0:
                    tlen = _assign(val, trail, tlen, x, -1, inv)
    return True, tlen, steps


def _cone_search_loops(n_el, inv, occ_ptr, occ_idx, trip, max_solutions, max_steps):
    val = np.zeros(n_el, dtype=np.int8)
    trail = np.zeros(n_el, dtype=np.int64)
    dec_var = np.zeros(n_el + 1, dtype=np.int64)
    dec_trail = np.zeros(n_el + 1, dtype=np.int64)
    dec_val = np.zeros(n_el + 1, dtype=np.int8)
    sols = np.zeros((max_solutions, n_el), dtype=np.int8)
    count = 0
    steps = 0
    status = 0  # 0 done, 1 too many solutions, 2 step cap
    tlen = 0
    depth = 0
    descend = True
    while True:
        if steps > max_steps:
            status = 2
            break
        ok = True
        if descend:
            v = -1
            for e in range(n_el):
                if val[e] == 0:
                    v = e
                    break
            if v == -1:
                if count == max_solutions:
                    status = 1
                    break
                sols[count, :] = val
                count += 1
                ok = False  # force backtracking to find the next solution
            else:
                dec_var[depth] = v
                dec_trail[depth] = tlen
                dec_val[depth] = 1
                depth += 1
                start = tlen
                tlen = _assign(val, trail, tlen, v, 1, inv)
                ok, tlen, st = _propagate(val, trail, tlen, start, inv, occ_ptr, occ_idx, trip)
                steps += st + 1
        if ok:
            descend = True
            continue
        # backtrack to the most recent decision that still has a branch left
        resumed = False
        while depth > 0:
            depth -= 1
            for t in range(dec_trail[depth], tlen):
                val[trail[t]] = 0
            tlen = dec_trail[depth]
            if dec_val[depth] == 1:
                dec_val[depth] = -1
                depth += 1
                start = tlen
                tlen = _assign(val, trail, tlen, dec_var[depth - 1], -1, inv)
                ok2, tlen, st = _propagate(val, trail, tlen, start, inv, occ_ptr, occ_idx, trip)
                steps += st + 1
                if ok2:
                    resumed = True
                    break
                # failed: loop continues and undoes this branch too
        if not resumed:
            break
        descend = True
    return sols[:count], status, steps


def _jit_family(*fns):
    """Compile mutually-calling helpers so that each resolves the others' jitted versions."""
    namespace = dict(globals())
    for fn in fns:
        namespace[fn.__name__] = njit(types.FunctionType(fn.__code__, namespace, fn.__name__))
    return [namespace[fn.__name__] for fn in fns]


if HAS_NUMBA:
    _, _, _cone_search_jit = _jit_family(_assign, _propagate, _cone_search_loops)


def cone_search(inv: np.ndarray, triples: np.ndarray, max_solutions: int, max_steps: int,
                use_numba: bool | None = None):
    """All sign assignments on a finite inverse-closed set satisfying the cone rules.

    ``inv[e]`` is the index of e^-1; each row (x, y, z) of ``triples`` says
    z = xy.  Returns (solutions, status, steps) where solutions is an int8 array
    of +-1 rows, status 0 means complete, 1 means the solution cap was hit and
    2 means the step cap was hit.
    """
    use = USE_NUMBA if use_numba is None else (use_numba and HAS_NUMBA)
    n_el = len(inv)
    if n_el == 0:
        return np.zeros((1, 0), dtype=np.int8), 0, 0
    inv = np.ascontiguousarray(inv, dtype=np.int64)
    trip = np.ascontiguousarray(triples, dtype=np.int64).reshape(-1, 3)
    # occurrence lists in CSR form
    owners = np.concatenate([trip[:, 0], trip[:, 1], trip[:, 2]]) if len(trip) else np.zeros(0, np.int64)
    rows = np.concatenate([np.arange(len(trip))] * 3) if len(trip) else np.zeros(0, np.int64)
    order = np.argsort(owners, kind="stable")
    occ_idx = np.ascontiguousarray(rows[order], dtype=np.int64)
    occ_ptr = np.zeros(n_el + 1, dtype=np.int64)
    np.add.at(occ_ptr, owners + 1, 1)
    occ_ptr = np.cumsum(occ_ptr)
    fn = _cone_search_jit if use else _cone_search_loops
    sols, status, steps = fn(n_el, inv, occ_ptr, occ_idx, trip, max_solutions, max_steps)
    return np.asarray(sols), int(status), int(steps)
