# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; see ``_kernels_py`` for the reference semantics."""
import numpy as np
cimport numpy as cnp

cnp.import_array()


def perm_closure(gens, Py_ssize_t npoints):
    cdef Py_ssize_t k = len(gens)
    cdef cnp.ndarray[cnp.int32_t, ndim=2] G = np.ascontiguousarray(
        np.asarray(gens, dtype=np.int32).reshape(k, npoints))
    cdef int[:, ::1] gv = G
    cap = 64
    cdef cnp.ndarray[cnp.int32_t, ndim=2] E = np.empty((cap, npoints), dtype=np.int32)
    cdef cnp.ndarray[cnp.int32_t, ndim=2] R = np.empty((cap, max(k, 1)), dtype=np.int32)
    parent = [-1]
    pgen = [-1]
    cdef int[:, ::1] ev = E
    cdef int[:, ::1] rv = R
    cdef Py_ssize_t i = 0, s, x, m = 1, j
    cdef cnp.ndarray[cnp.int32_t, ndim=1] buf = np.empty(npoints, dtype=np.int32)
    cdef int[::1] bv = buf
    for x in range(npoints):
        ev[0, x] = x
    index = {E[0].tobytes(): 0}
    while i < m:
        for s in range(k):
            for x in range(npoints):
                bv[x] = ev[i, gv[s, x]]
            key = buf.tobytes()
            jj = index.get(key)
            if jj is None:
                if m == E.shape[0]:
                    E = np.concatenate([E, np.empty_like(E)])
                    R = np.concatenate([R, np.empty_like(R)])
                    ev = E
                    rv = R
                j = m
                index[key] = j
                for x in range(npoints):
                    ev[j, x] = bv[x]
                parent.append(i)
                pgen.append(s)
                m += 1
            else:
                j = jj
            rv[i, s] = j
        i += 1
    return (E[:m].copy(), R[:m, :k].copy(),
            np.array(parent, dtype=np.int32), np.array(pgen, dtype=np.int32))


def table_from_right(right, parent, pgen):
    cdef const int[:, ::1] rv = np.ascontiguousarray(right, dtype=np.int32)
    cdef const int[::1] pv = np.ascontiguousarray(parent, dtype=np.int32)
    cdef const int[::1] qv = np.ascontiguousarray(pgen, dtype=np.int32)
    cdef Py_ssize_t m = rv.shape[0], g, h
    out = np.empty((m, m), dtype=np.int32)
    cdef int[:, ::1] mv = out
    for g in range(m):
        mv[g, 0] = g
        for h in range(1, m):
            mv[g, h] = rv[mv[g, pv[h]], qv[h]]
    return out


def is_associative(mul):
    cdef const int[:, ::1] t = np.ascontiguousarray(mul, dtype=np.int32)
    cdef Py_ssize_t m = t.shape[0], a, b, c
    cdef int ab
    for a in range(m):
        for b in range(m):
            ab = t[a, b]
            for c in range(m):
                if t[ab, c] != t[a, t[b, c]]:
                    return False
    return True


def twisted_action_table(mul, inv, zeta, K, L):
    cdef const int[:, ::1] t = np.ascontiguousarray(mul, dtype=np.int32)
    cdef const int[::1] iv = np.ascontiguousarray(inv, dtype=np.int32)
    cdef const int[::1] zv = np.ascontiguousarray(zeta, dtype=np.int32)
    cdef const int[::1] kv = np.ascontiguousarray(K, dtype=np.int32)
    cdef const int[::1] lv = np.ascontiguousarray(L, dtype=np.int32)
    cdef Py_ssize_t m = t.shape[0], nk = kv.shape[0], nl = lv.shape[0], a, j
    cdef int h
    posarr = np.full(m, -1, dtype=np.int32)
    cdef int[::1] pos = posarr
    for j in range(nl):
        pos[lv[j]] = j
    out = np.empty((nk, nl), dtype=np.int32)
    cdef int[:, ::1] ov = out
    for a in range(nk):
        h = kv[a]
        for j in range(nl):
            ov[a, j] = pos[t[t[zv[h], lv[j]], iv[h]]]
    return out


def action_orbits(act):
    cdef const int[:, ::1] av = np.ascontiguousarray(act, dtype=np.int32)
    cdef Py_ssize_t k = av.shape[0], n = av.shape[1], j, h
    cdef int nxt = 0
    labels = np.full(n, -1, dtype=np.int32)
    cdef int[::1] lv = labels
    for j in range(n):
        if lv[j] != -1:
            continue
        for h in range(k):
            lv[av[h, j]] = nxt
        nxt += 1
    return labels


def twisted_centralizer_sizes(mul, zeta):
    cdef const int[:, ::1] t = np.ascontiguousarray(mul, dtype=np.int32)
    cdef const int[::1] zv = np.ascontiguousarray(zeta, dtype=np.int32)
    cdef Py_ssize_t m = t.shape[0], g, h
    cdef long c
    out = np.zeros(m, dtype=np.int64)
    cdef long[::1] ov = out
    for g in range(m):
        c = 0
        for h in range(m):
            if t[zv[h], g] == t[g, h]:
                c += 1
        ov[g] = c
    return out
