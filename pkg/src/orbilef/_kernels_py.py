"""Pure-Python kernels. Same signatures and results as the compiled ``_kernels``.

All index arrays are ``numpy.int32``. Products follow function composition:
``mul[g, h]`` is the element acting as ``g`` after ``h``.
"""
import numpy as np


def perm_closure(gens, npoints):
    """Breadth-first closure of permutation generators.

    Returns ``(elems, right, parent, pgen)`` where ``elems[0]`` is the identity,
    ``right[g, s] = g * gens[s]`` and every non-identity element ``h`` satisfies
    ``h = elems[parent[h]] * gens[pgen[h]]`` with ``parent[h] < h``.
    """
    gens = [tuple(int(x) for x in g) for g in gens]
    k = len(gens)
    ident = tuple(range(npoints))
    elems = [ident]
    index = {ident: 0}
    parent = [-1]
    pgen = [-1]
    right = []
    i = 0
    while i < len(elems):
        g = elems[i]
        row = []
        for s, gen in enumerate(gens):
            prod = tuple(g[gen[x]] for x in range(npoints))
            j = index.get(prod)
            if j is None:
                j = len(elems)
                index[prod] = j
                elems.append(prod)
                parent.append(i)
                pgen.append(s)
            row.append(j)
        right.append(row)
        i += 1
    m = len(elems)
    return (
        np.array(elems, dtype=np.int32).reshape(m, npoints),
        np.array(right, dtype=np.int32).reshape(m, k),
        np.array(parent, dtype=np.int32),
        np.array(pgen, dtype=np.int32),
    )


def table_from_right(right, parent, pgen):
    m = right.shape[0]
    mul = [[0] * m for _ in range(m)]
    right = right.tolist()
    parent = parent.tolist()
    pgen = pgen.tolist()
    for g in range(m):
        row = mul[g]
        row[0] = g
        for h in range(1, m):
            row[h] = right[row[parent[h]]][pgen[h]]
    return np.array(mul, dtype=np.int32).reshape(m, m)


def is_associative(mul):
    t = mul.tolist()
    m = len(t)
    for a in range(m):
        ta = t[a]
        for b in range(m):
            ab = ta[b]
            tab = t[ab]
            tb = t[b]
            for c in range(m):
                if tab[c] != ta[tb[c]]:
                    return False
    return True


def twisted_action_table(mul, inv, zeta, K, L):
    """``act[a, j]`` = position in ``L`` of ``zeta(K[a]) * L[j] * K[a]^-1``, or -1."""
    t = mul.tolist()
    inv = inv.tolist()
    zeta = zeta.tolist()
    pos = {int(g): j for j, g in enumerate(L)}
    act = []
    for h in K:
        h = int(h)
        zh = t[zeta[h]]
        hi = inv[h]
        act.append([pos.get(t[zh[int(g)]][hi], -1) for g in L])
    return np.array(act, dtype=np.int32).reshape(len(K), len(L))


def action_orbits(act):
    """Orbit labels for a group action given by its action table.

    Points are scanned in index order; orbit ids are assigned in order of
    their smallest point.
    """
    k, n = act.shape
    cols = act.T.tolist()
    labels = [-1] * n
    nxt = 0
    for j in range(n):
        if labels[j] != -1:
            continue
        for x in cols[j]:
            labels[x] = nxt
        nxt += 1
    return np.array(labels, dtype=np.int32)


def twisted_centralizer_sizes(mul, zeta):
    """``out[g] = #{h : zeta(h) g == g h}``."""
    t = mul.tolist()
    zeta = zeta.tolist()
    m = len(t)
    out = [0] * m
    for g in range(m):
        tg = t[g]
        c = 0
        for h in range(m):
            if t[zeta[h]][g] == tg[h]:
                c += 1
        out[g] = c
    return np.array(out, dtype=np.int64)
