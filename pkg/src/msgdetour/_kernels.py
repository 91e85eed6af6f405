"""Inner loops over CSR adjacency arrays.

Every function here is written in the numba-compatible subset of Python and
wrapped by :func:`msgdetour._accel.njit`.
"""

import numpy as np

from ._accel import njit


@njit
def detour_slot_counts(indptr, indices, n, k, lo, hi, out, budget):
    """Count detour paths for every CSR slot of sources ``lo..hi-1``.

    For source ``s`` and slot ``p`` (neighbour ``t = indices[p]``), ``out[p]``
    receives the number of simple paths ``s -> t`` with 2..k edges. One
    depth-bounded DFS per source serves all of its incident edges: an arrival at
    a neighbour of ``s`` at depth >= 2 closes a detour, and the walk continues
    through that node for longer detours to other neighbours.

    Returns the number of DFS extensions performed, or -1 once that exceeds
    ``budget``.
    """
    on_path = np.zeros(n, dtype=np.bool_)
    is_nbr = np.zeros(n, dtype=np.bool_)
    hits = np.zeros(n, dtype=np.int64)
    stack_node = np.empty(k + 1, dtype=np.int64)
    stack_ptr = np.empty(k + 1, dtype=np.int64)
    states = 0
    for s in range(lo, hi):
        for p in range(indptr[s], indptr[s + 1]):
            is_nbr[indices[p]] = True
            hits[indices[p]] = 0
        on_path[s] = True
        stack_node[0] = s
        stack_ptr[0] = indptr[s]
        depth = 0
        while depth >= 0:
            v = stack_node[depth]
            p = stack_ptr[depth]
            if p == indptr[v + 1]:
                on_path[v] = False
                depth -= 1
                continue
            stack_ptr[depth] = p + 1
            w = indices[p]
            if on_path[w]:
                continue
            states += 1
            if states > budget:
                return -1
            nd = depth + 1
            if nd >= 2 and is_nbr[w]:
                hits[w] += 1
            if nd < k:
                depth = nd
                stack_node[depth] = w
                stack_ptr[depth] = indptr[w]
                on_path[w] = True
        for p in range(indptr[s], indptr[s + 1]):
            out[p] = hits[indices[p]]
            is_nbr[indices[p]] = False
    return states


@njit
def bfs_all_pairs(indptr, indices, n):
    """Unweighted shortest-path distances; -1 marks unreachable pairs."""
    dist = np.full((n, n), -1, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    for s in range(n):
        row = dist[s]
        row[s] = 0
        queue[0] = s
        head = 0
        tail = 1
        while head < tail:
            v = queue[head]
            head += 1
            for p in range(indptr[v], indptr[v + 1]):
                w = indices[p]
                if row[w] < 0:
                    row[w] = row[v] + 1
                    queue[tail] = w
                    tail += 1
    return dist


@njit
def jacobi_eigh(a, tol, max_sweeps):
    """Cyclic Jacobi diagonalisation of a symmetric matrix.

    Returns ``(eigenvalues, eigenvectors_as_columns, sweeps)`` unsorted; sweeps
    is -1 when the off-diagonal Frobenius norm is still >= ``tol`` after
    ``max_sweeps``.
    """
    n = a.shape[0]
    a = a.copy()
    v = np.eye(n)
    sweeps = 0
    while True:
        off = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    off += a[i, j] * a[i, j]
        if np.sqrt(off) < tol:
            break
        if sweeps == max_sweeps:
            sweeps = -1
            break
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if theta >= 0.0:
                    t = 1.0 / (theta + np.sqrt(1.0 + theta * theta))
                else:
                    t = -1.0 / (-theta + np.sqrt(1.0 + theta * theta))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                for r in range(n):
                    arp = a[r, p]
                    arq = a[r, q]
                    a[r, p] = c * arp - s * arq
                    a[r, q] = s * arp + c * arq
                for r in range(n):
                    apr = a[p, r]
                    aqr = a[q, r]
                    a[p, r] = c * apr - s * aqr
                    a[q, r] = s * apr + c * aqr
                for r in range(n):
                    vrp = v[r, p]
                    vrq = v[r, q]
                    v[r, p] = c * vrp - s * vrq
                    v[r, q] = s * vrp + c * vrq
    w = np.empty(n)
    for i in range(n):
        w[i] = a[i, i]
    return w, v, sweeps
