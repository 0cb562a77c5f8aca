"""Hot loops: subring closure and associative-table enumeration.

Every function here is written in the numba-compatible subset of
Python/numpy so it runs unchanged when ``RINGCOVER_NUMBA=0``.
"""
import numpy as np

from ._accel import njit


@njit(cache=True)
def closure_mask(add, mul, seed):
    """Smallest subring containing the elements flagged in ``seed``.

    ``add`` and ``mul`` are the full element tables; index 0 is zero.
    Additive closure alone suffices for negatives in a finite group.
    """
    n = add.shape[0]
    inside = np.zeros(n, np.bool_)
    members = np.empty(n, np.int64)
    inside[0] = True
    members[0] = 0
    count = 1
    for i in range(n):
        if seed[i] and not inside[i]:
            inside[i] = True
            members[count] = i
            count += 1
    done = 0
    while done < count:
        a = members[done]
        for j in range(done + 1):
            b = members[j]
            c = add[a, b]
            if not inside[c]:
                inside[c] = True
                members[count] = c
                count += 1
            c = mul[a, b]
            if not inside[c]:
                inside[c] = True
                members[count] = c
                count += 1
            c = mul[b, a]
            if not inside[c]:
                inside[c] = True
                members[count] = c
                count += 1
        done += 1
    return inside


@njit(cache=True)
def _triple_status(c, isset, k, i, j, l):
    # 1 = associative on (e_i, e_j, e_l), 0 = violated, -1 = not yet decidable
    if not isset[i * k + j] or not isset[j * k + l]:
        return -1
    v = c[i * k + j]
    lhs = 0
    for t in range(k):
        if (v >> t) & 1:
            if not isset[t * k + l]:
                return -1
            lhs ^= c[t * k + l]
    w = c[j * k + l]
    rhs = 0
    for t in range(k):
        if (w >> t) & 1:
            if not isset[i * k + t]:
                return -1
            rhs ^= c[i * k + t]
    if lhs == rhs:
        return 1
    return 0


@njit(cache=True)
def _consistent(c, isset, k):
    for i in range(k):
        for j in range(k):
            for l in range(k):
                if _triple_status(c, isset, k, i, j, l) == 0:
                    return False
    return True


@njit(cache=True)
def assoc_tables_f2(k, order_pos, value_order, lo, hi, cap, stop_after):
    """Depth-first enumeration of associative algebras on GF(2)^k.

    A table is the flat array ``c[i*k + j]`` = bitmask of ``e_i e_j``.
    Position ``order_pos[d]`` is filled at depth ``d`` with
    ``value_order[d, idx]`` for ``lo[d] <= idx < hi[d]``. Every partial
    table is checked against all basis triples whose products are
    already determined.

    Returns ``(tables, total)``; ``tables`` holds at most ``cap`` rows and
    ``total`` counts every complete table found (search stops once
    ``stop_after`` tables are found, if positive).
    """
    m = k * k
    out = np.empty((cap, m), np.int64)
    found = 0
    c = np.zeros(m, np.int64)
    isset = np.zeros(m, np.bool_)
    idx = np.empty(m, np.int64)
    d = 0
    idx[0] = lo[0] - 1
    while d >= 0:
        p = order_pos[d]
        idx[d] += 1
        if idx[d] >= hi[d]:
            isset[p] = False
            d -= 1
            continue
        c[p] = value_order[d, idx[d]]
        isset[p] = True
        if not _consistent(c, isset, k):
            continue
        if d == m - 1:
            if found < cap:
                for t in range(m):
                    out[found, t] = c[t]
            found += 1
            if stop_after > 0 and found >= stop_after:
                break
            continue
        d += 1
        idx[d] = lo[d] - 1
    n_out = found if found < cap else cap
    return out[:n_out].copy(), found


def fill_order(k):
    """Entry order used by the enumerator: grow the k x k table corner-first."""
    order = []
    for s in range(k):
        for t in range(s):
            order.append(t * k + s)
            order.append(s * k + t)
        order.append(s * k + s)
    return np.array(order, dtype=np.int64)
