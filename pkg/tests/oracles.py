"""Independent reference computations used to freeze expected values.

Nothing here imports the package under test.
"""

from fractions import Fraction
from itertools import combinations


def _rank(rows):
    rows = [list(r) for r in rows if any(r)]
    rank, col = 0, 0
    ncols = len(rows[0]) if rows else 0
    while rank < len(rows) and col < ncols:
        piv = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                f = Fraction(rows[i][col], rows[rank][col])
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
        col += 1
    return rank


def exterior_cohomology(n_gens, diff):
    """Cohomology dims of an exterior algebra on degree-1 generators 0..n-1.

    ``diff[k]`` lists pairs (i, j, c) with i < j meaning d e_k = Σ c e_i e_j.
    Basis: all subsets; sign of e_S e_T from sorting.
    """
    def wedge(s, t):
        if set(s) & set(t):
            return 0, None
        seq = list(s) + list(t)
        inv = sum(1 for a in range(len(seq)) for b in range(a + 1, len(seq)) if seq[a] > seq[b])
        return (-1) ** inv, tuple(sorted(seq))

    def d_subset(s):
        out = {}
        for pos, k in enumerate(s):
            sign = (-1) ** pos
            for i, j, c in diff.get(k, ()):
                left, right = s[:pos], s[pos + 1:]
                s1, m1 = wedge(left, (i, j))
                if m1 is None:
                    continue
                s2, m2 = wedge(m1, right)
                if m2 is None:
                    continue
                out[m2] = out.get(m2, 0) + sign * s1 * s2 * c
        return out

    bases = [list(combinations(range(n_gens), k)) for k in range(n_gens + 1)]
    ranks = []
    for k in range(n_gens + 1):
        if k == n_gens:
            ranks.append(0)
            continue
        tgt = {m: r for r, m in enumerate(bases[k + 1])}
        rows = []
        for s in bases[k]:
            row = [0] * len(bases[k + 1])
            for m, c in d_subset(s).items():
                row[tgt[m]] += c
            rows.append(row)
        ranks.append(_rank(rows))
    return [len(bases[k]) - ranks[k] - (ranks[k - 1] if k else 0) for k in range(n_gens + 1)]


def hall_basis_counts(n_letters, max_len):
    """Number of basic commutators (Hall basis) of each length.

    Basic commutators built recursively with the classical ordering: a word
    w = [u, v] is basic when u, v are basic, u > v, and if u = [x, y] then
    y <= v.  Elements are ordered by length, then by creation order.
    """
    basic = [[(("g", i),) for i in range(n_letters)]]
    order = {}
    counter = 0
    for w in basic[0]:
        order[w] = counter
        counter += 1
    structure = {w: None for w in basic[0]}
    for length in range(2, max_len + 1):
        layer = []
        for lu in range(1, length):
            lv = length - lu
            for u in basic[lu - 1]:
                for v in basic[lv - 1]:
                    if not order[u] > order[v]:
                        continue
                    su = structure[u]
                    if su is not None and order[su[1]] > order[v]:
                        continue
                    w = (("c", u, v),)
                    structure[w] = (u, v)
                    layer.append(w)
        for w in layer:
            order[w] = counter
            counter += 1
        basic.append(layer)
    return [len(layer) for layer in basic]


def witt_dimension(n_letters, length):
    """Necklace/Witt formula, used as a second opinion on the Hall counts."""
    def mobius(n):
        res, p, m = 1, 2, n
        while p * p <= m:
            if m % p == 0:
                m //= p
                if m % p == 0:
                    return 0
                res = -res
            p += 1
        if m > 1:
            res = -res
        return res

    total = sum(mobius(d) * n_letters ** (length // d) for d in range(1, length + 1) if length % d == 0)
    return total // length
