"""Brute-force class counts for the enumeration at small depth.

States are (triples, quads, quints) as frozensets of sorted tuples. Closure branches on
every open pair; classes are deduplicated by the lexicographically least relabeling,
computed with numpy over all 40320 permutations.
"""
import itertools
import sys

import numpy as np

PLANES = range(8)
PERMS = np.array(list(itertools.permutations(PLANES)), dtype=np.int64)


def mask(s):
    return sum(1 << i for i in s)


def lex_rank(k):
    subs = list(itertools.combinations(PLANES, k))
    table = np.full(256, -1, dtype=np.int64)
    for r, s in enumerate(subs):
        table[mask(s)] = r
    return table


RANK = {k: lex_rank(k) for k in (3, 4, 5)}


def images(sets, k):
    """Sorted ranks of the images of `sets` under every permutation, one row each."""
    if not sets:
        return np.zeros((len(PERMS), 0), dtype=np.int64)
    cols = []
    for s in sets:
        m = np.zeros(len(PERMS), dtype=np.int64)
        for i in s:
            m |= 1 << PERMS[:, i]
        cols.append(RANK[k][m])
    return np.sort(np.stack(cols, axis=1), axis=1)


def canonical(state):
    t, q, p = state
    rows = np.concatenate(
        [images(sorted(q), 4), images(sorted(t), 3), images(sorted(p), 5)], axis=1
    )
    if rows.shape[1] == 0:
        return ()
    order = np.lexsort(rows.T[::-1])
    return (len(q), len(t), len(p)) + tuple(rows[order[0]])


def violates(t, p):
    if len(t) > 4 or len(p) > 4:
        return True
    if any(len(set(a) & set(b)) >= 2 for a, b in itertools.combinations(t, 2)):
        return True
    return any(len(set(a) & set(b)) >= 4 for a, b in itertools.combinations(p, 2))


def close(state):
    """All fixpoints of the forcing and branching rules."""
    out = set()
    todo = [state]
    seen = set()
    while todo:
        t, q, p = todo.pop()
        q = set(q)
        for tr in t:
            q |= {tuple(sorted(tr + (x,))) for x in PLANES if x not in tr}
        for pt in p:
            q |= set(itertools.combinations(pt, 4))
        s = (t, frozenset(q), p)
        if s in seen:
            continue
        seen.add(s)
        if violates(t, p):
            continue
        opens = []
        for a, b in itertools.combinations(sorted(q), 2):
            common = tuple(sorted(set(a) & set(b)))
            if len(common) == 3:
                union = tuple(sorted(set(a) | set(b)))
                if common not in t and union not in p:
                    opens.append((common, union))
        if not opens:
            out.add(s)
            continue
        common, union = opens[0]
        todo.append((t | {common}, s[1], p))
        todo.append((t, s[1], p | {union}))
    return out


def main(max_depth):
    start = (frozenset(), frozenset({(0, 1, 2, 3)}), frozenset())
    classes = {canonical(s): s for s in close(start)}
    counts = [len(classes)]
    frontier = list(classes.values())
    all_quads = list(itertools.combinations(PLANES, 4))
    for _ in range(2, max_depth + 1):
        new = {}
        for t, q, p in frontier:
            for extra in all_quads:
                if extra in q:
                    continue
                for s in close((t, q | {extra}, p)):
                    key = canonical(s)
                    if key not in classes and key not in new:
                        new[key] = s
        classes.update(new)
        counts.append(len(new))
        frontier = list(new.values())
    print(" ".join(map(str, counts)))


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 3)
