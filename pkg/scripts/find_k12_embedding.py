#!/usr/bin/env python3
"""Search for a triangular embedding of K_12.

Two symmetric ansatzes are tried, cheapest first:

1. Full cyclic Z_12 symmetry (row i = row 0 shifted by i).  Faces traced
   from such a system are all triangles iff the 'next difference' map
   T(d) = nd(-d) splits the nonzero residues into orbits d, T(d), T^2(d)
   with d + T(d) + T^2(d) == 0 (mod 12), nd being the successor map of
   the row-0 sequence.  (This case turns out to be infeasible; the
   search documents that.)

2. Z_11 symmetry with one fixed vertex X: vertices are Z_11 + {X},
   rot_X = (0 1 2 ... 10), rot_i = rot_0 + i.  Tracing forces the row-0
   sequence to contain ... 1 X 10 ... consecutively, and the remaining
   condition is again an orbit condition: T(d) = succ(11-d) must split
   {1..9} into ordered triples summing to 0 mod 11, with the induced
   successor map forming a single 11-cycle.

The first hit is verified by brute-force face tracing and written to
src/hypdel/data/k12_rotation.txt.
"""

import itertools
import sys
from pathlib import Path

OUT = Path(__file__).resolve().parents[1] / "src" / "hypdel" / "data" / \
    "k12_rotation.txt"


def trace_check(rows):
    """Independent check: all faces of the rotation system are triangles
    and the Euler count gives genus 6."""
    n = len(rows)
    nxt = {}
    for v, row in rows.items():
        for k, u in enumerate(row):
            nxt[(v, u)] = row[(k + 1) % len(row)]
    unused = set(nxt)
    faces = 0
    while unused:
        u, v = next(iter(unused))
        start, ln = (u, v), 0
        while True:
            unused.discard((u, v))
            u, v = v, nxt[(v, u)]
            ln += 1
            if (u, v) == start:
                break
        if ln != 3:
            return False
        faces += 1
    e = sum(len(r) for r in rows.values()) // 2
    return n - e + faces == 2 - 2 * 6


def partitions_into_triples(elems, modulus):
    def rec(remaining, chosen):
        if not remaining:
            yield list(chosen)
            return
        a = remaining[0]
        for b, c in itertools.permutations(remaining[1:], 2):
            if (a + b + c) % modulus == 0:
                chosen.append((a, b, c))
                rem = [x for x in remaining if x not in (a, b, c)]
                yield from rec(rem, chosen)
                chosen.pop()
    yield from rec(list(elems), [])


def search_z12():
    res = [r for r in range(1, 12) if r not in (4, 8)]
    for part in partitions_into_triples(res, 12):
        T = {4: 4, 8: 8}
        for a, b, c in part:
            T[a], T[b], T[c] = b, c, a
        nd = {x: T[(-x) % 12] for x in range(1, 12)}
        x, seen, cyc = 1, set(), []
        while x not in seen:
            seen.add(x)
            cyc.append(x)
            x = nd[x]
        if len(cyc) != 11:
            continue
        return {i: [(i + d) % 12 for d in cyc] for i in range(12)}
    return None


def search_z11():
    X = 11
    for part in partitions_into_triples(range(1, 10), 11):
        T = {}
        for a, b, c in part:
            T[a], T[b], T[c] = b, c, a
        succ = {1: X, X: 10}
        for e in range(2, 11):
            succ[e] = T[11 - e]
        x, seen, cyc = 1, set(), []
        while x not in seen:
            seen.add(x)
            cyc.append(x)
            x = succ[x]
        if len(cyc) != 11:
            continue
        rows = {}
        for i in range(11):
            rows[i] = [X if d == X else (i + d) % 11 for d in cyc]
        rows[X] = list(range(11))
        return rows
    return None


def search_backtrack(n=12):
    """General search: a triangular embedding of K_n is a decomposition of
    the complete directed graph into directed triangles whose corner maps
    rho_v(u) = w (triangle u -> v -> w traced at v) each close into a
    single (n-1)-cycle.  Backtracks over uncovered directed edges; vertex
    0's rotation is fixed to (1 2 ... n-1) up to relabeling."""
    rho = {v: {} for v in range(n)}   # partial successor maps
    inv = {v: {} for v in range(n)}

    def cycle_len_if_closes(v, a, b):
        # adding rho_v[a] = b; returns length of the cycle it would close,
        # or 0 if it just extends a path
        if b == a:
            return 1
        ln, x = 1, b
        while x in rho[v]:
            x = rho[v][x]
            ln += 1
            if x == a:
                return ln  # number of edges in the would-be cycle
        return 0

    def set_rho(v, a, b):
        rho[v][a] = b
        inv[v][b] = a

    def unset_rho(v, a, b):
        del rho[v][a]
        del inv[v][b]

    def can_set(v, a, b):
        if a in rho[v] or b in inv[v]:
            return False
        cl = cycle_len_if_closes(v, a, b)
        return cl == 0 or cl == n - 1

    # seed: triangles (k, 0, k+1) fixing rho_0 = (1 2 ... n-1)
    for k in range(1, n):
        k2 = k % (n - 1) + 1
        for (v, a, b) in ((0, k, k2), (k2, 0, k), (k, k2, 0)):
            if not can_set(v, a, b):
                return None
            set_rho(v, a, b)

    # edge (u,v) covered iff rho_v has an entry for u
    def next_edge():
        for u in range(n):
            for v in range(n):
                if u != v and u not in rho[v]:
                    return (u, v)
        return None

    def rec():
        e = next_edge()
        if e is None:
            return True
        u, v = e
        for w in range(n):
            if w in (u, v):
                continue
            trip = ((v, u, w), (w, v, u), (u, w, v))
            if all(can_set(*t) for t in trip):
                for t in trip:
                    set_rho(*t)
                if rec():
                    return True
                for t in trip:
                    unset_rho(*t)
        return False

    if not rec():
        return None
    rows = {}
    for v in range(n):
        a = next(iter(rho[v]))
        row = [a]
        while True:
            a = rho[v][a]
            if a == row[0]:
                break
            row.append(a)
        rows[v] = row
    return rows


def main():
    rows = search_z12()
    tag = "Z12"
    if rows is None:
        print("no Z12-symmetric solution; trying Z11 + fixed vertex")
        rows = search_z11()
        tag = "Z11"
    if rows is None:
        print("no Z11-symmetric solution; general backtracking search")
        rows = search_backtrack()
        tag = "backtracking"
    if rows is None:
        print("no solution found")
        return 1
    if not trace_check(rows):
        print("candidate failed independent face tracing")
        return 1
    OUT.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"{v}: " + " ".join(str(u) for u in rows[v])
             for v in sorted(rows)]
    OUT.write_text("\n".join(lines) + "\n")
    print(f"found ({tag} symmetry), verified, wrote {OUT}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
