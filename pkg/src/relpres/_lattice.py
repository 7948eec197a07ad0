"""Integer lattice membership via row echelon form over Z."""
from __future__ import annotations


def echelon(rows: list[list[int]], ncols: int) -> list[list[int]]:
    rows = [list(r) for r in rows if any(r)]
    basis: list[list[int]] = []
    col = 0
    while rows and col < ncols:
        live = [r for r in rows if r[col] != 0]
        rest = [r for r in rows if r[col] == 0]
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[col]))
            p = live[0]
            nxt = [p]
            for r in live[1:]:
                q = r[col] // p[col]
                r = [a - q * b for a, b in zip(r, p)]
                if r[col] != 0:
                    nxt.append(r)
                elif any(r):
                    rest.append(r)
            live = nxt
        if live:
            p = live[0]
            if p[col] < 0:
                p = [-a for a in p]
            basis.append(p)
        rows = rest
        col += 1
    return basis


def in_lattice(rows: list[list[int]], v: list[int]) -> bool:
    """True iff ``v`` is an integer combination of ``rows``."""
    n = len(v)
    v = list(v)
    for p in echelon(rows, n):
        c = next(i for i, a in enumerate(p) if a != 0)
        if v[c] % p[c]:
            return False
        q = v[c] // p[c]
        v = [a - q * b for a, b in zip(v, p)]
    return not any(v)
