"""Brute-force relative area by iterative deepening over linear words.

Independent of the cyclic search in ``relpres.area``: it works on plain
(not cyclic) words and tries every move, inserting any cyclic permutation of
a relator or its inverse at any position.  Replacing a subword u by v with
u v^-1 a relator permutation is the same as inserting u^-1 v after u, so
insertions alone are complete.
"""
from relpres.words import invert, normalize


def _product(b, a, oracles, memo):
    key = (b, a)
    if key not in memo:
        o = oracles[a.name]
        e = o.multiply(b.elem, a.elem)
        memo[key] = None if o.is_identity(e) is True else a._replace(elem=o.canon(e))
    return memo[key]


def _key(a):
    return (a.kind, a.name) if a.kind == "h" else (a.kind, a.name, a.sign)


def _partner(a):
    return (a.kind, a.name) if a.kind == "h" else (a.kind, a.name, -a.sign)


def _splice(u, i, middle, oracles, memo):
    """Normal form of u[:i] + middle + u[i:] when u and middle are normal forms."""
    top = i                 # u[:top] is the untouched part of the prefix
    stack = []              # letters produced after u[:top]
    rest = middle + u[i:]
    m = len(middle)
    for j, a in enumerate(rest):
        last = stack[-1] if stack else (u[top - 1] if top else None)
        if last is not None and _partner(last) == _key(a):
            if stack:
                stack.pop()
            else:
                top -= 1
            if a.kind == "h":
                c = _product(last, a, oracles, memo)
                if c is not None:
                    stack.append(c)
        elif j >= m:
            # the suffix is reduced, so nothing further can interact
            return u[:top] + tuple(stack) + rest[j:]
        else:
            stack.append(a)
    return u[:top] + tuple(stack)


def _pieces(p):
    out = set()
    for r in p.relators:
        for base in (tuple(r), invert(r)):
            for k in range(len(base)):
                out.add(base[k:] + base[:k])
    return sorted(out, key=repr)


def iddfs_area(p, w, max_depth, max_len=None):
    """Least number of moves reducing ``w`` to the empty word, or None."""
    start = normalize(w, p)
    if not start:
        return 0
    pieces = _pieces(p)
    oracles = p.all_oracles()
    memo = {}
    M = max((len(r) for r in p.relators), default=0)
    cap = len(start) + 2 * M if max_len is None else max_len
    failed = {}
    pieceset = set(pieces)
    single = {}

    def one_move(u):
        # A P B = 1 iff B A = P^-1, and the inverses of pieces are pieces
        if u not in single:
            single[u] = any(_splice(u[i:], len(u) - i, u[:i], oracles, memo) in pieceset
                            for i in range(len(u)))
        return single[u]

    def dfs(u, budget):
        if budget == 1:
            return one_move(u)
        if failed.get(u, -1) >= budget:
            return False
        children = set()
        for piece in pieces:
            for i in range(len(u) + 1):
                v = _splice(u, i, piece, oracles, memo)
                if not v:
                    return True
                if len(v) <= cap:
                    children.add(v)
        for v in sorted(children, key=len):
            if dfs(v, budget - 1):
                return True
        failed[u] = budget
        return False

    for d in range(1, max_depth + 1):
        if dfs(start, d):
            return d
    return None
