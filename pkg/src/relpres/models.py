"""Integer matrix models of presented groups.

A model sends every generator (X-letters, the stable letter and each
subgroup's own generators) to an invertible integer matrix.  Evaluating a
word and comparing with the identity gives a sound certificate of
nontriviality; when the model is declared faithful it decides the word
problem exactly.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


def as_matrix(rows) -> np.ndarray:
    return np.array([[int(a) for a in r] for r in rows], dtype=object)


def integer_inverse(m: np.ndarray) -> np.ndarray:
    """Inverse of a unimodular integer matrix (exact)."""
    n = m.shape[0]
    aug = [[m[i, j] for j in range(n)] + [int(i == j) for j in range(n)] for i in range(n)]
    from fractions import Fraction
    aug = [[Fraction(a) for a in row] for row in aug]
    for c in range(n):
        p = next(r for r in range(c, n) if aug[r][c] != 0)
        aug[c], aug[p] = aug[p], aug[c]
        piv = aug[c][c]
        aug[c] = [a / piv for a in aug[c]]
        for r in range(n):
            if r != c and aug[r][c] != 0:
                f = aug[r][c]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[c])]
    inv = [[aug[i][n + j] for j in range(n)] for i in range(n)]
    if any(a.denominator != 1 for row in inv for a in row):
        raise ValueError("model matrix is not unimodular")
    return as_matrix([[int(a) for a in row] for row in inv])


@dataclass
class Model:
    x: dict = field(default_factory=dict)
    t: np.ndarray | None = None
    subgroups: dict = field(default_factory=dict)
    faithful: bool = False

    def __post_init__(self):
        self.x = {k: as_matrix(v) for k, v in self.x.items()}
        if self.t is not None:
            self.t = as_matrix(self.t)
        self.subgroups = {lam: {g: as_matrix(m) for g, m in gens.items()}
                          for lam, gens in self.subgroups.items()}
        mats = list(self.x.values()) + [m for gens in self.subgroups.values() for m in gens.values()]
        if self.t is not None:
            mats.append(self.t)
        self.dim = mats[0].shape[0] if mats else 1
        self._inv = {}

    def _inverse(self, key, m):
        if key not in self._inv:
            self._inv[key] = integer_inverse(m)
        return self._inv[key]

    def letter_matrix(self, a) -> np.ndarray:
        if a.kind == "x":
            m = self.x[a.name]
            return m if a.sign > 0 else self._inverse(("x", a.name), m)
        if a.kind == "t":
            return self.t if a.sign > 0 else self._inverse(("t",), self.t)
        out = self.identity()
        gens = self.subgroups[a.name]
        for g, e in a.elem:
            m = gens[g] if e > 0 else self._inverse(("h", a.name, g), gens[g])
            for _ in range(abs(e)):
                out = out.dot(m)
        return out

    def identity(self) -> np.ndarray:
        return as_matrix(np.eye(self.dim, dtype=int).tolist())

    def evaluate(self, word) -> np.ndarray:
        out = self.identity()
        for a in word:
            out = out.dot(self.letter_matrix(a))
        return out

    def is_identity(self, word) -> bool:
        return bool((self.evaluate(word) == self.identity()).all())

    def covers(self, word) -> bool:
        for a in word:
            if a.kind == "x" and a.name not in self.x:
                return False
            if a.kind == "t" and self.t is None:
                return False
            if a.kind == "h" and a.name not in self.subgroups:
                return False
        return True

    def to_dict(self) -> dict:
        d = {"faithful": self.faithful,
             "x": {k: m.tolist() for k, m in sorted(self.x.items())},
             "subgroups": {lam: {g: m.tolist() for g, m in sorted(gens.items())}
                           for lam, gens in sorted(self.subgroups.items())}}
        if self.t is not None:
            d["t"] = self.t.tolist()
        return d

    @classmethod
    def from_dict(cls, d) -> "Model":
        return cls(x=d.get("x", {}), t=d.get("t"), subgroups=d.get("subgroups", {}),
                   faithful=bool(d.get("faithful", False)))
