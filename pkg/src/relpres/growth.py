"""Sampled integer growth functions and ⪯ comparisons.

A :class:`GrowthTable` holds ``f(1..N)``.  Every fit or bound check works on
finite samples only, so its verdicts are labelled "evidence at scale N".
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path
from typing import Sequence


@dataclass
class GrowthTable:
    values: list[int]
    exact: list[bool] | None = None
    provenance: str = ""
    witnesses: list | None = None

    def __post_init__(self):
        self.values = [int(v) for v in self.values]
        if any(v < 0 for v in self.values):
            raise ValueError("growth values must be nonnegative")
        if self.exact is None:
            self.exact = [True] * len(self.values)
        self.exact = [bool(e) for e in self.exact]
        if len(self.exact) != len(self.values):
            raise ValueError("exactness flags do not match values")

    @property
    def N(self) -> int:
        return len(self.values)

    def __len__(self):
        return len(self.values)

    def covers(self, n: int) -> bool:
        return 0 <= n <= self.N

    def __call__(self, n: int) -> int:
        if n == 0:
            return 0
        if not 1 <= n <= self.N:
            raise IndexError(f"table covers 1..{self.N}, asked for {n}")
        return self.values[n - 1]

    def is_exact(self, n: int) -> bool:
        return n == 0 or self.exact[n - 1]

    @property
    def all_exact(self) -> bool:
        return all(self.exact)

    @classmethod
    def from_function(cls, f, N: int, provenance: str = "") -> "GrowthTable":
        return cls([f(n) for n in range(1, N + 1)], provenance=provenance)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "value", "exact"])
        for n, (v, e) in enumerate(zip(self.values, self.exact), start=1):
            w.writerow([n, v, int(e)])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, provenance: str = "") -> "GrowthTable":
        rows = [r for r in csv.reader(io.StringIO(text)) if r and not r[0].startswith("#")]
        header = [h.strip() for h in rows[0]]
        ni = header.index("n")
        vi = header.index("value") if "value" in header else header.index("delta")
        ei = header.index("exact") if "exact" in header else header.index("exact_flag")
        data = sorted((int(r[ni]), int(r[vi]), r[ei].strip() in ("1", "true", "True")) for r in rows[1:])
        if [n for n, _, _ in data] != list(range(1, len(data) + 1)):
            raise ValueError("table must list n = 1..N without gaps")
        return cls([v for _, v, _ in data], [e for _, _, e in data], provenance)

    def save(self, path) -> None:
        Path(path).write_text(self.to_csv(), encoding="utf-8")

    @classmethod
    def load(cls, path) -> "GrowthTable":
        return cls.from_csv(Path(path).read_text(encoding="utf-8"), provenance=str(path))


def superadditive_closure(f: GrowthTable) -> GrowthTable:
    """Smallest superadditive majorant, via
    ``fbar(n) = max(f(n), max_{a<n} fbar(a) + fbar(n-a))``."""
    bar: list[int] = []
    exact: list[bool] = []
    for n in range(1, f.N + 1):
        best, ok = f(n), f.is_exact(n)
        for a in range(1, n):
            best = max(best, bar[a - 1] + bar[n - a - 1])
            ok = ok and exact[a - 1] and exact[n - a - 1]
        bar.append(best)
        exact.append(ok)
    return GrowthTable(bar, exact, f"closure of {f.provenance}".strip())


def is_superadditive(f: GrowthTable) -> bool:
    return all(f(a + b) >= f(a) + f(b) for a in range(1, f.N) for b in range(1, f.N - a + 1))


def pointwise_max(f: GrowthTable, g: GrowthTable) -> GrowthTable:
    """``n ↦ max(f(n), g(n))`` on the common range."""
    N = min(f.N, g.N)
    return GrowthTable([max(f(n), g(n)) for n in range(1, N + 1)],
                       [f.is_exact(n) and g.is_exact(n) for n in range(1, N + 1)],
                       f"max({f.provenance}, {g.provenance})")


def compose_bound(gamma: GrowthTable, n_max: int | None = None) -> GrowthTable:
    """``n ↦ γ̄(γ̄(n))``; entries whose inner value leaves the table are
    flagged lower-bound (value clamped to the last covered entry)."""
    bar = superadditive_closure(gamma)
    n_max = gamma.N if n_max is None else n_max
    vals, exact = [], []
    for n in range(1, n_max + 1):
        if n > bar.N:
            vals.append(bar(bar.N))
            exact.append(False)
            continue
        inner = bar(n)
        if inner > bar.N:
            vals.append(bar(bar.N))
            exact.append(False)
        else:
            vals.append(bar(inner))
            exact.append(bar.is_exact(n) and bar.is_exact(inner))
    return GrowthTable(vals, exact, f"closure∘closure of {gamma.provenance}")


@dataclass
class FitResult:
    status: str                       # "witness" | "fails" | "undetermined"
    constants: tuple | None = None
    violation: int | None = None
    scale: int = 0
    note: str = ""

    def __str__(self):
        head = f"evidence at scale N={self.scale}: "
        if self.status == "witness":
            A, B, C = self.constants
            return head + f"f(n) <= {A}*g({B}n) + {C}n holds on all sampled n"
        if self.status == "fails":
            return head + f"no constants in box; first violation at n*={self.violation}"
        return head + f"undetermined ({self.note})"


def _holds(f: GrowthTable, g: GrowthTable, A, B, C):
    for n in range(1, f.N + 1):
        if not g.covers(B * n):
            return None
        if f(n) > A * g(B * n) + C * n:
            return n
    return 0


def preceq_fit(f: GrowthTable, g: GrowthTable, box: int | Sequence[int] = 8) -> FitResult:
    """Lexicographically least integer ``(A, B, C)`` in the box with
    ``f(n) <= A g(Bn) + Cn`` for all sampled n."""
    if isinstance(box, int):
        box = (box, box, box)
    covered_any = False
    for A, B, C in product(range(1, box[0] + 1), range(1, box[1] + 1), range(1, box[2] + 1)):
        r = _holds(f, g, A, B, C)
        if r is None:
            continue
        covered_any = True
        if r == 0:
            note = "" if (f.all_exact and g.all_exact) else "tables contain lower-bound entries"
            return FitResult("witness", (A, B, C), scale=f.N, note=note)
    if not covered_any:
        return FitResult("undetermined", scale=f.N, note="g does not cover B*N for any B in box")
    r = _holds(f, g, *box)
    if r is None:
        # largest triple lacks coverage; report the largest covered B instead
        for B in range(box[1], 0, -1):
            r = _holds(f, g, box[0], B, box[2])
            if r is not None:
                break
    return FitResult("fails", violation=r, scale=f.N)


def compose_witnesses(w1: tuple, w2: tuple) -> tuple:
    """Constants for f ⪯ h from f ⪯ g (w1) and g ⪯ h (w2)."""
    A1, B1, C1 = w1
    A2, B2, C2 = w2
    return (A1 * A2, B1 * B2, A1 * C2 * B1 + C1)


@dataclass
class BoundReport:
    mode: str
    fit: FitResult
    bound: GrowthTable
    gamma: GrowthTable
    lines: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.fit.status == "witness"

    def __str__(self):
        return "\n".join(self.lines)


def theorem_bound_check(delta: GrowthTable, gamma: GrowthTable, which: str = "hnn",
                        box: int = 8, gamma2: GrowthTable | None = None) -> BoundReport:
    """Check δ ⪯ γ̄∘γ̄ on samples.  For ``which='amalgam'`` the base function
    is the pointwise maximum of ``gamma`` and ``gamma2``."""
    if which not in ("hnn", "amalgam"):
        raise ValueError("which must be 'hnn' or 'amalgam'")
    if which == "amalgam" and gamma2 is not None:
        gamma = pointwise_max(gamma, gamma2)
    bound = compose_bound(gamma, n_max=max(gamma.N, delta.N * box))
    fit = preceq_fit(delta, bound, box)
    lines = [f"mode={which} N={delta.N} box={box}",
             f"gamma: {gamma.values}",
             f"closure∘closure: {bound.values[:delta.N]}",
             f"delta: {delta.values}",
             str(fit)]
    if fit.status == "fails" and delta.all_exact and gamma.all_exact:
        lines.append("INCONSISTENT: exact tables violate the combination bound")
    return BoundReport(which, fit, bound, gamma, lines)
