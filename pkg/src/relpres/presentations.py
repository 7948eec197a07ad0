"""Finite relative presentations and their constructors.

``⟨X, H_λ (λ ∈ Λ) | R⟩`` is stored as a :class:`RelativePresentation`.
Constructors build free products, HNN-extensions over an associated
subgroup K (with ι: K → H_ν), amalgamated products via a retraction of an
HNN-extension, and the image of a presentation under a retraction.
"""
from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

from . import oracles as _oracles
from .models import Model
from .words import (
    Letter,
    STABLE,
    WordSyntaxError,
    invert,
    normalize,
    parse_subword,
    parse_word,
    render,
    render_subword,
    stable,
    sub,
    syllables_inverse,
    xgen,
)

log = logging.getLogger(__name__)


class PresentationError(ValueError):
    pass


@dataclass
class HNNData:
    """Bookkeeping that an HNN-extension keeps about its construction."""

    source: "RelativePresentation"
    k_id: str
    nu_id: str
    iota: dict          # y name -> syllables in H_ν
    y_gens: dict        # y name -> syllables in K
    check_radius: int = 3

    @property
    def k_oracle(self):
        return self.source.subgroups[self.k_id]

    @property
    def nu_oracle(self):
        return self.source.subgroups[self.nu_id]

    def y_to_k(self, word) -> tuple:
        """Rewrite Y-letters as K-letters (a word over the source alphabet)."""
        out = []
        o = self.k_oracle
        for a in word:
            if a.kind == "x" and a.name in self.y_gens:
                syl = self.y_gens[a.name] if a.sign > 0 else syllables_inverse(self.y_gens[a.name])
                out.append(Letter("h", self.k_id, 1, o.canon(syl)))
            else:
                out.append(a)
        return tuple(out)

    def k_to_y(self, elem) -> tuple:
        """Shortlex-least geodesic Y-word for a K-element, as X-letters."""
        _, witness = self.k_oracle.geodesic(elem, self.y_gens)
        return tuple(xgen(name, s) for name, s in witness)

    def embed_k(self, elem) -> tuple:
        return self.k_to_y(elem) if elem else ()

    def iota_letter(self, y: str, sign: int = 1) -> Letter:
        syl = self.iota[y] if sign > 0 else syllables_inverse(self.iota[y])
        return Letter("h", self.nu_id, 1, self.nu_oracle.canon(syl))

    def t_relator(self, y: str) -> tuple:
        return (stable(-1), xgen(y), stable(1), self.iota_letter(y, -1))

    def to_dict(self) -> dict:
        return {
            "k": self.k_id,
            "nu": self.nu_id,
            "iota": {y: render_subword(s) for y, s in sorted(self.iota.items())},
            "y_gens": {y: render_subword(s) for y, s in sorted(self.y_gens.items())},
            "check_radius": self.check_radius,
            "source": to_dict(self.source),
        }


@dataclass
class RelativePresentation:
    x_gens: tuple
    subgroups: dict
    relators: tuple = ()
    stable: bool = False
    meta: dict = field(default_factory=dict)
    model: Model | None = None
    hnn: HNNData | None = None

    def all_oracles(self) -> dict:
        out = dict(self.subgroups)
        if self.hnn is not None:
            out.setdefault(self.hnn.k_id, self.hnn.k_oracle)
        return out

    @property
    def name(self) -> str:
        return self.meta.get("name", "")

    @property
    def max_relator_length(self) -> int:
        return max((len(r) for r in self.relators), default=0)

    def parse(self, text: str) -> tuple:
        return parse_word(text, self)

    def normalize(self, w) -> tuple:
        return normalize(w, self)

    def describe(self) -> str:
        rels = ", ".join(render(r) for r in self.relators)
        xs = ", ".join(self.x_gens) + (", t" if self.stable else "")
        return f"⟨{xs}; {', '.join(self.subgroups)} | {rels}⟩"


# -- file format ------------------------------------------------------------

def to_dict(p: RelativePresentation) -> dict:
    d = {
        "x_gens": list(p.x_gens),
        "subgroups": {lam: o.declaration() for lam, o in sorted(p.subgroups.items())},
        "relators": [render(r) for r in p.relators],
        "stable": p.stable,
        "meta": p.meta,
    }
    if p.model is not None:
        d["model"] = p.model.to_dict()
    if p.hnn is not None:
        d["hnn"] = p.hnn.to_dict()
    return d


_FLAT_LIST = re.compile(r"\[\s+((?:-?\d+|\"[^\"\n]*\")(?:,\s+(?:-?\d+|\"[^\"\n]*\"))*)\s+\]")


def dumps(p: RelativePresentation) -> str:
    """Canonical text: sorted keys, two-space indent, scalar lists on one line."""
    text = json.dumps(to_dict(p), indent=2, sort_keys=True, ensure_ascii=False)
    text = _FLAT_LIST.sub(lambda m: "[" + re.sub(r",\s+", ", ", m.group(1)) + "]", text)
    return text + "\n"


def from_dict(d: Mapping, check_budget: int = 2000) -> RelativePresentation:
    for key in ("x_gens", "subgroups", "relators"):
        if key not in d:
            raise PresentationError(f"missing key {key!r}")
    x_gens = []
    for g in d["x_gens"]:
        if not isinstance(g, str):
            raise PresentationError(f"bad generator {g!r}")
        base = g[:-3] if g.endswith("^-1") else g
        if base == STABLE:
            raise PresentationError("'t' is reserved for the stable letter")
        if base != g:
            log.warning("x_gens lists the inverse %s; X is stored symmetrized", g)
        if base not in x_gens:
            x_gens.append(base)
    subgroups = {}
    for lam, decl in d["subgroups"].items():
        if lam == STABLE or lam in x_gens:
            raise PresentationError(f"subgroup id {lam!r} clashes with a generator")
        try:
            subgroups[lam] = _oracles.from_declaration(lam, decl)
        except (KeyError, TypeError) as exc:
            raise PresentationError(f"bad oracle declaration for {lam}: {exc}") from exc
    model = Model.from_dict(d["model"]) if d.get("model") else None
    p = RelativePresentation(tuple(x_gens), subgroups, (), bool(d.get("stable", False)),
                             dict(d.get("meta", {})), model)
    if d.get("hnn"):
        h = d["hnn"]
        src = from_dict(h["source"], check_budget)
        p.hnn = HNNData(src, h["k"], h["nu"],
                        {y: parse_subword(s) for y, s in h["iota"].items()},
                        {y: parse_subword(s) for y, s in h["y_gens"].items()},
                        int(h.get("check_radius", 3)))
    relators = []
    for text in d["relators"]:
        try:
            r = parse_word(text, p)
        except WordSyntaxError as exc:
            raise PresentationError(f"relator {text!r}: {exc}") from exc
        if not normalize(r, p):
            raise PresentationError(f"relator {text!r} is trivial in the free product")
        relators.append(r)
    p.relators = tuple(relators)
    if p.model is not None:
        for r in p.relators:
            if p.model.covers(r) and not p.model.is_identity(r):
                raise PresentationError(f"model does not satisfy relator {render(r)}")
    for text in d.get("identities", []):
        from .area import word_problem
        w = parse_word(text, p)
        if word_problem(p, w, budget=check_budget) is not True:
            raise PresentationError(f"declared identity {text!r} does not represent 1 "
                                    f"within budget {check_budget}")
    return p


def load(path) -> RelativePresentation:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise PresentationError(f"{path}: not JSON ({exc})") from exc
    p = from_dict(data)
    p.meta.setdefault("name", path.stem)
    return p


def save(p: RelativePresentation, path) -> None:
    Path(path).write_text(dumps(p), encoding="utf-8")


# -- constructors -------------------------------------------------------------

def _parse_map(m: Mapping) -> dict:
    return {k: (parse_subword(v) if isinstance(v, str) else tuple(v)) for k, v in m.items()}


def hnn_extension(h: RelativePresentation, k_id: str, nu_id: str, iota: Mapping,
                  y_gens: Mapping | None = None, model: Model | None = None,
                  check_radius: int = 3, name: str | None = None) -> RelativePresentation:
    """HNN-extension of ``h`` over K = ``k_id`` with ι: K → H_ν.

    Relators of the result are R' ∪ T, where R' rewrites K-letters by
    shortlex-least geodesic Y-words and T = {t⁻¹ y t ι(y)⁻¹ : y ∈ Y}.
    """
    if k_id not in h.subgroups or nu_id not in h.subgroups:
        raise PresentationError(f"{k_id!r} and {nu_id!r} must both be subgroups of the base")
    if k_id == nu_id or h.subgroups[k_id] is h.subgroups[nu_id]:
        raise PresentationError("the associated subgroup must differ from H_ν")
    if h.stable:
        raise PresentationError("base presentation already has a stable letter")
    K = h.subgroups[k_id]
    nu = h.subgroups[nu_id]
    y_gens = _parse_map(y_gens) if y_gens is not None else K.own_generating_set()
    iota = _parse_map(iota)
    for y in y_gens:
        if y == STABLE or y in h.x_gens or y in h.subgroups:
            raise PresentationError(f"Y-generator {y!r} clashes with an existing name")
        if y not in iota:
            raise PresentationError(f"ι is not given on {y!r}")
        nu.check_word(iota[y])
        if nu.is_identity(iota[y]) is True:
            raise PresentationError(f"ι({y}) is trivial in {nu_id}")
    own = all(s == ((g, 1),) for g, s in y_gens.items()) and set(y_gens) == set(K.generators)
    if own:
        for k in K.ball(check_radius):
            image = tuple(p for g, e in k for p in (iota[g] if e > 0 else syllables_inverse(iota[g]))
                          for _ in range(abs(e)))
            if nu.is_identity(image) is True:
                raise PresentationError(f"ι kills {render_subword(k)}; not a monomorphism")
    data = HNNData(h, k_id, nu_id, iota, dict(y_gens), check_radius)
    subgroups = {lam: o for lam, o in h.subgroups.items() if lam != k_id}
    ctx = dict(subgroups)
    r_prime = []
    for r in h.relators:
        out = []
        for a in r:
            if a.kind == "h" and a.name == k_id:
                try:
                    out.extend(data.k_to_y(a.elem))
                except _oracles.OracleError as exc:
                    raise PresentationError(f"cannot rewrite {render((a,))} over Y: {exc}") from exc
            else:
                out.append(a)
        w = normalize(out, ctx)
        if w:
            r_prime.append(w)
    t_rels = [data.t_relator(y) for y in sorted(y_gens)]
    meta = {
        "name": name or f"{h.name or 'H'}*t",
        "provenance": f"HNN-extension of {h.name or 'H'} over {k_id} -> {nu_id}; "
                      f"injectivity of iota checked on ball radius {check_radius if own else 0}",
        "M": max((len(r) for r in r_prime), default=0),
        "r_prime": len(r_prime),
    }
    return RelativePresentation(tuple(h.x_gens) + tuple(sorted(y_gens)), subgroups,
                                tuple(r_prime + t_rels), True, meta, model, data)


def _rename_letter(a: Letter, xmap, smap) -> Letter:
    if a.kind == "x":
        return a._replace(name=xmap.get(a.name, a.name))
    if a.kind == "h":
        return a._replace(name=smap.get(a.name, a.name))
    return a


def free_product(a: RelativePresentation, b: RelativePresentation,
                 suffix: str = "_2") -> RelativePresentation:
    """Free product; clashing names of ``b`` get ``suffix`` appended."""
    if a.stable and b.stable:
        raise PresentationError("both factors carry a stable letter")
    taken = set(a.x_gens) | set(a.subgroups)
    xmap, smap = {}, {}
    for g in b.x_gens:
        if g in taken:
            new = g + suffix
            while new in taken:
                new += suffix
            xmap[g] = new
            log.warning("renamed generator %s of %s to %s", g, b.name, new)
        taken.add(xmap.get(g, g))
    for lam in b.subgroups:
        if lam in taken:
            new = lam + suffix
            while new in taken:
                new += suffix
            smap[lam] = new
            log.warning("renamed subgroup %s of %s to %s", lam, b.name, new)
        taken.add(smap.get(lam, lam))
    subgroups = dict(a.subgroups)
    for lam, o in b.subgroups.items():
        new = smap.get(lam, lam)
        if new != lam:
            o = _clone_oracle(o, new)
        subgroups[new] = o
    rels = tuple(a.relators) + tuple(tuple(_rename_letter(x, xmap, smap) for x in r) for r in b.relators)
    model = None
    if a.model is not None and b.model is not None:
        model = _direct_sum(a.model, b.model, xmap, smap)
    meta = {"name": f"{a.name or 'A'}*{b.name or 'B'}",
            "provenance": f"free product of {a.name or 'A'} and {b.name or 'B'}",
            "renamed": {"x": xmap, "subgroups": smap}}
    return RelativePresentation(tuple(a.x_gens) + tuple(xmap.get(g, g) for g in b.x_gens),
                                subgroups, rels, a.stable or b.stable, meta, model)


def _clone_oracle(o, new_id):
    decl = o.declaration()
    return _oracles.from_declaration(new_id, decl)


def _direct_sum(ma: Model, mb: Model, xmap, smap) -> Model:
    import numpy as np
    da, db = ma.dim, mb.dim

    def block(m1, m2):
        out = np.zeros((da + db, da + db), dtype=object)
        out[:da, :da] = m1 if m1 is not None else np.eye(da, dtype=object)
        out[da:, da:] = m2 if m2 is not None else np.eye(db, dtype=object)
        return [[int(v) for v in row] for row in out]

    x = {g: block(m, None) for g, m in ma.x.items()}
    x.update({xmap.get(g, g): block(None, m) for g, m in mb.x.items()})
    subs = {lam: {g: block(m, None) for g, m in gens.items()} for lam, gens in ma.subgroups.items()}
    subs.update({smap.get(lam, lam): {g: block(None, m) for g, m in gens.items()}
                 for lam, gens in mb.subgroups.items()})
    t = None
    if ma.t is not None or mb.t is not None:
        t = block(ma.t, mb.t)
    # A*B -> A x B is a homomorphism but never faithful for nontrivial factors
    return Model(x=x, t=t, subgroups=subs, faithful=False)


@dataclass
class Retraction:
    """Letter map from ``source`` onto a retract; letters not listed are fixed."""

    source: RelativePresentation
    letter_map: dict = field(default_factory=dict)
    target: RelativePresentation | None = None

    def image(self, a: Letter) -> tuple:
        key = (a.kind, a.name)
        if key not in self.letter_map:
            return (a,)
        img = self.letter_map[key]
        return tuple(img) if a.sign > 0 else invert(img)

    def apply(self, word) -> tuple:
        return tuple(b for a in word for b in self.image(a))


def retract_presentation(r: Retraction, name: str | None = None) -> RelativePresentation:
    """Relative presentation of the retract: relator images, normalized,
    with trivial images dropped."""
    src = r.source
    ctx = dict(src.subgroups)
    rels = []
    for rel in src.relators:
        w = normalize(r.apply(rel), ctx)
        if w and w not in rels:
            rels.append(w)
    killed = {n for (kind, n), img in r.letter_map.items() if kind == "x" and not img}
    kills_t = ("t", STABLE) in r.letter_map
    meta = {"name": name or f"retract of {src.name}",
            "provenance": f"retract of {src.name}; relative Dehn function bounded by the source's "
                          f"(transfer delta_1 <= delta)",
            "M": max((len(w) for w in rels), default=0)}
    target = RelativePresentation(tuple(g for g in src.x_gens if g not in killed), dict(src.subgroups),
                                  tuple(rels), src.stable and not kills_t, meta)
    r.target = target
    return target


def amalgam(a: RelativePresentation, b: RelativePresentation, k_id: str, eta_id: str,
            xi: Mapping, model: Model | None = None, check_radius: int = 3):
    """Amalgamated product A ∗_{K=ξ(K)} B, realized inside the HNN-extension
    of A ∗ B with associated subgroups K and ξ(K).

    Returns ``(hnn, retraction)``; ``retraction.target`` is the amalgam's own
    relative presentation.
    """
    if k_id not in a.subgroups:
        raise PresentationError(f"{k_id!r} is not a subgroup of {a.name}")
    if eta_id not in b.subgroups:
        raise PresentationError(f"{eta_id!r} is not a subgroup of {b.name}")
    if a.subgroups[k_id] is b.subgroups[eta_id]:
        raise PresentationError("degenerate self-amalgam: K would stay in the output collection")
    fp = free_product(a, b)
    eta = fp.meta["renamed"]["subgroups"].get(eta_id, eta_id)
    hnn = hnn_extension(fp, k_id, eta, xi, model=model, check_radius=check_radius,
                        name=f"HNN({fp.name})")
    r = Retraction(hnn, {("t", STABLE): ()})
    retract_presentation(r, name=f"{a.name or 'A'}*_{k_id}{b.name or 'B'}")
    return hnn, r


def inclusion_then_retraction_is_identity(r: Retraction) -> bool:
    """Letterwise check that the retraction fixes the target alphabet."""
    t = r.target
    letters = [xgen(g) for g in t.x_gens]
    for lam, o in t.subgroups.items():
        letters += [sub(lam, s) for s in o.ball(1)]
    if t.stable:
        letters.append(stable())
    return all(r.apply((a,)) == (a,) for a in letters)
