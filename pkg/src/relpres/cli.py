"""Command line entry point: ``relpres <command> ...``.

Exit codes: 0 success, 1 a checked property fails (or the word is not
trivial), 2 a budget ran out or the answer is undetermined, 3 bad input.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import shutil
import sys
from pathlib import Path

from . import __version__
from .area import dehn_sample, quick_verdict, relative_area, well_definedness_probe
from .growth import GrowthTable, preceq_fit, superadditive_closure, theorem_bound_check
from .presentations import PresentationError, amalgam, dumps, hnn_extension, load
from .words import WordSyntaxError, render

log = logging.getLogger("relpres")

OK, VIOLATED, UNDETERMINED, BAD_INPUT = 0, 1, 2, 3


class InputError(Exception):
    pass


def _data_dir() -> Path:
    from importlib.resources import files
    return Path(str(files("relpres") / "data"))


def _resolve(path: str) -> Path:
    """A path on disk, or else the name of a shipped fixture."""
    p = Path(path)
    if p.exists():
        return p
    for name in (p.name, p.name + ".rpres"):
        shipped = _data_dir() / name
        if shipped.exists():
            return shipped
    raise InputError(f"no such file: {path}")


def _load_pres(path: str):
    try:
        return load(_resolve(path))
    except (PresentationError, WordSyntaxError, ValueError, KeyError) as e:
        raise InputError(f"{path}: {e}") from e


def _load_table(path: str) -> GrowthTable:
    try:
        return GrowthTable.load(_resolve(path))
    except (ValueError, IndexError) as e:
        raise InputError(f"{path}: {e}") from e


def _provenance(args) -> list[str]:
    # settings that cannot change results stay out, so runs differing only
    # in thread count or output path produce identical files
    skip = {"func", "verbose", "jobs", "dry_run", "out", "svg"}
    conf = {k: v for k, v in sorted(vars(args).items()) if k not in skip and v is not None}
    return [f"relpres {__version__}", "config " + json.dumps(conf, sort_keys=True, default=str)]


def _header(args) -> str:
    return "".join(f"# {line}\n" for line in _provenance(args))


def _write(path, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _parse_map(items) -> dict:
    out = {}
    for item in items or []:
        for part in item.split(","):
            if "=" not in part:
                raise InputError(f"expected name=word, got {part!r}")
            k, v = part.split("=", 1)
            out[k.strip()] = v.strip()
    return out


# -- commands --------------------------------------------------------------------

def cmd_area(args) -> int:
    p = _load_pres(args.pres)
    try:
        w = p.parse(args.word)
    except WordSyntaxError as e:
        raise InputError(str(e)) from e
    if args.dry_run:
        print(f"plan: area search for {render(w)} over {p.describe()} "
              f"(max_area={args.max_area}, max_states={args.max_states})")
        return OK
    res = relative_area(p, w, max_area=args.max_area, max_states=args.max_states)
    for line in _provenance(args):
        print(f"# {line}")
    print(f"word: {render(w)}")
    print(f"length: {len(w)}")
    if res.found:
        print(f"area: {res.area}")
        print(f"exact: {str(res.exact).lower()}")
        for line in res.witness.lines():
            print(line)
        if args.svg:
            from .diagrams import derivation_to_diagram, to_svg
            _write(args.svg, to_svg(derivation_to_diagram(res.witness, p), p, seed=args.seed))
        return OK if res.exact else UNDETERMINED
    nontrivial = quick_verdict(p, w) is False
    print("area: none")
    print(f"exact: {str(res.exact or nontrivial).lower()}")
    print(f"lower bound: {res.lower_bound}")
    print(f"note: {'certified nontrivial' if nontrivial else res.reason}")
    return VIOLATED if res.exact or nontrivial else UNDETERMINED


def cmd_dehn(args) -> int:
    p = _load_pres(args.pres)
    if args.dry_run:
        print(f"plan: relative Dehn function of {p.name or args.pres} for n=1..{args.n}, "
              f"rho={args.rho}, jobs={args.jobs}")
        return OK
    table = dehn_sample(p, args.n, args.rho, max_area=args.max_area,
                        max_states=args.max_states, jobs=args.jobs)
    buf = io.StringIO()
    buf.write(_header(args))
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "delta", "witness", "exact_flag"])
    for n in range(1, table.N + 1):
        wit = table.witnesses[n - 1] if table.witnesses else ()
        w.writerow([n, table(n), render(wit), int(table.is_exact(n))])
    _write(args.out, buf.getvalue())
    return OK if table.all_exact else UNDETERMINED


def cmd_probe(args) -> int:
    p = _load_pres(args.pres)
    if args.dry_run:
        print(f"plan: instances m=1..{args.horizon} of {args.template}")
        return OK
    try:
        res = well_definedness_probe(p, args.template, args.horizon)
    except (WordSyntaxError, ValueError) as e:
        raise InputError(str(e)) from e
    for line in _provenance(args):
        print(f"# {line}")
    print(f"verdict: {res.verdict}")
    print(f"lengths: {res.lengths}")
    print(f"areas: {res.areas}")
    if res.note:
        print(f"note: {res.note}")
    return OK


def _emit_pres(args, g) -> None:
    g.meta = dict(g.meta)
    g.meta["provenance"] = _provenance(args)
    _write(args.out, dumps(g))


def cmd_hnn(args) -> int:
    h = _load_pres(args.pres)
    iota = _parse_map(args.iota)
    if args.dry_run:
        print(f"plan: HNN-extension of {h.name or args.pres} over {args.k} -> {args.nu} with {iota}")
        return OK
    try:
        g = hnn_extension(h, args.k, args.nu, iota, check_radius=args.check_radius)
    except (PresentationError, WordSyntaxError, KeyError) as e:
        raise InputError(str(e)) from e
    _emit_pres(args, g)
    return OK


def cmd_amalgam(args) -> int:
    a, b = _load_pres(args.a), _load_pres(args.b)
    xi = _parse_map(args.xi)
    if args.dry_run:
        print(f"plan: amalgam of {args.a} and {args.b} over {args.k} -> {args.eta} with {xi}")
        return OK
    try:
        _, retraction = amalgam(a, b, args.k, args.eta, xi, check_radius=args.check_radius)
    except (PresentationError, WordSyntaxError, KeyError) as e:
        raise InputError(str(e)) from e
    _emit_pres(args, retraction.target)
    return OK


def cmd_diagram(args) -> int:
    from . import diagrams as dg

    p = _load_pres(args.pres)
    try:
        d = dg.load(_resolve(args.inp), p)
    except (dg.DiagramError, WordSyntaxError, ValueError, KeyError) as e:
        raise InputError(f"{args.inp}: {e}") from e
    if args.dry_run:
        print(f"plan: diagram {args.action} on {args.inp} ({len(d.twin) // 2} edges)")
        return OK
    for line in _provenance(args):
        print(f"# {line}")
    status = OK
    rep = dg.validate(d, p)
    if args.action == "check":
        print("\n".join(rep.lines()))
        status = {True: OK, False: VIOLATED, None: UNDETERMINED}[rep.verdict]
    elif args.action in ("bands", "domains"):
        bands = dg.find_t_bands(d, p)
        for b in bands:
            kind = "annulus" if b.annular else "band"
            print(f"{kind} {b.index}: length {b.length}, bottom {render(b.bottom_word) or '1'}")
        if args.action == "domains":
            for dom in dg.domains(d, p, bands):
                print(f"domain {dom.index}: boundary {render(dom.word) or '1'}; bottoms {dom.bottoms}; "
                      f"tops {dom.tops}; boundary letters on the outside {dom.outer_letters}")
            for kp in dg.k_connected_pairs(d, p, args.budget, bands):
                v = {True: "K-connected", False: "not K-connected", None: "undetermined"}[kp.verdict]
                print(f"bands {kp.bands} in domain {kp.domain}: {v}")
                if kp.verdict is None:
                    status = UNDETERMINED
    elif args.action == "surgery":
        if not rep.ok:
            print("\n".join(rep.lines()))
            return VIOLATED
        build = dg.provider(p, max_area=args.max_area, max_states=args.max_states)
        try:
            d = dg.eliminate_k_connected(d, p, build, args.budget)
            d = dg.shorten_bands(d, p, build)
        except (dg.SurgeryError, dg.ProviderError) as e:
            print(f"surgery stopped: {e}")
            return UNDETERMINED
        after = dg.validate(d, p, rep.boundary)
        print("\n".join(after.lines()))
        for b in dg.find_t_bands(d, p):
            print(f"band {b.index}: length {b.length}, annular {b.annular}")
        if args.out:
            d.save(args.out)
        status = OK if after.ok else VIOLATED
    elif args.action == "audit":
        gamma = _load_table(args.gamma) if args.gamma else GrowthTable([])
        rep2 = dg.census_audit(d, p, gamma, args.M, args.C)
        print("\n".join(rep2.lines()))
        if rep2.failed:
            status = VIOLATED
        elif not rep2.ok:
            status = UNDETERMINED
    if args.svg:
        _write(args.svg, dg.to_svg(d, p, seed=args.seed))
    return status


def cmd_closure(args) -> int:
    f = _load_table(args.inp)
    if args.dry_run:
        print(f"plan: superadditive closure of {f.N} values")
        return OK
    _write(args.out, _header(args) + superadditive_closure(f).to_csv())
    return OK


def cmd_fit(args) -> int:
    f, g = _load_table(args.f), _load_table(args.g)
    if args.dry_run:
        print(f"plan: search (A,B,C) in 1..{args.box} for f <= A g(Bn) + Cn")
        return OK
    res = preceq_fit(f, g, args.box)
    for line in _provenance(args):
        print(f"# {line}")
    print(res)
    return {"witness": OK, "fails": VIOLATED}.get(res.status, UNDETERMINED)


def cmd_bound(args) -> int:
    delta, gamma = _load_table(args.delta), _load_table(args.gamma)
    gamma2 = _load_table(args.gamma2) if args.gamma2 else None
    if args.dry_run:
        print(f"plan: check delta against closure∘closure of gamma ({args.mode})")
        return OK
    rep = theorem_bound_check(delta, gamma, args.mode, args.box, gamma2)
    for line in _provenance(args):
        print(f"# {line}")
    print(rep)
    return {"witness": OK, "fails": VIOLATED}.get(rep.fit.status, UNDETERMINED)


def cmd_corpus(args) -> int:
    names = sorted(x.name for x in _data_dir().iterdir() if x.suffix in (".rpres", ".vkd"))
    if args.dry_run or not args.out:
        for n in names:
            print(n)
        return OK
    os.makedirs(args.out, exist_ok=True)
    for n in names:
        shutil.copy(_data_dir() / n, Path(args.out) / n)
    print(f"copied {len(names)} fixtures to {args.out}")
    return OK


# -- parser ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    def shared(suppress: bool):
        c = argparse.ArgumentParser(add_help=False)
        dflt = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
        c.add_argument("--jobs", type=int, default=dflt(os.cpu_count() or 1), help="worker threads")
        c.add_argument("--seed", type=int, default=dflt(0), help="seed recorded in outputs and used for layouts")
        c.add_argument("--verbose", "-v", action="store_true", default=dflt(False))
        c.add_argument("--dry-run", action="store_true", default=dflt(False),
                       help="validate inputs and print the plan")
        return c

    top, common = shared(False), shared(True)

    ap = argparse.ArgumentParser(prog="relpres", parents=[top],
                                 description="Relative presentations, relative Dehn functions and diagram surgery.")
    ap.add_argument("--version", action="version", version=f"relpres {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def budgets(s, area=8, states=200_000):
        s.add_argument("--max-area", type=int, default=area)
        s.add_argument("--max-states", type=int, default=states)

    s = sub.add_parser("area", parents=[common], help="relative area of a word")
    s.add_argument("--pres", required=True)
    s.add_argument("--word", required=True)
    s.add_argument("--svg")
    budgets(s)
    s.set_defaults(func=cmd_area)

    s = sub.add_parser("dehn", parents=[common], help="sampled relative Dehn function")
    s.add_argument("--pres", required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--rho", type=int, default=1)
    s.add_argument("--out")
    budgets(s, states=50_000)
    s.set_defaults(func=cmd_dehn)

    s = sub.add_parser("probe", parents=[common], help="evidence that the relative Dehn function is not defined")
    s.add_argument("--pres", required=True)
    s.add_argument("--template", default="[a^m,b]")
    s.add_argument("--horizon", type=int, default=5)
    s.set_defaults(func=cmd_probe)

    s = sub.add_parser("hnn", parents=[common], help="HNN-extension of a relative presentation")
    s.add_argument("--pres", required=True)
    s.add_argument("--k", required=True)
    s.add_argument("--nu", required=True)
    s.add_argument("--iota", action="append", required=True, help="y=word in H_nu (repeatable)")
    s.add_argument("--check-radius", type=int, default=3)
    s.add_argument("--out")
    s.set_defaults(func=cmd_hnn)

    s = sub.add_parser("amalgam", parents=[common], help="amalgamated product")
    s.add_argument("--a", required=True)
    s.add_argument("--b", required=True)
    s.add_argument("--k", required=True)
    s.add_argument("--eta", required=True)
    s.add_argument("--xi", action="append", required=True, help="k=word in B_eta (repeatable)")
    s.add_argument("--check-radius", type=int, default=3)
    s.add_argument("--out")
    s.set_defaults(func=cmd_amalgam)

    s = sub.add_parser("diagram", parents=[common], help="diagram checks and surgery")
    s.add_argument("action", choices=["check", "bands", "domains", "surgery", "audit"])
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--pres", required=True)
    s.add_argument("--out")
    s.add_argument("--svg")
    s.add_argument("--gamma", help="growth table of the base group (audit)")
    s.add_argument("--M", type=int, default=None)
    s.add_argument("--C", type=int, default=1, help="constant for the band-length inequalities")
    s.add_argument("--budget", type=int, default=200, help="membership search budget")
    budgets(s)
    s.set_defaults(func=cmd_diagram)

    s = sub.add_parser("closure", parents=[common], help="superadditive closure of a table")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_closure)

    s = sub.add_parser("fit", parents=[common], help="search constants for f ⪯ g")
    s.add_argument("--f", required=True)
    s.add_argument("--g", required=True)
    s.add_argument("--box", type=int, default=8)
    s.set_defaults(func=cmd_fit)

    s = sub.add_parser("bound", parents=[common], help="check delta against closure∘closure of gamma")
    s.add_argument("--delta", required=True)
    s.add_argument("--gamma", required=True)
    s.add_argument("--gamma2")
    s.add_argument("--mode", choices=["hnn", "amalgam"], default="hnn")
    s.add_argument("--box", type=int, default=8)
    s.set_defaults(func=cmd_bound)

    s = sub.add_parser("corpus", parents=[common], help="list or copy the shipped fixtures")
    s.add_argument("--out")
    s.set_defaults(func=cmd_corpus)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
