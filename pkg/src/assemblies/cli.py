"""Command-line front end.

Every command prints a JSON report on stdout and a short summary on stderr
(suppressed by ``--json``).  Exit codes: 0 pass, 1 fail, 2 unknown,
3 usage or parse error.
"""

from __future__ import annotations

import argparse
import sys
from itertools import product as _product
from typing import Optional

from . import base as B
from . import lam as L
from . import logic as LG
from . import pca as P
from . import reconstruct as RC
from . import sub as D
from . import workspace as WS
from .asm import Asm, NeedMoreFuel, NotTracked
from .pca import OUT_OF_FUEL, Defined
from .report import FAIL, PASS, UNKNOWN, Report

EXIT = {PASS: 0, FAIL: 1, UNKNOWN: 2}
USAGE = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ----------------------------------------------------------------------------
# Option handling


def parse_filter(text: str, pca: P.PCA) -> P.Filter:
    """``inh``, ``trivial``, ``rel:K+S`` (closure of the listed generators)
    or ``and:<a>,<b>``."""
    if text == "inh":
        return P.Inhabited()
    if text == "trivial":
        return P.TrivialFilter()
    if text.startswith("rel:"):
        if not isinstance(pca, P.SKModel):
            raise UsageError("relative filters are available for the sk algebra only")
        gens = [p for p in text[4:].split("+") if p]
        if not gens:
            raise UsageError("rel: needs at least one generator")
        try:
            terms = [P.parse_term(g) for g in gens]
        except P.TermSyntaxError as exc:
            raise UsageError(f"bad generator in {text!r}: {exc}") from None
        return P.Relative.generated_by(pca, terms)
    if text.startswith("and:"):
        parts = text[4:].split(",")
        if len(parts) < 2:
            raise UsageError("and: needs two filters")
        return P.Intersection([parse_filter(p, pca) for p in parts])
    raise UsageError(f"unknown filter {text!r}")


def _overrides(args) -> dict:
    return {"pca": args.pca, "bound": args.bound, "fuel": args.fuel,
            "search": args.search, "seed": args.seed}


def load_workspace(args) -> WS.Workspace:
    over = _overrides(args)
    pca_name = args.pca
    if args.workspace:
        ws = WS.load(args.workspace, over)
    else:
        ws = WS.demo(over)
    pca_name = ws.settings.pca
    if args.filter:
        ws.ctx = ws.ctx.with_(filter=parse_filter(args.filter, P.INSTANCES[pca_name]))
    return ws


def plain_context(args) -> tuple:
    s = WS.Settings()
    for k, v in _overrides(args).items():
        if v is not None:
            setattr(s, k, v)
    pca = P.INSTANCES[s.pca]
    filt = parse_filter(args.filter, pca) if args.filter else None
    return Asm(pca, filt, fuel=s.fuel, search=s.search, bound=s.bound), s


def _params(ctx: Asm, settings, argv) -> dict:
    return {**ctx.params(), "seed": settings.seed, "command": list(argv)}


# ----------------------------------------------------------------------------
# Commands


def cmd_eval(args, argv) -> Report:
    ctx, s = plain_context(args)
    pca = ctx.pca
    rep = Report("eval", _params(ctx, s, argv))
    head = WS.parse_element(pca, args.term)
    if args.args:
        h = pca.embed(head, ctx.fuel) if isinstance(pca, P.SKModel) else Defined(head)
        vals = [WS.parse_element_value(pca, a) for a in args.args]
        r = pca.apply_chain(h.value, vals, ctx.fuel) if isinstance(h, Defined) else h
    else:
        r = pca.embed(head, ctx.fuel) if isinstance(pca, P.SKModel) else Defined(head)
    if isinstance(r, Defined):
        rep.add("defined", True, {"value": pca.show(r.value)})
    elif r is OUT_OF_FUEL:
        rep.add("defined", None, f"out of fuel at {ctx.fuel}")
    else:
        rep.add("defined", False, "stuck")
    return rep


def cmd_compile(args, argv) -> Report:
    ctx, s = plain_context(args)
    pca = ctx.pca
    rep = Report("compile", {**_params(ctx, s, argv), "eta": args.eta})
    m = L.parse(args.term, L.library_terms_sk())
    t = L.bracket_abstract(m, eta=args.eta)
    r = pca.embed(t, 100_000)
    rep.add("combinator", True, {"term": P.show_term(t), "lambda": L.show(m)})
    if not isinstance(r, Defined):
        rep.add("value", None if r is OUT_OF_FUEL else False, repr(r))
        return rep
    rep.add("value", True, pca.show(r.value))
    n = L.arity(m)
    pool = pca.enumerate(2)
    bad, checked, unknown = [], 0, 0
    for args_ in _product(pool, repeat=n):
        want = L.beta_oracle(m, list(args_), pca)
        got = pca.apply_chain(r.value, list(args_), ctx.fuel) if args_ else Defined(r.value)
        if not isinstance(want, Defined):
            unknown += 1
            continue
        checked += 1
        if got != want:
            bad.append([pca.show(a) for a in args_])
    rep.add("agrees with the beta oracle", not bad if (checked or not unknown) else None,
            bad[:5] or f"{checked} argument tuples from enumerate(2), {unknown} oracle timeouts")
    return rep


def cmd_pca_check(args, argv) -> Report:
    ctx, s = plain_context(args)
    rep = Report("pca-check", {**_params(ctx, s, argv), "samples": args.samples})
    rep.extend(P.check_combinatory_complete(ctx.pca, ctx.filter, bound=args.law_bound,
                                            fuel=min(ctx.fuel, 64), search_bound=ctx.search))
    rep.extend(P.fuel_monotonicity(ctx.pca, args.samples, s.seed))
    return rep


def _asm_track(ws, rep, names):
    ctx = ws.ctx
    for name in names or list(ws.morphisms):
        f = ws.morphisms[name]
        ok = ctx.verify_tracks(f.tracker, f.map, f.src, f.dst)
        found = ctx.find_tracker(f.map, f.src, f.dst)
        rep.add(f"{name} is tracked", ok,
                {"tracker": ctx.show(f.tracker),
                 "canonical": None if found is None else ctx.show(found)})


def _asm_limits(ws, rep, names):
    ctx = ws.ctx
    objs = list(ws.assemblies.items())
    for (nx, x), (ny, y) in _product(objs, repeat=2):
        lim = ctx.product(x, y)
        med = ctx.mediate(lim, *lim.legs)
        rep.add(f"product {nx} x {ny}", med.map == B.identity(lim.apex.carrier),
                {"size": len(lim.apex.carrier)})
    mors = [(n, ws.morphisms[n]) for n in (names or list(ws.morphisms))]
    for (nf, f), (ng, g) in _product(mors, repeat=2):
        if f.dst != g.dst:
            continue
        lim = ctx.pullback(f, g)
        p1, p2 = lim.legs
        ok = B.is_pullback(f.map, g.map, p1.map, p2.map)
        ok = ok and ctx.compose(f, p1).map == ctx.compose(g, p2).map
        med = ctx.mediate(lim, p1, p2)
        ok = ok and med.map == B.identity(lim.apex.carrier)
        rep.add(f"pullback of {nf} and {ng}", ok, {"size": len(lim.apex.carrier)})
        if f.src == g.src and nf < ng:
            eq = ctx.equalizer(f, g)
            rep.add(f"equalizer of {nf} and {ng}", True, {"size": len(eq.apex.carrier)})


def _asm_factorize(ws, rep, names):
    ctx = ws.ctx
    for name in names or list(ws.morphisms):
        f = ws.morphisms[name]
        e, m = ctx.image_factorize(f)
        ok = B.compose(m.map, e.map) == f.map and ctx.is_mono(m)
        rep.add(f"{name} = m . e", ok, {"image": len(e.dst.carrier)})
        rep.add(f"{name}: e is a regular epi", ctx.is_regular_epi(e))


def cmd_asm(args, argv) -> Report:
    ws = load_workspace(args)
    rep = Report(f"asm {args.action}", _params(ws.ctx, ws.settings, argv))
    for n in args.names:
        if n not in ws.morphisms:
            raise UsageError(f"unknown morphism {n!r}")
    {"track": _asm_track, "limits": _asm_limits, "factorize": _asm_factorize}[args.action](
        ws, rep, args.names)
    return rep


def _datum(ws, name):
    rel = ws.structure.relations.get(name)
    if rel is None:
        raise UsageError(f"unknown relation {name!r}")
    return rel.datum


def cmd_sub(args, argv) -> Report:
    ws = load_workspace(args)
    ctx = ws.ctx
    rep = Report(f"sub {args.action}", _params(ctx, ws.settings, argv))
    u, v = _datum(ws, args.u), _datum(ws, args.v)
    if u.carrier != v.carrier:
        raise UsageError("the two relations live over different carriers")
    show = ctx.show
    if args.action == "meet":
        d = D.meet_otimes(ctx, u, v)
        rep.add("meet", True, d.to_json(show))
        for side, w, hint in (("left", u, "fst"), ("right", v, "snd")):
            wit = D.rleq(ctx, d, w, [ctx.lib[hint]])
            rep.add(f"meet below {side}", wit is not None, wit and show(wit.realizer))
    elif args.action == "join":
        d = D.join_oplus(ctx, u, v)
        rep.add("join", True, d.to_json(show))
        for side, w, hint in (("left", u, "inl"), ("right", v, "inr")):
            wit = D.rleq(ctx, w, d, [ctx.lib[hint]])
            rep.add(f"{side} below join", wit is not None, wit and show(wit.realizer))
    elif args.action == "impl":
        d = D.impl_d(ctx, u, v)
        sample = ctx.pca.enumerate(ctx.search)
        members = {}
        for x in u.carrier:
            members[B.show_elem(x)] = [show(a) for a in sample if d.member(a, x) is True][:5]
        rep.add("implication members (first five in canonical order)", True, members)
        top = D.top(ctx, u.carrier)
        wit = D.rleq(ctx, top, d)
        rep.add("implication holds everywhere", True if wit else None,
                wit and show(wit.realizer))
    else:
        res = D.rleq_decide(ctx, u, v)
        wit = D.rleq(ctx, u, v) if res else None
        rep.add(f"{args.u} below {args.v}", res, wit and show(wit.realizer))
    return rep


def cmd_realize(args, argv) -> Report:
    ws = load_workspace(args)
    ctx = ws.ctx
    rep = Report("realize", _params(ctx, ws.settings, argv))
    p = ws.formulas.get(args.formula)
    if p is None:
        p = LG.parse_formula(args.formula)
    try:
        ws.structure.check(p)
    except (KeyError, ValueError) as exc:
        raise UsageError(f"formula does not check: {exc}") from None
    if LG.free_vars(p):
        raise UsageError("formula must be closed")
    row = LG.Realizability(ctx, ws.structure).agreement_check(p)
    status = {"found": PASS, "empty": FAIL, "not-found": UNKNOWN}[row["satisfied"]]
    rep.add("satisfied", status, {"formula": row["formula"], "witness": row["witness"]})
    agree = {"agree": PASS, "contradiction": FAIL, "unknown": UNKNOWN}[row["agreement"]]
    rep.add("truth value agrees", agree,
            {"tarski": row["tarski"], "tarski_witness": row["tarski_witness"]})
    return rep


SITUATIONS = {"self": RC.Situation, "doubled-F": RC.DoubledF, "dropping-F": RC.DroppingF,
              "broken-app": RC.BrokenApplication, "short-C": RC.ShortTruncation}


def _samples(args, ws):
    return RC.workspace_samples(ws) if args.workspace else RC.standard_samples(ws.ctx)


def cmd_axioms(args, argv) -> Report:
    ws = load_workspace(args)
    ctx = ws.ctx
    sit = SITUATIONS[args.situation](ctx)
    rep = Report("axioms", {**_params(ctx, ws.settings, argv), "situation": sit.name,
                            "c_bound": sit.c_bound})
    samples = _samples(args, ws)
    for name, r in RC.run_axioms(sit, samples).items():
        rep.extend(r, f"{name}: ")
    if args.controls:
        rep.extend(RC.control_matrix(ctx, samples), "control ")
    return rep


def cmd_reconstruct(args, argv) -> Report:
    ws = load_workspace(args)
    ctx = ws.ctx
    sit = RC.Situation(ctx)
    rep = Report("reconstruct", {**_params(ctx, ws.settings, argv), "c_bound": sit.c_bound})
    samples = _samples(args, ws)
    failed = [name for name, r in RC.run_axioms(sit, samples).items() if r.status != PASS]
    if failed:
        for name in failed:
            rep.add(f"axiom {name}", False, "precondition failed; equivalence not checked")
        return rep
    rep.add("axioms", True)
    rep.extend(RC.equivalence_check(sit, samples.objects, samples.maps, samples.sets))
    if isinstance(ctx.pca, P.TrivialModel):
        rep.extend(RC.trivial_equivalence_check(), "trivial: ")
    return rep


# ----------------------------------------------------------------------------
# Parser


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--pca", choices=sorted(P.INSTANCES), default=None)
    common.add_argument("--fuel", type=int, default=None)
    common.add_argument("--search", type=int, default=None)
    common.add_argument("--bound", type=int, default=None)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--filter", default=None, help="inh | trivial | rel:K+S | and:<a>,<b>")
    common.add_argument("--workspace", default=None)
    common.add_argument("--json", action="store_true", help="JSON only, no summary")

    ap = _Parser(prog="assemblies", description="Assemblies over finite sets: checks and reports.")
    sp = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sp.add_parser("eval", parents=[common], help="evaluate a combinator term")
    p.add_argument("term")
    p.add_argument("args", nargs="*")

    p = sp.add_parser("compile", parents=[common], help="compile a lambda term")
    p.add_argument("term")
    p.add_argument("--eta", action="store_true", help="use the eta-optimised translation")

    p = sp.add_parser("pca-check", parents=[common], help="algebra laws and filter checks")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--law-bound", type=int, default=2)

    p = sp.add_parser("asm", parents=[common], help="tracking, limits and images")
    p.add_argument("action", choices=["track", "limits", "factorize"])
    p.add_argument("names", nargs="*")

    p = sp.add_parser("sub", parents=[common], help="operations on realizer data")
    p.add_argument("action", choices=["meet", "join", "impl", "rleq"])
    p.add_argument("u")
    p.add_argument("v")

    p = sp.add_parser("realize", parents=[common], help="realizability of a closed formula")
    p.add_argument("formula", help="formula text or a workspace formula name")

    p = sp.add_parser("axioms", parents=[common], help="check the three axioms")
    p.add_argument("--situation", choices=sorted(SITUATIONS), default="self")
    p.add_argument("--controls", action="store_true", help="also run the negative controls")

    sp.add_parser("reconstruct", parents=[common], help="the comparison functor")
    return ap


COMMANDS = {"eval": cmd_eval, "compile": cmd_compile, "pca-check": cmd_pca_check,
            "asm": cmd_asm, "sub": cmd_sub, "realize": cmd_realize,
            "axioms": cmd_axioms, "reconstruct": cmd_reconstruct}

_PARSE_ERRORS = (UsageError, WS.WorkspaceError, P.TermSyntaxError, L.LambdaSyntaxError,
                 LG.FormulaSyntaxError, L.OpenTermError)


def run(argv) -> tuple:
    """``(exit code, report, parsed args)`` without touching the process streams."""
    args = build_parser().parse_args(argv)
    rep = COMMANDS[args.command](args, argv)
    return EXIT[rep.status], rep, args


def main(argv: Optional[list] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        code, rep, args = run(argv)
    except _PARSE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except (NotTracked, NeedMoreFuel, B.DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    print(rep.dumps())
    if not args.json:
        print(rep.summary(), file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
