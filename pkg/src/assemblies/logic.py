"""First-order formulas over assemblies and their realizability reading.

Sorts are assemblies, function symbols are tracked morphisms and relation
symbols are finitary realizer data over a sort (or a product of sorts).
Concrete syntax::

    forall x:X. R(x) -> exists y:Y. S(x, y)
    ~ p        p /\\ q        p \\/ q        f(x) = y        top   bot
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from . import sub as D
from .asm import Asm, Assembly
from .base import FinMap, FinObject, elem_key
from .pca import OUT_OF_FUEL, STUCK
from .report import Report, trool_all, trool_any


# ----------------------------------------------------------------------------
# Syntax


@dataclass(frozen=True)
class TVar:
    name: str


@dataclass(frozen=True)
class TApp:
    fn: str
    arg: object


class Formula:
    def __str__(self):
        return show(self)


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Bottom(Formula):
    pass


@dataclass(frozen=True)
class Eq(Formula):
    left: object
    right: object


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    sort: str
    body: Formula


@dataclass(frozen=True)
class ForAll(Formula):
    var: str
    sort: str
    body: Formula


@dataclass(frozen=True)
class Atom(Formula):
    rel: str
    args: tuple


def Not(p: Formula) -> Formula:
    return Implies(p, Bottom())


def show_term(t) -> str:
    if isinstance(t, TVar):
        return t.name
    return f"{t.fn}({show_term(t.arg)})"


def show(p: Formula, prec: int = 0) -> str:
    if isinstance(p, Top):
        return "top"
    if isinstance(p, Bottom):
        return "bot"
    if isinstance(p, Eq):
        return f"{show_term(p.left)} = {show_term(p.right)}"
    if isinstance(p, Atom):
        return f"{p.rel}({', '.join(show_term(a) for a in p.args)})"
    if isinstance(p, Implies) and isinstance(p.right, Bottom):
        return "~" + show(p.left, 4)
    if isinstance(p, (Exists, ForAll)):
        q = "forall" if isinstance(p, ForAll) else "exists"
        s = f"{q} {p.var}:{p.sort}. {show(p.body, 0)}"
        return f"({s})" if prec > 0 else s
    level, op = {And: (3, "/\\"), Or: (2, "\\/"), Implies: (1, "->")}[type(p)]
    if isinstance(p, Implies):
        s = f"{show(p.left, 2)} -> {show(p.right, 1)}"
    else:
        s = f"{show(p.left, level)} {op} {show(p.right, level + 1)}"
    return f"({s})" if prec > level else s


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


_TOK = re.compile(r"\s*(?:(?P<op>->|/\\|\\/|[~().:,=])|(?P<id>[A-Za-z_][A-Za-z0-9_']*))")
_KEYWORDS = {"forall", "exists", "top", "bot"}


def parse_formula(text: str) -> Formula:
    toks = []
    i = 0
    while i < len(text):
        if text[i].isspace():
            i += 1
            continue
        m = _TOK.match(text, i)
        if not m or m.end() == i:
            raise FormulaSyntaxError(f"unexpected character {text[i]!r}", i)
        kind = "op" if m.group("op") else "id"
        start = m.start(kind)
        toks.append((kind, m.group(kind), start))
        i = m.end()
    pos = 0

    def peek(k=0):
        j = pos + k
        return toks[j] if j < len(toks) else (None, None, len(text))

    def take(val=None, kind=None):
        nonlocal pos
        t = peek()
        if (val is not None and t[1] != val) or (kind is not None and t[0] != kind):
            raise FormulaSyntaxError(f"expected {val or kind}", t[2])
        pos += 1
        return t

    def formula():
        left = disj()
        if peek()[1] == "->":
            take("->")
            return Implies(left, formula())
        return left

    def disj():
        p = conj()
        while peek()[1] == "\\/":
            take()
            p = Or(p, conj())
        return p

    def conj():
        p = unary()
        while peek()[1] == "/\\":
            take()
            p = And(p, unary())
        return p

    def unary():
        kind, val, at = peek()
        if val == "~":
            take()
            return Not(unary())
        if val in ("forall", "exists"):
            take()
            var = take(kind="id")[1]
            take(":")
            sort = take(kind="id")[1]
            take(".")
            body = formula()
            return ForAll(var, sort, body) if val == "forall" else Exists(var, sort, body)
        return primary()

    def term():
        name = take(kind="id")[1]
        if name in _KEYWORDS:
            raise FormulaSyntaxError("keyword used as a term", peek(-1)[2])
        if peek()[1] == "(":
            take("(")
            arg = term()
            take(")")
            return TApp(name, arg)
        return TVar(name)

    def primary():
        nonlocal pos
        kind, val, at = peek()
        if val == "top":
            take()
            return Top()
        if val == "bot":
            take()
            return Bottom()
        if val == "(":
            take("(")
            p = formula()
            take(")")
            return p
        if kind != "id":
            raise FormulaSyntaxError("expected a formula", at)
        save = pos
        # relation application R(t, ...) unless followed by '='
        if peek(1)[1] == "(":
            name = take()[1]
            take("(")
            args = [term()]
            while peek()[1] == ",":
                take()
                args.append(term())
            take(")")
            if peek()[1] != "=":
                return Atom(name, tuple(args))
            pos = save
        left = term()
        take("=")
        return Eq(left, term())

    p = formula()
    if pos != len(toks):
        raise FormulaSyntaxError("trailing input", peek()[2])
    return p


# ----------------------------------------------------------------------------
# Structures


@dataclass
class Relation:
    sorts: tuple
    datum: D.Finitary


@dataclass
class Structure:
    sorts: dict = field(default_factory=dict)
    functions: dict = field(default_factory=dict)
    relations: dict = field(default_factory=dict)

    def add_relation(self, name: str, sorts, table: dict):
        """``table`` maps an element (unary) or tuple of elements to realizers."""
        sorts = tuple(sorts)
        carrier = self.carrier_of(sorts)
        if len(sorts) == 1:
            table = {(k,): v for k, v in table.items()}
        self.relations[name] = Relation(sorts, D.Finitary(carrier, table))

    def carrier_of(self, sorts) -> FinObject:
        from itertools import product
        return FinObject(product(*[self.sorts[s].carrier.elements for s in sorts]))

    def term_sort(self, t, env_sorts: dict) -> str:
        if isinstance(t, TVar):
            if t.name not in env_sorts:
                raise ValueError(f"unbound variable {t.name}")
            return env_sorts[t.name]
        fn = self.functions[t.fn]
        src = self.term_sort(t.arg, env_sorts)
        if self.sorts[src] != fn.src:
            raise ValueError(f"{t.fn} applied to a term of sort {src}")
        return self.sort_name(fn.dst)

    def sort_name(self, a: Assembly) -> str:
        for name, s in self.sorts.items():
            if s == a:
                return name
        raise ValueError("function target is not a declared sort")

    def check(self, p: Formula, env_sorts: Optional[dict] = None) -> None:
        """Raise ValueError unless ``p`` is well-sorted."""
        env_sorts = dict(env_sorts or {})
        if isinstance(p, Eq):
            if self.term_sort(p.left, env_sorts) != self.term_sort(p.right, env_sorts):
                raise ValueError(f"sort mismatch in {show(p)}")
        elif isinstance(p, Atom):
            rel = self.relations.get(p.rel)
            if rel is None:
                raise ValueError(f"unknown relation {p.rel}")
            got = tuple(self.term_sort(a, env_sorts) for a in p.args)
            if got != rel.sorts:
                raise ValueError(f"{p.rel} expects sorts {rel.sorts}, got {got}")
        elif isinstance(p, (And, Or, Implies)):
            self.check(p.left, env_sorts)
            self.check(p.right, env_sorts)
        elif isinstance(p, (Exists, ForAll)):
            if p.sort not in self.sorts:
                raise ValueError(f"unknown sort {p.sort}")
            self.check(p.body, {**env_sorts, p.var: p.sort})

    def eval_term(self, t, env: dict):
        if isinstance(t, TVar):
            return env[t.name]
        return self.functions[t.fn](self.eval_term(t.arg, env))


def free_vars(p: Formula) -> set:
    def tv(t):
        return {t.name} if isinstance(t, TVar) else tv(t.arg)

    if isinstance(p, Eq):
        return tv(p.left) | tv(p.right)
    if isinstance(p, Atom):
        return set().union(*[tv(a) for a in p.args])
    if isinstance(p, (And, Or, Implies)):
        return free_vars(p.left) | free_vars(p.right)
    if isinstance(p, (Exists, ForAll)):
        return free_vars(p.body) - {p.var}
    return set()


# ----------------------------------------------------------------------------
# The realizability relation


class Realizability:
    def __init__(self, ctx: Asm, st: Structure):
        self.ctx = ctx
        self.st = st
        self.k0 = ctx.lib["k0"]
        self.l0 = ctx.lib["l0"]

    def _split(self, a):
        """``(a.k0, a.l0)`` or a trool when either is not defined."""
        r0 = self.ctx.apply(a, self.k0)
        r1 = self.ctx.apply(a, self.l0)
        if r0 is STUCK or r1 is STUCK:
            return False
        if r0 is OUT_OF_FUEL or r1 is OUT_OF_FUEL:
            return None
        return r0.value, r1.value

    def table(self, p: Formula, env: dict) -> Optional[frozenset]:
        """Canonical finite realizers of ``p``, None for implications and
        universal statements."""
        ctx = self.ctx
        if isinstance(p, (Top,)):
            return frozenset([ctx.I])
        if isinstance(p, Bottom):
            return frozenset()
        if isinstance(p, Eq):
            ok = self.st.eval_term(p.left, env) == self.st.eval_term(p.right, env)
            return frozenset([ctx.I]) if ok else frozenset()
        if isinstance(p, Atom):
            rel = self.st.relations[p.rel]
            pt = tuple(self.st.eval_term(a, env) for a in p.args)
            return rel.datum.table(pt)
        if isinstance(p, And):
            t1, t2 = self.table(p.left, env), self.table(p.right, env)
            if t1 is None or t2 is None:
                return None
            return frozenset(ctx.pair(a, b) for a in t1 for b in t2)
        if isinstance(p, Or):
            t1, t2 = self.table(p.left, env), self.table(p.right, env)
            if t1 is None or t2 is None:
                return None
            return frozenset([ctx.pair(self.k0, a) for a in t1] + [ctx.pair(self.l0, b) for b in t2])
        if isinstance(p, Exists):
            out = set()
            sort = self.st.sorts[p.sort]
            for x, rs in sort.table:
                t = self.table(p.body, {**env, p.var: x})
                if t is None:
                    return None
                out.update(ctx.pair(u, r) for u in rs for r in t)
            return frozenset(out)
        return None

    def premises(self, p: Formula, env: dict):
        """Realizers of ``p`` quantified over by an implication: the canonical
        table when there is one, else the enumerated values realizing ``p``."""
        t = self.table(p, env)
        if t is not None:
            return sorted(t, key=elem_key)
        vals = self.ctx.pca.enumerate(self.ctx.search)
        return [b for b in vals if self.realizes(b, p, env) is True]

    def realizes(self, a, p: Formula, env: Optional[dict] = None) -> Optional[bool]:
        env = env or {}
        ctx = self.ctx
        if isinstance(p, Top):
            return True
        if isinstance(p, Bottom):
            return False
        if isinstance(p, Eq):
            return self.st.eval_term(p.left, env) == self.st.eval_term(p.right, env)
        if isinstance(p, Atom):
            rel = self.st.relations[p.rel]
            pt = tuple(self.st.eval_term(t, env) for t in p.args)
            return rel.datum.member(a, pt)
        if isinstance(p, And):
            s = self._split(a)
            if not isinstance(s, tuple):
                return s
            return trool_all([self.realizes(s[0], p.left, env), self.realizes(s[1], p.right, env)])
        if isinstance(p, Or):
            s = self._split(a)
            if not isinstance(s, tuple):
                return s
            tag, body = s
            if tag == self.k0:
                return self.realizes(body, p.left, env)
            if tag == self.l0:
                return self.realizes(body, p.right, env)
            return False
        if isinstance(p, Implies):
            results = []
            for b in self.premises(p.left, env):
                r = ctx.apply(a, b)
                if r is STUCK:
                    return False
                if r is OUT_OF_FUEL:
                    results.append(None)
                    continue
                v = self.realizes(r.value, p.right, env)
                if v is False:
                    return False
                results.append(v)
            return trool_all(results)
        if isinstance(p, Exists):
            s = self._split(a)
            if not isinstance(s, tuple):
                return s
            u, body = s
            sort = self.st.sorts[p.sort]
            return trool_any(self.realizes(body, p.body, {**env, p.var: x})
                             for x, rs in sort.table if u in rs)
        if isinstance(p, ForAll):
            sort = self.st.sorts[p.sort]
            results = []
            for x, rs in sort.table:
                for b in rs:
                    r = ctx.apply(a, b)
                    if r is STUCK:
                        return False
                    if r is OUT_OF_FUEL:
                        results.append(None)
                        continue
                    v = self.realizes(r.value, p.body, {**env, p.var: x})
                    if v is False:
                        return False
                    results.append(v)
            return trool_all(results)
        raise TypeError(f"not a formula: {p!r}")

    # -- realizer data ------------------------------------------------------

    def context_carrier(self, variables) -> FinObject:
        return self.st.carrier_of([s for _, s in variables])

    def realizer_datum(self, p: Formula, variables=()) -> D.RealizerDatum:
        """The realizers of ``p`` as a datum over the product of the sorts of
        ``variables`` (a sequence of ``(name, sort)``), built clause by clause
        from the data of the subformulas."""
        variables = tuple(variables)
        carrier = self.context_carrier(variables)
        names = [v for v, _ in variables]
        ctx = self.ctx

        def env_of(pt):
            return dict(zip(names, pt))

        if isinstance(p, (Top, Bottom, Eq)):
            return _Clause(carrier, lambda pt: self.table(p, env_of(pt)),
                           lambda a, pt: self.realizes(a, p, env_of(pt)))
        if isinstance(p, Atom):
            rel = self.st.relations[p.rel]
            f = FinMap(carrier, rel.datum.carrier,
                       {pt: tuple(self.st.eval_term(t, env_of(pt)) for t in p.args) for pt in carrier})
            return D.inv_image_datum(f, rel.datum)
        if isinstance(p, Implies):
            return D.impl_d(ctx, self.realizer_datum(p.left, variables),
                            self.realizer_datum(p.right, variables), strict=False)
        if isinstance(p, And):
            u = self.realizer_datum(p.left, variables)
            v = self.realizer_datum(p.right, variables)
            return _Clause(carrier,
                           lambda pt: _both_tables(u, v, pt, lambda t1, t2: {ctx.pair(a, b) for a in t1 for b in t2}),
                           D.MeetTest(ctx, u, v).member)
        if isinstance(p, Or):
            u = self.realizer_datum(p.left, variables)
            v = self.realizer_datum(p.right, variables)

            def or_member(a, pt):
                s = self._split(a)
                if not isinstance(s, tuple):
                    return s
                if s[0] == self.k0:
                    return u.member(s[1], pt)
                if s[0] == self.l0:
                    return v.member(s[1], pt)
                return False

            return _Clause(carrier,
                           lambda pt: _both_tables(u, v, pt, lambda t1, t2: {ctx.pair(self.k0, a) for a in t1}
                                                   | {ctx.pair(self.l0, b) for b in t2}),
                           or_member)
        if isinstance(p, (Exists, ForAll)):
            inner = variables + ((p.var, p.sort),)
            body = self.realizer_datum(p.body, inner)
            ext = self.context_carrier(inner)
            proj = FinMap(ext, carrier, {pt: pt[:-1] for pt in ext})
            sort = self.st.sorts[p.sort]
            rho = D.Finitary(ext, {pt: sort.rho(pt[-1]) for pt in ext})
            if isinstance(p, ForAll):
                return D.forall_along(proj, D.impl_d(ctx, rho, body, strict=False))
            paired = _Clause(ext,
                             lambda pt: _both_tables(rho, body, pt, lambda t1, t2: {ctx.pair(a, b) for a in t1 for b in t2}),
                             D.MeetTest(ctx, rho, body).member)
            if all(paired.table(pt) is not None for pt in ext):
                tables = D.exists_along(proj, D.Finitary(ext, {pt: paired.table(pt) for pt in ext}))
                return _Clause(carrier, tables.table, D.ExistsTest(proj, paired).member)
            return D.ExistsTest(proj, paired)
        raise TypeError(f"not a formula: {p!r}")

    # -- canonical candidates -------------------------------------------------

    def synth(self, p: Formula, env: dict, tagged: bool = False):
        """Build a candidate realizer of ``p`` at ``env`` from canonical
        pieces, or None.  With ``tagged`` disjunctions use the injection
        terms instead of tag pairs.  Candidates are always re-verified."""
        ctx = self.ctx
        if isinstance(p, (Top, Bottom, Eq, Atom)):
            t = self.table(p, env)
            return min(t, key=elem_key) if t else None
        if isinstance(p, And):
            a = self.synth(p.left, env, tagged)
            b = self.synth(p.right, env, tagged)
            return None if a is None or b is None else ctx.pair(a, b)
        if isinstance(p, Or):
            a = self.synth(p.left, env, tagged)
            if a is not None:
                return ctx.value(ctx.lib["inl"], a) if tagged else ctx.pair(self.k0, a)
            b = self.synth(p.right, env, tagged)
            if b is not None:
                return ctx.value(ctx.lib["inr"], b) if tagged else ctx.pair(self.l0, b)
            return None
        if isinstance(p, Exists):
            for x, rs in self.st.sorts[p.sort].table:
                r = self.synth(p.body, {**env, p.var: x}, tagged)
                if r is not None:
                    return ctx.pair(rs[0], r)
            return None
        if isinstance(p, Implies):
            if _exact(p.left) and not self.table(p.left, env):
                return ctx.I
            r = self.synth(p.right, env, tagged)
            return None if r is None else ctx.const(r)
        rs = {self.synth(p.body, {**env, p.var: x}, tagged) for x in self.st.sorts[p.sort].carrier}
        if len(rs) == 1 and None not in rs:
            return ctx.const(rs.pop())
        return None

    # -- satisfaction -------------------------------------------------------

    def satisfies(self, p: Formula, hints=()):
        """A realizer of the closed formula ``p`` admitted by the filter."""
        if free_vars(p):
            raise ValueError("satisfies needs a closed formula")
        table = self.table(p, {}) or frozenset()
        guess = self.synth(p, {})
        ordered = list(hints) + ([guess] if guess is not None else []) + sorted(table, key=elem_key)
        for a in self.ctx.candidates(ordered, sorted(table, key=elem_key)):
            if self.realizes(a, p) is True and self.ctx.admissible(a):
                return a
        return None

    def satisfies_decide(self, p: Formula, hints=()) -> Optional[bool]:
        if self.satisfies(p, hints) is not None:
            return True
        if _exact(p) and not self.table(p, {}):
            return False
        return None

    def tarski_truth(self, p: Formula, variables=()) -> D.RealizerDatum:
        """The truth value of ``p`` as a datum, built with the subobject
        operations: tensor, tagged sum, implication, images along projections."""
        variables = tuple(variables)
        carrier = self.context_carrier(variables)
        names = [v for v, _ in variables]
        ctx = self.ctx

        def env_of(pt):
            return dict(zip(names, pt))

        if isinstance(p, Top):
            return D.top(ctx, carrier)
        if isinstance(p, Bottom):
            return D.bottom(carrier)
        if isinstance(p, Eq):
            return D.Finitary(carrier, {pt: {ctx.I} for pt in carrier
                                        if self.st.eval_term(p.left, env_of(pt)) == self.st.eval_term(p.right, env_of(pt))})
        if isinstance(p, Atom):
            return self.realizer_datum(p, variables)
        if isinstance(p, And):
            return D.meet_otimes(ctx, self.tarski_truth(p.left, variables), self.tarski_truth(p.right, variables))
        if isinstance(p, Or):
            return D.join_oplus(ctx, self.tarski_truth(p.left, variables), self.tarski_truth(p.right, variables))
        if isinstance(p, Implies):
            return D.impl_d(ctx, self.tarski_truth(p.left, variables),
                            self.tarski_truth(p.right, variables), strict=False)
        inner = variables + ((p.var, p.sort),)
        body = self.tarski_truth(p.body, inner)
        ext = self.context_carrier(inner)
        proj = FinMap(ext, carrier, {pt: pt[:-1] for pt in ext})
        sort = self.st.sorts[p.sort]
        rho = D.Finitary(ext, {pt: sort.rho(pt[-1]) for pt in ext})
        if isinstance(p, Exists):
            return D.exists_along(proj, D.meet_otimes(ctx, rho, body))
        return D.forall_along(proj, D.impl_d(ctx, rho, body, strict=False))

    def tarski_decide(self, p: Formula, hints=()) -> tuple:
        """``(verdict, witness)``: whether top lies below the truth value."""
        tau = self.tarski_truth(p)
        one = tau.carrier
        guess = self.synth(p, {}, tagged=True)
        if guess is not None:
            hints = list(hints) + [self.ctx.const(guess)]
        w = D.rleq(self.ctx, D.top(self.ctx, one), tau, hints)
        if w is not None:
            return True, w.realizer
        if tau.finitary and not any(tau.table(x) for x in one):
            return False, None
        return None, None

    def agreement_check(self, p: Formula, hints=()) -> dict:
        """Compare the truth-value side and the realizer side for ``p``."""
        t_verdict, t_witness = self.tarski_decide(p, hints)
        witness = self.satisfies(p, hints)
        s_verdict = True if witness is not None else (
            False if _exact(p) and not self.table(p, {}) else None)
        if t_verdict is not None and s_verdict is not None and t_verdict != s_verdict:
            agreement = "contradiction"
        elif (t_verdict is True) == (s_verdict is True):
            agreement = "agree"
        else:
            agreement = "unknown"
        show_ = self.ctx.show
        return {
            "formula": show(p),
            "witness": None if witness is None else show_(witness),
            "tarski": {True: "top", False: "not-top", None: "not-found"}[t_verdict],
            "tarski_witness": None if t_witness is None else show_(t_witness),
            "satisfied": {True: "found", False: "empty", None: "not-found"}[s_verdict],
            "agreement": agreement,
        }


class _Clause(D.RealizerDatum):
    def __init__(self, carrier, table_fn, member_fn):
        self.carrier = carrier
        self._table = table_fn
        self._member = member_fn

    def table(self, x):
        return self._table(x)

    def member(self, a, x):
        return self._member(a, x)


def _both_tables(u, v, pt, combine):
    t1, t2 = u.table(pt), v.table(pt)
    if t1 is None or t2 is None:
        return None
    return frozenset(combine(t1, t2))


def _exact(p: Formula) -> bool:
    """Formulas whose canonical table is empty exactly when nothing realizes them."""
    if isinstance(p, (Top, Bottom, Eq, Atom)):
        return True
    if isinstance(p, (And, Or)):
        return _exact(p.left) and _exact(p.right)
    if isinstance(p, Exists):
        return _exact(p.body)
    return False


def corpus_report(ctx: Asm, st: Structure, formulas, title: str = "realize") -> Report:
    rz = Realizability(ctx, st)
    report = Report(title, ctx.params())
    for p in formulas:
        row = rz.agreement_check(p)
        status = {"agree": "pass", "contradiction": "fail", "unknown": "unknown"}[row["agreement"]]
        report.add(row["formula"], status, row)
    return report
