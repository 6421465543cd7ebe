"""Untyped lambda terms with constants, and their compilation to combinators.

Grammar::

    term  ::= '\\' ident+ '.' term | app
    app   ::= atom+                      (left associative)
    atom  ::= ident | '(' term ')' | '[' name ']' | '{' sk-term (',' sk-term)* '}'

``[name]`` splices a library constant, ``{t}`` splices a single combinator
term and ``{t1, t2}`` (or ``{t,}``) a finite set of them.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Union

from . import pca as P
from .pca import OUT_OF_FUEL, STUCK, Defined, Term
from .report import trool_all


class LambdaTerm:
    __slots__ = ()

    def __str__(self):
        return show(self)


@dataclass(frozen=True)
class Var(LambdaTerm):
    name: str


@dataclass(frozen=True)
class App(LambdaTerm):
    fun: LambdaTerm
    arg: LambdaTerm


@dataclass(frozen=True)
class Abs(LambdaTerm):
    var: str
    body: LambdaTerm


@dataclass(frozen=True)
class Const(LambdaTerm):
    """A constant: one combinator term, or a finite set of them."""

    value: Union[Term, frozenset]
    name: Optional[str] = None


def lams(names, body: LambdaTerm) -> LambdaTerm:
    for n in reversed(list(names)):
        body = Abs(n, body)
    return body


def apps(head: LambdaTerm, *args: LambdaTerm) -> LambdaTerm:
    for a in args:
        head = App(head, a)
    return head


# ----------------------------------------------------------------------------
# Parsing and printing


class LambdaSyntaxError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


_TOKEN = re.compile(r"\s*(?:(?P<ident>[A-Za-z_][A-Za-z0-9_']*)|(?P<sym>[\\.()\[\]]))")


def _scan(text: str):
    """Yield (kind, value, pos); braces are returned raw for the SK parser."""
    i = 0
    n = len(text)
    while i < n:
        if text[i].isspace():
            i += 1
            continue
        if text[i] == "{":
            j = text.find("}", i)
            if j < 0:
                raise LambdaSyntaxError("unterminated '{'", i)
            yield "splice", text[i + 1:j], i
            i = j + 1
            continue
        m = _TOKEN.match(text, i)
        if not m or m.end() == i:
            raise LambdaSyntaxError(f"unexpected character {text[i]!r}", i)
        if m.group("ident"):
            yield "ident", m.group("ident"), m.start("ident")
        else:
            yield "sym", m.group("sym"), m.start("sym")
        i = m.end()


def parse(text: str, constants: Optional[dict] = None) -> LambdaTerm:
    tokens = list(_scan(text))
    pos = 0
    end = len(text)

    def peek():
        return tokens[pos] if pos < len(tokens) else (None, None, end)

    def expect(sym):
        nonlocal pos
        kind, val, at = peek()
        if kind != "sym" or val != sym:
            raise LambdaSyntaxError(f"expected {sym!r}", at)
        pos += 1

    def term():
        nonlocal pos
        kind, val, at = peek()
        if kind == "sym" and val == "\\":
            pos += 1
            names = []
            while peek()[0] == "ident":
                names.append(peek()[1])
                pos += 1
            if not names:
                raise LambdaSyntaxError("expected a bound variable", peek()[2])
            expect(".")
            return lams(names, term())
        return app()

    def starts_atom():
        kind, val, _ = peek()
        return kind in ("ident", "splice") or (kind == "sym" and val in "([\\")

    def app():
        if not starts_atom():
            raise LambdaSyntaxError("expected a term", peek()[2])
        t = atom()
        while starts_atom():
            if peek()[1] == "\\":
                t = App(t, term())
                break
            t = App(t, atom())
        return t

    def atom():
        nonlocal pos
        kind, val, at = peek()
        pos += 1
        if kind == "ident":
            return Var(val)
        if kind == "splice":
            parts = [p for p in val.split(",")]
            try:
                if len(parts) == 1:
                    return Const(P.parse_term(parts[0]))
                return Const(frozenset(P.parse_term(p) for p in parts if p.strip()))
            except P.TermSyntaxError as exc:
                raise LambdaSyntaxError(f"bad combinator term: {exc}", at) from None
        if val == "(":
            t = term()
            expect(")")
            return t
        if val == "[":
            k2, name, at2 = peek()
            if k2 != "ident":
                raise LambdaSyntaxError("expected a constant name", at2)
            pos += 1
            expect("]")
            table = constants if constants is not None else library_terms_sk()
            if name not in table:
                raise LambdaSyntaxError(f"unknown constant {name!r}", at2)
            return Const(table[name], name)
        raise LambdaSyntaxError(f"unexpected {val!r}", at)

    t = term()
    if pos != len(tokens):
        raise LambdaSyntaxError("trailing input", peek()[2])
    return t


def _show_const(c: Const) -> str:
    if c.name is not None:
        return f"[{c.name}]"
    if isinstance(c.value, frozenset):
        items = sorted(c.value)
        body = ", ".join(P.show_term(t) for t in items)
        return "{" + body + ("," if len(items) == 1 else "") + "}"
    return "{" + P.show_term(c.value) + "}"


def show(m: LambdaTerm) -> str:
    if isinstance(m, Var):
        return m.name
    if isinstance(m, Const):
        return _show_const(m)
    if isinstance(m, Abs):
        names = []
        while isinstance(m, Abs):
            names.append(m.var)
            m = m.body
        return "\\" + " ".join(names) + ". " + show(m)
    f = show(m.fun)
    if isinstance(m.fun, Abs):
        f = f"({f})"
    a = show(m.arg)
    if isinstance(m.arg, (App, Abs)):
        a = f"({a})"
    return f"{f} {a}"


# ----------------------------------------------------------------------------
# Free variables, substitution, conversion


def fv(m: LambdaTerm) -> frozenset:
    if isinstance(m, Var):
        return frozenset([m.name])
    if isinstance(m, App):
        return fv(m.fun) | fv(m.arg)
    if isinstance(m, Abs):
        return fv(m.body) - {m.var}
    return frozenset()


def fresh(base: str, avoid) -> str:
    name = base
    while name in avoid:
        name += "'"
    return name


def substitute(m: LambdaTerm, p: LambdaTerm, y: str) -> LambdaTerm:
    """Capture-avoiding ``m[p/y]``."""
    if isinstance(m, Var):
        return p if m.name == y else m
    if isinstance(m, App):
        return App(substitute(m.fun, p, y), substitute(m.arg, p, y))
    if isinstance(m, Abs):
        if m.var == y:
            return m
        fvp = fv(p)
        if m.var in fvp and y in fv(m.body):
            x2 = fresh(m.var, fvp | fv(m.body) | {y})
            body = substitute(m.body, Var(x2), m.var)
            return Abs(x2, substitute(body, p, y))
        return Abs(m.var, substitute(m.body, p, y))
    return m


def _step(m: LambdaTerm) -> Optional[LambdaTerm]:
    """One leftmost-outermost beta step, or None at a normal form."""
    if isinstance(m, App):
        if isinstance(m.fun, Abs):
            return substitute(m.fun.body, m.arg, m.fun.var)
        s = _step(m.fun)
        if s is not None:
            return App(s, m.arg)
        s = _step(m.arg)
        if s is not None:
            return App(m.fun, s)
        return None
    if isinstance(m, Abs):
        s = _step(m.body)
        return None if s is None else Abs(m.var, s)
    return None


def normalize(m: LambdaTerm, fuel: int):
    """Beta normal form within ``fuel`` steps, else :data:`OUT_OF_FUEL`."""
    for _ in range(fuel + 1):
        s = _step(m)
        if s is None:
            return m
        m = s
    return OUT_OF_FUEL


def eta_reduce(m: LambdaTerm) -> LambdaTerm:
    if isinstance(m, App):
        return App(eta_reduce(m.fun), eta_reduce(m.arg))
    if isinstance(m, Abs):
        body = eta_reduce(m.body)
        if (isinstance(body, App) and body.arg == Var(m.var)
                and m.var not in fv(body.fun)):
            return body.fun
        return Abs(m.var, body)
    return m


def _debruijn(m: LambdaTerm, bound=()):
    if isinstance(m, Var):
        for i, name in enumerate(reversed(bound)):
            if name == m.name:
                return ("b", i)
        return ("f", m.name)
    if isinstance(m, App):
        return ("a", _debruijn(m.fun, bound), _debruijn(m.arg, bound))
    if isinstance(m, Abs):
        return ("l", _debruijn(m.body, bound + (m.var,)))
    return ("c", m.value)


def alpha_equal(m: LambdaTerm, n: LambdaTerm) -> bool:
    return _debruijn(m) == _debruijn(n)


def converts(m: LambdaTerm, n: LambdaTerm, fuel: int = 200) -> Optional[bool]:
    """Decide beta-eta convertibility when both sides normalize within fuel.

    Eta is applied only to beta normal forms (eta reduction preserves beta
    normality), so for normalizing terms the answer is exact.
    """
    nm = normalize(m, fuel)
    nn = normalize(n, fuel)
    if nm is OUT_OF_FUEL or nn is OUT_OF_FUEL:
        return None
    return alpha_equal(eta_reduce(nm), eta_reduce(nn))


# ----------------------------------------------------------------------------
# Bracket abstraction


class OpenTermError(ValueError):
    pass


class _Hole(Term):
    __slots__ = ("name",)

    def __init__(self, name):
        self.name = name

    def __eq__(self, other):
        return isinstance(other, _Hole) and other.name == self.name

    def __hash__(self):
        return hash(("hole", self.name))


I_TERM = P.S(P.K, P.K)


def _holes(t: Term) -> set:
    return {leaf.name for leaf in P.leaves(t) if isinstance(leaf, _Hole)}


def _abstract(x: str, t: Term, eta: bool) -> Term:
    if t == _Hole(x):
        return I_TERM
    if x not in _holes(t):
        return P.App(P.K, t)
    if eta and isinstance(t, P.App) and t.arg == _Hole(x) and x not in _holes(t.fun):
        return t.fun
    return P.App(P.App(P.S, _abstract(x, t.fun, eta)), _abstract(x, t.arg, eta))


def _to_cl(m: LambdaTerm, eta: bool) -> Term:
    if isinstance(m, Var):
        return _Hole(m.name)
    if isinstance(m, Const):
        if isinstance(m.value, frozenset):
            if len(m.value) != 1:
                raise ValueError("only single-valued constants can be compiled")
            (v,) = m.value
            return v
        return m.value
    if isinstance(m, App):
        return P.App(_to_cl(m.fun, eta), _to_cl(m.arg, eta))
    return _abstract(m.var, _to_cl(m.body, eta), eta)


def bracket_abstract(m: LambdaTerm, eta: bool = False) -> Term:
    """Translate a closed lambda term into a K/S combinator term.

    Uses ``[x]x = S K K``, ``[x]M = K M`` (x not free) and
    ``[x](M N) = S ([x]M) ([x]N)``; with ``eta`` also ``[x](M x) = M``.
    The result may contain redexes; evaluate it with ``pca.embed``.
    """
    free = fv(m)
    if free:
        raise OpenTermError(f"open term, free variables {sorted(free)}")
    return _to_cl(m, eta)


def compile_term(m: LambdaTerm, pca: P.PCA = P.SK, fuel: int = 10_000):
    return pca.embed(bracket_abstract(m), fuel)


def arity(m: LambdaTerm) -> int:
    n = 0
    while isinstance(m, Abs):
        n += 1
        m = m.body
    return n


# ----------------------------------------------------------------------------
# Library of named terms

LIBRARY_SOURCES = {
    "id": r"\x. x",
    "k0": r"\x y. x",
    "l0": r"\x y. y",
    "pair": r"\x y p. p x y",
    "fst": r"\x. x (\y z. y)",
    "snd": r"\x. x (\y z. z)",
    "inl": r"\x f g. f x",
    "inr": r"\x f g. g x",
    "compose": r"\f g x. f (g x)",
    "apply2": r"\x y z. (x y) z",
    "curry": r"\h x y. h ([pair] x y)",
    "uncurry": r"\h x. x h",
    "case": r"\f g x. x f g",
    "pairing": r"\f g x. [pair] (f x) (g x)",
    "tagl": r"\u. [pair] [k0] u",
    "tagr": r"\v. [pair] [l0] v",
}


@lru_cache(maxsize=None)
def library_lambda() -> dict:
    """Parsed library terms, in definition order."""
    consts = {}
    out = {}
    for name, src in LIBRARY_SOURCES.items():
        m = parse(src, consts)
        out[name] = m
        consts[name] = _sk_value(m)
    return out


@lru_cache(maxsize=None)
def _sk_value_cached(m: LambdaTerm) -> Term:
    r = P.SK.embed(bracket_abstract(m), 10_000)
    if not isinstance(r, Defined):
        raise RuntimeError(f"library term did not evaluate: {show(m)}")
    return r.value


def _sk_value(m):
    return _sk_value_cached(m)


@lru_cache(maxsize=None)
def library_terms_sk() -> dict:
    return {name: _sk_value(m) for name, m in library_lambda().items()}


_LIB_CACHE: dict = {}


def compile_library(pca: P.PCA = P.SK) -> dict:
    """Canonical compiled representatives of the named library terms."""
    key = id(pca)
    if key not in _LIB_CACHE:
        out = {}
        for name, v in library_terms_sk().items():
            r = pca.embed(v, 10_000)
            if not isinstance(r, Defined):
                raise RuntimeError(f"library term {name} undefined in {pca.name}")
            out[name] = r.value
        _LIB_CACHE[key] = (pca, out)
    return _LIB_CACHE[key][1]


def beta_oracle(m: LambdaTerm, args, pca: P.PCA = P.SK, fuel: int = 500, pca_fuel: int = 10_000):
    """Apply ``m`` to constant arguments, beta-normalize, then compile the
    residual normal form and evaluate it.  Independent of compiling ``m``."""
    if isinstance(pca, P.NumericModel):
        args = [pca.decode(a) for a in args]
    nf = normalize(apps(m, *[Const(a) for a in args]), fuel)
    if nf is OUT_OF_FUEL:
        return OUT_OF_FUEL
    return pca.embed(bracket_abstract(nf), pca_fuel)


# ----------------------------------------------------------------------------
# Denotations


_VAR = re.compile(r"x(\d+)$")


def var_index(name: str) -> int:
    m = _VAR.match(name)
    if not m:
        raise ValueError(f"variable {name!r} is not of the form x<i>")
    return int(m.group(1))


@dataclass(frozen=True)
class DenotationQuery:
    term: LambdaTerm
    arity: int
    args: tuple
    candidate: object
    fuel: int = 64

    def __post_init__(self):
        if len(self.args) != self.arity:
            raise ValueError("argument count must equal the arity")
        for name in fv(self.term):
            if var_index(name) >= self.arity:
                raise ValueError(f"free variable {name} out of range")


class _Denoter:
    def __init__(self, pca: P.PCA, fuel: int, search_bound: int):
        self.pca = pca
        self.fuel = fuel
        self.sample = pca.enumerate(search_bound)
        self.library = list(compile_library(pca).values())

    def const_values(self, c: Const) -> list:
        vals = c.value if isinstance(c.value, frozenset) else [c.value]
        out = []
        for v in sorted(vals):
            r = self.pca.embed(v, self.fuel)
            if isinstance(r, Defined):
                out.append(r.value)
        return out

    def witnesses(self, m, args):
        if isinstance(m, Var):
            return [args[var_index(m.name)]], True
        if isinstance(m, Const):
            return self.const_values(m), True
        cands = []
        if all(isinstance(a, Term) for a in args):
            closed = m
            for name in fv(m):
                closed = substitute(closed, Const(args[var_index(name)]), name)
            r = self.pca.embed(bracket_abstract(closed), self.fuel)
            if isinstance(r, Defined):
                cands.append(r.value)
        for v in self.library + self.sample:
            if v not in cands:
                cands.append(v)
        return cands, False

    def member(self, m, args, d) -> Optional[bool]:
        if isinstance(m, Var):
            return d == args[var_index(m.name)]
        if isinstance(m, Const):
            return d in self.const_values(m)
        if isinstance(m, Abs):
            n = len(args)
            body = substitute(m.body, Var(f"x{n}"), m.var)
            results = []
            for c in self.sample:
                r = self.pca.apply(d, c, self.fuel)
                if r is STUCK:
                    continue
                if r is OUT_OF_FUEL:
                    results.append(None)
                    continue
                verdict = self.member(body, args + (c,), r.value)
                if verdict is False:
                    return False
                results.append(verdict)
            return trool_all(results)
        # application: exists b in [[M]], c in [[N]] with b.c defined => b.c = d
        bs, exact_b = self.witnesses(m.fun, args)
        cs, exact_c = self.witnesses(m.arg, args)
        unknown = False
        c_ok = []
        for c in cs:
            v = self.member(m.arg, args, c)
            if v is True:
                c_ok.append(c)
            elif v is None:
                unknown = True
        for b in bs:
            vb = self.member(m.fun, args, b)
            if vb is None:
                unknown = True
            if vb is not True:
                continue
            for c in c_ok:
                r = self.pca.apply(b, c, self.fuel)
                if r is STUCK:
                    return True
                if r is OUT_OF_FUEL:
                    unknown = True
                elif r.value == d:
                    return True
        if exact_b and exact_c and not unknown:
            return False
        return None


def denotes(q: DenotationQuery, pca: P.PCA = P.SK, search_bound: int = 6) -> Optional[bool]:
    """Bound-relative membership ``(args, candidate) in [[term]]_n``."""
    return _Denoter(pca, q.fuel, search_bound).member(q.term, tuple(q.args), q.candidate)
