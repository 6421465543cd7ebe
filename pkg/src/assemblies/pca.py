"""Partial combinatory algebras with fuel-bounded application.

Three instances are provided:

* :data:`SK` -- closed combinator terms over ``K`` and ``S`` (plus opaque
  atoms) under call-by-value weak reduction.  Elements are weak normal forms
  and equality is syntactic.
* :class:`NumericModel` -- the same algebra transported to natural numbers
  through a ranking of the atom-free normal forms.  Codes are even; odd
  numbers are non-codes and application on them is stuck.
* :data:`TRIVIAL` -- the one-point algebra.

Application never loops forever: it takes a fuel budget counting K/S
contractions and answers :class:`Defined`, :data:`OUT_OF_FUEL` or
:data:`STUCK`.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Callable, Iterable, Optional, Sequence

from .report import Report, trool_all


# ----------------------------------------------------------------------------
# Terms


class Term:
    __slots__ = ()

    size = 1

    def __call__(self, *args: "Term") -> "Term":
        t = self
        for a in args:
            t = App(t, a)
        return t

    def __str__(self) -> str:
        return show_term(self)

    def __repr__(self) -> str:
        return f"Term({show_term(self)!r})"

    @property
    def sort_key(self):
        if is_atom_free(self) and is_value(self):
            return (self.size, 0, _rank_in_size(self), "")
        return (self.size, 1, 0, show_term(self))

    def __lt__(self, other: "Term") -> bool:
        return self.sort_key < other.sort_key


class Comb(Term):
    __slots__ = ("name",)

    def __init__(self, name: str):
        self.name = name

    def __eq__(self, other):
        return isinstance(other, Comb) and other.name == self.name

    def __hash__(self):
        return hash(("comb", self.name))


class Atom(Term):
    __slots__ = ("name",)

    def __init__(self, name: str):
        self.name = name

    def __eq__(self, other):
        return isinstance(other, Atom) and other.name == self.name

    def __hash__(self):
        return hash(("atom", self.name))


class App(Term):
    __slots__ = ("fun", "arg", "size", "_hash")

    def __init__(self, fun: Term, arg: Term):
        self.fun = fun
        self.arg = arg
        self.size = fun.size + arg.size
        self._hash = hash((fun, arg))

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, App) or other._hash != self._hash:
            return False
        # iterate down the spine to keep recursion shallow on long spines
        a, b = self, other
        while isinstance(a, App) and isinstance(b, App):
            if a._hash != b._hash or a.arg != b.arg:
                return False
            a, b = a.fun, b.fun
        return a == b

    def __hash__(self):
        return self._hash


K = Comb("K")
S = Comb("S")


def spine(t: Term):
    args = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fun
    args.reverse()
    return t, args


def is_value(t: Term) -> bool:
    """True iff ``t`` is a weak normal form: no K x y / S x y z at any spine."""
    if not isinstance(t, App):
        return True
    head, args = spine(t)
    if head == K and len(args) >= 2:
        return False
    if head == S and len(args) >= 3:
        return False
    return all(is_value(a) for a in args)


def is_atom_free(t: Term) -> bool:
    if isinstance(t, Atom):
        return False
    if isinstance(t, App):
        return is_atom_free(t.fun) and is_atom_free(t.arg)
    return True


def leaves(t: Term) -> set:
    out = set()
    stack = [t]
    while stack:
        u = stack.pop()
        if isinstance(u, App):
            stack.append(u.fun)
            stack.append(u.arg)
        else:
            out.add(u)
    return out


def show_term(t: Term) -> str:
    if isinstance(t, Comb):
        return t.name
    if isinstance(t, Atom):
        return "#" + t.name
    head, args = spine(t)
    parts = [show_term(head)]
    for a in args:
        s = show_term(a)
        parts.append(f"({s})" if isinstance(a, App) else s)
    return " ".join(parts)


class TermSyntaxError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


def _tokenize_term(text: str):
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
        elif c in "()":
            yield c, i
            i += 1
        elif c in "KS" and (i + 1 == len(text) or not (text[i + 1].isalnum() or text[i + 1] == "_")):
            yield c, i
            i += 1
        elif c == "#":
            j = i + 1
            while j < len(text) and (text[j].isalnum() or text[j] in "_'"):
                j += 1
            if j == i + 1:
                raise TermSyntaxError("empty atom name", i)
            yield text[i:j], i
            i = j
        else:
            raise TermSyntaxError(f"unexpected character {c!r}", i)


def parse_term(text: str) -> Term:
    """Parse ``K``, ``S``, ``#atom``, juxtaposition and parentheses."""
    tokens = list(_tokenize_term(text))
    pos = 0

    def atom():
        nonlocal pos
        if pos >= len(tokens):
            raise TermSyntaxError("unexpected end of input", len(text))
        tok, at = tokens[pos]
        pos += 1
        if tok == "(":
            t = seq()
            if pos >= len(tokens) or tokens[pos][0] != ")":
                raise TermSyntaxError("expected ')'", tokens[pos][1] if pos < len(tokens) else len(text))
            pos += 1
            return t
        if tok == ")":
            raise TermSyntaxError("unexpected ')'", at)
        if tok == "K":
            return K
        if tok == "S":
            return S
        return Atom(tok[1:])

    def seq():
        t = atom()
        while pos < len(tokens) and tokens[pos][0] != ")":
            t = App(t, atom())
        return t

    t = seq()
    if pos != len(tokens):
        raise TermSyntaxError("unexpected ')'", tokens[pos][1])
    return t


# ----------------------------------------------------------------------------
# Canonical enumeration of atom-free values.
#
# Values of size n >= 2, in order: K v (|v| = n-1), S v (|v| = n-1), then
# S a b grouped by |a| = 1 .. n-2, a-major.


@lru_cache(maxsize=None)
def count_values(n: int) -> int:
    if n < 1:
        return 0
    if n == 1:
        return 2
    total = 2 * count_values(n - 1)
    for i in range(1, n - 1):
        total += count_values(i) * count_values(n - 1 - i)
    return total


@lru_cache(maxsize=None)
def _offset(n: int) -> int:
    return sum(count_values(k) for k in range(1, n))


def _rank_in_size(t: Term) -> int:
    if t == K:
        return 0
    if t == S:
        return 1
    if not isinstance(t, App):
        raise ValueError(f"not an atom-free value: {t}")
    n = t.size
    if t.fun == K:
        return _rank_in_size(t.arg)
    if t.fun == S:
        return count_values(n - 1) + _rank_in_size(t.arg)
    f = t.fun
    if isinstance(f, App) and f.fun == S:
        a, b = f.arg, t.arg
        idx = 2 * count_values(n - 1)
        for i in range(1, a.size):
            idx += count_values(i) * count_values(n - 1 - i)
        return idx + _rank_in_size(a) * count_values(b.size) + _rank_in_size(b)
    raise ValueError(f"not an atom-free value: {t}")


def rank(t: Term) -> int:
    return _offset(t.size) + _rank_in_size(t)


def _unrank_in_size(n: int, idx: int) -> Term:
    if n == 1:
        return (K, S)[idx]
    c = count_values(n - 1)
    if idx < c:
        return App(K, _unrank_in_size(n - 1, idx))
    idx -= c
    if idx < c:
        return App(S, _unrank_in_size(n - 1, idx))
    idx -= c
    for i in range(1, n - 1):
        block = count_values(i) * count_values(n - 1 - i)
        if idx < block:
            ia, ib = divmod(idx, count_values(n - 1 - i))
            return App(App(S, _unrank_in_size(i, ia)), _unrank_in_size(n - 1 - i, ib))
        idx -= block
    raise IndexError(idx)


def unrank(i: int) -> Term:
    n = 1
    while i >= count_values(n):
        i -= count_values(n)
        n += 1
    return _unrank_in_size(n, i)


# ----------------------------------------------------------------------------
# Application results


@dataclass(frozen=True)
class Defined:
    value: Any


class _Undefined:
    __slots__ = ("label",)

    def __init__(self, label: str):
        self.label = label

    def __repr__(self):
        return self.label


OUT_OF_FUEL = _Undefined("OutOfFuel")
STUCK = _Undefined("Stuck")


class _OutOfFuel(Exception):
    pass


class _Stuck(Exception):
    pass


class Budget:
    __slots__ = ("left",)

    def __init__(self, fuel: int):
        if fuel < 0:
            raise ValueError("fuel must be >= 0")
        self.left = fuel

    def spend(self) -> None:
        if self.left <= 0:
            raise _OutOfFuel
        self.left -= 1


def _run(thunk):
    try:
        return Defined(thunk())
    except _OutOfFuel:
        return OUT_OF_FUEL
    except _Stuck:
        return STUCK


# ----------------------------------------------------------------------------
# Instances


class PCA:
    """A partial applicative structure with chosen k and s elements."""

    name = "pca"
    k: Any
    s: Any

    def _apply(self, a, b, budget: Budget):
        raise NotImplementedError

    def _atom(self, name: str):
        raise _Stuck

    def apply(self, a, b, fuel: int):
        budget = Budget(fuel)
        return _run(lambda: self._apply(a, b, budget))

    def apply_chain(self, head, args: Sequence, fuel: int):
        if not args:
            raise ValueError("apply_chain needs a nonempty argument list")
        budget = Budget(fuel)

        def go():
            v = head
            for a in args:
                v = self._apply(v, a, budget)
            return v

        return _run(go)

    def _embed(self, t: Term, budget: Budget):
        if t == K:
            return self.k
        if t == S:
            return self.s
        if isinstance(t, Atom):
            return self._atom(t.name)
        head, args = spine(t)
        v = self._embed(head, budget)
        for a in args:
            v = self._apply(v, self._embed(a, budget), budget)
        return v

    def embed(self, t: Term, fuel: int):
        """Evaluate a combinator term to an element of this algebra."""
        budget = Budget(fuel)
        return _run(lambda: self._embed(t, budget))

    def enumerate(self, n: int) -> list:
        raise NotImplementedError

    def show(self, e) -> str:
        return str(e)

    def parse(self, text: str):
        raise NotImplementedError

    def __repr__(self):
        return f"<PCA {self.name}>"


class SKModel(PCA):
    """Closed K/S terms with opaque atoms, call-by-value weak reduction."""

    name = "sk"
    k = K
    s = S

    def _atom(self, name):
        return Atom(name)

    def _apply(self, f, x, budget):
        # Explicit continuation stack: S a b z needs (a z) and (b z) first.
        stack = []
        while True:
            if f == K or f == S or (isinstance(f, App) and f.fun == S):
                val = App(f, x)
            elif isinstance(f, App) and f.fun == K:
                budget.spend()
                val = f.arg
            elif isinstance(f, App) and isinstance(f.fun, App) and f.fun.fun == S:
                budget.spend()
                stack.append(("arg", f.arg, x))
                f = f.fun.arg
                continue
            else:
                # atom-headed neutral term
                val = App(f, x)
            while True:
                if not stack:
                    return val
                frame = stack.pop()
                if frame[0] == "arg":
                    stack.append(("fun", val))
                    f, x = frame[1], frame[2]
                    break
                f, x = frame[1], val
                break

    def enumerate(self, n: int) -> list:
        return [unrank(i) for i in range(n)]

    def show(self, e) -> str:
        return show_term(e)

    def parse(self, text: str):
        return parse_term(text)


class NumericModel(PCA):
    """The SK algebra transported to naturals; code of t is 2*rank(t)."""

    name = "num"

    def __init__(self, base: Optional[SKModel] = None):
        self.base = base or SK
        self.k = self.encode(K)
        self.s = self.encode(S)

    @staticmethod
    def encode(t: Term) -> int:
        return 2 * rank(t)

    @staticmethod
    def decode(n: int) -> Term:
        if not isinstance(n, int) or n < 0 or n % 2:
            raise _Stuck
        return unrank(n // 2)

    def is_code(self, n: int) -> bool:
        return isinstance(n, int) and n >= 0 and n % 2 == 0

    def _apply(self, m, n, budget):
        return self.encode(self.base._apply(self.decode(m), self.decode(n), budget))

    def enumerate(self, n: int) -> list:
        return [2 * i for i in range(n)]

    def parse(self, text: str):
        text = text.strip()
        if not text.isdigit():
            raise TermSyntaxError("expected a decimal natural", 0)
        return int(text)


class TrivialModel(PCA):
    """The one-point algebra: everything is '*', application is total."""

    name = "trivial"
    k = "*"
    s = "*"

    def _apply(self, a, b, budget):
        return "*"

    def _atom(self, name):
        return "*"

    def enumerate(self, n: int) -> list:
        return ["*"] if n > 0 else []

    def parse(self, text: str):
        if text.strip() != "*":
            raise TermSyntaxError("the trivial algebra has the single element '*'", 0)
        return "*"


SK = SKModel()
NUM = NumericModel(SK)
TRIVIAL = TrivialModel()

INSTANCES = {"sk": SK, "num": NUM, "trivial": TRIVIAL}


def godel_roundtrip(pca: NumericModel, t: Term) -> Term:
    return pca.decode(pca.encode(t))


# ----------------------------------------------------------------------------
# Realizer sets and filters


class Predicate:
    """A realizer set given by a membership test ``(element, fuel) -> trool``."""

    def __init__(self, test: Callable[[Any, int], Optional[bool]], name: str = "predicate"):
        self.test = test
        self.name = name

    def __repr__(self):
        return f"Predicate({self.name})"


def _is_finitary(s) -> bool:
    return not isinstance(s, Predicate)


class Filter:
    name = "filter"

    def member(self, s, pca: PCA, fuel: int, search_bound: int) -> Optional[bool]:
        raise NotImplementedError


class Inhabited(Filter):
    name = "inh"

    def member(self, s, pca, fuel, search_bound):
        if _is_finitary(s):
            return bool(s)
        for v in pca.enumerate(search_bound):
            if s.test(v, fuel) is True:
                return True
        return None


class Relative(Filter):
    """Sets meeting a sub-algebra A' given by a decidable test and enumerator."""

    def __init__(self, name: str, contains: Callable[[Any], bool], enumerate: Callable[[int], list]):
        self.name = "rel:" + name
        self.contains = contains
        self.enumerate = enumerate

    @classmethod
    def generated_by(cls, pca: SKModel, generators: Iterable[Term], name: Optional[str] = None):
        """Closure of a set of leaf generators under application.

        Reduction never introduces leaves, and every value is the application
        of its two (value) subterms, so the closure is exactly the values whose
        leaves are all generators.
        """
        gens = frozenset(generators)

        def contains(v):
            return isinstance(v, Term) and is_value(v) and leaves(v) <= gens

        def enumerate(n):
            out = []
            i = 0
            limit = 50 * max(n, 1) + 50
            while len(out) < n and i < limit:
                v = unrank(i)
                if contains(v):
                    out.append(v)
                i += 1
            return out

        label = name or "".join(sorted(show_term(g) for g in gens))
        return cls(label, contains, enumerate)

    def member(self, s, pca, fuel, search_bound):
        if _is_finitary(s):
            return any(self.contains(v) for v in s)
        for v in self.enumerate(search_bound):
            if s.test(v, fuel) is True:
                return True
        return None


class Intersection(Filter):
    def __init__(self, parts: Sequence[Filter]):
        self.parts = tuple(parts)
        self.name = "and:" + ",".join(p.name for p in self.parts)

    def member(self, s, pca, fuel, search_bound):
        return trool_all(p.member(s, pca, fuel, search_bound) for p in self.parts)


class TrivialFilter(Filter):
    """The filter {1} of the one-point algebra."""

    name = "trivial"

    def member(self, s, pca, fuel, search_bound):
        if _is_finitary(s):
            return bool(s)
        return s.test("*", fuel)


def filter_member(f: Filter, s, pca: PCA, fuel: int = 64, search_bound: int = 32) -> Optional[bool]:
    return f.member(s, pca, fuel, search_bound)


def check_combinatory_complete(pca: PCA, f: Filter, bound: int = 2, fuel: int = 64,
                               search_bound: int = 32) -> Report:
    """Check k, s membership and the k/s laws on ``pca.enumerate(bound)``."""
    report = Report("combinatory-completeness",
                    {"pca": pca.name, "filter": f.name, "bound": bound, "fuel": fuel})
    report.add("k is a filter member", filter_member(f, {pca.k}, pca, fuel, search_bound),
               pca.show(pca.k))
    report.add("s is a filter member", filter_member(f, {pca.s}, pca, fuel, search_bound),
               pca.show(pca.s))
    values = pca.enumerate(bound)

    bad = []
    for x in values:
        for y in values:
            r = pca.apply_chain(pca.k, [x, y], fuel)
            if r != Defined(x):
                bad.append([pca.show(x), pca.show(y), repr(r)])
    report.add("k law (k.x).y = x", not bad, bad[:5] or None)

    bad = []
    for x in values:
        for y in values:
            r = pca.apply_chain(pca.s, [x, y], fuel)
            if not isinstance(r, Defined):
                bad.append([pca.show(x), pca.show(y), repr(r)])
    report.add("s law (s.x).y defined", not bad, bad[:5] or None)

    bad = []
    for x in values:
        for y in values:
            for z in values:
                xz = pca.apply(x, z, fuel)
                yz = pca.apply(y, z, fuel)
                if not (isinstance(xz, Defined) and isinstance(yz, Defined)):
                    continue
                rhs = pca.apply(xz.value, yz.value, fuel)
                if not isinstance(rhs, Defined):
                    continue
                lhs = pca.apply_chain(pca.s, [x, y, z], 3 * fuel + 1)
                if lhs != rhs:
                    bad.append([pca.show(x), pca.show(y), pca.show(z)])
    report.add("s law ((s.x).y).z = (x.z).(y.z)", not bad, bad[:5] or None)

    if isinstance(f, Relative):
        sample = f.enumerate(bound + 4)
        bad = []
        for a in sample:
            for b in sample:
                r = pca.apply(a, b, fuel)
                if isinstance(r, Defined) and not f.contains(r.value):
                    bad.append([pca.show(a), pca.show(b)])
        report.add("sub-algebra closed under application (sampled)", not bad, bad[:5] or None)
    return report


def fuel_monotonicity(pca: PCA, samples: int = 1000, seed: int = 0, pool: int = 64,
                      max_fuel: int = 64) -> Report:
    """Sampled check that a Defined result survives any larger fuel."""
    rng = random.Random(seed)
    values = pca.enumerate(pool)
    report = Report("fuel-monotonicity", {"pca": pca.name, "samples": samples, "seed": seed,
                                          "pool": pool, "max_fuel": max_fuel})
    bad, defined = [], 0
    for _ in range(samples):
        a, b = rng.choice(values), rng.choice(values)
        n = rng.randint(0, max_fuel)
        m = rng.randint(n, 4 * max_fuel)
        r = pca.apply(a, b, n)
        if isinstance(r, Defined):
            defined += 1
            if pca.apply(a, b, m) != r:
                bad.append([pca.show(a), pca.show(b), n, m])
    report.add("defined results are stable under more fuel", not bad,
               bad[:5] or f"{defined} of {samples} samples defined")
    return report
