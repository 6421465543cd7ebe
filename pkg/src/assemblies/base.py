"""Finite sets and functions, with their subobject lattices.

Elements may be ints, strings, tuples of elements, or combinator terms;
:func:`elem_key` gives one total order over all of them so that every
carrier has a canonical listing.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import chain, combinations, product as _product
from typing import Callable, Iterable

from .pca import Term, show_term
from .report import Report


def elem_key(e):
    if isinstance(e, bool):
        return (0, int(e))
    if isinstance(e, int):
        return (0, e)
    if isinstance(e, str):
        return (1, e)
    if isinstance(e, tuple):
        return (2, len(e), tuple(elem_key(x) for x in e))
    if isinstance(e, Term):
        return (3, e.sort_key)
    raise TypeError(f"unsupported element {e!r}")


def show_elem(e) -> str:
    if isinstance(e, tuple):
        return "(" + ",".join(show_elem(x) for x in e) + ")"
    if isinstance(e, Term):
        return show_term(e)
    return str(e)


class DomainError(ValueError):
    pass


@dataclass(frozen=True)
class FinObject:
    elements: tuple

    def __init__(self, elements: Iterable = ()):
        elems = sorted(set(elements), key=elem_key)
        object.__setattr__(self, "elements", tuple(elems))
        object.__setattr__(self, "_set", frozenset(elems))

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, e):
        return e in self._set

    def __repr__(self):
        return "{" + ", ".join(show_elem(e) for e in self.elements) + "}"

    def subsets(self):
        """All subsets, smallest first."""
        els = self.elements
        for r in range(len(els) + 1):
            for c in combinations(els, r):
                yield FinSubset(self, c)


@dataclass(frozen=True)
class FinMap:
    src: FinObject
    dst: FinObject
    table: tuple

    def __init__(self, src: FinObject, dst: FinObject, table):
        if callable(table) and not isinstance(table, dict):
            table = {x: table(x) for x in src}
        table = dict(table)
        if set(table) != set(src.elements):
            raise DomainError("map table must be defined exactly on the source")
        for x, y in table.items():
            if y not in dst:
                raise DomainError(f"{show_elem(x)} maps to {show_elem(y)}, not in target")
        object.__setattr__(self, "src", src)
        object.__setattr__(self, "dst", dst)
        object.__setattr__(self, "table", tuple((x, table[x]) for x in src))
        object.__setattr__(self, "_d", table)

    def __call__(self, x):
        return self._d[x]

    def as_dict(self) -> dict:
        return dict(self.table)

    def is_injective(self) -> bool:
        vals = [y for _, y in self.table]
        return len(set(vals)) == len(vals)

    def is_surjective(self) -> bool:
        return {y for _, y in self.table} == set(self.dst.elements)

    def __repr__(self):
        body = ", ".join(f"{show_elem(x)}: {show_elem(y)}" for x, y in self.table)
        return f"FinMap({self.src!r} -> {self.dst!r} {{{body}}})"


def identity(x: FinObject) -> FinMap:
    return FinMap(x, x, {e: e for e in x})


def compose(g: FinMap, f: FinMap) -> FinMap:
    """``g . f``."""
    if f.dst != g.src:
        raise DomainError("cannot compose: codomain and domain differ")
    gd = g.as_dict()
    return FinMap(f.src, g.dst, {x: gd[y] for x, y in f.table})


def all_maps(x: FinObject, y: FinObject):
    for values in _product(y.elements, repeat=len(x)):
        yield FinMap(x, y, dict(zip(x.elements, values)))


# ----------------------------------------------------------------------------
# Limits


def terminal() -> FinObject:
    return FinObject(["*"])


def to_terminal(x: FinObject) -> FinMap:
    return FinMap(x, terminal(), {e: "*" for e in x})


def product(x: FinObject, y: FinObject):
    """Returns ``(X x Y, pi1, pi2)``."""
    p = FinObject((a, b) for a in x for b in y)
    return p, FinMap(p, x, {e: e[0] for e in p}), FinMap(p, y, {e: e[1] for e in p})


def pullback(f: FinMap, g: FinMap):
    """Pullback of ``f: X -> Z`` and ``g: Y -> Z``; returns ``(P, p1: P->X, p2: P->Y)``."""
    if f.dst != g.dst:
        raise DomainError("pullback needs a common codomain")
    fd, gd = f.as_dict(), g.as_dict()
    p = FinObject((a, b) for a in f.src for b in g.src if fd[a] == gd[b])
    return p, FinMap(p, f.src, {e: e[0] for e in p}), FinMap(p, g.src, {e: e[1] for e in p})


def equalizer(f: FinMap, g: FinMap):
    if f.src != g.src or f.dst != g.dst:
        raise DomainError("equalizer needs parallel maps")
    fd, gd = f.as_dict(), g.as_dict()
    e = FinObject(x for x in f.src if fd[x] == gd[x])
    return e, FinMap(e, f.src, {x: x for x in e})


def is_pullback(f: FinMap, g: FinMap, p1: FinMap, p2: FinMap) -> bool:
    """Whether ``(p1, p2)`` is a pullback of ``(f, g)``: commutes and the
    comparison map into the canonical pullback is a bijection."""
    if p1.src != p2.src or p1.dst != f.src or p2.dst != g.src:
        return False
    if compose(f, p1) != compose(g, p2):
        return False
    pairs = [(p1(w), p2(w)) for w in p1.src]
    canon, _, _ = pullback(f, g)
    return len(set(pairs)) == len(pairs) and set(pairs) == set(canon.elements)


# ----------------------------------------------------------------------------
# Subobjects


@dataclass(frozen=True)
class FinSubset:
    of: FinObject
    members: frozenset

    def __init__(self, of: FinObject, members: Iterable = ()):
        members = frozenset(members)
        if not members <= of._set:
            raise DomainError("subset members must lie in the carrier")
        object.__setattr__(self, "of", of)
        object.__setattr__(self, "members", members)

    def __contains__(self, x):
        return x in self.members

    def __le__(self, other: "FinSubset") -> bool:
        _same(self, other)
        return self.members <= other.members

    def sorted(self) -> list:
        return sorted(self.members, key=elem_key)

    def inclusion(self) -> FinMap:
        """The representative mono: inclusion of the sorted member list."""
        dom = FinObject(self.members)
        return FinMap(dom, self.of, {x: x for x in dom})

    def __repr__(self):
        return "{" + ", ".join(show_elem(e) for e in self.sorted()) + "}"


def _same(u: FinSubset, v: FinSubset):
    if u.of != v.of:
        raise DomainError("subsets of different carriers")


def top(x: FinObject) -> FinSubset:
    return FinSubset(x, x.elements)


def bottom(x: FinObject) -> FinSubset:
    return FinSubset(x, ())


def meet(u: FinSubset, v: FinSubset) -> FinSubset:
    _same(u, v)
    return FinSubset(u.of, u.members & v.members)


def join(u: FinSubset, v: FinSubset) -> FinSubset:
    _same(u, v)
    return FinSubset(u.of, u.members | v.members)


def impl(u: FinSubset, v: FinSubset) -> FinSubset:
    _same(u, v)
    return FinSubset(u.of, (set(u.of.elements) - u.members) | v.members)


def inv_image(f: FinMap, v: FinSubset) -> FinSubset:
    if v.of != f.dst:
        raise DomainError("subset is not over the codomain")
    return FinSubset(f.src, (x for x, y in f.table if y in v.members))


def exists_f(f: FinMap, u: FinSubset) -> FinSubset:
    if u.of != f.src:
        raise DomainError("subset is not over the domain")
    return FinSubset(f.dst, (y for x, y in f.table if x in u.members))


def forall_f(f: FinMap, u: FinSubset) -> FinSubset:
    if u.of != f.src:
        raise DomainError("subset is not over the domain")
    bad = {y for x, y in f.table if x not in u.members}
    return FinSubset(f.dst, (y for y in f.dst if y not in bad))


def image_factorization(f: FinMap):
    """``f = m . e`` with ``e`` surjective onto the image and ``m`` its inclusion."""
    img = FinObject(y for _, y in f.table)
    e = FinMap(f.src, img, f.as_dict())
    m = FinMap(img, f.dst, {y: y for y in img})
    return e, m


# ----------------------------------------------------------------------------
# Beck-Chevalley


@dataclass(frozen=True)
class Square:
    """A commuting square ``f . g' = g . f'``.

    ``f: X -> Z``, ``g: Y -> Z``, ``f': P -> Y``, ``g': P -> X``.
    """

    f: FinMap
    g: FinMap
    f_: FinMap
    g_: FinMap

    def commutes(self) -> bool:
        return compose(self.f, self.g_) == compose(self.g, self.f_)

    def is_pullback(self) -> bool:
        return is_pullback(self.f, self.g, self.g_, self.f_)


def pullback_square(f: FinMap, g: FinMap) -> Square:
    _, p1, p2 = pullback(f, g)
    return Square(f, g, p2, p1)


def beck_chevalley_check(sq: Square) -> Report:
    """``E_{g'} . f'^-1 = f^-1 . E_g`` and the same for the universal image,
    on every subset of ``Y``."""
    report = Report("beck-chevalley", {"|X|": len(sq.f.src), "|Y|": len(sq.g.src),
                                        "|Z|": len(sq.f.dst), "|P|": len(sq.f_.src)})
    if not sq.is_pullback():
        raise DomainError("square is not a pullback")
    bad_e, bad_a = [], []
    for v in sq.g.src.subsets():
        lhs = exists_f(sq.g_, inv_image(sq.f_, v))
        rhs = inv_image(sq.f, exists_f(sq.g, v))
        if lhs != rhs:
            bad_e.append(repr(v))
        lhs = forall_f(sq.g_, inv_image(sq.f_, v))
        rhs = inv_image(sq.f, forall_f(sq.g, v))
        if lhs != rhs:
            bad_a.append(repr(v))
    n = 2 ** len(sq.g.src)
    report.add("existential image", not bad_e, bad_e[:5] or f"{n} subsets")
    report.add("universal image", not bad_a, bad_a[:5] or f"{n} subsets")
    return report


def powerset(xs):
    xs = list(xs)
    return chain.from_iterable(combinations(xs, r) for r in range(len(xs) + 1))


def tabulate(src: FinObject, dst: FinObject, fn: Callable) -> FinMap:
    return FinMap(src, dst, {x: fn(x) for x in src})
