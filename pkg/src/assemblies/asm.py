"""Assemblies over finite sets, tracked morphisms, limits and images.

An :class:`Asm` value fixes the algebra, the filter, the fuel per
application, the tracker search bound and the truncation bound used for
the constant assemblies; every construction is a method on it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Optional

from . import base as B
from . import lam as L
from . import pca as P
from .base import FinMap, FinObject, elem_key, show_elem
from .pca import OUT_OF_FUEL, STUCK, Defined


class NotTracked(ValueError):
    """No tracker was found (within the search bounds) or it failed to verify."""


class NeedMoreFuel(RuntimeError):
    pass


def _fs(xs) -> frozenset:
    return frozenset(xs)


class Assembly:
    """A finite carrier with a nonempty finite realizer set per element."""

    __slots__ = ("carrier", "table", "name", "_hash")

    def __init__(self, carrier: FinObject, realizers, name: str = ""):
        if not isinstance(carrier, FinObject):
            carrier = FinObject(carrier)
        if callable(realizers) and not isinstance(realizers, dict):
            realizers = {x: realizers(x) for x in carrier}
        realizers = dict(realizers)
        if set(realizers) != set(carrier.elements):
            raise B.DomainError("realizers must be given for exactly the carrier")
        rows = []
        for x in carrier:
            rs = tuple(sorted(set(realizers[x]), key=elem_key))
            if not rs:
                raise B.DomainError(f"element {show_elem(x)} has no realizers")
            rows.append((x, rs))
        self.carrier = carrier
        self.table = tuple(rows)
        self.name = name
        self._hash = hash((carrier, self.table))

    def rho(self, x) -> frozenset:
        for y, rs in self.table:
            if y == x:
                return frozenset(rs)
        raise KeyError(x)

    def rho_dict(self) -> dict:
        return {x: frozenset(rs) for x, rs in self.table}

    def all_realizers(self) -> list:
        out = set()
        for _, rs in self.table:
            out.update(rs)
        return sorted(out, key=elem_key)

    def pairs(self):
        for x, rs in self.table:
            for a in rs:
                yield a, x

    def __eq__(self, other):
        return isinstance(other, Assembly) and self.carrier == other.carrier and self.table == other.table

    def __hash__(self):
        return self._hash

    def __repr__(self):
        body = ", ".join(f"{show_elem(x)}: [{', '.join(show_elem(a) for a in rs)}]"
                         for x, rs in self.table)
        label = f"{self.name} " if self.name else ""
        return f"Assembly({label}{{{body}}})"


@dataclass(frozen=True)
class Morphism:
    src: Assembly
    dst: Assembly
    map: FinMap
    tracker: object = field(compare=False)
    fuel_used: int = field(default=0, compare=False)

    def __call__(self, x):
        return self.map(x)


@dataclass
class Limit:
    """A limit cone: apex and legs, plus the context to build mediators."""

    apex: Assembly
    legs: tuple
    asm: "Asm" = field(repr=False)


class Asm:
    def __init__(self, pca: P.PCA = P.SK, filter: Optional[P.Filter] = None,
                 fuel: int = 512, search: int = 48, bound: int = 8):
        self.pca = pca
        if filter is None:
            filter = P.TrivialFilter() if isinstance(pca, P.TrivialModel) else P.Inhabited()
        self.filter = filter
        self.fuel = fuel
        self.search = search
        self.bound = bound
        self.lib = L.compile_library(pca)
        self.I = self.lib["id"]
        self._trackers = {}

    def params(self) -> dict:
        return {"pca": self.pca.name, "filter": self.filter.name, "fuel": self.fuel,
                "search": self.search, "bound": self.bound}

    def with_(self, **kw) -> "Asm":
        args = dict(pca=self.pca, filter=self.filter, fuel=self.fuel,
                    search=self.search, bound=self.bound)
        args.update(kw)
        return Asm(**args)

    def show(self, e) -> str:
        return self.pca.show(e)

    # -- evaluation helpers -------------------------------------------------

    def apply(self, a, b):
        return self.pca.apply(a, b, self.fuel)

    def chain(self, head, *args):
        return self.pca.apply_chain(head, list(args), self.fuel)

    def value(self, head, *args):
        r = self.chain(head, *args)
        if not isinstance(r, Defined):
            raise NeedMoreFuel(f"application did not evaluate: {r!r}")
        return r.value

    def _to_sk(self, e):
        if isinstance(self.pca, P.NumericModel):
            return self.pca.decode(e)
        if isinstance(self.pca, P.TrivialModel):
            return P.K
        return e

    def term(self, src: str, **consts):
        """Compile a lambda term whose ``{name}`` placeholders are elements."""
        key = (src, tuple(sorted((k, v) for k, v in consts.items())))
        return _compile_cached(self, key)

    def pair(self, u, v):
        return self.value(self.lib["pair"], u, v)

    def pairing(self, tu, tv):
        """Tracker of ``x |-> (U x, V x)`` into a tensor."""
        return self.value(self.lib["pairing"], tu, tv)

    def composite(self, tg, tf):
        return self.value(self.lib["compose"], tg, tf)

    def const(self, v):
        return self.value(self.pca.k, v)

    # -- tracking -----------------------------------------------------------

    def verify_tracks(self, r, f: FinMap, src: Assembly, dst: Assembly) -> Optional[bool]:
        if f.src != src.carrier or f.dst != dst.carrier:
            raise B.DomainError("map endpoints do not match the assemblies")
        unknown = False
        dst_rho = dst.rho_dict()
        for x, rs in src.table:
            target = dst_rho[f(x)]
            for b in rs:
                res = self.apply(r, b)
                if res is STUCK:
                    return False
                if res is OUT_OF_FUEL:
                    unknown = True
                elif res.value not in target:
                    return False
        return None if unknown else True

    def admissible(self, r) -> bool:
        return self.filter.member(frozenset([r]), self.pca, self.fuel, self.search) is True

    def candidates(self, hints=(), targets=()):
        """Tracker candidates in canonical order: hints, library, constants
        into the targets, library applied to small values and pairwise
        composites, then plain enumeration."""
        seen = set()

        def fresh(v):
            if v in seen:
                return False
            seen.add(v)
            return True

        for h in hints:
            if fresh(h):
                yield h
        libvals = list(self.lib.values())
        for v in libvals:
            if fresh(v):
                yield v
        for t in targets:
            c = self.apply(self.pca.k, t)
            if isinstance(c, Defined) and fresh(c.value):
                yield c.value
        small = self.pca.enumerate(min(self.search, 6))
        for lv in libvals:
            for v in small:
                c = self.apply(lv, v)
                if isinstance(c, Defined) and fresh(c.value):
                    yield c.value
        comp = self.lib["compose"]
        for a in libvals:
            for b in libvals:
                c = self.chain(comp, a, b)
                if isinstance(c, Defined) and fresh(c.value):
                    yield c.value
        for v in self.pca.enumerate(self.search):
            if fresh(v):
                yield v

    def find_tracker(self, f: FinMap, src: Assembly, dst: Assembly, hints=()):
        if f.src != src.carrier or f.dst != dst.carrier:
            raise B.DomainError("map endpoints do not match the assemblies")
        targets = sorted({a for x in src.carrier for a in dst.rho(f(x))}, key=elem_key)
        # whether r tracks f only depends on where each source realizer may go
        allowed = {}
        for x, rs in src.table:
            for b in rs:
                t = dst.rho(f(x))
                allowed[b] = allowed[b] & t if b in allowed else t
        key = (frozenset(allowed.items()), tuple(targets), tuple(hints))
        if key not in self._trackers:
            self._trackers[key] = self._search_tracker(f, src, dst, hints, targets)
        return self._trackers[key]

    def _search_tracker(self, f, src, dst, hints, targets):
        for r in self.candidates(hints, targets):
            if self.verify_tracks(r, f, src, dst) is True and self.admissible(r):
                return r
        return None

    def morphism(self, src: Assembly, dst: Assembly, table, tracker=None, hints=()) -> Morphism:
        f = table if isinstance(table, FinMap) else FinMap(src.carrier, dst.carrier, table)
        if tracker is None:
            tracker = self.find_tracker(f, src, dst, hints)
            if tracker is None:
                raise NotTracked(f"no tracker found for {f!r} within search bound {self.search}")
        else:
            ok = self.verify_tracks(tracker, f, src, dst)
            if ok is None:
                raise NeedMoreFuel("tracker verification ran out of fuel")
            if not ok:
                raise NotTracked(f"{self.show(tracker)} does not track {f!r}")
            if not self.admissible(tracker):
                raise NotTracked(f"{self.show(tracker)} is not admitted by filter {self.filter.name}")
        return Morphism(src, dst, f, tracker, self.fuel)

    def try_morphism(self, src, dst, table, hints=()) -> Optional[Morphism]:
        try:
            return self.morphism(src, dst, table, hints=hints)
        except NotTracked:
            return None

    def identity(self, x: Assembly) -> Morphism:
        return Morphism(x, x, B.identity(x.carrier), self.I, self.fuel)

    def compose(self, g: Morphism, f: Morphism) -> Morphism:
        """``g . f`` tracked by ``compose . t_g . t_f``."""
        if f.dst != g.src:
            raise B.DomainError("cannot compose: endpoints differ")
        m = B.compose(g.map, f.map)
        t = self.composite(g.tracker, f.tracker)
        ok = self.verify_tracks(t, m, f.src, g.dst)
        if ok is None:
            raise NeedMoreFuel("composite tracker ran out of fuel")
        if not ok:
            raise NotTracked("composite tracker failed to verify")
        return Morphism(f.src, g.dst, m, t, self.fuel)

    def find_iso(self, x: Assembly, y: Assembly, bij: Optional[FinMap] = None,
                 hints=(), back_hints=()):
        """Trackers for a carrier bijection and its inverse, or None."""
        if bij is None:
            if x.carrier != y.carrier:
                return None
            bij = B.identity(x.carrier)
        if not (bij.is_injective() and bij.is_surjective()):
            return None
        inv = FinMap(bij.dst, bij.src, {v: k for k, v in bij.table})
        there = self.try_morphism(x, y, bij, hints)
        if there is None:
            return None
        back = self.try_morphism(y, x, inv, back_hints)
        if back is None:
            return None
        return there, back

    # -- nabla and gamma ----------------------------------------------------

    def truncation(self) -> list:
        return self.pca.enumerate(self.bound)

    def nabla(self, x: FinObject) -> Assembly:
        rs = self.truncation()
        return Assembly(x, {e: rs for e in x}, "nabla")

    @staticmethod
    def gamma(x: Assembly) -> FinObject:
        return x.carrier

    def nabla_arrow(self, f: FinMap) -> Morphism:
        return self.morphism(self.nabla(f.src), self.nabla(f.dst), f, self.I)

    def to_nabla(self, x: Assembly, h: FinMap) -> Morphism:
        """Transpose of a carrier map ``gamma X -> Z`` to ``X -> nabla Z``."""
        return self.morphism(x, self.nabla(h.dst), h, self.const(self.truncation()[0]))

    def unit_eta(self, x: Assembly) -> Morphism:
        target = self.nabla(x.carrier)
        hints = [self.I] if set(x.all_realizers()) <= set(self.truncation()) else []
        return self.morphism(x, target, B.identity(x.carrier), hints=hints)

    def terminal(self) -> Assembly:
        return self.nabla(B.terminal())

    def to_terminal(self, x: Assembly) -> Morphism:
        return self.to_nabla(x, B.to_terminal(x.carrier))

    # -- reindexing ---------------------------------------------------------

    def pullback_assembly(self, f: FinMap, y: Assembly) -> Assembly:
        """``f^* Y``: realizers of ``w`` are those of ``f(w)``."""
        if f.dst != y.carrier:
            raise B.DomainError("map codomain is not the assembly carrier")
        rho = y.rho_dict()
        return Assembly(f.src, {w: rho[f(w)] for w in f.src})

    def pushforward_assembly(self, e: FinMap, x: Assembly) -> Assembly:
        """``e_* X``: realizers of ``y`` are the union over its fibre."""
        if e.src != x.carrier:
            raise B.DomainError("map domain is not the assembly carrier")
        if not e.is_surjective():
            raise B.DomainError("pushforward needs a surjective map")
        out = {y: set() for y in e.dst}
        for a, xx in x.pairs():
            out[e(xx)].add(a)
        return Assembly(e.dst, out)

    def otimes(self, y: Assembly, y2: Assembly):
        """Fibrewise pairing over a shared carrier; returns ``(W, pi1, pi2)``."""
        if y.carrier != y2.carrier:
            raise B.DomainError("tensor needs equal carriers")
        r1, r2 = y.rho_dict(), y2.rho_dict()
        w = Assembly(y.carrier, {x: {self.pair(u, v) for u in r1[x] for v in r2[x]}
                                 for x in y.carrier})
        ident = B.identity(y.carrier)
        pi1 = self.morphism(w, y, ident, self.lib["fst"])
        pi2 = self.morphism(w, y2, ident, self.lib["snd"])
        return w, pi1, pi2

    # -- limits -------------------------------------------------------------

    def _tensor_cone(self, apex_obj: FinObject, leg1: FinMap, x: Assembly,
                     leg2: FinMap, y: Assembly) -> Limit:
        w, q1, q2 = self.otimes(self.pullback_assembly(leg1, x), self.pullback_assembly(leg2, y))
        l1 = self.morphism(w, x, leg1, self.lib["fst"])
        l2 = self.morphism(w, y, leg2, self.lib["snd"])
        return Limit(w, (l1, l2), self)

    def product(self, x: Assembly, y: Assembly) -> Limit:
        obj, p1, p2 = B.product(x.carrier, y.carrier)
        return self._tensor_cone(obj, p1, x, p2, y)

    def pullback(self, f: Morphism, g: Morphism) -> Limit:
        """Base pullback of the carriers, then ``p1^* X (x) p2^* Y``."""
        if f.dst != g.dst:
            raise B.DomainError("pullback needs a common codomain")
        obj, p1, p2 = B.pullback(f.map, g.map)
        return self._tensor_cone(obj, p1, f.src, p2, g.src)

    def mediate(self, lim: Limit, h: Morphism, k: Morphism) -> Morphism:
        """The unique map into a binary cone apex, tracked by pairing."""
        l1, l2 = lim.legs
        table = {}
        for v in h.src.carrier:
            hits = [w for w in lim.apex.carrier if l1(w) == h(v) and l2(w) == k(v)]
            if len(hits) != 1:
                raise B.DomainError("maps do not form a cone over this limit")
            table[v] = hits[0]
        return self.morphism(h.src, lim.apex, table, self.pairing(h.tracker, k.tracker))

    def equalizer(self, f: Morphism, g: Morphism) -> Limit:
        obj, inc = B.equalizer(f.map, g.map)
        e = self.pullback_assembly(inc, f.src)
        return Limit(e, (self.morphism(e, f.src, inc, self.I),), self)

    def mediate_equalizer(self, lim: Limit, h: Morphism) -> Morphism:
        return self.morphism(h.src, lim.apex, {v: h(v) for v in h.src.carrier}, h.tracker)

    def kernel_pair(self, f: Morphism) -> Limit:
        return self.pullback(f, f)

    # -- images -------------------------------------------------------------

    def image_factorize(self, f: Morphism):
        """``f = m . e`` with ``e`` onto ``e_* X`` (tracked by I) and ``m``
        tracked by the tracker of ``f``."""
        e_map, m_map = B.image_factorization(f.map)
        img = self.pushforward_assembly(e_map, f.src)
        e = self.morphism(f.src, img, e_map, self.I)
        m = self.morphism(img, f.dst, m_map, f.tracker)
        return e, m

    def coeq_of_kernel_pair(self, f: Morphism) -> Morphism:
        return self.image_factorize(f)[0]

    def is_regular_epi(self, f: Morphism, hints=()) -> Optional[bool]:
        """Surjective on carriers and ``dst`` is isomorphic to ``f_* src``
        along the identity.  Not found within bounds gives unknown."""
        if not f.map.is_surjective():
            return False
        pushed = self.pushforward_assembly(f.map, f.src)
        back = self.try_morphism(f.dst, pushed, B.identity(f.dst.carrier), hints)
        return True if back is not None else None

    def regular_epi_section(self, f: Morphism, hints=()):
        """A tracker of ``id: dst -> f_* src`` if found."""
        if not f.map.is_surjective():
            return None
        pushed = self.pushforward_assembly(f.map, f.src)
        m = self.try_morphism(f.dst, pushed, B.identity(f.dst.carrier), hints)
        return None if m is None else m.tracker

    def pulled_back_epi_hint(self, section, f: Morphism):
        """``\\b. pair (s (t_f b)) b``: realizes the pullback of a regular epi."""
        return self.term(r"\b. [pair] ({s} ({t} b)) b", s=section, t=f.tracker)

    def diagonal_assembly(self, bound: Optional[int] = None) -> Assembly:
        vals = self.pca.enumerate(self.bound if bound is None else bound)
        return Assembly(FinObject(vals), {a: {a} for a in vals}, "diag")

    def is_mono(self, f: Morphism) -> bool:
        return f.map.is_injective()


def _compile_cached(ctx: Asm, key):
    src, consts = key
    return _compile(ctx.pca, src, tuple((k, ctx._to_sk(v)) for k, v in consts))


@lru_cache(maxsize=4096)
def _compile(pca: P.PCA, src: str, consts: tuple):
    table = dict(L.library_terms_sk())
    text = src
    for name, v in consts:
        text = text.replace("{" + name + "}", "(" + "[__" + name + "]" + ")")
        table["__" + name] = v
    m = L.parse(text, table)
    r = pca.embed(L.bracket_abstract(m), 100_000)
    if not isinstance(r, Defined):
        raise NeedMoreFuel(f"compiled term did not evaluate: {src}")
    return r.value


def all_assemblies(carrier: FinObject, pool: Iterable, max_size: int = 2):
    """Every assembly on ``carrier`` whose realizer sets are nonempty subsets
    of ``pool`` with at most ``max_size`` elements."""
    from itertools import combinations, product

    pool = sorted(set(pool), key=elem_key)
    options = [c for r in range(1, max_size + 1) for c in combinations(pool, r)]
    for choice in product(options, repeat=len(carrier)):
        yield Assembly(carrier, dict(zip(carrier.elements, choice)))

