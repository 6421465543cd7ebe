"""Realizer data over a carrier and the realizer preorder between them.

A datum assigns to each carrier element a set of realizers.  Existential
constructions (pairing, tagging, images) keep a finite table; universal ones
(implication, universal image) are membership tests run with fuel.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from . import base as B
from .asm import Asm, Assembly, Morphism
from .base import FinMap, FinObject, elem_key, show_elem
from .pca import OUT_OF_FUEL, STUCK, Defined
from .report import trool_all, trool_any


class RealizerDatum:
    carrier: FinObject

    def table(self, x) -> Optional[frozenset]:
        """A finite table of members at ``x``, or None for test-only data."""
        return None

    def member(self, a, x) -> Optional[bool]:
        raise NotImplementedError

    @property
    def finitary(self) -> bool:
        return False

    def support(self) -> list:
        """Elements whose table is known to be nonempty."""
        return [x for x in self.carrier if self.table(x)]


class Finitary(RealizerDatum):
    def __init__(self, carrier: FinObject, table):
        table = dict(table) if not callable(table) else {x: table(x) for x in carrier}
        for x in carrier:
            table.setdefault(x, ())
        if set(table) != set(carrier.elements):
            raise B.DomainError("table keys must be the carrier")
        self.carrier = carrier
        self.rows = tuple((x, frozenset(table[x])) for x in carrier)
        self._d = dict(self.rows)

    @property
    def finitary(self) -> bool:
        return True

    def table(self, x):
        return self._d[x]

    def member(self, a, x):
        return a in self._d[x]

    def __eq__(self, other):
        return isinstance(other, Finitary) and self.carrier == other.carrier and self.rows == other.rows

    def __hash__(self):
        return hash((self.carrier, self.rows))

    def to_json(self, show) -> dict:
        return {show_elem(x): sorted(show(a) for a in rs) for x, rs in self.rows}

    def __repr__(self):
        body = ", ".join(f"{show_elem(x)}: {len(rs)}" for x, rs in self.rows)
        return f"Finitary({{{body}}})"


class Impl(RealizerDatum):
    """``d(U, V)``: ``a`` at ``x`` sends every ``b`` of ``U`` at ``x`` into ``V``."""

    def __init__(self, ctx: Asm, u: RealizerDatum, v: RealizerDatum, strict: bool = True):
        _same(u, v)
        self.ctx, self.u, self.v = ctx, u, v
        self.carrier = u.carrier
        # when U has no table its members are sampled; strict mode then
        # refuses to answer yes
        self.strict = strict

    def _premises(self, x):
        t = self.u.table(x)
        if t is not None:
            return sorted(t, key=elem_key), False
        sample = [b for b in self.ctx.pca.enumerate(self.ctx.search) if self.u.member(b, x) is True]
        return sample, True

    def member(self, a, x):
        bs, sampled = self._premises(x)
        results = []
        for b in bs:
            r = self.ctx.apply(a, b)
            if r is STUCK:
                return False
            if r is OUT_OF_FUEL:
                results.append(None)
                continue
            results.append(self.v.member(r.value, x))
        out = trool_all(results)
        return None if (out is True and sampled and self.strict) else out


class ForAllAlong(RealizerDatum):
    """Universal image along ``id_A x f``: ``a`` at ``y`` iff ``a`` at every ``x`` over ``y``."""

    def __init__(self, f: FinMap, u: RealizerDatum):
        if f.src != u.carrier:
            raise B.DomainError("datum is not over the map domain")
        self.f, self.u = f, u
        self.carrier = f.dst

    def member(self, a, y):
        return trool_all(self.u.member(a, x) for x in self.f.src if self.f(x) == y)


class Reindex(RealizerDatum):
    """Inverse image along ``id_A x f``."""

    def __init__(self, f: FinMap, v: RealizerDatum):
        if f.dst != v.carrier:
            raise B.DomainError("datum is not over the map codomain")
        self.f, self.v = f, v
        self.carrier = f.src

    @property
    def finitary(self):
        return self.v.finitary

    def table(self, x):
        return self.v.table(self.f(x))

    def member(self, a, x):
        return self.v.member(a, self.f(x))


class MeetTest(RealizerDatum):
    """Semantic pairing: ``a.k0`` in ``U`` and ``a.l0`` in ``V``."""

    def __init__(self, ctx: Asm, u, v):
        _same(u, v)
        self.ctx, self.u, self.v = ctx, u, v
        self.carrier = u.carrier

    def member(self, a, x):
        lib = self.ctx.lib
        parts = []
        for sel, d in ((lib["k0"], self.u), (lib["l0"], self.v)):
            r = self.ctx.apply(a, sel)
            if r is STUCK:
                return False
            parts.append(None if r is OUT_OF_FUEL else d.member(r.value, x))
        return trool_all(parts)


class JoinTest(RealizerDatum):
    """Semantic tagging: ``a tagl tagr`` is a left- or right-tagged pair."""

    def __init__(self, ctx: Asm, u, v):
        _same(u, v)
        self.ctx, self.u, self.v = ctx, u, v
        self.carrier = u.carrier

    def member(self, a, x):
        ctx, lib = self.ctx, self.ctx.lib
        r = ctx.chain(a, lib["tagl"], lib["tagr"])
        if r is STUCK:
            return False
        if r is OUT_OF_FUEL:
            return None
        tag = ctx.apply(r.value, lib["k0"])
        body = ctx.apply(r.value, lib["l0"])
        if not isinstance(tag, Defined) or not isinstance(body, Defined):
            return False if STUCK in (tag, body) else None
        if tag.value == lib["k0"]:
            return self.u.member(body.value, x)
        if tag.value == lib["l0"]:
            return self.v.member(body.value, x)
        return False


class ExistsTest(RealizerDatum):
    """Existential image along ``f`` of a test-only datum."""

    def __init__(self, f: FinMap, u: RealizerDatum):
        if f.src != u.carrier:
            raise B.DomainError("datum is not over the map domain")
        self.f, self.u = f, u
        self.carrier = f.dst

    def member(self, a, y):
        return trool_any(self.u.member(a, x) for x in self.f.src if self.f(x) == y)


def _same(u: RealizerDatum, v: RealizerDatum):
    if u.carrier != v.carrier:
        raise B.DomainError("data over different carriers")


# ----------------------------------------------------------------------------
# Operations


def top(ctx: Asm, x: FinObject) -> Finitary:
    return Finitary(x, {e: {ctx.I} for e in x})


def bottom(x: FinObject) -> Finitary:
    return Finitary(x, {})


def from_assembly(x: Assembly) -> Finitary:
    return Finitary(x.carrier, x.rho_dict())


def meet_otimes(ctx: Asm, u: RealizerDatum, v: RealizerDatum) -> RealizerDatum:
    _same(u, v)
    if u.finitary and v.finitary:
        return Finitary(u.carrier, {x: {ctx.pair(a, b) for a in u.table(x) for b in v.table(x)}
                                    for x in u.carrier})
    return MeetTest(ctx, u, v)


def join_oplus(ctx: Asm, u: RealizerDatum, v: RealizerDatum) -> RealizerDatum:
    _same(u, v)
    if u.finitary and v.finitary:
        i0, i1 = ctx.lib["inl"], ctx.lib["inr"]
        return Finitary(u.carrier, {x: {ctx.value(i0, a) for a in u.table(x)}
                                    | {ctx.value(i1, b) for b in v.table(x)}
                                    for x in u.carrier})
    return JoinTest(ctx, u, v)


def impl_d(ctx: Asm, u: RealizerDatum, v: RealizerDatum, strict: bool = True) -> Impl:
    return Impl(ctx, u, v, strict)


def inv_image_datum(f, v: RealizerDatum) -> RealizerDatum:
    fmap = f.map if isinstance(f, Morphism) else f
    if v.finitary:
        return Finitary(fmap.src, {x: v.table(fmap(x)) for x in fmap.src})
    return Reindex(fmap, v)


def exists_along(f, u: RealizerDatum) -> RealizerDatum:
    fmap = f.map if isinstance(f, Morphism) else f
    if not u.finitary:
        return ExistsTest(fmap, u)
    out = {y: set() for y in fmap.dst}
    for x in fmap.src:
        out[fmap(x)].update(u.table(x))
    return Finitary(fmap.dst, out)


def forall_along(f, u: RealizerDatum) -> ForAllAlong:
    fmap = f.map if isinstance(f, Morphism) else f
    return ForAllAlong(fmap, u)


# ----------------------------------------------------------------------------
# The preorder


@dataclass(frozen=True)
class RleqWitness:
    realizer: object
    checked_at: int


def h_check(ctx: Asm, a, u: RealizerDatum, v: RealizerDatum) -> Optional[bool]:
    """Whether ``a`` sends every ``(b, x)`` of ``U`` to a member of ``V`` at ``x``."""
    _same(u, v)
    if not u.finitary:
        raise B.DomainError("the left side of the preorder must be finitary")
    results = []
    for x in u.carrier:
        for b in sorted(u.table(x), key=elem_key):
            r = ctx.apply(a, b)
            if r is STUCK:
                return False
            if r is OUT_OF_FUEL:
                results.append(None)
                continue
            m = v.member(r.value, x)
            if m is False:
                return False
            results.append(m)
    return trool_all(results)


def rleq(ctx: Asm, u: RealizerDatum, v: RealizerDatum, hints=()) -> Optional[RleqWitness]:
    """Search for a realizer witnessing ``U`` below ``V``."""
    _same(u, v)
    if not u.finitary:
        raise B.DomainError("the left side of the preorder must be finitary")
    targets = set()
    for x in v.carrier:
        t = v.table(x)
        if t:
            targets.update(t)
    for a in ctx.candidates(hints, sorted(targets, key=elem_key)):
        if h_check(ctx, a, u, v) is True and ctx.admissible(a):
            return RleqWitness(a, ctx.fuel)
    return None


def rleq_decide(ctx: Asm, u: RealizerDatum, v: RealizerDatum, hints=()) -> Optional[bool]:
    """Like :func:`rleq` but answers False when some nonempty fibre of ``U``
    faces an empty finitary fibre of ``V``."""
    if rleq(ctx, u, v, hints) is not None:
        return True
    if v.finitary and any(u.table(x) and not v.table(x) for x in u.carrier):
        return False
    return None


def equivalent(ctx: Asm, u, v, hints_uv=(), hints_vu=()):
    a = rleq(ctx, u, v, hints_uv)
    b = rleq(ctx, v, u, hints_vu)
    return (a, b) if a and b else None


# ----------------------------------------------------------------------------
# Subassemblies


def E(mono: Morphism) -> Finitary:
    """Push the realizer table of a subassembly forward along its inclusion."""
    if not mono.map.is_injective():
        raise B.DomainError("E needs a mono (injective on carriers)")
    out = {x: set() for x in mono.dst.carrier}
    for a, s in mono.src.pairs():
        out[mono(s)].add(a)
    return Finitary(mono.dst.carrier, out)


def E_inv(ctx: Asm, d: RealizerDatum, x: Assembly, hints=()):
    """The subassembly on the support of ``d``, with the inclusion into ``X``."""
    if not d.finitary or d.carrier != x.carrier:
        raise B.DomainError("E_inv needs a finitary datum over the carrier")
    supp = FinObject(d.support())
    sub = Assembly(supp, {s: d.table(s) for s in supp})
    inc = ctx.morphism(sub, x, {s: s for s in supp}, hints=hints)
    return sub, inc


def subassembly(ctx: Asm, x: Assembly, members, realizers=None) -> Morphism:
    """Inclusion of a subassembly given by members and (optionally) smaller
    realizer sets; tracked by the identity realizer."""
    rho = x.rho_dict()
    realizers = realizers or {}
    sub = Assembly(FinObject(members), {m: realizers.get(m, rho[m]) for m in members})
    return ctx.morphism(sub, x, {m: m for m in sub.carrier}, ctx.I)


# ----------------------------------------------------------------------------
# Heyting witnesses


def meet_intro_witness(ctx: Asm, f, g):
    """From ``f``: U below V and ``g``: U below W get U below ``V (x) W``."""
    return ctx.term(r"\x. [pair] ({f} x) ({g} x)", f=f, g=g)


def join_elim_witness(ctx: Asm, f, g):
    """From ``f``: U below W and ``g``: V below W get ``U (+) V`` below W."""
    return ctx.term(r"\x. x {f} {g}", f=f, g=g)


def curry_witness(ctx: Asm, h):
    """From ``h``: ``U (x) V`` below W get U below ``d(V, W)``."""
    return ctx.term(r"\x y. {h} ([pair] x y)", h=h)


def uncurry_witness(ctx: Asm, h):
    """From ``h``: U below ``d(V, W)`` get ``U (x) V`` below W."""
    return ctx.term(r"\x. x {h}", h=h)


def heyting_check(ctx: Asm, u: RealizerDatum, v: RealizerDatum, w: RealizerDatum):
    """Both directions of the meet, join and implication laws for one triple
    of finitary data.  Each direction searches the premise and, when found,
    verifies the witness built from it.  Returns ``{law: (status, detail)}``."""
    from .report import FAIL, PASS

    lib = ctx.lib
    out = {}

    def direction(name, premise, build):
        if premise is None:
            out[name] = (PASS, "premise not found")
            return None
        built = build(premise)
        ok = all(h_check(ctx, r, a, b) is True for r, a, b in built)
        out[name] = (PASS if ok else FAIL, [ctx.show(r) for r, _, _ in built])
        return built if ok else None

    def both(a, b):
        return (a, b) if a is not None and b is not None else None

    def comp(f, g):
        return ctx.composite(f, g)

    m = meet_otimes(ctx, u, v)
    direction("meet intro", both(rleq(ctx, w, u), rleq(ctx, w, v)),
              lambda p: [(meet_intro_witness(ctx, p[0].realizer, p[1].realizer), w, m)])
    direction("meet elim", rleq(ctx, w, m, [lib["id"]]),
              lambda c: [(comp(lib["fst"], c.realizer), w, u), (comp(lib["snd"], c.realizer), w, v)])

    j = join_oplus(ctx, u, v)
    direction("join elim", both(rleq(ctx, u, w), rleq(ctx, v, w)),
              lambda p: [(join_elim_witness(ctx, p[0].realizer, p[1].realizer), j, w)])
    direction("join intro", rleq(ctx, j, w),
              lambda c: [(comp(c.realizer, lib["inl"]), u, w), (comp(c.realizer, lib["inr"]), v, w)])

    d = impl_d(ctx, v, w)
    direction("curry", rleq(ctx, m, w),
              lambda c: [(curry_witness(ctx, c.realizer), u, d)])
    direction("uncurry", rleq(ctx, u, d),
              lambda c: [(uncurry_witness(ctx, c.realizer), m, w)])
    return out
