"""Shared fixtures for the test modules."""

from functools import lru_cache
from itertools import product

from assemblies.asm import Asm, Assembly, all_assemblies
from assemblies.base import FinObject, all_maps
from assemblies.logic import Structure
from assemblies.pca import App, K, S

KK = App(K, K)


@lru_cache(maxsize=None)
def ctx() -> Asm:
    return Asm()


def carriers(max_size=3):
    return [FinObject(range(n)) for n in range(1, max_size + 1)]


@lru_cache(maxsize=None)
def small_family():
    """Every assembly on {0}, {0,1}, {0,1,2} with realizer sets of size at
    most two drawn from {K, S}."""
    out = []
    for c in carriers(3):
        out.extend(all_assemblies(c, [K, S], max_size=2))
    return tuple(out)


@lru_cache(maxsize=None)
def fixtures():
    """A handful of named assemblies with carriers of size at most three."""
    return (
        Assembly(FinObject([0]), {0: [K]}, "P"),
        Assembly(FinObject(["a", "b"]), {"a": [K], "b": [S]}, "X"),
        Assembly(FinObject([0, 1]), {0: [K, S], 1: [S]}, "W"),
        Assembly(FinObject([0, 1, 2]), {0: [K], 1: [S], 2: [K, S]}, "V"),
    )


@lru_cache(maxsize=None)
def tracked(pairs=None):
    """All tracked morphisms between the fixtures, by (src, dst)."""
    c = ctx()
    fx = fixtures()
    out = {}
    for x, y in product(fx, repeat=2):
        ms = []
        for m in all_maps(x.carrier, y.carrier):
            mor = c.try_morphism(x, y, m)
            if mor is not None:
                ms.append(mor)
        out[(x, y)] = ms
    return out


def structure(c=None):
    c = c or ctx()
    st = Structure()
    st.sorts["X"] = Assembly(FinObject(["a", "b"]), {"a": [K], "b": [S]}, "X")
    st.sorts["X2"] = Assembly(FinObject(["a", "b"]), {"a": [K], "b": [K]}, "X2")
    st.sorts["N"] = c.nabla(FinObject([0, 1]))
    st.sorts["One"] = Assembly(FinObject(["*"]), {"*": [K]}, "One")
    st.functions["f"] = c.morphism(st.sorts["X"], st.sorts["N"], {"a": 0, "b": 1})
    st.add_relation("R", ["X"], {"a": [K]})
    st.add_relation("R2", ["X2"], {"a": [K]})
    st.add_relation("Q", ["N"], {0: c.truncation(), 1: []})
    st.add_relation("P", ["One"], {"*": [S]})
    st.add_relation("E", ["One"], {})
    st.add_relation("T", ["X", "N"], {("a", 0): [K], ("b", 1): [S]})
    return st


CORPUS = [
    "top",
    "bot",
    "top /\\ top",
    "top \\/ bot",
    "bot \\/ top",
    "~bot",
    "~top",
    "exists x:X. R(x)",
    "forall x:X. R(x)",
    "forall x:X. R(x) -> R(x)",
    "forall x:X. x = x",
    "exists x:X. x = x /\\ R(x)",
    "forall u:One. P(u) \\/ ~P(u)",
    "forall u:One. E(u) \\/ ~E(u)",
    "forall x:X2. R2(x) \\/ ~R2(x)",
    "forall n:N. Q(n) \\/ ~Q(n)",
    "exists n:N. Q(n)",
    "forall x:X. exists n:N. T(x, n)",
    "forall x:X. f(x) = f(x)",
    "exists x:X. f(x) = f(x) /\\ ~R(x)",
    "forall u:One. ~E(u)",
    "forall u:One. ~~P(u)",
    "(exists x:X. R(x)) -> top",
    "forall x:X. R(x) -> exists n:N. T(x, n)",
    "exists u:One. E(u)",
]
