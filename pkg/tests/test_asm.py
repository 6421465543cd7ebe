import pytest

from assemblies import base as B
from assemblies.asm import Asm, Assembly, NotTracked
from assemblies.base import FinObject
from assemblies.pca import NUM, App, K, S

from helpers import KK, ctx, fixtures

X = Assembly(FinObject(["a", "b"]), {"a": [K], "b": [S]}, "X")
Y = Assembly(FinObject([0, 1]), {0: [K, S], 1: [KK]}, "Y")


def test_assembly_validation():
    with pytest.raises(B.DomainError):
        Assembly(FinObject([0]), {0: []})
    with pytest.raises(B.DomainError):
        Assembly(FinObject([0, 1]), {0: [K]})
    assert Assembly(FinObject([0]), {0: [S, K, K]}).rho(0) == frozenset([K, S])


def test_tracker_search_and_verification():
    c = ctx()
    f = c.morphism(X, Y, {"a": 0, "b": 0})
    assert f.tracker == c.I
    const = c.morphism(X, Y, {"a": 1, "b": 1})
    assert c.verify_tracks(const.tracker, const.map, X, Y) is True
    with pytest.raises(NotTracked):
        c.morphism(X, Y, {"a": 0, "b": 0}, tracker=App(K, KK))


def test_untrackable_swap():
    c = ctx()
    assert c.try_morphism(X, X, {"a": "b", "b": "a"}) is None


def test_identity_and_composition():
    c = ctx()
    f = c.morphism(X, Y, {"a": 0, "b": 0})
    g = c.morphism(Y, c.nabla(FinObject([0])), {0: 0, 1: 0})
    gf = c.compose(g, f)
    assert gf.map == B.compose(g.map, f.map)
    assert c.verify_tracks(gf.tracker, gf.map, X, g.dst) is True
    assert c.compose(f, c.identity(X)) == f == c.compose(c.identity(Y), f)


def test_gamma_nabla_transpose():
    c = ctx()
    z = FinObject([0, 1, 2])
    for h in B.all_maps(X.carrier, z):
        t = c.to_nabla(X, h)
        assert c.gamma(t.dst) == z and t.map == h


def test_unit_eta():
    c = ctx()
    assert c.unit_eta(X).tracker == c.I
    n = c.nabla(FinObject([0, 1]))
    assert c.unit_eta(n).map == B.identity(n.carrier)


def test_product_universal_property():
    c = ctx()
    lim = c.product(X, Y)
    assert len(lim.apex.carrier) == 4
    h = c.morphism(X, X, {"a": "a", "b": "b"})
    k = c.morphism(X, Y, {"a": 0, "b": 0})
    m = c.mediate(lim, h, k)
    assert c.compose(lim.legs[0], m).map == h.map
    assert c.compose(lim.legs[1], m).map == k.map


def test_pullback_and_equalizer():
    c = ctx()
    n = c.nabla(FinObject([0, 1]))
    f = c.morphism(X, n, {"a": 0, "b": 1})
    g = c.morphism(Y, n, {0: 0, 1: 0})
    lim = c.pullback(f, g)
    p1, p2 = lim.legs
    assert B.is_pullback(f.map, g.map, p1.map, p2.map)
    m = c.mediate(lim, p1, p2)
    assert m.map == B.identity(lim.apex.carrier)
    f2 = c.morphism(X, n, {"a": 0, "b": 0})
    eq = c.equalizer(f, f2)
    assert eq.apex.carrier.elements == ("a",)
    incl = c.morphism(eq.apex, X, {"a": "a"})
    assert c.mediate_equalizer(eq, incl).map.as_dict() == {"a": "a"}


def test_image_factorization_and_regular_epis():
    c = ctx()
    n = c.nabla(FinObject([0, 1, 2]))
    f = c.morphism(Y, n, {0: 2, 1: 2})
    e, m = c.image_factorize(f)
    assert c.is_mono(m) and c.is_regular_epi(e) is True
    assert B.compose(m.map, e.map) == f.map
    assert c.is_regular_epi(f) is False


def test_pushforward_of_pullback_is_identity():
    c = ctx()
    for y in fixtures():
        for e in B.all_maps(FinObject(range(3)), y.carrier):
            if e.is_surjective():
                assert c.pushforward_assembly(e, c.pullback_assembly(e, y)) == y


def test_pulled_back_regular_epi():
    c = ctx()
    z3 = Assembly(FinObject([0, 1, 2]), {0: [K], 1: [S], 2: [KK]})
    two = Assembly(FinObject([0, 1]), {0: [K, S], 1: [KK]})
    e = c.morphism(z3, two, {0: 0, 1: 0, 2: 1})
    sec = c.regular_epi_section(e)
    assert sec is not None
    x2 = Assembly(FinObject(["a", "b"]), {"a": [K], "b": [KK]})
    g = c.morphism(x2, two, {"a": 0, "b": 1})
    lim = c.pullback(e, g)
    leg = lim.legs[1]
    hint = c.pulled_back_epi_hint(sec, g)
    assert c.is_regular_epi(leg, [hint]) is True


def test_otimes_projections():
    c = ctx()
    w, p1, p2 = c.otimes(Y, Y)
    assert all(len(w.rho(x)) == len(Y.rho(x)) ** 2 for x in Y.carrier)
    assert p1.tracker == c.lib["fst"] and p2.tracker == c.lib["snd"]


def test_numeric_instance():
    c = Asm(NUM)
    x = Assembly(FinObject([0, 1]), {0: [NUM.k], 1: [NUM.s]})
    f = c.morphism(x, c.nabla(FinObject([0])), {0: 0, 1: 0})
    assert c.verify_tracks(f.tracker, f.map, f.src, f.dst) is True
    assert c.morphism(x, x, {0: 0, 1: 1}).tracker == c.I


def test_filter_restricts_trackers():
    from assemblies.pca import Atom, Relative, SK
    c = Asm(filter=Relative.generated_by(SK, [K, S]))
    a = Atom("a")
    x = Assembly(FinObject([0]), {0: [K]})
    y = Assembly(FinObject([0]), {0: [a]})
    with pytest.raises(NotTracked):
        c.morphism(x, y, {0: 0}, tracker=App(K, a))
    assert Asm().morphism(x, y, {0: 0}, tracker=App(K, a)).tracker == App(K, a)
