from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from assemblies import base as B
from assemblies.base import FinMap, FinObject

SETS = [FinObject(range(n)) for n in range(5)]


@pytest.mark.parametrize("x", SETS, ids=lambda x: f"size{len(x)}")
def test_heyting_laws_exhaustive(x):
    subs = list(x.subsets())
    top, bot = B.top(x), B.bottom(x)
    for u, v in product(subs, repeat=2):
        assert B.meet(u, v) <= u and B.meet(u, v) <= v
        assert u <= B.join(u, v) and v <= B.join(u, v)
        assert bot <= u <= top
        for w in subs:
            assert (w <= B.meet(u, v)) == (w <= u and w <= v)
            assert (B.join(u, v) <= w) == (u <= w and v <= w)
            assert (B.meet(w, u) <= v) == (w <= B.impl(u, v))


def maps_between(max_size=3):
    objs = [FinObject(range(n)) for n in range(1, max_size + 1)]
    for x, y in product(objs, repeat=2):
        yield from B.all_maps(x, y)


def test_image_adjunctions():
    for f in maps_between(3):
        for u in f.src.subsets():
            for v in f.dst.subsets():
                assert (B.exists_f(f, u) <= v) == (u <= B.inv_image(f, v))
                assert (B.inv_image(f, v) <= u) == (v <= B.forall_f(f, u))


def test_category_laws():
    ms = list(maps_between(2))
    for f in ms:
        assert B.compose(B.identity(f.dst), f) == f == B.compose(f, B.identity(f.src))
        for g in ms:
            if g.src != f.dst:
                continue
            for h in ms:
                if h.src == g.dst:
                    assert B.compose(h, B.compose(g, f)) == B.compose(B.compose(h, g), f)


def test_pullbacks_and_equalizers():
    for f in maps_between(3):
        for g in B.all_maps(FinObject(range(2)), f.dst):
            p, p1, p2 = B.pullback(f, g)
            assert B.is_pullback(f, g, p1, p2)
            assert B.compose(f, p1) == B.compose(g, p2)
    f = FinMap(FinObject([0, 1, 2]), FinObject([0, 1]), {0: 0, 1: 1, 2: 0})
    g = FinMap(f.src, f.dst, {0: 0, 1: 0, 2: 0})
    e, inc = B.equalizer(f, g)
    assert e.elements == (0, 2)
    assert B.compose(f, inc) == B.compose(g, inc)


def test_products():
    x, y = FinObject("ab"), FinObject([0, 1, 2])
    p, p1, p2 = B.product(x, y)
    assert len(p) == 6
    assert B.is_pullback(B.to_terminal(x), B.to_terminal(y), p1, p2)


def test_image_factorization():
    for f in maps_between(3):
        e, m = B.image_factorization(f)
        assert e.is_surjective() and m.is_injective()
        assert B.compose(m, e) == f


def test_beck_chevalley_on_all_small_squares():
    for f in maps_between(3):
        for n in (1, 2):
            for g in B.all_maps(FinObject(range(n)), f.dst):
                assert B.beck_chevalley_check(B.pullback_square(f, g)).ok


def test_beck_chevalley_needs_a_pullback():
    f = FinMap(FinObject([0, 1]), FinObject([0]), {0: 0, 1: 0})
    sq = B.Square(f, f, B.identity(f.src), B.identity(f.src))
    assert sq.commutes() and not sq.is_pullback()
    with pytest.raises(B.DomainError):
        B.beck_chevalley_check(sq)


def test_domain_errors():
    x = FinObject([0, 1])
    with pytest.raises(B.DomainError):
        FinMap(x, x, {0: 0})
    with pytest.raises(B.DomainError):
        FinMap(x, x, {0: 0, 1: 2})
    with pytest.raises(B.DomainError):
        B.meet(B.top(x), B.top(FinObject([0])))


elements = st.one_of(st.integers(-5, 5), st.text("ab", min_size=1, max_size=2))


@settings(max_examples=200, deadline=None)
@given(st.lists(elements, max_size=6))
def test_canonical_order(xs):
    a = FinObject(xs)
    b = FinObject(reversed(xs))
    assert a == b and a.elements == tuple(sorted(set(xs), key=B.elem_key))
