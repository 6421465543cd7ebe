from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from assemblies import pca as P
from assemblies.pca import (K, NUM, OUT_OF_FUEL, S, SK, STUCK, TRIVIAL, App, Atom, Defined,
                            parse_term, show_term)

I = App(App(S, K), K)
OMEGA = App(App(S, I), I)

terms = st.recursive(
    st.sampled_from([K, S, Atom("a"), Atom("b2")]),
    lambda sub: st.builds(App, sub, sub),
    max_leaves=12,
)


def test_k_law_example():
    x, y = App(K, S), S
    assert SK.apply(App(K, x), y, 10) == Defined(x)


def test_identity_example():
    for v in SK.enumerate(20):
        assert SK.apply(I, v, 10) == Defined(v)


def test_self_application_runs_out_of_fuel():
    assert SK.apply(OMEGA, OMEGA, 5) is OUT_OF_FUEL


def test_apply_chain():
    z = App(K, K)
    assert SK.apply_chain(K, [z, S], 10) == Defined(z)
    assert SK.apply_chain(S, [K, K, z], 20) == Defined(z)
    with pytest.raises(ValueError):
        SK.apply_chain(K, [], 10)


def test_atoms_are_neutral():
    a = Atom("a")
    assert SK.apply(a, K, 5) == Defined(App(a, K))
    assert SK.apply_chain(K, [a, S], 5) == Defined(a)


def test_numeric_model_codes():
    assert NUM.k == 0 and NUM.s == 2
    assert NUM.apply(NUM.k, 4, 10) == Defined(NUM.encode(App(K, NUM.decode(4))))
    assert NUM.apply(3, 0, 10) is STUCK
    assert NUM.apply(0, 5, 10) is STUCK
    assert not NUM.is_code(7)


def test_trivial_model():
    assert TRIVIAL.apply("*", "*", 0) == Defined("*")
    assert TRIVIAL.enumerate(5) == ["*"]


def test_enumerate_is_canonical():
    assert [show_term(v) for v in SK.enumerate(8)] == [
        "K", "S", "K K", "K S", "S K", "S S", "K (K K)", "K (K S)"]
    assert all(P.is_value(v) for v in SK.enumerate(200))
    assert len(set(SK.enumerate(200))) == 200


def test_parse_errors_carry_positions():
    with pytest.raises(P.TermSyntaxError) as exc:
        parse_term("K (S")
    assert exc.value.pos == 4
    with pytest.raises(P.TermSyntaxError):
        parse_term("K )")
    with pytest.raises(P.TermSyntaxError):
        parse_term("Q")


@settings(max_examples=1000, deadline=None)
@given(terms)
def test_parse_show_round_trip(t):
    assert parse_term(show_term(t)) == t


@settings(max_examples=300, deadline=None)
@given(st.integers(min_value=0, max_value=5000))
def test_rank_unrank(i):
    assert P.rank(P.unrank(i)) == i


@settings(max_examples=300, deadline=None)
@given(st.integers(min_value=0, max_value=3000))
def test_godel_round_trip(i):
    t = P.unrank(i)
    assert P.godel_roundtrip(NUM, t) == t


@settings(max_examples=500, deadline=None)
@given(terms, terms, st.integers(0, 40), st.integers(0, 200))
def test_fuel_monotonicity(a, b, n, extra):
    r = SK.apply(a, b, n)
    if isinstance(r, Defined):
        assert SK.apply(a, b, n + extra) == r


def test_fuel_monotonicity_sampler():
    for pca in (SK, NUM):
        rep = P.fuel_monotonicity(pca, samples=200, seed=3)
        assert rep.ok


@pytest.mark.parametrize("pca", [SK, NUM, TRIVIAL])
def test_combinatory_completeness(pca):
    f = P.TrivialFilter() if pca is TRIVIAL else P.Inhabited()
    assert P.check_combinatory_complete(pca, f).ok


def test_s_law_on_enumerated_triples():
    vals = SK.enumerate(6)
    for x, y, z in product(vals, repeat=3):
        assert isinstance(SK.apply_chain(S, [x, y], 64), Defined)
        xz, yz = SK.apply(x, z, 64), SK.apply(y, z, 64)
        rhs = SK.apply(xz.value, yz.value, 64)
        if isinstance(rhs, Defined):
            assert SK.apply_chain(S, [x, y, z], 200) == rhs


# filters

realizer_sets = st.frozensets(st.sampled_from(SK.enumerate(10) + [Atom("a")]), max_size=4)


@settings(max_examples=200, deadline=None)
@given(realizer_sets, realizer_sets)
def test_filters_upward_closed(s1, s2):
    filters = [P.Inhabited(), P.Relative.generated_by(SK, [K, S]),
               P.Intersection([P.Inhabited(), P.Relative.generated_by(SK, [K, S])])]
    for f in filters:
        if f.member(s1, SK, 64, 16):
            assert f.member(s1 | s2, SK, 64, 16)


def test_inhabited_filter():
    f = P.Inhabited()
    assert f.member(frozenset(), SK, 10, 10) is False
    assert f.member({K}, SK, 10, 10) is True
    pred = P.Predicate(lambda v, fuel: v == App(K, K), "KK")
    assert f.member(pred, SK, 10, 10) is True
    never = P.Predicate(lambda v, fuel: False, "never")
    assert f.member(never, SK, 10, 10) is None


def test_relative_filter_excludes_atoms():
    f = P.Relative.generated_by(SK, [K, S])
    assert f.member({Atom("a")}, SK, 10, 10) is False
    assert f.member({Atom("a"), K}, SK, 10, 10) is True
    assert all(f.contains(v) for v in f.enumerate(20))
    assert P.check_combinatory_complete(SK, f).ok


def test_relative_filter_without_s_is_not_complete():
    f = P.Relative.generated_by(SK, [K])
    rep = P.check_combinatory_complete(SK, f)
    assert [c.name for c in rep.failing()] == ["s is a filter member"]
