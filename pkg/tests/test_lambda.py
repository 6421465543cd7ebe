from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from assemblies import lam as L
from assemblies import pca as P
from assemblies.pca import NUM, SK, Defined, K, S

I = L.I_TERM

names = st.sampled_from(["x", "y", "z", "x0", "x1"])


def lambda_terms():
    leaves = st.one_of(
        names.map(L.Var),
        st.sampled_from(["pair", "fst", "k0"]).map(lambda n: L.parse(f"[{n}]")),
        st.sampled_from([K, S, P.App(K, S)]).map(L.Const),
    )
    return st.recursive(
        leaves,
        lambda sub: st.one_of(st.builds(L.App, sub, sub), st.builds(L.Abs, names, sub)),
        max_leaves=10,
    )


@settings(max_examples=1000, deadline=None)
@given(lambda_terms())
def test_parse_show_round_trip(m):
    assert L.parse(L.show(m)) == m


def test_parse_splices():
    m = L.parse(r"\x. [pair] x {K S} {K, S}")
    assert isinstance(m, L.Abs)
    with pytest.raises(L.LambdaSyntaxError):
        L.parse(r"\x. [nosuch] x")
    with pytest.raises(L.LambdaSyntaxError):
        L.parse(r"\x x")


def test_substitution_avoids_capture():
    m = L.parse(r"\y. x")
    out = L.substitute(m, L.Var("y"), "x")
    assert out == L.Abs("y'", L.Var("y"))


def test_normalize():
    m = L.parse(r"(\x y. x) z w")
    assert L.normalize(m, 10) == L.Var("z")
    omega = L.parse(r"(\x. x x) (\x. x x)")
    assert L.normalize(omega, 50) is P.OUT_OF_FUEL


def test_converts_examples():
    assert L.converts(L.parse(r"\x. x"), L.parse(r"\y. y")) is True
    assert L.converts(L.parse(r"\x y. x"), L.parse(r"\x y. y")) is False
    assert L.converts(L.parse(r"\x. f x"), L.parse("f")) is True


# one instance of each conversion rule; the eta pair runs in the expansion direction
CURATED = {
    "alpha": (r"\x0. x0", r"\y. y"),
    "beta": (r"(\y. y) x0", "x0"),
    "eta": ("x0", r"\y. x0 y"),
    "head": (r"(\y. y) x0 x1", "x0 x1"),
    "tail": (r"x1 ((\y. y) x0)", "x1 x0"),
    "zeta": (r"\z. (\y. y) z", r"\z. z"),
}


@pytest.mark.parametrize("rule", sorted(CURATED))
def test_curated_pairs_convert(rule):
    a, b = CURATED[rule]
    assert L.converts(L.parse(a), L.parse(b)) is True


@pytest.mark.parametrize("rule", sorted(CURATED))
def test_denotation_respects_conversion(rule):
    a, b = (L.parse(s) for s in CURATED[rule])
    vals = SK.enumerate(2)
    cands = vals + list(L.compile_library(SK).values())[:4]
    for args in product(vals, repeat=2):
        for c in cands:
            if L.denotes(L.DenotationQuery(a, 2, args, c)) is True:
                assert L.denotes(L.DenotationQuery(b, 2, args, c)) is not False


def test_denotes_examples():
    x = SK.enumerate(2)
    assert L.denotes(L.DenotationQuery(L.Var("x1"), 2, tuple(x), x[1])) is True
    assert L.denotes(L.DenotationQuery(L.Var("x1"), 2, tuple(x), x[0])) is False
    u = L.Const(frozenset([K, S]))
    assert L.denotes(L.DenotationQuery(u, 0, (), S)) is True
    ident = L.parse(r"\x. x")
    assert L.denotes(L.DenotationQuery(ident, 0, (), K)) is False
    assert L.denotes(L.DenotationQuery(ident, 0, (), L.compile_library()["id"])) is True


def test_bracket_abstraction_examples():
    assert L.bracket_abstract(L.parse(r"\x. x")) == I
    k0 = SK.embed(L.bracket_abstract(L.parse(r"\x y. x")), 100).value
    pair = SK.embed(L.bracket_abstract(L.parse(r"\x y p. p x y")), 100).value
    for a, b in product(SK.enumerate(6), repeat=2):
        assert SK.apply_chain(k0, [a, b], 64) == Defined(a)
        assert SK.apply_chain(pair, [a, b, k0], 64) == Defined(a)


def test_eta_flag_gives_shorter_terms():
    m = L.parse(r"\x. [fst] x")
    plain, short = L.bracket_abstract(m), L.bracket_abstract(m, eta=True)
    assert len(P.show_term(short)) < len(P.show_term(plain))
    for v in SK.enumerate(10):
        p = SK.apply(SK.embed(plain, 100).value, v, 200)
        q = SK.apply(SK.embed(short, 100).value, v, 200)
        assert type(p) is type(q)


def test_open_terms_are_rejected():
    with pytest.raises(L.OpenTermError):
        L.bracket_abstract(L.parse(r"\x. y"))


@pytest.mark.parametrize("pca", [SK, NUM])
def test_library_agrees_with_oracle(pca):
    lib = L.compile_library(pca)
    pool = pca.enumerate(2)
    for name, m in L.library_lambda().items():
        n = L.arity(m)
        for args in product(pool, repeat=n):
            want = L.beta_oracle(m, list(args), pca)
            assert isinstance(want, Defined), name
            assert pca.apply_chain(lib[name], list(args), 512) == want, name


def test_library_names():
    lib = L.compile_library()
    a, b = K, S
    assert SK.apply_chain(lib["pair"], [a, b, lib["k0"]], 64) == Defined(a)
    assert SK.apply_chain(lib["inl"], [a, K, S], 64) == SK.apply(K, a, 64)
    f, g = P.App(K, K), I
    assert SK.apply_chain(lib["compose"], [f, g, S], 64) == Defined(K)


def test_computable_terms():
    lib = L.compile_library()
    for name, m in L.library_lambda().items():
        assert isinstance(m, L.Abs), name
        v = lib[name]
        for k in range(1, L.arity(m)):
            assert isinstance(SK.apply_chain(v, SK.enumerate(k), 64), Defined), name
        assert P.Inhabited().member(frozenset([v]), SK, 64, 8) is True
