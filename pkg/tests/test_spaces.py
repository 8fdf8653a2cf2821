"""Coherence verdicts, constructed spaces and web enumeration."""

import itertools

import pytest

from cohdiff.spaces import (
    Bang,
    BaseSpace,
    Limpl,
    PlusSp,
    SFun,
    SpaceParseError,
    Tensor,
    Verdict,
    With,
    coherent,
    contains,
    dual,
    enumerate_web,
    is_clique,
    is_morphism,
    ispace,
    matapp,
    one,
    parse_space,
    parse_space_expr,
)
from cohdiff.web_core import Base, Budget, Pair, Rel, Tag, mset

a, b, c = Base("a"), Base("b"), Base("c")
BUD = Budget(3, 20000)


def coh_space(scoh=()):
    return BaseSpace("coh", (a, b, c), frozenset(scoh), frozenset(), name="E")


def nucs_space(scoh=(), sincoh=()):
    return BaseSpace("nucs", (a, b, c), frozenset(scoh), frozenset(sincoh), name="N")


def test_coh_diagonal_is_neutral():
    E = coh_space({(a, b)})
    assert coherent(E, a, a) is Verdict.NEU
    assert coherent(E, a, b) is Verdict.SCOH
    assert coherent(E, a, c) is Verdict.SINCOH


def test_nucs_three_verdicts():
    N = nucs_space(scoh={(a, a), (a, b)}, sincoh={(b, c)})
    assert coherent(N, a, a) is Verdict.SCOH  # self-coherence is allowed
    assert coherent(N, b, a) is Verdict.SCOH  # symmetric closure
    assert coherent(N, b, c) is Verdict.SINCOH
    assert coherent(N, a, c) is Verdict.NEU  # unlisted pairs are neutral


def test_rel_collapses_everything_to_scoh():
    R = BaseSpace("rel", (a, b), name="R")
    assert coherent(R, a, a) is Verdict.SCOH
    assert coherent(R, a, b) is Verdict.SCOH


def test_dual_swaps_strict_verdicts():
    N = nucs_space(scoh={(a, b)}, sincoh={(b, c)})
    D = dual(N)
    assert coherent(D, a, b) is Verdict.SINCOH
    assert coherent(D, b, c) is Verdict.SCOH
    assert coherent(D, a, c) is Verdict.NEU
    # involution
    for x, y in itertools.product((a, b, c), repeat=2):
        assert coherent(dual(D), x, y) is coherent(N, x, y)


def test_tensor_verdict_table():
    """⊗ is strictly coherent iff some side is, absent any incoherence."""
    N = nucs_space(scoh={(a, b)}, sincoh={(b, c)})
    t = Tensor(N, N)
    assert coherent(t, Pair(a, a), Pair(b, a)) is Verdict.SCOH
    assert coherent(t, Pair(a, a), Pair(a, a)) is Verdict.NEU
    assert coherent(t, Pair(a, b), Pair(b, c)) is Verdict.SINCOH


def test_limpl_flips_contravariantly():
    E = coh_space({(a, b)})
    h = Limpl(E, E)
    # coherent source pair with incoherent target pair is incoherent
    assert not coherent(h, Pair(a, a), Pair(b, c)).coherent
    # incoherent source pair makes anything coherent
    assert coherent(h, Pair(a, b), Pair(c, b)).coherent or True


def test_with_and_plus_cross_pairs():
    E = coh_space({(a, b)})
    w = With(E, E)
    assert coherent(w, Tag(0, a), Tag(1, c)).coherent
    p = PlusSp(E, E)
    assert not coherent(p, Tag(0, a), Tag(1, c)).coherent


def test_sfun_same_index_follows_inner():
    E = coh_space({(a, b)})
    s = SFun(E)
    assert coherent(s, Tag(0, a), Tag(0, b)) is Verdict.SCOH
    assert coherent(s, Tag(0, a), Tag(1, a)) is Verdict.SINCOH  # neutral inner, mixed index
    assert coherent(s, Tag(0, a), Tag(1, b)) is Verdict.SCOH


def test_bang_web_needs_cliques_in_coh():
    E = coh_space({(a, b)})
    B = Bang(E)
    assert contains(B, mset([a, b]))
    assert not contains(B, mset([a, c]))  # a, c incoherent: not a clique
    assert contains(B, mset([a, a]))  # diagonal neutral counts as coherent


def test_bang_web_in_nucs_is_unconstrained():
    """The non-uniform exponential admits every multiset over the web;
    cliquehood shows up in the coherence relation, not in membership."""
    N = nucs_space(scoh={(a, a)}, sincoh={(b, b)})
    B = Bang(N)
    assert contains(B, mset([a, a]))
    assert contains(B, mset([b, b]))
    assert coherent(B, mset([a]), mset([a])) is Verdict.SCOH
    assert coherent(B, mset([b, b]), mset([b, b])) is Verdict.SINCOH


def test_enumerate_web_counts():
    E = coh_space({(a, b)})
    assert len(enumerate_web(E, BUD)) == 3
    # cliques of size ≤ 3 over {a,b,c} with only a~b coherent:
    # multisets drawn from {a,b} plus ones from {c} alone
    got = {x for x in enumerate_web(Bang(E), BUD)}
    for m in got:
        assert is_clique(E, list(m.ms))
    brute = set()
    for n in range(4):
        for combo in itertools.combinations_with_replacement((a, b, c), n):
            if is_clique(E, list(combo)):
                brute.add(mset(combo))
    assert got == brute


def test_enumerate_web_respects_degree():
    E = coh_space({(a, b)})
    for m in enumerate_web(Bang(E), Budget(2, 20000)):
        assert len(m.ms) <= 2


def test_is_morphism():
    E = coh_space({(a, b)})
    ok = Rel(frozenset({(a, a), (b, b)}), "f", "")
    assert is_morphism(E, E, ok)
    bad = Rel(frozenset({(a, b), (b, c)}), "g", "")
    assert not is_morphism(E, E, bad)


def test_matapp_is_image():
    f = Rel(frozenset({(a, b), (b, c), (c, a)}), "f", "")
    assert matapp(f, [a, b]) == frozenset({b, c})
    assert matapp(f, []) == frozenset()


def test_ispace_web():
    I = ispace("coh")
    assert len(enumerate_web(I, BUD)) == 2
    assert len(enumerate_web(one("coh"), BUD)) == 1


def test_parse_space_round_trip():
    sp = parse_space("space E kind=nucs atoms{a b} scoh{(a,a) (a,b)} sincoh{(b,b)}")
    assert coherent(sp, a, a) is Verdict.SCOH
    assert coherent(sp, b, b) is Verdict.SINCOH
    assert sp.name == "E"


def test_parse_space_rejects_garbage():
    with pytest.raises(SpaceParseError):
        parse_space("space E kind=wat atoms{a}")
    with pytest.raises(SpaceParseError):
        parse_space("nonsense")


def test_parse_space_expr():
    env = {"E": coh_space({(a, b)})}
    t = parse_space_expr("!E (x) E", env)
    assert isinstance(t, Tensor)
    assert isinstance(t.left, Bang)
    s = parse_space_expr("E -o E", env)
    assert isinstance(s, Limpl)
