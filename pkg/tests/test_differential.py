"""The differential ∂, its !-coalgebra form ∂̄, and the Kleisli derivative D̂."""

import random

from cohdiff.differential import (
    dbar,
    dhat,
    dpartial,
    dpartial_via_dbar,
    fun_apply,
    local_derivative,
)
from cohdiff.lawcheck import gen_morphism, gen_space
from cohdiff.spaces import Bang, BaseSpace, SFun, enumerate_web, is_clique, matapp
from cohdiff.web_core import Base, Budget, Rel, Tag, mset

a, b = Base("a"), Base("b")
BUD = Budget(3, 20000)


def tag0(x):
    return Tag(0, x)


def tag1(x):
    return Tag(1, x)


def test_dbar_degree_3_exact():
    """∂̄ = {(0, k·[0]) : k ≤ 3} ∪ {(1, k·[0] + [1]) : k ≤ 2} exactly."""
    got = dbar("coh", 3).pairs
    z, o = tag0(Base("*")), tag1(Base("*"))
    want = frozenset(
        {(z, mset([z] * k)) for k in range(4)}
        | {(o, mset([z] * k + [o])) for k in range(3)}
    )
    assert got == want


def test_dbar_same_shape_in_all_kinds():
    for kind in ("coh", "nucs", "rel"):
        assert dbar(kind, 3).pairs == dbar("coh", 3).pairs


def test_dbar_excludes_two_increments():
    o = tag1(Base("*"))
    for x, m in dbar("coh", 6).pairs:
        assert sum(n for y, n in m.ms.entries if y == o) <= 1


def test_dpartial_single_point_four_pairs():
    """On E = {a}, within degree 2, ∂ is exactly four pairs."""
    E = BaseSpace("coh", (a,), name="E")
    got = dpartial(E).materialize(Budget(2, 20000)).pairs
    want = frozenset(
        {
            (mset([]), tag0(mset([]))),
            (mset([tag0(a)]), tag0(mset([a]))),
            (mset([tag0(a), tag0(a)]), tag0(mset([a, a]))),
            (mset([tag1(a)]), tag1(mset([a]))),
        }
    )
    assert got == want


def test_dpartial_uniformity_proviso():
    """COH drops the increment at an already-used point; NUCS keeps it."""
    probe = mset([tag0(a), tag1(a)])
    out = (probe, tag1(mset([a, a])))
    Ec = BaseSpace("coh", (a,), name="E")
    En = BaseSpace("nucs", (a,), frozenset({(a, a)}), name="E")
    assert out not in dpartial(Ec).materialize(BUD).pairs
    assert out in dpartial(En).materialize(BUD).pairs


def test_dpartial_agrees_with_dbar_route():
    """Two independent constructions of ∂ coincide on random spaces."""
    rng = random.Random(5)
    for kind in ("coh", "nucs", "rel"):
        for _ in range(10):
            E = gen_space(rng, kind, 3)
            lhs = dpartial(E).materialize(BUD)
            rhs = dpartial_via_dbar(E).materialize(BUD)
            assert lhs.pairs == rhs.pairs, kind


def test_dhat_linear_morphism():
    E = BaseSpace("coh", (a,), name="E")
    F = BaseSpace("coh", (b,), name="F")
    s = Rel(frozenset({(mset([a]), b)}), "s", "")
    got = dhat(E, F, s, BUD).pairs
    want = frozenset(
        {
            (mset([tag0(a)]), tag0(b)),
            (mset([tag1(a)]), tag1(b)),
        }
    )
    assert got == want


def test_dhat_square_taylor_contrast():
    s2 = Rel(frozenset({(mset([a, a]), b)}), "s'", "")
    F = {"coh": BaseSpace("coh", (b,), name="F"),
         "nucs": BaseSpace("nucs", (b,), frozenset({(b, b)}), name="F")}
    E = {"coh": BaseSpace("coh", (a,), name="E"),
         "nucs": BaseSpace("nucs", (a,), frozenset({(a, a)}), name="E")}
    base = (mset([tag0(a), tag0(a)]), tag0(b))
    cross = (mset([tag0(a), tag1(a)]), tag1(b))
    got_coh = dhat(E["coh"], F["coh"], s2, BUD).pairs
    got_nucs = dhat(E["nucs"], F["nucs"], s2, BUD).pairs
    assert got_coh == frozenset({base})
    assert got_nucs == frozenset({base, cross})


def _summable_clique_pairs(E, max_total):
    """All (x, u) with x, u ⊆ Web E whose tagged union is a clique of SE."""
    atoms = list(E.atoms)
    out = []

    def subsets(xs):
        if not xs:
            yield []
            return
        for rest in subsets(xs[1:]):
            yield rest
            yield [xs[0]] + rest

    S = SFun(E)
    for x in subsets(atoms):
        for u in subsets(atoms):
            if len(x) + len(u) > max_total:
                continue
            tagged = [tag0(e) for e in x] + [tag1(e) for e in u]
            if is_clique(S, tagged):
                out.append((x, u))
    return out


def test_dhat_computes_local_derivatives():
    """Fun(D̂s)(x ⊕ u) = (Fun s(x), s'(x) · u) on summable clique pairs."""
    rng = random.Random(12)
    for _ in range(8):
        E = gen_space(rng, "coh", 3)
        F = gen_space(rng, "coh", 3)
        s = gen_morphism(rng, Bang(E), F, BUD)
        d = dhat(E, F, s, BUD)
        for x, u in _summable_clique_pairs(E, 3):
            point = [tag0(e) for e in x] + [tag1(e) for e in u]
            got = fun_apply(d, point)
            want = frozenset(
                {tag0(y) for y in fun_apply(s, x)}
                | {tag1(y) for y in matapp(local_derivative(s, x), u)}
            )
            assert got == want


def test_local_derivative_concrete():
    s = Rel(frozenset({(mset([a, a]), b)}), "s", "")
    d = local_derivative(s, [a])
    assert d.pairs == frozenset({(a, b)})
    assert local_derivative(s, []).pairs == frozenset()
