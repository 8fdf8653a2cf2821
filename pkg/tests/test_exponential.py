"""The exponential comonad: der, dig, weak, contr, Seely, promotion."""

import itertools
from collections import Counter

from cohdiff.exponential import (
    bang_morphism,
    contr,
    der,
    dig,
    kleisli_compose,
    m2,
    promotion,
    seely2,
    seely2_inv,
    weak,
)
from cohdiff.maps import pm_bang, pm_compose, pm_from_rel, pm_id
from cohdiff.spaces import Bang, BaseSpace, Tensor, With, enumerate_web
from cohdiff.web_core import Base, Budget, Pair, Rel, Tag, mset

a, b, c = Base("a"), Base("b"), Base("c")
BUD = Budget(3, 20000)


def space(kind="rel", atoms=(a, b)):
    return BaseSpace(kind, atoms, name="E")


def test_der_extracts_singletons():
    E = space()
    r = der(E).materialize(BUD)
    assert r.pairs == frozenset({(mset([a]), a), (mset([b]), b)})


def test_weak_sends_empty_to_star():
    E = space()
    r = weak(E).materialize(BUD)
    assert len(r.pairs) == 1
    (m, _), = r.pairs
    assert m == mset([])


def test_contr_splits_every_way():
    E = space(atoms=(a,))
    r = contr(E).materialize(Budget(2, 20000))
    got = {(x, y.left, y.right) for x, y in r.pairs}
    assert (mset([a, a]), mset([a]), mset([a])) in got
    assert (mset([a]), mset([a]), mset([])) in got
    assert (mset([a]), mset([]), mset([a])) in got
    assert (mset([]), mset([]), mset([])) in got


def _freeze(parts):
    """Canonical form of a list of Counters: sorted tuple of sorted items."""
    return tuple(sorted((tuple(sorted(p.items(), key=repr)) for p in parts), key=repr))


def _partitions_oracle(elems):
    """All ways to split a list into unordered non-empty parts, as
    multisets of multisets — an independent stdlib-only reimplementation."""
    if not elems:
        return {()}
    out = set()
    first, rest = elems[0], elems[1:]
    for sub in _partitions_oracle(rest):
        parts = [Counter(dict(p)) for p in sub]
        # first joins an existing part
        for i in range(len(parts)):
            grown = [Counter(p) for p in parts]
            grown[i][first] += 1
            out.add(_freeze(grown))
        # or starts its own
        out.add(_freeze(parts + [Counter({first: 1})]))
    return out


def test_dig_nonempty_parts_match_partition_oracle():
    E = space(atoms=(a, b))
    r = dig(E).materialize(BUD)
    for m, mm in r.pairs:
        # every output is a partition of the input
        total = Counter()
        for part in mm.ms:
            total += Counter(dict(part.ms.entries))
        assert total == Counter(dict(m.ms.entries))
    # and all partitions into non-empty parts are present once the
    # degree window is wide enough to hold them
    r = dig(E).materialize(Budget(8, 200000))
    elems = [a, a, b]
    want = _partitions_oracle(elems)
    got = set()
    for m, mm in r.pairs:
        if m != mset(elems):
            continue
        parts = [p for p in mm.ms if len(p.ms)]
        if len(parts) == len(list(mm.ms)):  # no empty parts
            got.add(_freeze([Counter(dict(p.ms.entries)) for p in parts]))
    assert got == want


def test_dig_includes_empty_parts_up_to_margin():
    E = space(atoms=(a,))
    r = dig(E).materialize(BUD)
    assert (mset([a]), mset([mset([a]), mset([])])) in r.pairs


def test_comonad_counit_on_concrete_space():
    E = space(atoms=(a, b))
    lhs = pm_compose(der(Bang(E)), dig(E)).materialize(BUD)
    rhs = pm_id(Bang(E)).materialize(BUD)
    assert lhs.pairs == rhs.pairs


def test_seely2_iso_on_concrete_space():
    E, F = space(atoms=(a,)), space(atoms=(b,))
    fwd = seely2(E, F)
    back = seely2_inv(E, F)
    r = pm_compose(back, fwd).materialize(BUD)
    assert r.pairs == pm_id(Tensor(Bang(E), Bang(F))).materialize(BUD).pairs


def test_seely2_merges_tagged_components():
    """!E ⊗ !F → !(E & F) tags the left component 0 and the right 1."""
    E, F = space(atoms=(a,)), space(atoms=(b,))
    r = seely2(E, F).materialize(BUD)
    assert r.pairs
    for p, m in r.pairs:
        zeros = [x.inner for x in m.ms if x.index == 0]
        ones = [x.inner for x in m.ms if x.index == 1]
        assert p.left == mset(zeros) and p.right == mset(ones)


def test_m2_merges_multisets():
    E, F = space(atoms=(a,)), space(atoms=(b,))
    r = m2(E, F).materialize(BUD)
    assert (Pair(mset([a]), mset([b])), mset([Pair(a, b)])) in r.pairs


def test_bang_morphism_agrees_with_pm_bang():
    E = space(atoms=(a, b))
    f = Rel(frozenset({(a, b), (b, a)}), "f", "")
    viaop = bang_morphism(E, E, f, BUD)
    viapm = pm_bang(pm_from_rel(E, E, f)).materialize(BUD)
    assert viaop.pairs == viapm.pairs


def test_promotion_then_der_recovers_morphism():
    """der ∘ s! = s, the Kleisli unit law, on a concrete morphism."""
    E = space(atoms=(a, b))
    s = Rel(frozenset({(mset([a]), b), (mset([b, b]), a)}), "s", "")
    prom = promotion(s, E, E, BUD)
    derE = der(E).materialize(BUD)
    back = {(m, x) for m, mm in prom.pairs for mm2, x in derE.pairs if mm == mm2}
    assert back == set(s.pairs)


def test_kleisli_compose_concrete():
    E = space(atoms=(a, b))
    s = Rel(frozenset({(mset([a]), b)}), "s", "")
    t = Rel(frozenset({(mset([b, b]), a)}), "t", "")
    r = kleisli_compose(t, s, E)
    assert (mset([a, a]), a) in r.pairs
