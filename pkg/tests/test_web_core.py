"""Multisets, atoms and raw relations."""

from collections import Counter

from hypothesis import given, strategies as st

from cohdiff.web_core import (
    Base,
    Budget,
    MSet,
    Multiset,
    Pair,
    Rel,
    Tag,
    atom_from_text,
    atom_to_text,
    degree,
    mset,
    rel_compose,
    rel_from_text,
    rel_to_text,
    within_budget,
)

a, b, c = Base("a"), Base("b"), Base("c")


def test_multiset_equality_ignores_order():
    assert Multiset.of([a, b, a]) == Multiset.of([b, a, a])
    assert Multiset.of([a, b, a]) != Multiset.of([a, b])


def test_multiset_sum_matches_counter():
    # independent oracle: collections.Counter addition
    m = Multiset.of([a, a, b])
    n = Multiset.of([b, c])
    got = Counter(dict((m + n).entries))
    want = Counter(dict(m.entries)) + Counter(dict(n.entries))
    assert got == want


def test_multiset_subtraction():
    m = Multiset.of([a, a, b])
    assert m - Multiset.of([a]) == Multiset.of([a, b])


def test_support():
    assert set(Multiset.of([a, a, b]).support) == {a, b}
    assert Multiset.of([]).support == ()


atoms = st.deferred(
    lambda: st.one_of(
        st.sampled_from([a, b, c]),
        st.builds(Pair, atoms, atoms),
        st.builds(Tag, st.integers(0, 1), atoms),
        st.builds(lambda xs: mset(xs), st.lists(atoms, max_size=3)),
    )
)


@given(atoms)
def test_atom_text_round_trip(x):
    assert atom_from_text(atom_to_text(x)) == x


@given(st.lists(atoms, max_size=4))
def test_degree_of_mset_sums_elements(xs):
    assert degree(mset(xs)) == sum(degree(x) for x in xs) + len(xs)


def test_degree_base_cases():
    assert degree(a) == 0
    assert degree(Pair(a, b)) == 0
    assert degree(Tag(1, a)) == 0
    assert degree(mset([a, b])) == 2
    assert degree(mset([mset([a])])) == 2


def test_within_budget():
    assert within_budget(mset([a, a, b]), 3)
    assert not within_budget(mset([a, a, b]), 2)
    # pair components are budgeted separately, not added together
    assert within_budget(Pair(mset([a, a]), mset([b, b])), 2)
    assert not within_budget(Pair(mset([a]), mset([b, b])), 1)


def test_rel_compose_matches_naive():
    r = Rel(frozenset({(a, b), (a, c), (b, c)}), "r", "")
    s = Rel(frozenset({(b, a), (c, c)}), "s", "")
    got = rel_compose(r, s).pairs
    want = {(x, z) for x, y in r.pairs for y2, z in s.pairs if y == y2}
    assert got == frozenset(want)


def test_rel_text_round_trip():
    r = Rel(frozenset({(mset([a, a]), b), (mset([]), c)}), "r", "")
    assert rel_from_text(rel_to_text(r)).pairs == r.pairs


def test_rel_to_text_is_sorted():
    r = Rel(frozenset({(b, a), (a, b)}), "r", "")
    lines = rel_to_text(r).splitlines()
    assert lines == sorted(lines)


def test_budget_is_hashable_and_frozen():
    assert Budget(3, 100) == Budget(3, 100)
    assert len({Budget(3, 100), Budget(3, 100), Budget(2, 100)}) == 2
