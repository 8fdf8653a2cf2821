"""The differential structure ∂ on the exponential.

Two independent routes to the same map are kept side by side:

* ``dpartial`` — the closed form of ∂ : !SE → S!E, which in the
  uniform (COH) kind restricts the increment to atoms outside the
  support of the value part, and in NUCS/REL does not;
* ``dpartial_via_dbar`` — derived from the coalgebra structure
  ``dbar : I → !I`` by currying !ev ∘ m2 ∘ (id ⊗ dbar) through the web
  isomorphism Web SE ≅ {0,1} × Web E ≅ Web (I ⊸ E).

Diagram checks use the first; tests compare it against the second.
"""

from __future__ import annotations

from functools import lru_cache

from .maps import PointMap, pm_compose, pm_memo, pm_sfun
from .spaces import Bang, SFun, Space, contains, is_morphism
from .web_core import (
    MSet,
    Multiset,
    Pair,
    Rel,
    STAR,
    Tag,
    mset,
)


def dbar(kind: str, max_degree: int = 6) -> Rel:
    """The coalgebra map ∂̄ : I → !I.

    (0, *) goes to every power of the value point; (1, *) goes to every
    power of the value point plus one increment point.  Truncated at
    multiset degree ``max_degree``.
    """
    z, u = Tag(0, STAR), Tag(1, STAR)
    pairs = set()
    for k in range(max_degree + 1):
        pairs.add((z, MSet(Multiset.from_counts([(z, k)]))))
    for k in range(max_degree):
        pairs.add((u, MSet(Multiset.from_counts([(z, k), (u, 1)]))))
    return Rel(frozenset(pairs), "dbar", "")


@lru_cache(maxsize=None)
def dpartial(E: Space) -> PointMap:
    """∂ : !SE → S!E, the closed form.

    (m0 tagged 0, (0, m0)) for every multiset m0 of value atoms, and
    (m0 + one increment atom a, (1, m0 + a)) where in the uniform kind
    a must not already occur in m0.
    """
    kind = E.kind

    def fn(m):
        tags = [a.index for a in m.ms]
        values = Multiset.of([a.inner for a in m.ms if a.index == 0])
        n_inc = sum(1 for t in tags if t == 1)
        if n_inc == 0:
            out = MSet(values)
            if contains(Bang(E), out):
                yield Tag(0, out)
        elif n_inc == 1:
            (a,) = [x.inner for x in m.ms if x.index == 1]
            if kind == "coh" and values.count(a) > 0:
                return
            out = MSet(values + Multiset.of([a]))
            if contains(Bang(E), out):
                yield Tag(1, out)

    return pm_memo(PointMap(Bang(SFun(E)), SFun(Bang(E)), fn, "dpartial"))


def dtilde(E: Space) -> PointMap:
    """∂̃ = m2 ∘ (id ⊗ ∂̄) : !E ⊗ I → !(E ⊗ I)."""
    from .exponential import m2
    from .maps import pm_from_rel, pm_id, pm_tensor
    from .spaces import Tensor, ispace

    I = ispace(E.kind)
    db = pm_from_rel(I, Bang(I), dbar(E.kind), "dbar")
    return pm_compose(
        m2(E, I),
        pm_tensor(pm_id(Bang(E)), db),
        "dtilde",
    )


def dpartial_via_dbar(E: Space) -> PointMap:
    """∂ recovered from ∂̄ by currying evaluation.

    Under Web SE ≅ Web (I ⊸ E), a tagged atom (i, a) is the one-pair
    function ((i, *), a).  The transposed map sends a multiset of such
    functions paired against ∂̄'s decompositions of a dual-numbers
    point, evaluating each pairing.
    """
    kind = E.kind

    # dbar as: input tag i ↦ multiset of component tags
    decomp: dict = {0: set(), 1: set()}
    for t, m in dbar(kind).pairs:
        decomp[t.index].add(tuple(sorted(x.index for x in m.ms)))

    def fn(m):
        # m : multiset over Web SE ≅ Web (I ⊸ E); an element (j, a) is
        # the hom atom ((j, *), a).  m2 pairs m against a dbar output
        # of equal size, and ev only fires when the I components match,
        # i.e. when m's tag multiset equals the dbar decomposition; the
        # evaluated image is then the multiset of the a's.
        tags = tuple(sorted(a.index for a in m.ms))
        for i in (0, 1):
            if tags in decomp[i]:
                out = MSet(Multiset.of([a.inner for a in m.ms]))
                if contains(Bang(E), out):
                    yield Tag(i, out)

    return PointMap(Bang(SFun(E)), SFun(Bang(E)), fn, "dpartial-via-dbar")


def dhat(E: Space, F: Space, s: Rel, budget) -> Rel:
    """D̂s = (S s) ∘ ∂ for a Kleisli morphism s : !E → F."""
    from .summability import sfun_morphism

    d = dpartial(E).materialize(budget, margin=budget.max_degree + 2)
    return _compose_rel(sfun_morphism(Bang(E), F, s), d)


def _compose_rel(t: Rel, s: Rel) -> Rel:
    from .web_core import rel_compose

    return rel_compose(s, t)


def partial_derivative(E0: Space, E1: Space, F: Space, s: Rel, which: int, budget) -> Rel:
    """Partial derivative of s : !(E0 & E1) → F in one coordinate.

    D̂s composed (in the Kleisli category) with the summability
    strength that injects an increment in coordinate ``which`` and a
    plain value in the other.
    """
    from .exponential import kleisli_compose
    from .spaces import With, enumerate_web
    from .web_core import Budget

    X = With(E0, E1)
    ds = dhat(X, F, s, budget)

    # strength: !S(coordinate-wise) → S(X) as a Kleisli map
    # [ (0, Tag k a) ] ↦ (0, Tag k a)   for the passive coordinate k
    # [ Tag w (i, b) ] viewed at coordinate w=which ↦ (i, Tag w b)
    other = 1 - which
    pairs = set()
    inner = Budget(budget.max_degree, budget.max_atoms)
    for a in enumerate_web(X, inner):
        if a.index == other:
            pairs.add((mset([Tag(a.index, a.inner)]), Tag(0, a)))
    src_i = E0 if which == 0 else E1
    for b in enumerate_web(src_i, inner):
        for i in (0, 1):
            pairs.add((mset([Tag(which, Tag(i, b))]), Tag(i, Tag(which, b))))
    # the domain here is !(X with an S at coordinate `which`)
    str_rel = Rel(frozenset(pairs), "Sdfstr", "")
    return kleisli_compose(ds, str_rel, _strength_src(E0, E1, which))


def _strength_src(E0: Space, E1: Space, which: int):
    from .spaces import With

    if which == 0:
        return With(SFun(E0), E1)
    return With(E0, SFun(E1))


def local_derivative(s: Rel, x) -> Rel:
    """∂s(x)/∂x = {(a, b) | (m + [a], b) ∈ s, Supp m ⊆ x}."""
    xs = set(x)
    pairs = set()
    for m, b in s.pairs:
        for a in m.ms.support:
            rest = m.ms - Multiset.of([a])
            if all(c in xs for c in rest.support):
                pairs.add((a, b))
    return Rel(frozenset(pairs), "local", "")


def fun_apply(s: Rel, x) -> frozenset:
    """Fun s(x) = {b | ∃ m with Supp m ⊆ x, (m, b) ∈ s}."""
    xs = set(x)
    return frozenset(b for m, b in s.pairs if all(a in xs for a in m.ms.support))
