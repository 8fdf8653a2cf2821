"""The summability functor S and its structure maps.

SE has web {0,1} × Web E.  An atom (0, a) is the "value" component and
(1, a) the "increment"; two morphisms are summable when the relation
pairing them through these tags is itself a morphism, and then their
sum is plain union.  The canonical presentation identifies S with
(1 & 1) ⊸ – via the dual-numbers object I = 1 & 1.
"""

from __future__ import annotations

from .maps import PointMap, pm_from_rel, pm_sfun
from .spaces import (
    Limpl,
    SFun,
    Space,
    Tensor,
    is_morphism,
    ispace,
    one,
)
from .web_core import Pair, Rel, STAR, Tag


class NotSummable(ValueError):
    pass


def proj(E: Space, i: int) -> PointMap:
    """π_i : SE → E."""

    def fn(a):
        if a.index == i:
            yield a.inner

    return PointMap(SFun(E), E, fn, f"proj{i}")


def sigma(E: Space) -> PointMap:
    """σ : SE → E, forget the tag (π0 + π1)."""

    def fn(a):
        yield a.inner

    return PointMap(SFun(E), E, fn, "sigma")


def inj(E: Space, i: int) -> PointMap:
    """ι_i : E → SE."""

    def fn(a):
        yield Tag(i, a)

    return PointMap(E, SFun(E), fn, f"inj{i}")


def flip(E: Space) -> PointMap:
    """c : SSE → SSE, swap the two tag layers."""

    def fn(a):
        yield Tag(a.inner.index, Tag(a.index, a.inner.inner))

    return PointMap(SFun(SFun(E)), SFun(SFun(E)), fn, "flip")


def theta(E: Space) -> PointMap:
    """θ : SSE → SE, (i, (j, a)) ↦ (i ∨ j, a) unless i = j = 1."""

    def fn(a):
        i, j = a.index, a.inner.index
        if (i, j) != (1, 1):
            yield Tag(i | j, a.inner.inner)

    return PointMap(SFun(SFun(E)), SFun(E), fn, "theta")


def strength(E: Space, F: Space) -> PointMap:
    """Φ : E ⊗ SF → S(E ⊗ F)."""

    def fn(a):
        yield Tag(a.right.index, Pair(a.left, a.right.inner))

    return PointMap(Tensor(E, SFun(F)), SFun(Tensor(E, F)), fn, "strength")


def strength_sym(E: Space, F: Space) -> PointMap:
    """Φ' : SE ⊗ F → S(E ⊗ F)."""

    def fn(a):
        yield Tag(a.left.index, Pair(a.left.inner, a.right))

    return PointMap(Tensor(SFun(E), F), SFun(Tensor(E, F)), fn, "strength_sym")


def smont(E: Space, F: Space) -> PointMap:
    """SE ⊗ SF → S(E ⊗ F): add the tags, dropping the (1,1) case."""

    def fn(a):
        i, j = a.left.index, a.right.index
        if i + j <= 1:
            yield Tag(i + j, Pair(a.left.inner, a.right.inner))

    return PointMap(Tensor(SFun(E), SFun(F)), SFun(Tensor(E, F)), fn, "smont")


def sum_structural(name: str, *args) -> PointMap:
    table = {
        "proj0": lambda E: proj(E, 0),
        "proj1": lambda E: proj(E, 1),
        "sigma": sigma,
        "inj0": lambda E: inj(E, 0),
        "inj1": lambda E: inj(E, 1),
        "flip": flip,
        "theta": theta,
        "strength": strength,
        "strength_sym": strength_sym,
        "smont": smont,
    }
    if name not in table:
        raise KeyError(f"unknown summability map {name!r}")
    return table[name](*args)


def sfun_morphism(E: Space, F: Space, s: Rel) -> Rel:
    """S s : SE → SF, acting under the tag."""
    pairs = {(Tag(i, a), Tag(i, b)) for a, b in s.pairs for i in (0, 1)}
    return Rel(frozenset(pairs), f"S({s.src_label})", "")


def witness(f0: Rel, f1: Rel) -> Rel:
    """The candidate witness {(a, (i, b)) | (a, b) ∈ f_i} : X → SY."""
    pairs = {(a, Tag(0, b)) for a, b in f0.pairs} | {(a, Tag(1, b)) for a, b in f1.pairs}
    return Rel(frozenset(pairs), "witness", "")


def summable(E: Space, F: Space, f0: Rel, f1: Rel) -> bool:
    """f0, f1 : E → F are summable iff their witness is a morphism E → SF."""
    return is_morphism(E, SFun(F), witness(f0, f1))


def msum(E: Space, F: Space, f0: Rel, f1: Rel) -> Rel:
    """The sum of two summable morphisms (union of their graphs)."""
    if not summable(E, F, f0, f1):
        raise NotSummable("witness is not a morphism")
    return f0 | f1


# public alias; `msum` avoids shadowing the builtin inside this module
sum = msum


def nary_summable(E: Space, F: Space, fs) -> Rel | None:
    """Left-nested fold of binary sums; None if any step fails.

    The empty family sums to the zero morphism.
    """
    fs = list(fs)
    if not fs:
        return Rel(frozenset(), "0", "")
    acc = fs[0]
    if not is_morphism(E, F, acc):
        return None
    for f in fs[1:]:
        if not is_morphism(E, F, f):
            return None
        if not summable(E, F, acc, f):
            return None
        acc = acc | f
    return acc


# ---------------------------------------------------------------------------
# Canonical presentation: S ≅ (I ⊸ –) with I = 1 & 1
# ---------------------------------------------------------------------------


def w0(kind: str) -> Rel:
    """1 → I picking the value component."""
    return Rel(frozenset({(STAR, Tag(0, STAR))}), "w0", "")


def w1(kind: str) -> Rel:
    return Rel(frozenset({(STAR, Tag(1, STAR))}), "w1", "")


def delta_I(kind: str) -> Rel:
    """1 → I hitting both components (the "generic element")."""
    return Rel(frozenset({(STAR, Tag(0, STAR)), (STAR, Tag(1, STAR))}), "delta", "")


def pr0(kind: str) -> Rel:
    """I → 1 projecting the value component."""
    return Rel(frozenset({(Tag(0, STAR), STAR)}), "pr0", "")


def L_map(kind: str) -> Rel:
    """I → I ⊗ I, the comultiplication of dual numbers."""
    z, u = Tag(0, STAR), Tag(1, STAR)
    return Rel(
        frozenset({(z, Pair(z, z)), (u, Pair(u, z)), (u, Pair(z, u))}),
        "L",
        "",
    )


def canonical_iso(E: Space) -> tuple[PointMap, PointMap]:
    """The isomorphism SE ≅ (I ⊸ E) and its inverse.

    A tagged atom (i, a) corresponds to the single-pair function
    {((i, *), a)} of I ⊸ E.
    """
    I = ispace(E.kind)
    hom = Limpl(I, E)

    def fwd(a):
        yield Pair(Tag(a.index, STAR), a.inner)

    def bwd(p):
        yield Tag(p.left.index, p.right)

    return (
        PointMap(SFun(E), hom, fwd, "S≅hom"),
        PointMap(hom, SFun(E), bwd, "hom≅S"),
    )
