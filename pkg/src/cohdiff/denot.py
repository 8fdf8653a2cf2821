"""Denotational semantics of the calculus in the web models.

A term x1:A1, ..., xn:An ⊢ M : B denotes a relation !⟦Γ⟧ → ⟦B⟧ where
⟦Γ⟧ is the &-stack ((⊤ & A1) & ...) & An and arrows are interpreted
Kleisli-style: ⟦A ⇒ B⟧ = !⟦A⟧ ⊸ ⟦B⟧.  Base naturals are flat (distinct
numbers strictly incoherent, a number neutral with itself), truncated
at a chosen bound; multiset degree is truncated by a budget.  Fixpoints
are computed by Kleene iteration, which converges on these finite
truncations.

The interpretation of D inserts a summability tag at the codomain leaf
of the type, matching D(A ⇒ B) = A ⇒ DB, and acts on the graph of a
function atom by tagging its input multiset with at most one increment.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import calculus as cal
from .spaces import Bang, Limpl, SFun, Space, BaseSpace, Tensor, With, contains, enumerate_web, top
from .web_core import Atom, Base, Budget, MSet, Multiset, Pair, Rel, Tag, mset, within_budget


@dataclass(frozen=True)
class SemEnv:
    kind: str = "coh"
    nmax: int = 3
    budget: Budget = Budget(3, 20000)


def nat_atom(n: int) -> Base:
    return Base(str(n))


def nat_space(sem: SemEnv) -> BaseSpace:
    atoms = tuple(nat_atom(i) for i in range(sem.nmax + 1))
    if sem.kind == "coh":
        return BaseSpace("coh", atoms, name="nat")
    sincoh = frozenset(
        (a, b) for a in atoms for b in atoms if a != b
    )
    return BaseSpace(sem.kind, atoms, sincoh=sincoh, name="nat")


def interp_type(t: cal.Ty, sem: SemEnv) -> Space:
    if isinstance(t, cal.Nat):
        s: Space = nat_space(sem)
        for _ in range(t.depth):
            s = SFun(s)
        return s
    return Limpl(Bang(interp_type(t.src, sem)), interp_type(t.tgt, sem))


def ctx_space(ctx: list, sem: SemEnv) -> Space:
    s: Space = top(sem.kind)
    for _, ty in ctx:
        s = With(s, interp_type(ty, sem))
    return s


def _var_path(ctx: list, name: str, a: Atom) -> Atom:
    """Atom of the context space addressing variable ``name``."""
    idx = max(i for i, (n, _) in enumerate(ctx) if n == name)
    out = Tag(1, a)
    for _ in range(len(ctx) - 1 - idx):
        out = Tag(0, out)
    return out


# -- S-tag plumbing at the codomain leaf of a type -------------------------


def add_s(t: cal.Ty, i: int, a: Atom) -> Atom:
    """View an atom of ⟦T⟧ as an atom of ⟦DT⟧ tagged i."""
    if isinstance(t, cal.Arrow):
        return Pair(a.left, add_s(t.tgt, i, a.right))
    return Tag(i, a)


def descend(a: Atom, d: int, t: cal.Ty):
    """Navigate d S-layers of ⟦D^{≥d}...⟧, arrows recursing on codomains.

    Returns (zipper, core) where zipper rebuilds the atom from a
    replacement core.
    """
    if isinstance(t, cal.Arrow):
        z, core = descend(a.right, d, t.tgt)
        return (lambda x, _a=a, _z=z: Pair(_a.left, _z(x))), core
    if d == 0:
        return (lambda x: x), a
    z, core = descend(a.inner, d - 1, cal.Nat(t.depth - 1))
    return (lambda x, _a=a, _z=z: Tag(_a.index, _z(x))), core


def _apply_op(op: str, index: int | None, d: int, t: cal.Ty, a: Atom):
    """Apply a tag operator at depth d to a codomain atom of type t.

    t is the type of the operator's *argument*.  Yields 0 or 1 atoms.
    """
    z, core = descend(a, d, t)
    if op == "proj":
        if core.index == index:
            yield z(core.inner)
    elif op == "inj":
        yield z(Tag(index, core))
    elif op == "sigma":
        i, j = core.index, core.inner.index
        if (i, j) != (1, 1):
            yield z(Tag(i | j, core.inner.inner))
    elif op == "c":
        yield z(Tag(core.inner.index, Tag(core.index, core.inner.inner)))
    else:
        raise ValueError(op)


# -- term interpretation ----------------------------------------------------


def interp_term(m: cal.Term, ctx: list, sem: SemEnv) -> frozenset:
    """The graph of ⟦Γ ⊢ M⟧ as a set of (context multiset, atom) pairs."""
    kind, budget = sem.kind, sem.budget
    C = ctx_space(ctx, sem)
    tyenv = dict(ctx)

    if isinstance(m, cal.Var):
        ty = tyenv[m.name]
        out = set()
        for a in enumerate_web(interp_type(ty, sem), budget):
            out.add((mset([_var_path(ctx, m.name, a)]), a))
        return frozenset(out)

    if isinstance(m, cal.Num):
        if m.value > sem.nmax:
            return frozenset()
        return frozenset({(MSet(Multiset.of([])), nat_atom(m.value))})

    if isinstance(m, cal.Succ):
        out = set()
        for n in range(sem.nmax):
            out.add(
                (
                    MSet(Multiset.of([])),
                    Pair(mset([nat_atom(n)]), nat_atom(n + 1)),
                )
            )
        return frozenset(out)

    if isinstance(m, cal.Zero):
        return frozenset()

    if isinstance(m, cal.Plus):
        return interp_term(m.left, ctx, sem) | interp_term(m.right, ctx, sem)

    if isinstance(m, cal.Lam):
        inner = interp_term(m.body, ctx + [(m.var, m.ty)], sem)
        out = set()
        for mm, b in inner:
            c_part, a_part = [], []
            for x, k in mm.ms.entries:
                (c_part if x.index == 0 else a_part).append((x.inner, k))
            out.add(
                (
                    MSet(Multiset.from_counts(c_part)),
                    Pair(MSet(Multiset.from_counts(a_part)), b),
                )
            )
        return frozenset(out)

    if isinstance(m, cal.App):
        frel = interp_term(m.fun, ctx, sem)
        arel = interp_term(m.arg, ctx, sem)
        return _sem_app(frel, arel, C, sem)

    if isinstance(m, cal.If0):
        crel = interp_term(m.cond, ctx, sem)
        trel = interp_term(m.then, ctx, sem)
        orel = interp_term(m.other, ctx, sem)
        out = set()
        for m0, v in crel:
            branch = trel if v == nat_atom(0) else orel
            for m1, b in branch:
                tot = _merge_ctx(m0, m1, C, sem)
                if tot is not None:
                    out.add((tot, b))
        return frozenset(out)

    if isinstance(m, (cal.Proj, cal.Inj, cal.SigmaT, cal.CTerm)):
        arg_ty = cal.typecheck(m.body, tyenv)
        op = {cal.Proj: "proj", cal.Inj: "inj", cal.SigmaT: "sigma", cal.CTerm: "c"}[type(m)]
        index = getattr(m, "index", None)
        inner = interp_term(m.body, ctx, sem)
        out = set()
        for mm, b in inner:
            for b2 in _apply_op(op, index, m.depth, arg_ty, b):
                out.add((mm, b2))
        return frozenset(out)

    if isinstance(m, cal.DTerm):
        fty = cal.typecheck(m.body, tyenv)
        inner = interp_term(m.body, ctx, sem)
        return _sem_d(inner, fty, sem)

    if isinstance(m, cal.Fix):
        frel = interp_term(m.body, ctx, sem)
        cur: frozenset = frozenset()
        while True:
            nxt = cur | _sem_app(frel, cur, C, sem)
            if nxt == cur:
                return cur
            cur = nxt

    raise TypeError(f"no interpretation clause for {m!r}")


def _merge_ctx(m0: MSet, m1: MSet, C: Space, sem: SemEnv):
    tot = MSet(m0.ms + m1.ms)
    if not within_budget(tot, sem.budget.max_degree):
        return None
    if not contains(Bang(C), tot):
        return None
    return tot


def _sem_app(frel, arel, C: Space, sem: SemEnv) -> frozenset:
    by_atom: dict = {}
    for mm, a in arel:
        by_atom.setdefault(a, []).append(mm)
    out = set()
    for m0, fa in frel:
        p, b = fa.left, fa.right
        occ = list(p.ms)
        pools = [by_atom.get(a, ()) for a in occ]
        if any(not pool for pool in pools):
            continue
        for choice in itertools.product(*pools):
            tot = m0.ms
            for mm in choice:
                tot = tot + mm.ms
            cand = MSet(tot)
            if not within_budget(cand, sem.budget.max_degree):
                continue
            if not contains(Bang(C), cand):
                continue
            out.add((cand, b))
    return frozenset(out)


def _sem_d(frel, fty: cal.Arrow, sem: SemEnv) -> frozenset:
    """Differentiate the function coordinate of a graph, pointwise.

    An atom (p, b) of the function contributes the all-values tagging
    (0·p, (0, b)) and, for each occurrence in p, the tagging with that
    occurrence as the increment, (p[a ↦ 1·a], (1, b)).  Tags are placed
    at the codomain leaves of the D-transformed types.
    """
    A, B = fty.src, fty.tgt
    DA = interp_type(cal.dtype(A), sem)
    out = set()
    for mm, fa in frel:
        p, b = fa.left, fa.right
        base = [add_s(A, 0, a) for a in p.ms]
        m_val = MSet(Multiset.of(base))
        if contains(Bang(DA), m_val):
            out.add((mm, Pair(m_val, add_s(B, 0, b))))
        occ = list(p.ms)
        for k in range(len(occ)):
            tagged = [add_s(A, 1 if i == k else 0, a) for i, a in enumerate(occ)]
            m_inc = MSet(Multiset.of(tagged))
            if contains(Bang(DA), m_inc):
                out.add((mm, Pair(m_inc, add_s(B, 1, b))))
    return frozenset(out)


def interp_closed(m: cal.Term, sem: SemEnv) -> frozenset:
    """Graph of a closed term: the context multiset is always empty."""
    return frozenset({(mm, b) for mm, b in interp_term(m, [], sem)})


def soundness_check(m: cal.Term, n: cal.Term, sem: SemEnv | None = None):
    """Do two closed terms have the same type and the same denotation?

    Returns (ok, info) where info explains a failure.
    """
    sem = sem or SemEnv()
    try:
        tm = cal.typecheck(m)
        tn = cal.typecheck(n)
    except cal.TypeError_ as e:
        return False, f"typing failed: {e}"
    if tm != tn:
        return False, f"types differ: {tm!r} vs {tn!r}"
    dm = interp_closed(m, sem)
    dn = interp_closed(n, sem)
    if dm == dn:
        return True, None
    only_m = sorted(dm - dn, key=repr)[:3]
    only_n = sorted(dn - dm, key=repr)[:3]
    return False, f"denotations differ; only-left={only_m} only-right={only_n}"
