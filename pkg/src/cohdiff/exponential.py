"""The exponential !: free comonoid structure and Kleisli operations.

All structural morphisms are produced as PointMaps so diagram checks
can compose them exactly.  Multiset decompositions (dig, contr, m2)
allow empty parts — that is what makes the nullary monoidality map m0
come out right.
"""

from __future__ import annotations

from .maps import PointMap, pm_bang, pm_compose, pm_from_rel, pm_memo, _splits, _sub_multisets
from .spaces import Bang, Space, Tensor, contains, top
from .web_core import MSet, Multiset, Pair, Rel, STAR, Tag, mset


def der(E: Space) -> PointMap:
    """Dereliction !E → E, ([a], a)."""

    def fn(m):
        if len(m.ms) == 1:
            yield m.ms.entries[0][0]

    return PointMap(Bang(E), E, fn, "der")


from functools import lru_cache


@lru_cache(maxsize=None)
def _mpartitions(m: Multiset, max_parts: int | None = None) -> tuple:
    """Unordered partitions of m into nonempty submultisets."""
    if len(m) == 0:
        return ((),)
    if max_parts is not None and max_parts <= 0:
        return ()
    out = []
    first = m.support[0]
    one_first = Multiset.of([first])
    for part in _sub_multisets(m - one_first):
        head = part + one_first
        rest_cap = None if max_parts is None else max_parts - 1
        for rest in _mpartitions(m - head, rest_cap):
            out.append((head,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def dig(E: Space, empties_limit: int = 6) -> PointMap:
    """Digging !E → !!E: all decompositions m = m1 + ... + mn.

    Empty parts are allowed; their number is capped so the image stays
    finite (more empties only add degree past any budget used in
    practice).
    """

    def fn(m):
        from .maps import current_margin
        from .web_core import degree

        margin = current_margin()
        max_parts = None if margin is None else margin - len(m.ms)
        seen = set()
        for split in _mpartitions(m.ms, max_parts):
            base = len(split) + len(m.ms)
            cap = empties_limit if margin is None else max(0, margin - base)
            for e in range(cap + 1):
                out = mset([MSet(p) for p in split] + [MSet(Multiset())] * e)
                if out not in seen:
                    seen.add(out)
                    yield out

    return pm_memo(PointMap(Bang(E), Bang(Bang(E)), fn, "dig"))


def weak(E: Space) -> PointMap:
    """Weakening !E → 1, ([], *)."""

    def fn(m):
        if len(m.ms) == 0:
            yield STAR

    return PointMap(Bang(E), _ONE_TARGETS.setdefault(E.kind, _one(E.kind)), fn, "weak")


def _one(kind):
    from .spaces import one

    return one(kind)


_ONE_TARGETS: dict = {}


@lru_cache(maxsize=None)
def contr(E: Space) -> PointMap:
    """Contraction !E → !E ⊗ !E: all two-part decompositions."""

    def fn(m):
        for m1 in _sub_multisets(m.ms):
            yield Pair(MSet(m1), MSet(m.ms - m1))

    return pm_memo(PointMap(Bang(E), Tensor(Bang(E), Bang(E)), fn, "contr"))


def seely0(kind: str) -> PointMap:
    """1 → !⊤, * ↦ []."""

    def fn(a):
        yield MSet(Multiset.of([]))

    return PointMap(_one(kind), Bang(top(kind)), fn, "seely0")


def seely0_inv(kind: str) -> PointMap:
    def fn(m):
        yield STAR

    return PointMap(Bang(top(kind)), _one(kind), fn, "seely0_inv")


@lru_cache(maxsize=None)
def seely2(E: Space, F: Space) -> PointMap:
    """!E ⊗ !F → !(E & F), (m, p) ↦ 0·m + 1·p."""
    from .spaces import With

    def fn(a):
        m, p = a.left.ms, a.right.ms
        tagged = Multiset.from_counts(
            [(Tag(0, x), k) for x, k in m.entries] + [(Tag(1, y), k) for y, k in p.entries]
        )
        yield MSet(tagged)

    return pm_memo(PointMap(Tensor(Bang(E), Bang(F)), Bang(With(E, F)), fn, "seely2"))


@lru_cache(maxsize=None)
def seely2_inv(E: Space, F: Space) -> PointMap:
    from .spaces import With

    def fn(m):
        left, right = [], []
        for x, k in m.ms.entries:
            (left if x.index == 0 else right).append((x.inner, k))
        yield Pair(MSet(Multiset.from_counts(left)), MSet(Multiset.from_counts(right)))

    return pm_memo(PointMap(Bang(With(E, F)), Tensor(Bang(E), Bang(F)), fn, "seely2_inv"))


def m0(kind: str, parts_limit: int = 6) -> PointMap:
    """Nullary monoidality 1 → !1, * ↦ k·[*] for every k ≥ 0."""

    def fn(a):
        from .maps import current_margin

        margin = current_margin()
        cap = parts_limit if margin is None else max(parts_limit, margin)
        for k in range(0, cap + 1):
            yield MSet(Multiset.from_counts([(STAR, k)] if k else []))

    return PointMap(_one(kind), Bang(_one(kind)), fn, "m0")


@lru_cache(maxsize=None)
def m2(E: Space, F: Space) -> PointMap:
    """Monoidality !E ⊗ !F → !(E ⊗ F): all pairings of equal-size multisets."""

    def fn(a):
        m, p = a.left.ms, a.right.ms
        if len(m) != len(p):
            return
        xs = list(m)
        seen = set()
        for perm in _distinct_pairings(xs, list(p)):
            out = mset(Pair(x, y) for x, y in perm)
            if out not in seen:
                seen.add(out)
                yield out

    return pm_memo(PointMap(Tensor(Bang(E), Bang(F)), Bang(Tensor(E, F)), fn, "m2"))


def _distinct_pairings(xs, ys):
    if not xs:
        yield ()
        return
    x, rest = xs[0], xs[1:]
    used = set()
    for i, y in enumerate(ys):
        if y in used:
            continue
        used.add(y)
        for tail in _distinct_pairings(rest, ys[:i] + ys[i + 1 :]):
            yield ((x, y),) + tail


_STRUCTURAL = {
    "der": der,
    "dig": dig,
    "weak": weak,
    "contr": contr,
}


def structural(name: str, *args) -> PointMap:
    """Dispatch on a structural-map name.

    der/dig/weak/contr take a space; seely0/seely0_inv/m0 take a kind;
    seely2/seely2_inv/m2 take two spaces.
    """
    table = {
        "der": der,
        "dig": dig,
        "weak": weak,
        "contr": contr,
        "seely0": seely0,
        "seely0_inv": seely0_inv,
        "seely2": seely2,
        "seely2_inv": seely2_inv,
        "m0": m0,
        "m2": m2,
    }
    if name not in table:
        raise KeyError(f"unknown structural map {name!r}")
    return table[name](*args)


def bang_morphism(E: Space, F: Space, s: Rel, budget) -> Rel:
    """!s as an extensional relation, materialized within the budget."""
    return pm_bang(pm_from_rel(E, F, s, "s")).materialize(budget)


def kleisli_compose(t: Rel, s: Rel, E: Space) -> Rel:
    """Kleisli composition t ∘ s for s: !E → F, t: !F → G.

    (Σ mi, c) whenever ([b1..bn], c) ∈ t and (mi, bi) ∈ s with the sum
    a valid atom of !E.
    """
    by_tgt: dict = {}
    for m, b in s.pairs:
        by_tgt.setdefault(b, []).append(m.ms)
    pairs = set()
    for p, c in t.pairs:
        items = list(p.ms)
        def rec(i, acc):
            if i == len(items):
                total = Multiset.of([])
                for m in acc:
                    total = total + m
                cand = MSet(total)
                if contains(Bang(E), cand):
                    pairs.add((cand, c))
                return
            for m in by_tgt.get(items[i], ()):
                rec(i + 1, acc + [m])
        rec(0, [])
    return Rel(frozenset(pairs), "kleisli", "")


def promotion(s: Rel, E: Space, F: Space, budget) -> Rel:
    """!s ∘ dig for s: !E → F, materialized within the budget."""
    sm = pm_from_rel(Bang(E), F, s, "s")
    prom = pm_compose(pm_bang(sm), dig(E), "prom")
    return prom.materialize(budget, margin=2 * budget.max_degree + 2)
