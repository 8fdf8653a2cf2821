"""Coherence spaces (COH), non-uniform coherence spaces (NUCS), and REL.

A space is a web together with a coherence structure.  Everything is
phrased non-uniformly: a verdict for a pair of atoms is one of strictly
coherent / neutral / strictly incoherent.  Classical coherence spaces
are the special case where neutrality is equality, which makes one
structural verdict function serve both kinds.  REL is the same web
calculus with the verdict trivially "strictly coherent" everywhere,
so every finite set is a clique and every relation is a morphism.

Derived relations: coherent = strictly coherent or neutral,
incoherent = strictly incoherent or neutral.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from functools import lru_cache

from .web_core import (
    Atom,
    Base,
    Budget,
    BudgetExceeded,
    MSet,
    Multiset,
    Pair,
    Rel,
    STAR,
    Tag,
    atom_from_text,
    atom_key,
    degree,
)

COH, NUCS, REL = "coh", "nucs", "rel"
KINDS = (COH, NUCS, REL)


class Verdict(enum.Enum):
    SCOH = "strictly-coherent"
    NEU = "neutral"
    SINCOH = "strictly-incoherent"

    @property
    def coherent(self) -> bool:
        return self is not Verdict.SINCOH

    @property
    def incoherent(self) -> bool:
        return self is not Verdict.SCOH

    @property
    def neutral(self) -> bool:
        return self is Verdict.NEU


class MalformedAtom(ValueError):
    """An atom does not have the shape of the space's web."""


class Space:
    """Base class; concrete spaces are the dataclasses below."""

    __slots__ = ()

    @property
    def kind(self) -> str:
        raise NotImplementedError


def _norm_pairs(pairs) -> frozenset:
    """Symmetric closure of a set of atom pairs."""
    out = set()
    for a, b in pairs:
        out.add((a, b))
        out.add((b, a))
    return frozenset(out)


@dataclass(frozen=True)
class BaseSpace(Space):
    """Extensionally given space: finite web + strict relations.

    For kind "coh" the stored scoh is coherence minus the diagonal (the
    diagonal is neutral).  For kind "nucs" scoh/sincoh are the strict
    relations and must be disjoint; the rest is neutral.  For kind
    "rel" the relations are ignored.
    """

    base_kind: str
    atoms: tuple
    scoh: frozenset = frozenset()
    sincoh: frozenset = frozenset()
    name: str = ""

    def __post_init__(self):
        if self.base_kind not in KINDS:
            raise ValueError(f"unknown kind {self.base_kind!r}")
        object.__setattr__(self, "scoh", _norm_pairs(self.scoh))
        object.__setattr__(self, "sincoh", _norm_pairs(self.sincoh))
        if self.scoh & self.sincoh:
            raise ValueError("strict coherence and strict incoherence overlap")

    @property
    def kind(self) -> str:
        return self.base_kind


@dataclass(frozen=True)
class Tensor(Space):
    left: Space
    right: Space

    @property
    def kind(self):
        return self.left.kind


@dataclass(frozen=True)
class With(Space):
    left: Space
    right: Space

    @property
    def kind(self):
        return self.left.kind


@dataclass(frozen=True)
class PlusSp(Space):
    left: Space
    right: Space

    @property
    def kind(self):
        return self.left.kind


@dataclass(frozen=True)
class Limpl(Space):
    left: Space
    right: Space

    @property
    def kind(self):
        return self.left.kind


@dataclass(frozen=True)
class DualSp(Space):
    inner: Space

    @property
    def kind(self):
        return self.inner.kind


@dataclass(frozen=True)
class SFun(Space):
    inner: Space

    @property
    def kind(self):
        return self.inner.kind


@dataclass(frozen=True)
class Bang(Space):
    inner: Space

    @property
    def kind(self):
        return self.inner.kind


def one(kind: str) -> BaseSpace:
    """The tensor unit 1: a single neutral point."""
    return BaseSpace(kind, (STAR,), name="1")


def top(kind: str) -> BaseSpace:
    """The terminal object ⊤: empty web."""
    return BaseSpace(kind, (), name="⊤")


def ispace(kind: str) -> With:
    """I = 1 & 1, the dual-numbers object of canonical summability."""
    return With(one(kind), one(kind))


def bool_space(kind: str) -> PlusSp:
    """Bool = 1 ⊕ 1: two strictly incoherent points."""
    return PlusSp(one(kind), one(kind))


def dual(E: Space) -> Space:
    """Linear negation: web unchanged, strict relations swapped."""
    if isinstance(E, DualSp):
        return E.inner
    return DualSp(E)


# ---------------------------------------------------------------------------
# Web membership and coherence verdicts
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def contains(E: Space, a: Atom) -> bool:
    """Web membership (shape + COH multiclique restriction for !)."""
    if isinstance(E, BaseSpace):
        return a in E.atoms
    if isinstance(E, DualSp):
        return contains(E.inner, a)
    if isinstance(E, (Tensor, Limpl)):
        return isinstance(a, Pair) and contains(E.left, a.left) and contains(E.right, a.right)
    if isinstance(E, (With, PlusSp)):
        if not isinstance(a, Tag):
            return False
        return contains(E.left if a.index == 0 else E.right, a.inner)
    if isinstance(E, SFun):
        return isinstance(a, Tag) and contains(E.inner, a.inner)
    if isinstance(E, Bang):
        if not isinstance(a, MSet):
            return False
        if not all(contains(E.inner, x) for x in a.ms.support):
            return False
        if E.kind == COH:
            # uniform exponential: the support must be a clique
            return is_clique(E.inner, a.ms.support)
        return True
    raise TypeError(f"not a space: {E!r}")


def _check_atom(E: Space, a: Atom):
    if not contains(E, a):
        raise MalformedAtom(f"{a!r} is not in the web of {E!r}")


def coherent(E: Space, a: Atom, b: Atom, check: bool = False) -> Verdict:
    """Coherence verdict of two web atoms, computed structurally."""
    if check:
        _check_atom(E, a)
        _check_atom(E, b)
    if E.kind == REL:
        return Verdict.SCOH
    return _verdict(E, a, b)


@lru_cache(maxsize=None)
def _verdict(E: Space, a: Atom, b: Atom) -> Verdict:
    if isinstance(E, BaseSpace):
        if E.base_kind == COH:
            if a == b:
                return Verdict.NEU
            return Verdict.SCOH if (a, b) in E.scoh else Verdict.SINCOH
        if (a, b) in E.scoh:
            return Verdict.SCOH
        if (a, b) in E.sincoh:
            return Verdict.SINCOH
        return Verdict.NEU
    if isinstance(E, DualSp):
        v = _verdict(E.inner, a, b)
        if v is Verdict.SCOH:
            return Verdict.SINCOH
        if v is Verdict.SINCOH:
            return Verdict.SCOH
        return Verdict.NEU
    if isinstance(E, Tensor):
        vl = _verdict(E.left, a.left, b.left)
        vr = _verdict(E.right, a.right, b.right)
        if vl is Verdict.NEU and vr is Verdict.NEU:
            return Verdict.NEU
        if vl.coherent and vr.coherent:
            return Verdict.SCOH
        return Verdict.SINCOH
    if isinstance(E, With):
        if a.index != b.index:
            return Verdict.SCOH
        return _verdict(E.left if a.index == 0 else E.right, a.inner, b.inner)
    if isinstance(E, PlusSp):
        if a.index != b.index:
            return Verdict.SINCOH
        return _verdict(E.left if a.index == 0 else E.right, a.inner, b.inner)
    if isinstance(E, Limpl):
        va = _verdict(E.left, a.left, b.left)
        vb = _verdict(E.right, a.right, b.right)
        if va is Verdict.NEU and vb is Verdict.NEU:
            return Verdict.NEU
        # coherent iff coh(a) implies (coh(b) and (neu(b) implies neu(a)))
        coh = (not va.coherent) or (vb.coherent and (not vb.neutral or va.neutral))
        return Verdict.SCOH if coh else Verdict.SINCOH
    if isinstance(E, SFun):
        v = _verdict(E.inner, a.inner, b.inner)
        if v is Verdict.NEU:
            return Verdict.NEU if a.index == b.index else Verdict.SINCOH
        return v
    if isinstance(E, Bang):
        m0, m1 = a.ms, b.ms
        for x in m0.support:
            for y in m1.support:
                if not _verdict(E.inner, x, y).coherent:
                    return Verdict.SINCOH
        if len(m0) == len(m1) and _neutral_matching(E.inner, list(m0), list(m1)):
            return Verdict.NEU
        return Verdict.SCOH
    raise TypeError(f"not a space: {E!r}")


def _neutral_matching(E: Space, xs: list, ys: list) -> bool:
    """Is there a bijection pairing xs with ys with all pairs neutral?"""
    if not xs:
        return True
    x, rest = xs[0], xs[1:]
    seen = set()
    for i, y in enumerate(ys):
        if y in seen:
            continue
        seen.add(y)
        if _verdict(E, x, y).neutral and _neutral_matching(E, rest, ys[:i] + ys[i + 1 :]):
            return True
    return False


def is_clique(E: Space, xs) -> bool:
    """Pairwise coherence (diagonal included)."""
    xs = list(xs)
    if E.kind == REL:
        return all(contains(E, x) for x in xs)
    for i, x in enumerate(xs):
        for y in xs[i:]:
            if not coherent(E, x, y).coherent:
                return False
    return True


def is_morphism(E: Space, F: Space, s: Rel) -> bool:
    """s is a morphism E → F iff it is a clique of E ⊸ F."""
    atoms = [Pair(a, b) for a, b in s.pairs]
    hom = Limpl(E, F)
    if not all(contains(hom, p) for p in atoms):
        return False
    return is_clique(hom, atoms)


def matapp(s: Rel, x) -> frozenset:
    """Apply a morphism to a clique: the image set."""
    xs = set(x)
    return frozenset(b for (a, b) in s.pairs if a in xs)


# ---------------------------------------------------------------------------
# Web enumeration
# ---------------------------------------------------------------------------


def enumerate_web(E: Space, budget: Budget) -> list:
    """All web atoms whose nested multisets fit the degree budget.

    Deterministic (canonical atom order); raises BudgetExceeded if more
    than ``budget.max_atoms`` atoms would be produced.
    """
    return list(_enumerate_cached(E, budget))


@lru_cache(maxsize=4096)
def _enumerate_cached(E: Space, budget: Budget) -> tuple:
    out = []
    for a in _enum(E, budget.max_degree):
        out.append(a)
        if len(out) > budget.max_atoms:
            raise BudgetExceeded(
                f"web of {E!r} exceeds max_atoms={budget.max_atoms} at degree {budget.max_degree}"
            )
    out.sort(key=atom_key)
    return tuple(out)


def _enum(E: Space, max_degree: int):
    if isinstance(E, BaseSpace):
        yield from E.atoms
        return
    if isinstance(E, DualSp):
        yield from _enum(E.inner, max_degree)
        return
    if isinstance(E, (Tensor, Limpl)):
        rights = list(_enum(E.right, max_degree))
        for a in _enum(E.left, max_degree):
            for b in rights:
                yield Pair(a, b)
        return
    if isinstance(E, (With, PlusSp)):
        for a in _enum(E.left, max_degree):
            yield Tag(0, a)
        for b in _enum(E.right, max_degree):
            yield Tag(1, b)
        return
    if isinstance(E, SFun):
        for a in _enum(E.inner, max_degree):
            yield Tag(0, a)
            yield Tag(1, a)
        return
    if isinstance(E, Bang):
        inner = sorted(_enum(E.inner, max_degree), key=atom_key)
        uniform = E.kind == COH
        yield from _enum_msets(E.inner, inner, max_degree, uniform)
        return
    raise TypeError(f"not a space: {E!r}")


def _enum_msets(inner_space: Space, inner: list, max_degree: int, uniform: bool):
    """Multisets over ``inner`` with nested degree ≤ max_degree.

    Each occurrence of an element ``a`` costs ``1 + degree(a)``.  In the
    uniform (COH) case the support must stay a clique.
    """

    def rec(i: int, left: int, chosen: list):
        yield MSet(Multiset.of(chosen))
        for j in range(i, len(inner)):
            a = inner[j]
            cost = 1 + degree(a)
            if cost > left:
                continue
            if uniform:
                if not coherent(inner_space, a, a).coherent:
                    continue
                if any(not coherent(inner_space, a, c).coherent for c in chosen):
                    continue
            chosen.append(a)
            yield from rec(j, left - cost, chosen)
            chosen.pop()

    yield from rec(0, max_degree, [])


# ---------------------------------------------------------------------------
# Text format
#
#   space <name> kind=coh|nucs|rel atoms{a b c} scoh{(a,b) ...} [sincoh{...}]
#
# and constructed-space expressions over named spaces:
#   !E   S E   E (x) F   E & F   E (+) F   E -o F   ~E   ( ... )
# ---------------------------------------------------------------------------


class SpaceParseError(ValueError):
    pass


def parse_space(text: str) -> BaseSpace:
    """Parse the extensional `space ...` format (single declaration)."""
    toks = text.split(None, 2)
    if len(toks) < 3 or toks[0] != "space":
        raise SpaceParseError("expected: space <name> kind=... atoms{...} ...")
    name = toks[1]
    rest = toks[2]
    kind = None
    blocks = {}
    i = 0
    while i < len(rest):
        if rest[i].isspace():
            i += 1
            continue
        j = i
        while j < len(rest) and not rest[j].isspace() and rest[j] != "{":
            j += 1
        word = rest[i:j]
        if word.startswith("kind="):
            kind = word[len("kind=") :]
            i = j
            continue
        if j >= len(rest) or rest[j] != "{":
            raise SpaceParseError(f"expected '{{' after {word!r}")
        k = rest.index("}", j)
        blocks[word] = rest[j + 1 : k]
        i = k + 1
    if kind not in KINDS:
        raise SpaceParseError(f"bad or missing kind: {kind!r}")
    if "atoms" not in blocks:
        raise SpaceParseError("missing atoms{...} block")
    atoms = tuple(atom_from_text(w) for w in blocks["atoms"].split())
    scoh = _parse_pair_block(blocks.get("scoh", ""))
    sincoh = _parse_pair_block(blocks.get("sincoh", ""))
    if kind == COH:
        # for COH the scoh block lists coherent pairs; the diagonal is
        # implicit (neutral) and everything else is incoherent.
        scoh = frozenset((a, b) for a, b in scoh if a != b)
        sincoh = frozenset()
    return BaseSpace(kind, atoms, scoh, sincoh, name=name)


def _parse_pair_block(block: str) -> frozenset:
    pairs = set()
    for chunk in block.split():
        a = atom_from_text(chunk)
        if not isinstance(a, Pair):
            raise SpaceParseError(f"expected a pair, got {chunk!r}")
        pairs.add((a.left, a.right))
    return frozenset(pairs)


def parse_space_expr(text: str, env: dict) -> Space:
    """Parse a constructed-space expression over named base spaces."""
    toks = _space_tokens(text)
    expr, rest = _space_expr(toks, env)
    if rest:
        raise SpaceParseError(f"trailing tokens: {rest}")
    return expr


def _space_tokens(text: str) -> list:
    out = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
        elif text.startswith("(x)", i):
            out.append("(x)")
            i += 3
        elif text.startswith("(+)", i):
            out.append("(+)")
            i += 3
        elif text.startswith("-o", i):
            out.append("-o")
            i += 2
        elif c in "()!~&":
            out.append(c)
            i += 1
        else:
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] in "_*"):
                j += 1
            if j == i:
                raise SpaceParseError(f"bad character {c!r} in space expression")
            out.append(text[i:j])
            i = j
    return out


def _space_atom(toks: list, env: dict):
    if not toks:
        raise SpaceParseError("unexpected end of space expression")
    t = toks[0]
    if t == "(":
        expr, rest = _space_expr(toks[1:], env)
        if not rest or rest[0] != ")":
            raise SpaceParseError("missing ')'")
        return expr, rest[1:]
    if t == "!":
        inner, rest = _space_atom(toks[1:], env)
        return Bang(inner), rest
    if t == "~":
        inner, rest = _space_atom(toks[1:], env)
        return dual(inner), rest
    if t == "S":
        inner, rest = _space_atom(toks[1:], env)
        return SFun(inner), rest
    if t in env:
        return env[t], toks[1:]
    raise SpaceParseError(f"unknown space {t!r}")


def _space_expr(toks: list, env: dict):
    left, rest = _space_atom(toks, env)
    while rest and rest[0] in ("(x)", "&", "(+)", "-o"):
        op = rest[0]
        right, rest = _space_atom(rest[1:], env)
        if op == "(x)":
            left = Tensor(left, right)
        elif op == "&":
            left = With(left, right)
        elif op == "(+)":
            left = PlusSp(left, right)
        else:
            left = Limpl(left, right)
    return left, rest
