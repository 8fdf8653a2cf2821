"""Atoms, finite multisets, relations and enumeration budgets.

Everything downstream (spaces, the exponential, summability, the
differential) is phrased in terms of three value types:

* ``Atom`` -- a structural tree over base symbols: tagged atoms ``i·a``
  (summability layers), pairs ``(a,b)`` (tensor / linear implication)
  and finite multisets ``[a,...,b]`` (the exponential).
* ``Multiset`` -- a canonical (sorted) finite multiset of atoms.
* ``Rel`` -- a finite set of atom pairs, the universal notion of
  morphism; composition is relational and the zero morphism is ``∅``.

Webs of ``!E`` are infinite, so enumeration is controlled by a
``Budget``.  The degree of an atom counts multiset entries through
nesting: a multiset contributes its number of entries plus the degrees
of its elements.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator


class Atom:
    """Base class for web elements. Structural equality is identity."""

    __slots__ = ()


def _cached_hash(cls):
    """Memoize the generated dataclass hash on the instance.

    Atoms nest deeply and get hashed constantly (multiset
    canonicalization, relation sets); recomputing the structural hash
    each time dominates profiles.
    """
    base = cls.__hash__

    def __hash__(self):
        h = self.__dict__.get("_h")
        if h is None:
            h = base(self)
            object.__setattr__(self, "_h", h)
        return h

    cls.__hash__ = __hash__
    return cls


@_cached_hash
@dataclass(frozen=True)
class Base(Atom):
    sym: str

    def __repr__(self):
        return self.sym


@_cached_hash
@dataclass(frozen=True)
class Tag(Atom):
    index: int
    inner: Atom

    def __post_init__(self):
        if self.index not in (0, 1):
            raise ValueError("tag index must be 0 or 1")

    def __repr__(self):
        return f"{self.index}·{self.inner!r}"


@_cached_hash
@dataclass(frozen=True)
class Pair(Atom):
    left: Atom
    right: Atom

    def __repr__(self):
        return f"({self.left!r},{self.right!r})"


@lru_cache(maxsize=None)
def atom_key(a: Atom):
    """Total order on atoms (used to canonicalize multisets)."""
    if isinstance(a, Base):
        return (0, a.sym)
    if isinstance(a, Tag):
        return (1, a.index, atom_key(a.inner))
    if isinstance(a, Pair):
        return (2, atom_key(a.left), atom_key(a.right))
    if isinstance(a, MSet):
        return (3, tuple((atom_key(x), n) for x, n in a.ms.entries))
    raise TypeError(f"not an atom: {a!r}")


@_cached_hash
@dataclass(frozen=True)
class Multiset:
    """Canonical finite multiset of atoms: sorted (atom, count) entries."""

    entries: tuple = ()

    @staticmethod
    def of(atoms: Iterable[Atom]) -> "Multiset":
        counts: dict[Atom, int] = {}
        for a in atoms:
            counts[a] = counts.get(a, 0) + 1
        return Multiset.from_counts(counts)

    @staticmethod
    def from_counts(counts) -> "Multiset":
        """Build from a dict or an iterable of (atom, count) pairs."""
        if not isinstance(counts, dict):
            acc: dict[Atom, int] = {}
            for a, n in counts:
                acc[a] = acc.get(a, 0) + n
            counts = acc
        entries = tuple(
            (a, n) for a, n in sorted(counts.items(), key=lambda e: atom_key(e[0])) if n > 0
        )
        for _, n in entries:
            if n < 0:
                raise ValueError("negative multiplicity")
        return Multiset(entries)

    def count(self, a: Atom) -> int:
        for x, n in self.entries:
            if x == a:
                return n
        return 0

    @property
    def support(self) -> tuple:
        s = self.__dict__.get("_support")
        if s is None:
            s = tuple(a for a, _ in self.entries)
            object.__setattr__(self, "_support", s)
        return s

    def __len__(self) -> int:
        n = self.__dict__.get("_len")
        if n is None:
            n = sum(k for _, k in self.entries)
            object.__setattr__(self, "_len", n)
        return n

    def __iter__(self) -> Iterator[Atom]:
        for a, n in self.entries:
            for _ in range(n):
                yield a

    def __add__(self, other: "Multiset") -> "Multiset":
        counts = dict(self.entries)
        for a, n in other.entries:
            counts[a] = counts.get(a, 0) + n
        return Multiset.from_counts(counts)

    def __sub__(self, other: "Multiset") -> "Multiset":
        counts = dict(self.entries)
        for a, n in other.entries:
            m = counts.get(a, 0) - n
            if m < 0:
                raise ValueError("multiset subtraction went negative")
            counts[a] = m
        return Multiset.from_counts(counts)

    def __le__(self, other: "Multiset") -> bool:
        return all(other.count(a) >= n for a, n in self.entries)

    def __repr__(self):
        return "[" + ",".join(repr(a) for a in self) + "]"


EMPTY = Multiset()


@_cached_hash
@dataclass(frozen=True)
class MSet(Atom):
    ms: Multiset

    def __repr__(self):
        return repr(self.ms)


STAR = Base("*")


def mset(atoms: Iterable[Atom]) -> MSet:
    """Convenience: build a multiset atom from an iterable of atoms."""
    return MSet(Multiset.of(atoms))


def mset_sum(m0: Multiset, m1: Multiset) -> Multiset:
    """Pointwise count addition."""
    return m0 + m1


@lru_cache(maxsize=None)
def degree(a: Atom) -> int:
    """Multiset degree counted through nesting.

    A multiset contributes its entry count plus the degrees of its
    elements; tags are transparent; pairs sum their components.
    """
    if isinstance(a, Base):
        return 0
    if isinstance(a, Tag):
        return degree(a.inner)
    if isinstance(a, Pair):
        return degree(a.left) + degree(a.right)
    if isinstance(a, MSet):
        return len(a.ms) + sum(n * degree(x) for x, n in a.ms.entries)
    raise TypeError(f"not an atom: {a!r}")


@lru_cache(maxsize=None)
def within_budget(a: Atom, max_degree: int) -> bool:
    """True iff every nested multiset of ``a`` has degree ≤ max_degree.

    Pair components are checked separately (their degrees do not
    accumulate across the pair).
    """
    if isinstance(a, Base):
        return True
    if isinstance(a, Tag):
        return within_budget(a.inner, max_degree)
    if isinstance(a, Pair):
        return within_budget(a.left, max_degree) and within_budget(a.right, max_degree)
    if isinstance(a, MSet):
        # degree of an outer multiset dominates the degree of every
        # multiset nested inside one of its elements, except those
        # hidden inside pairs -- recurse to be safe.
        if degree(a) > max_degree:
            return False
        return all(within_budget(x, max_degree) for x, _ in a.ms.entries)
    raise TypeError(f"not an atom: {a!r}")


class BudgetExceeded(Exception):
    """Raised when an enumeration hits the max_atoms cap."""


@dataclass(frozen=True)
class Budget:
    max_degree: int = 3
    max_atoms: int = 20000

    def __post_init__(self):
        if self.max_degree < 0 or self.max_atoms < 0:
            raise ValueError("budget bounds must be nonnegative")


@dataclass(frozen=True)
class Rel:
    """A morphism: a finite set of atom pairs, with diagnostic labels."""

    pairs: frozenset = frozenset()
    src_label: str = ""
    tgt_label: str = ""

    @staticmethod
    def of(pairs: Iterable, src_label: str = "", tgt_label: str = "") -> "Rel":
        return Rel(frozenset(tuple(p) for p in pairs), src_label, tgt_label)

    @staticmethod
    def identity(atoms: Iterable[Atom], label: str = "") -> "Rel":
        return Rel(frozenset((a, a) for a in atoms), label, label)

    def image(self, a: Atom) -> frozenset:
        return frozenset(b for (x, b) in self.pairs if x == a)

    def preimage(self, b: Atom) -> frozenset:
        return frozenset(a for (a, y) in self.pairs if y == b)

    def domain(self) -> frozenset:
        return frozenset(a for a, _ in self.pairs)

    def codomain(self) -> frozenset:
        return frozenset(b for _, b in self.pairs)

    def __contains__(self, pair) -> bool:
        return tuple(pair) in self.pairs

    def __iter__(self):
        return iter(sorted(self.pairs, key=lambda p: (atom_key(p[0]), atom_key(p[1]))))

    def __len__(self):
        return len(self.pairs)

    def __or__(self, other: "Rel") -> "Rel":
        return Rel(self.pairs | other.pairs, self.src_label, self.tgt_label)

    def __repr__(self):
        body = ", ".join(f"{a!r} ↦ {b!r}" for a, b in self)
        return "{" + body + "}"


ZERO_REL = Rel()


def rel_compose(s: Rel, t: Rel) -> Rel:
    """Relational composition: first ``s`` then ``t``."""
    by_src: dict[Atom, list] = {}
    for b, c in t.pairs:
        by_src.setdefault(b, []).append(c)
    out = set()
    for a, b in s.pairs:
        for c in by_src.get(b, ()):
            out.add((a, c))
    return Rel(frozenset(out), s.src_label, t.tgt_label)


def rel_equal_on(f: Rel, g: Rel, domain: Iterable[Atom]):
    """Compare images over a domain.

    Returns (True, None) if for every atom ``a`` of ``domain`` the image
    sets agree, else (False, (a, f_image, g_image)) for the first
    differing atom (in canonical atom order).
    """
    for a in sorted(domain, key=atom_key):
        fa, ga = f.image(a), g.image(a)
        if fa != ga:
            return False, (a, fa, ga)
    return True, None


# ---------------------------------------------------------------------------
# Textual serialization.
#
# Atom grammar:   atom ::= '*' | ident | '0·' atom | '1·' atom
#                        | '(' atom ',' atom ')' | '[' [atom (',' atom)*] ']'
# ASCII fallbacks '0.' / '1.' are accepted on input.
# Relations: one 'a ↦ b' (or 'a -> b') pair per line; '#' starts a comment.
# ---------------------------------------------------------------------------


def atom_to_text(a: Atom) -> str:
    if isinstance(a, Base):
        return a.sym
    if isinstance(a, Tag):
        return f"{a.index}·{atom_to_text(a.inner)}"
    if isinstance(a, Pair):
        return f"({atom_to_text(a.left)},{atom_to_text(a.right)})"
    if isinstance(a, MSet):
        return "[" + ",".join(atom_to_text(x) for x in a.ms) + "]"
    raise TypeError(f"not an atom: {a!r}")


class AtomParseError(ValueError):
    pass


class _AtomParser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, msg: str):
        raise AtomParseError(f"{msg} at position {self.pos} in {self.text!r}")

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def peek(self):
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            self.error(f"expected {ch!r}")
        self.pos += 1

    def atom(self) -> Atom:
        c = self.peek()
        if c == "(":
            self.pos += 1
            left = self.atom()
            self.expect(",")
            right = self.atom()
            self.expect(")")
            return Pair(left, right)
        if c == "[":
            self.pos += 1
            items = []
            if self.peek() != "]":
                items.append(self.atom())
                while self.peek() == ",":
                    self.pos += 1
                    items.append(self.atom())
            self.expect("]")
            return mset(items)
        if c == "*":
            self.pos += 1
            return STAR
        if not (c.isalnum() or c == "_"):
            self.error("expected an atom")
        start = self.pos
        while self.pos < len(self.text) and (
            self.text[self.pos].isalnum() or self.text[self.pos] == "_"
        ):
            self.pos += 1
        word = self.text[start : self.pos]
        if word in ("0", "1") and self.pos < len(self.text) and self.text[self.pos] in "·.":
            index = int(word)
            self.pos += 1
            return Tag(index, self.atom())
        return Base(word)


def atom_from_text(text: str) -> Atom:
    p = _AtomParser(text)
    a = p.atom()
    p.skip_ws()
    if p.pos != len(text):
        p.error("trailing input")
    return a


def rel_to_text(r: Rel) -> str:
    lines = sorted(
        f"{atom_to_text(a)} ↦ {atom_to_text(b)}" for a, b in r
    )
    return "\n".join(lines)


def rel_from_text(text: str) -> Rel:
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "↦" in line:
            lhs, rhs = line.split("↦", 1)
        elif "->" in line:
            lhs, rhs = line.split("->", 1)
        else:
            raise AtomParseError(f"line {lineno}: expected 'a ↦ b'")
        pairs.append((atom_from_text(lhs.strip()), atom_from_text(rhs.strip())))
    return Rel.of(pairs)
