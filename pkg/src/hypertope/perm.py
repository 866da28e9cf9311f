"""Permutations on {0..n-1} and exhaustively materialized permutation groups.

Products are read left to right: ``p * q`` applies ``p`` first, then ``q``.
Groups act on points from the right, so ``k ** (p * q) == (k ** p) ** q``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import CapExceeded, DegreeMismatch, GeneratorNotInParent, ParentMismatch

DEFAULT_CAP = 100_000


class Permutation:
    """A bijection of {0..degree-1}, stored as its image list.

    Ordering is lexicographic on the image tuple; this is the canonical order
    used everywhere for sorting, coset representatives and witnesses.
    """

    __slots__ = ("images", "_hash")

    def __init__(self, images: Iterable[int]):
        images = tuple(int(k) for k in images)
        n = len(images)
        if n == 0:
            raise DegreeMismatch("degree 0 permutations are not allowed")
        if sorted(images) != list(range(n)):
            raise ValueError(f"not a bijection of 0..{n - 1}: {list(images)}")
        self.images = images
        self._hash = hash(images)

    @classmethod
    def _raw(cls, images: tuple) -> "Permutation":
        # trusted constructor for internal products
        p = object.__new__(cls)
        p.images = images
        p._hash = hash(images)
        return p

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        if degree < 1:
            raise DegreeMismatch("degree must be positive")
        return cls._raw(tuple(range(degree)))

    @classmethod
    def from_cycles(cls, text: str, degree: int) -> "Permutation":
        return parse_permutation(text, degree)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def __invert__(self) -> "Permutation":
        return inverse(self)

    def __pow__(self, k: int) -> "Permutation":
        if k < 0:
            return inverse(self) ** (-k)
        result = Permutation.identity(self.degree)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __call__(self, point: int) -> int:
        return self.images[point]

    def __eq__(self, other):
        if not isinstance(other, Permutation):
            return NotImplemented
        return self.images == other.images

    def __lt__(self, other: "Permutation") -> bool:
        return self.images < other.images

    def __le__(self, other: "Permutation") -> bool:
        return self.images <= other.images

    def __hash__(self):
        return self._hash

    def is_identity(self) -> bool:
        return all(k == v for k, v in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        """Disjoint cycles of length > 1, each starting at its least point."""
        seen = [False] * self.degree
        out = []
        for start in range(self.degree):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            k = self.images[start]
            while k != start:
                cyc.append(k)
                seen[k] = True
                k = self.images[k]
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def cycle_string(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)

    def __repr__(self):
        return f"Permutation({self.cycle_string()!r}, degree={self.degree})"

    def __str__(self):
        return self.cycle_string()


def _check_degree(p: Permutation, q: Permutation):
    if p.degree != q.degree:
        raise DegreeMismatch(f"degree {p.degree} != {q.degree}")


def compose(p: Permutation, q: Permutation) -> Permutation:
    """Apply ``p`` then ``q``."""
    _check_degree(p, q)
    qi = q.images
    return Permutation._raw(tuple(qi[k] for k in p.images))


def inverse(p: Permutation) -> Permutation:
    inv = [0] * p.degree
    for k, v in enumerate(p.images):
        inv[v] = k
    return Permutation._raw(tuple(inv))


def element_order(p: Permutation) -> int:
    order = 1
    q = p
    while not q.is_identity():
        q = q * p
        order += 1
    return order


# -- textual forms -----------------------------------------------------------

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_permutation(text, degree: int) -> Permutation:
    """Parse image notation (``[1,0,2]`` or a list) or cycle notation (``"(0 1)(2 3)"``).

    Cycle notation is whitespace-insensitive; points may be separated by
    spaces or commas. Cycles must be disjoint.
    """
    if degree < 1:
        raise DegreeMismatch("degree must be positive")
    if isinstance(text, (list, tuple)):
        images = list(text)
        if len(images) != degree:
            raise DegreeMismatch(f"image list has length {len(images)}, expected {degree}")
        return Permutation(images)
    s = str(text).strip()
    if s.startswith("["):
        if not s.endswith("]"):
            raise ValueError(f"malformed image list {text!r}")
        body = s[1:-1].strip()
        images = [int(tok) for tok in re.split(r"[\s,]+", body) if tok] if body else []
        if len(images) != degree:
            raise DegreeMismatch(f"image list has length {len(images)}, expected {degree}")
        return Permutation(images)
    compact = re.sub(r"\s+", " ", s)
    if _CYCLE_RE.sub("", compact).strip():
        raise ValueError(f"malformed cycle notation {text!r}")
    images = list(range(degree))
    used = set()
    for body in _CYCLE_RE.findall(compact):
        pts = [int(tok) for tok in re.split(r"[\s,]+", body.strip()) if tok]
        for k in pts:
            if not 0 <= k < degree:
                raise DegreeMismatch(f"point {k} out of range for degree {degree}")
            if k in used:
                raise ValueError(f"cycles are not disjoint in {text!r}")
            used.add(k)
        for a, b in zip(pts, pts[1:] + pts[:1]):
            images[a] = b
    return Permutation._raw(tuple(images))


def format_permutation(p: Permutation, notation: str = "cycle"):
    if notation == "cycle":
        return p.cycle_string()
    if notation == "image":
        return "[" + ",".join(map(str, p.images)) + "]"
    raise ValueError(f"unknown notation {notation!r}")


# -- groups ------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GroupRealization:
    """A finite permutation group with its full element set."""

    degree: int
    generators: tuple
    elements: tuple  # sorted canonically
    cap: int = DEFAULT_CAP
    _members: frozenset = field(default=frozenset(), repr=False)

    @property
    def identity(self) -> Permutation:
        return self.elements[0]

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def parent(self):
        return self

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, g):
        return g in self._members

    def __repr__(self):
        gens = ", ".join(str(g) for g in self.generators)
        return f"GroupRealization(order={self.order}, degree={self.degree}, gens=[{gens}])"


@dataclass(frozen=True, eq=False)
class SubgroupHandle:
    parent: GroupRealization
    generators: tuple
    elements: frozenset

    @property
    def degree(self) -> int:
        return self.parent.degree

    @property
    def order(self) -> int:
        return len(self.elements)

    def sorted_elements(self) -> list:
        return sorted(self.elements)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(sorted(self.elements))

    def __contains__(self, g):
        return g in self.elements

    def __eq__(self, other):
        if not isinstance(other, SubgroupHandle):
            return NotImplemented
        return self.parent is other.parent and self.elements == other.elements

    def __hash__(self):
        return hash(self.elements)

    def __repr__(self):
        gens = ", ".join(str(g) for g in self.generators)
        return f"SubgroupHandle(order={self.order}, gens=[{gens}])"


def _closure(identity: Permutation, gens: Sequence[Permutation], cap: int, start=None) -> set:
    """Breadth-first orbit of the identity on the Cayley graph."""
    elements = set(start) if start else {identity}
    frontier = list(elements)
    while frontier:
        nxt = []
        for x in frontier:
            xi = x.images
            for s in gens:
                si = s.images
                y = Permutation._raw(tuple(si[k] for k in xi))
                if y not in elements:
                    elements.add(y)
                    if len(elements) > cap:
                        raise CapExceeded(f"group closure exceeds cap {cap}")
                    nxt.append(y)
        frontier = nxt
    return elements


def close_under_generators(degree: int, gens: Iterable[Permutation], cap: int = DEFAULT_CAP) -> GroupRealization:
    if degree < 1:
        raise DegreeMismatch("degree must be positive")
    if cap < 1:
        raise ValueError("cap must be at least 1")
    gens = tuple(gens)
    for g in gens:
        if g.degree != degree:
            raise DegreeMismatch(f"generator {g} has degree {g.degree}, expected {degree}")
    elements = _closure(Permutation.identity(degree), gens, cap)
    return GroupRealization(degree, gens, tuple(sorted(elements)), cap, frozenset(elements))


def subgroup_from(parent: GroupRealization, gens: Iterable[Permutation]) -> SubgroupHandle:
    gens = tuple(gens)
    for g in gens:
        if g.degree != parent.degree:
            raise DegreeMismatch(f"generator {g} has degree {g.degree}, expected {parent.degree}")
        if g not in parent:
            raise GeneratorNotInParent(f"{g} is not an element of the parent group")
    elements = _closure(parent.identity, gens, parent.cap)
    return SubgroupHandle(parent, gens, frozenset(elements))


def whole_group(parent: GroupRealization) -> SubgroupHandle:
    return SubgroupHandle(parent, tuple(parent.generators), parent._members)


def trivial_subgroup(parent: GroupRealization) -> SubgroupHandle:
    return SubgroupHandle(parent, (), frozenset([parent.identity]))


def _same_parent(a, b):
    pa = a.parent if isinstance(a, SubgroupHandle) else a
    pb = b.parent if isinstance(b, SubgroupHandle) else b
    if pa is not pb:
        raise ParentMismatch("subgroups belong to different parent groups")
    return pa


def intersect_subgroups(a: SubgroupHandle, b: SubgroupHandle) -> SubgroupHandle:
    parent = _same_parent(a, b)
    small, big = (a, b) if len(a) <= len(b) else (b, a)
    common = frozenset(g for g in small.elements if g in big.elements)
    return SubgroupHandle(parent, _generating_subset(parent, common), common)


def _generating_subset(parent: GroupRealization, elements) -> tuple:
    """A small generating set for a subgroup given by its elements."""
    gens = []
    current = {parent.identity}
    for g in sorted(elements):
        if g not in current:
            gens.append(g)
            current = _closure(parent.identity, gens, parent.cap, start=current)
    return tuple(gens)


def join_subgroups(parent: GroupRealization, subgroups: Iterable[SubgroupHandle]) -> SubgroupHandle:
    """The subgroup generated by the union of several subgroups."""
    gens = []
    current = {parent.identity}
    for sub in subgroups:
        _same_parent(parent, sub)
        for g in sub.generators or sorted(sub.elements):
            if g not in current:
                gens.append(g)
                current = _closure(parent.identity, gens, parent.cap, start=current)
        # generator lists of intersections are minimal, but guard against
        # handles built from raw element sets
        if not sub.elements <= current:
            for g in sorted(sub.elements - current):
                if g not in current:
                    gens.append(g)
                    current = _closure(parent.identity, gens, parent.cap, start=current)
    return SubgroupHandle(parent, tuple(gens), frozenset(current))


def product_set(a: SubgroupHandle, b: SubgroupHandle) -> frozenset:
    """The set {x*y : x in a, y in b}; in general not a subgroup."""
    _same_parent(a, b)
    out = set()
    for x in a.elements:
        xi = x.images
        for y in b.elements:
            yi = y.images
            out.add(Permutation._raw(tuple(yi[k] for k in xi)))
    return frozenset(out)


def contains(s, g: Permutation) -> bool:
    if g.degree != s.degree:
        raise DegreeMismatch(f"degree {g.degree} != {s.degree}")
    return g in s
