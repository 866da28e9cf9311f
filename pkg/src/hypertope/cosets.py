"""Coset incidence systems (Tits' construction) and the geometry of a C+-group.

Right cosets ``G_i * g`` are used throughout, and the group acts by right
multiplication. A coset is named by its lexicographically least member.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

from .errors import NotAChamber, ParentMismatch, RDoesNotGenerate, TypeOutOfRange
from .incidence import IncidenceSystem, is_flag, residue
from .perm import (
    GroupRealization,
    Permutation,
    SubgroupHandle,
    close_under_generators,
    intersect_subgroups,
    inverse,
    product_set,
    subgroup_from,
    whole_group,
)

PRODUCT_CACHE_LIMIT = 1_000_000


class Coset(NamedTuple):
    type: int
    rep: Permutation

    def __str__(self):
        return f"G{self.type}*{self.rep}"


@dataclass(frozen=True, eq=False)
class CosetGeometrySpec:
    group: GroupRealization
    parabolics: tuple
    _memo: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "parabolics", tuple(self.parabolics))
        for h in self.parabolics:
            if h.parent is not self.group:
                raise ParentMismatch("every parabolic must be a subgroup of the spec's group")

    @property
    def rank(self) -> int:
        return len(self.parabolics)


@dataclass(frozen=True, eq=False)
class CPlusSpec:
    """A group with generators alpha_1..alpha_{r-1}; alpha_0 is the identity."""

    group: GroupRealization
    R: tuple
    _memo: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "R", tuple(self.R))

    @property
    def rank(self) -> int:
        return len(self.R) + 1

    def alpha(self, i: int, j: int | None = None) -> Permutation:
        """``alpha(i)`` is alpha_i; ``alpha(i, j)`` is alpha_i^-1 * alpha_j."""
        if j is None:
            _check_types(self.rank, [i])
            return self.group.identity if i == 0 else self.R[i - 1]
        return inverse(self.alpha(i)) * self.alpha(j)


def _check_types(rank, types):
    for t in types:
        if not 0 <= t < rank:
            raise TypeOutOfRange(f"type {t} not in 0..{rank - 1}")


def cplus_spec(group: GroupRealization, R: Sequence[Permutation]) -> CPlusSpec:
    """Validate that R generates ``group`` and wrap it."""
    R = tuple(R)
    if not R:
        raise RDoesNotGenerate("R must be nonempty")
    if any(a not in group for a in R):
        raise RDoesNotGenerate("R contains a permutation outside the group")
    if close_under_generators(group.degree, R, group.cap).order != group.order:
        raise RDoesNotGenerate("R does not generate the group")
    return CPlusSpec(group, R)


def parabolic(spec, J: Sequence[int]) -> SubgroupHandle:
    """G+_J for a C+ spec, or the intersection G_J for a coset geometry spec."""
    J = tuple(sorted(set(J)))
    _check_types(spec.rank, J)
    memo = spec._memo
    key = ("parabolic", J)
    if key in memo:
        return memo[key]
    if isinstance(spec, CPlusSpec):
        gens = sorted({spec.alpha(i, j) for i in J for j in J if i != j})
        h = subgroup_from(spec.group, gens)
    elif not J:
        h = whole_group(spec.group)
    elif len(J) == 1:
        h = spec.parabolics[J[0]]
    else:
        h = intersect_subgroups(parabolic(spec, J[:-1]), spec.parabolics[J[-1]])
    memo[key] = h
    return h


def geometry_from_cplus(cp: CPlusSpec) -> CosetGeometrySpec:
    """Parabolics G+_i = G+_{I minus i} over I = {0..r-1}."""
    if not cp.R:
        raise RDoesNotGenerate("R must be nonempty")
    if close_under_generators(cp.group.degree, cp.R, cp.group.cap).order != cp.group.order:
        raise RDoesNotGenerate("R does not generate the group")
    r = cp.rank
    parabolics = []
    for i in range(r):
        if i == 0:
            gens = [cp.alpha(1, j) for j in range(2, r)]
        else:
            gens = [cp.alpha(j) for j in range(1, r) if j != i]
        parabolics.append(subgroup_from(cp.group, gens))
    return CosetGeometrySpec(cp.group, tuple(parabolics))


# -- the built geometry ------------------------------------------------------


class CosetGeometry:
    """The incidence system of right cosets together with the group action."""

    def __init__(self, spec: CosetGeometrySpec, system: IncidenceSystem, coset_index: list, reps: list):
        self.spec = spec
        self.system = system
        self._coset_index = coset_index  # per type: element -> position in system
        self._reps = reps
        self._products = {}
        group = spec.group
        for i, j in itertools.product(range(spec.rank), repeat=2):
            a, b = spec.parabolics[i], spec.parabolics[j]
            if len(a) * len(b) <= PRODUCT_CACHE_LIMIT:
                self._products[i, j] = product_set(a, b)
        self.base_chamber = tuple(self.element_of(i, group.identity) for i in range(spec.rank))
        self._action_group = None

    @property
    def group(self) -> GroupRealization:
        return self.spec.group

    @property
    def rank(self) -> int:
        return self.spec.rank

    def element_of(self, i: int, g: Permutation) -> int:
        """Position of the coset G_i * g."""
        return self._coset_index[i][g]

    def coset(self, x: int) -> Coset:
        return self.system.labels[x]

    def coset_members(self, x: int) -> frozenset:
        i, rep = self.system.labels[x]
        return frozenset(h * rep for h in self.spec.parabolics[i].elements)

    def product(self, i: int, j: int, g: Permutation) -> bool:
        """Membership of g in G_i * G_j."""
        cached = self._products.get((i, j))
        if cached is not None:
            return g in cached
        b = self.spec.parabolics[j].elements
        return any(inverse(a) * g in b for a in self.spec.parabolics[i].elements)

    def action(self, g: Permutation) -> tuple:
        """Right multiplication by g as a permutation of element positions."""
        out = []
        for x, (i, rep) in enumerate(self.system.labels):
            out.append(self._coset_index[i][rep * g])
        return tuple(out)

    def action_group(self) -> GroupRealization:
        """The image of the group acting on element positions."""
        if self._action_group is None:
            n = len(self.system)
            gens = [Permutation(self.action(g)) for g in self.group.generators]
            self._action_group = close_under_generators(n, gens, max(self.group.order, 1))
        return self._action_group

    def residue_of_base(self, type_subset: Sequence[int]) -> IncidenceSystem:
        _check_types(self.rank, type_subset)
        return residue(self.system, [self.base_chamber[i] for i in sorted(type_subset)])

    def __repr__(self):
        return f"CosetGeometry(order={self.group.order}, counts={self.system.counts_by_type()})"


def tits_build(spec: CosetGeometrySpec) -> CosetGeometry:
    """Elements are all right cosets G_i*g; two cosets are incident iff they meet.

    Cosets meet exactly when they share a group element, so incidence is read
    off by grouping, for each g, the cosets that contain it.
    """
    group = spec.group
    labels, type_index, coset_index, reps = [], [], [], []
    for i, h in enumerate(spec.parabolics):
        index = {}
        hs = list(h.elements)
        type_reps = []
        for g in group.elements:  # canonical order, so the first unseen member is the least
            if g in index:
                continue
            pos = len(labels)
            labels.append(Coset(i, g))
            type_index.append(i)
            type_reps.append(g)
            for a in hs:
                index[a * g] = pos
        coset_index.append(index)
        reps.append(type_reps)
    neighbours = [set() for _ in labels]
    for g in group.elements:
        xs = [coset_index[i][g] for i in range(spec.rank)]
        for x, y in itertools.combinations(xs, 2):
            neighbours[x].add(y)
            neighbours[y].add(x)
    system = IncidenceSystem(list(range(spec.rank)), labels, type_index, [frozenset(s) for s in neighbours])
    return CosetGeometry(spec, system, coset_index, reps)


def cosets_intersect(geom: CosetGeometry, i: int, g1: Permutation, j: int, g2: Permutation) -> bool:
    """Whether G_i*g1 meets G_j*g2, decided by g1*g2^-1 in G_i*G_j."""
    _check_types(geom.rank, [i, j])
    return geom.product(i, j, g1 * inverse(g2))


def naive_cosets_intersect(spec: CosetGeometrySpec, i: int, g1: Permutation, j: int, g2: Permutation) -> bool:
    a = {h * g1 for h in spec.parabolics[i].elements}
    b = {h * g2 for h in spec.parabolics[j].elements}
    return not a.isdisjoint(b)


@dataclass(frozen=True)
class AdjacentChamber:
    chamber: tuple
    convention: str  # reading used for ``chamber``
    verified: tuple  # every reading that produced a j-adjacent chamber


READINGS = ("G_j*alpha_ij^-1", "G_j*alpha_ij")


def lemma_adjacent_chamber(cp: CPlusSpec, i: int, j: int, geom: CosetGeometry | None = None) -> AdjacentChamber:
    """The chamber equal to the base chamber except for a new type-j element.

    The left coset alpha_ij^-1 G_j has two right-coset readings; both are
    checked for pairwise incidence with the rest of the base chamber, and the
    first one that works is returned along with the list of all that work.
    """
    _check_types(cp.rank, [i, j])
    if i == j:
        raise ValueError("i and j must differ")
    if geom is None:
        geom = tits_build(geometry_from_cplus(cp))
    a = cp.alpha(i, j)
    base = geom.base_chamber
    found = []
    for name, g in zip(READINGS, (inverse(a), a)):
        new = geom.element_of(j, g)
        if new == base[j]:
            continue
        ch = base[:j] + (new,) + base[j + 1:]
        if is_flag(geom.system, ch):
            found.append((name, ch))
    if not found:
        raise NotAChamber(f"no right-coset reading of alpha_{i}{j}^-1 G_{j} gives a chamber")
    return AdjacentChamber(found[0][1], found[0][0], tuple(name for name, _ in found))
