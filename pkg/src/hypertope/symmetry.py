"""Type-preserving automorphisms, orbits on flags and chambers, and classification.

Automorphisms are found by individualization and refinement on the incidence
graph coloured by type. Along a fixed first path v_0, v_1, ... of
individualized vertices, the search at each level asks, for every vertex w of
the target cell, whether some automorphism fixing v_0..v_{d-1} sends v_d to w.
The generators found this way form a strong generating set, so the group order
is the product of the basic orbit lengths.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import CapExceeded, ElementBudgetExceeded, NotAGeometry
from .incidence import (
    IncidenceSystem,
    Verdict,
    _connected_subset,
    chambers_and_adjacency,
    common_neighbours,
    flags_of_type,
    is_geometry,
    is_residually_connected,
    thinness_report,
    type_subsets,
)
from .perm import DEFAULT_CAP, GroupRealization, Permutation, close_under_generators

DEFAULT_ELEMENT_CAP = 5_000
BRUTE_FORCE_LIMIT = 8
DEFAULT_NODE_CAP = 2_000_000


# -- partition refinement ----------------------------------------------------


class _Graph:
    def __init__(self, sys: IncidenceSystem):
        self.n = len(sys)
        src, dst = [], []
        for x, nb in enumerate(sys.neighbours):
            for y in nb:
                src.append(x)
                dst.append(y)
        self.src = np.asarray(src, dtype=np.int64)
        self.dst = np.asarray(dst, dtype=np.int64)
        self.types = np.asarray(sys.type_index, dtype=np.int64)
        self.adj = sys.adjacency_matrix.astype(bool)
        degree = np.bincount(self.src, minlength=self.n) if self.n else np.zeros(0, dtype=np.int64)
        self.initial = _compress(np.column_stack([self.types, degree]))

    def refine(self, colors: np.ndarray):
        """Coarsest equitable refinement; returns (colors, quotient invariant)."""
        n = self.n
        while True:
            k = int(colors.max()) + 1 if n else 0
            counts = np.bincount(self.src * k + colors[self.dst], minlength=n * k).reshape(n, k)
            key = np.column_stack([colors, counts])
            uniq, inv = np.unique(key, axis=0, return_inverse=True)
            inv = inv.reshape(-1)
            if len(uniq) == k:
                return colors, uniq.tobytes() + bytes(str(uniq.shape), "ascii")
            colors = inv

    def is_automorphism(self, gamma: np.ndarray) -> bool:
        if not np.array_equal(self.types[gamma], self.types):
            return False
        return bool(self.adj[gamma[self.src], gamma[self.dst]].all())


def _compress(key: np.ndarray) -> np.ndarray:
    if len(key) == 0:
        return np.zeros(0, dtype=np.int64)
    return np.unique(key, axis=0, return_inverse=True)[1].reshape(-1)


def _individualize(colors: np.ndarray, v: int) -> np.ndarray:
    new = 2 * colors + 1
    new[v] -= 1
    return np.unique(new, return_inverse=True)[1].reshape(-1)


def _target_cell(colors: np.ndarray):
    counts = np.bincount(colors)
    big = np.flatnonzero(counts > 1)
    if len(big) == 0:
        return None
    return np.flatnonzero(colors == big[0])


def _orbit(point: int, gens: Sequence[np.ndarray]) -> set:
    orbit = {point}
    frontier = [point]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = int(g[x])
                if y not in orbit:
                    orbit.add(y)
                    nxt.append(y)
        frontier = nxt
    return orbit


# -- automorphism group ------------------------------------------------------


@dataclass(eq=False)
class TypedGraphAut:
    system: IncidenceSystem
    generators: list  # tuples of images on element positions
    order: int
    method: str
    cap: int = DEFAULT_CAP
    _group: GroupRealization | None = field(default=None, repr=False)

    @property
    def group(self) -> GroupRealization:
        """The automorphism group materialized as a permutation group on element positions."""
        if self._group is None:
            n = max(len(self.system), 1)
            if self.order > self.cap:
                raise CapExceeded(f"automorphism group of order {self.order} exceeds cap {self.cap}")
            gens = [Permutation(g) for g in self.generators] if len(self.system) else []
            self._group = close_under_generators(n, gens, self.cap)
        return self._group

    def __contains__(self, images) -> bool:
        images = tuple(images.images if isinstance(images, Permutation) else images)
        return Permutation(images) in self.group


def aut_type_preserving(sys: IncidenceSystem, method: str = "auto", element_cap: int = DEFAULT_ELEMENT_CAP,
                        node_cap: int = DEFAULT_NODE_CAP) -> TypedGraphAut:
    """All permutations of the elements that preserve incidence and every type.

    ``method`` is ``"search"``, ``"brute"`` (all n! permutations, n <= 8 only
    sensible) or ``"auto"`` (brute force up to 8 elements, search above).
    """
    n = len(sys)
    if n > element_cap:
        raise ElementBudgetExceeded(f"{n} elements exceeds the automorphism cap {element_cap}")
    if method == "auto":
        method = "brute" if n <= BRUTE_FORCE_LIMIT else "search"
    if method == "brute":
        gens = _brute_force(sys)
        return TypedGraphAut(sys, gens, len(gens), "brute")
    if method != "search":
        raise ValueError(f"unknown method {method!r}")
    gens, order = _search(sys, node_cap)
    return TypedGraphAut(sys, gens, order, "search")


def _brute_force(sys: IncidenceSystem) -> list:
    """Every automorphism, found by filtering all permutations of the elements."""
    n = len(sys)
    edges = sys.edges()
    out = []
    for p in itertools.permutations(range(n)):
        if any(sys.type_index[p[x]] != sys.type_index[x] for x in range(n)):
            continue
        if all(p[y] in sys.neighbours[p[x]] for x, y in edges):
            out.append(p)
    return out


def _search(sys: IncidenceSystem, node_cap: int):
    g = _Graph(sys)
    if g.n == 0:
        return [], 1
    budget = [node_cap]

    colors, inv = g.refine(g.initial)
    path = []  # (colors, cell, vertex) per level
    path_inv = [inv]
    while True:
        cell = _target_cell(colors)
        if cell is None:
            break
        v = int(cell[0])
        path.append((colors, cell, v))
        colors, inv = g.refine(_individualize(colors, v))
        path_inv.append(inv)
    leaf0 = colors
    depth = len(path)

    def leaf_map(leaf):
        vertex_at = np.empty(g.n, dtype=np.int64)
        vertex_at[leaf] = np.arange(g.n)
        return vertex_at[leaf0]

    def explore(colors, inv, d):
        budget[0] -= 1
        if budget[0] < 0:
            raise ElementBudgetExceeded(f"automorphism search exceeded {node_cap} nodes")
        if inv != path_inv[d]:
            return None
        cell = _target_cell(colors)
        if cell is None:
            gamma = leaf_map(colors)
            return gamma if g.is_automorphism(gamma) else None
        for u in cell:
            c2, i2 = g.refine(_individualize(colors, int(u)))
            found = explore(c2, i2, d + 1)
            if found is not None:
                return found
        return None

    gens = []
    order = 1
    for d in reversed(range(depth)):
        colors_d, cell, v = path[d]
        orbit = _orbit(v, gens)
        for w in cell:
            w = int(w)
            if w in orbit:
                continue
            c2, i2 = g.refine(_individualize(colors_d, w))
            gamma = explore(c2, i2, d + 1)
            if gamma is not None:
                gens.append(gamma)
                orbit = _orbit(v, gens)
        order *= len(orbit)
    return [tuple(int(x) for x in gamma) for gamma in gens], order


# -- orbits ------------------------------------------------------------------


def _generators_of(group) -> list:
    if isinstance(group, TypedGraphAut):
        return [tuple(g) for g in group.generators]
    if isinstance(group, GroupRealization):
        return [g.images for g in group.generators]
    return [tuple(g.images if isinstance(g, Permutation) else g) for g in group]


def flag_orbits(flags: Sequence[tuple], group) -> list[list[tuple]]:
    """Orbits of a type-preserving group on a list of flags sorted by type.

    Orbits are returned sorted internally and ordered by their least flag.
    """
    gens = _generators_of(group)
    index = {f: k for k, f in enumerate(flags)}
    parent = list(range(len(flags)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for f, k in index.items():
        for gen in gens:
            img = tuple(gen[x] for x in f)
            j = index.get(img)
            if j is None:
                raise ValueError(f"flag {f} is mapped outside the flag list")
            a, b = find(k), find(j)
            if a != b:
                parent[max(a, b)] = min(a, b)
    groups = {}
    for k, f in enumerate(flags):
        groups.setdefault(find(k), []).append(f)
    return sorted((sorted(v) for v in groups.values()), key=lambda o: o[0])


def chamber_orbits(sys: IncidenceSystem, group) -> list[list[tuple]]:
    chs, _ = chambers_and_adjacency(sys, assume_geometry=True)
    return flag_orbits(chs, group)


def orbit_count_oracle(sys: IncidenceSystem, group):
    """A callable giving the number of orbits of ``group`` on flags of a type subset."""
    cache = {}

    def oracle(type_subset) -> int:
        ts = tuple(sorted(type_subset))
        if ts not in cache:
            cache[ts] = len(flag_orbits(list(flags_of_type(sys, ts)), group))
        return cache[ts]

    return oracle


def orbit_reducer(group):
    """Residual-connectedness hook: keep one flag per orbit."""
    def reduce(ts, flags):
        return [orb[0] for orb in flag_orbits(flags, group)]
    return reduce


def is_flag_transitive(sys: IncidenceSystem, group) -> bool:
    v = is_geometry(sys)
    if not v:
        raise NotAGeometry("incidence system is not a geometry", v.witness)
    return len(chamber_orbits(sys, group)) == 1


def residually_connected_from_chamber(sys: IncidenceSystem, chamber: Sequence[int]):
    """Connectedness of the residues of all subflags of one chamber with corank >= 2.

    For a flag-transitive or chiral geometry this decides residual
    connectedness.
    """
    chamber = tuple(chamber)
    for ts in type_subsets(sys.rank, range(max(sys.rank - 1, 0))):
        f = tuple(chamber[i] for i in ts)
        if not _connected_subset(sys, common_neighbours(sys, f) - set(f)):
            return Verdict(False, f)
    return Verdict(True)


# -- classification ----------------------------------------------------------


FLAG_TRANSITIVE = "FlagTransitive"
CHIRAL = "Chiral"
NEITHER = "Neither"


@dataclass
class Classification:
    kind: str
    is_geometry: bool
    thin: bool
    firm: bool
    residually_connected: bool
    orbit_count: int
    aut_order: int
    chamber_count: int
    confirmed: bool = True
    witnesses: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind == CHIRAL and not (self.orbit_count == 2 and self.thin):
            raise ValueError("a chiral classification must have two chamber orbits and be thin")

    @property
    def regular_hypertope(self) -> bool:
        return self.kind == FLAG_TRANSITIVE and self.thin and self.residually_connected

    @property
    def chiral_hypertope(self) -> bool:
        return self.kind == CHIRAL and self.residually_connected

    @property
    def label(self) -> str:
        if self.kind == CHIRAL and not self.confirmed:
            return "chiral-with-respect-to-action, unconfirmed"
        return self.kind

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "label": self.label,
            "confirmed": self.confirmed,
            "aut_order": self.aut_order,
            "chamber_count": self.chamber_count,
            "orbit_count": self.orbit_count,
            "hypertope_flags": {
                "is_geometry": self.is_geometry,
                "thin": self.thin,
                "firm": self.firm,
                "residually_connected": self.residually_connected,
            },
            "regular_hypertope": self.regular_hypertope,
            "chiral_hypertope": self.chiral_hypertope,
        }


def classify(sys: IncidenceSystem, element_cap: int = DEFAULT_ELEMENT_CAP, action=None,
             aut: TypedGraphAut | None = None) -> Classification:
    """FlagTransitive / Chiral / Neither under the full type-preserving automorphism group.

    Beyond ``element_cap`` elements a fallback ``action`` group (for example
    the right-multiplication action of a coset geometry) may be supplied; the
    result is then marked unconfirmed, since automorphisms outside the action
    could merge chamber orbits.
    """
    v = is_geometry(sys)
    if not v:
        raise NotAGeometry("incidence system is not a geometry", v.witness)
    confirmed = True
    if aut is not None:
        group, aut_order = aut, aut.order
    elif len(sys) > element_cap:
        if action is None:
            raise ElementBudgetExceeded(f"{len(sys)} elements exceeds the automorphism cap {element_cap}")
        group, aut_order, confirmed = action, action.order, False
    else:
        aut = aut_type_preserving(sys, element_cap=element_cap)
        group, aut_order = aut, aut.order

    chs, adjacency = chambers_and_adjacency(sys, assume_geometry=True)
    orbits = flag_orbits(chs, group)
    orbit_of = {}
    for k, orb in enumerate(orbits):
        for c in orb:
            orbit_of[c] = k
    witnesses = {}
    straddle = True
    for c, ch in enumerate(chs):
        for i in range(sys.rank):
            for d in adjacency[c][i]:
                if orbit_of[ch] == orbit_of[chs[d]]:
                    straddle = False
                    witnesses.setdefault("same_orbit_adjacent_pair", [list(ch), list(chs[d]), i])
    if len(orbits) == 1:
        kind = FLAG_TRANSITIVE
    elif len(orbits) == 2 and straddle:
        kind = CHIRAL
    else:
        kind = NEITHER
    if not straddle and len(orbits) == 1:
        witnesses.pop("same_orbit_adjacent_pair", None)

    thin = thinness_report(sys, assume_geometry=True)
    rc = is_residually_connected(sys, reducer=orbit_reducer(group), assume_geometry=True)
    if not thin.firm:
        witnesses["small_rank1_residue"] = list(thin.min_flag)
    if not thin.thin and thin.max_flag is not None and thin.max_size != 2:
        witnesses["non_thin_rank1_residue"] = list(thin.max_flag)
    if not rc:
        witnesses["disconnected_residue_flag"] = list(rc.witness)
    return Classification(kind, True, thin.thin, thin.firm, rc.ok, len(orbits), aut_order, len(chs),
                          confirmed, witnesses)


@dataclass
class TransitivityAudit:
    ok: bool
    orbits_by_type: dict  # type subset -> number of orbits, J = I included for information
    violations: list


def flag_type_transitivity_audit(sys: IncidenceSystem, group) -> TransitivityAudit:
    """Orbit counts on flags of every type subset; proper subsets must give one orbit."""
    counts = {}
    violations = []
    for ts in type_subsets(sys.rank):
        k = len(flag_orbits(list(flags_of_type(sys, ts)), group))
        counts[ts] = k
        if len(ts) < sys.rank and k != 1:
            violations.append({"types": list(ts), "orbits": k})
    return TransitivityAudit(not violations, counts, violations)


__all__ = [
    "TypedGraphAut", "aut_type_preserving", "flag_orbits", "chamber_orbits", "orbit_count_oracle",
    "orbit_reducer", "is_flag_transitive", "residually_connected_from_chamber", "Classification",
    "classify", "flag_type_transitivity_audit", "TransitivityAudit", "FLAG_TRANSITIVE", "CHIRAL",
    "NEITHER",
]
