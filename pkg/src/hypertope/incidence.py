"""Incidence systems: flags, chambers, residues and the structural checks on them.

Elements are addressed by their position ``0..len(sys)-1``; ``sys.labels``
keeps whatever names the caller used. Incidence is stored only between
distinct elements, reflexivity being implicit.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Hashable, Iterable, Iterator, Mapping, Sequence

import numpy as np

from .errors import FlagBudgetExceeded, InvalidIncidence, NotAFlag, NotAGeometry

DEFAULT_FLAG_CAP = 1_000_000

# fixed palette, indexed by type position
PALETTE = (
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
)


class IncidenceSystem:
    """A typed element set with a symmetric incidence relation.

    Construct through :func:`validate_incidence_system` unless the input is
    already known to satisfy the axioms.
    """

    def __init__(self, types: Sequence[Hashable], labels: Sequence[Hashable],
                 type_index: Sequence[int], neighbours: Sequence[frozenset]):
        self.types = tuple(types)
        self.labels = tuple(labels)
        self.type_index = tuple(type_index)
        self.neighbours = tuple(neighbours)

    @property
    def rank(self) -> int:
        return len(self.types)

    def __len__(self):
        return len(self.labels)

    def type_of(self, x: int):
        return self.types[self.type_index[x]]

    def incident(self, x: int, y: int) -> bool:
        return x == y or y in self.neighbours[x]

    @cached_property
    def index_of(self) -> dict:
        return {lab: k for k, lab in enumerate(self.labels)}

    @cached_property
    def elements_by_type(self) -> tuple:
        out = [[] for _ in self.types]
        for x, t in enumerate(self.type_index):
            out[t].append(x)
        return tuple(tuple(v) for v in out)

    @cached_property
    def adjacency_matrix(self) -> np.ndarray:
        n = len(self)
        a = np.zeros((n, n), dtype=np.int64)
        for x, nb in enumerate(self.neighbours):
            if nb:
                a[x, list(nb)] = 1
        return a

    def edges(self) -> list[tuple[int, int]]:
        return [(x, y) for x in range(len(self)) for y in sorted(self.neighbours[x]) if x < y]

    def counts_by_type(self) -> tuple:
        return tuple(len(v) for v in self.elements_by_type)

    def __repr__(self):
        return f"IncidenceSystem(rank={self.rank}, counts={self.counts_by_type()})"


def validate_incidence_system(candidate) -> IncidenceSystem:
    """Check the incidence-system axioms and build the system.

    ``candidate`` is an :class:`IncidenceSystem` or a mapping with keys
    ``types``, ``elements`` (pairs ``(id, type)``) and ``incidence``. The
    incidence may be a mapping ``id -> ids`` (checked for symmetry) or an
    iterable of unordered pairs. Every violated axiom is collected before
    raising :class:`InvalidIncidence`.
    """
    if isinstance(candidate, IncidenceSystem):
        types = candidate.types
        elements = [(lab, candidate.type_of(k)) for k, lab in enumerate(candidate.labels)]
        incidence = {candidate.labels[k]: [candidate.labels[y] for y in nb]
                     for k, nb in enumerate(candidate.neighbours)}
    else:
        types = tuple(candidate["types"])
        elements = list(candidate["elements"])
        incidence = candidate.get("incidence", ())

    violations = []
    type_pos = {t: k for k, t in enumerate(types)}
    if len(type_pos) != len(types):
        violations.append("duplicate type labels")
    labels, type_index, index = [], [], {}
    for lab, t in elements:
        if lab in index:
            violations.append(f"duplicate element id {lab!r}")
            continue
        if t not in type_pos:
            violations.append(f"element {lab!r} has unknown type {t!r}")
        index[lab] = len(labels)
        labels.append(lab)
        type_index.append(type_pos.get(t, -1))

    directed = set()
    if isinstance(incidence, Mapping):
        for x, ys in incidence.items():
            for y in ys:
                directed.add((x, y))
        for x, y in sorted(directed, key=repr):
            if (y, x) not in directed:
                violations.append(f"asymmetric incidence: {x!r}*{y!r} but not {y!r}*{x!r}")
    else:
        for x, y in incidence:
            directed.add((x, y))
            directed.add((y, x))

    neighbours = [set() for _ in labels]
    for x, y in sorted(directed, key=repr):
        if x not in index or y not in index:
            missing = x if x not in index else y
            violations.append(f"incidence mentions unknown element {missing!r}")
            continue
        if x == y:
            continue
        ix, iy = index[x], index[y]
        if type_index[ix] == type_index[iy] and ix < iy:
            violations.append(f"distinct elements {x!r} and {y!r} of the same type are incident")
        neighbours[ix].add(iy)
    if violations:
        raise InvalidIncidence(violations)
    return IncidenceSystem(types, labels, type_index, [frozenset(s) for s in neighbours])


# -- flags -------------------------------------------------------------------


def is_flag(sys: IncidenceSystem, flag: Iterable[int]) -> bool:
    flag = list(flag)
    if len(set(flag)) != len(flag) or any(not 0 <= x < len(sys) for x in flag):
        return False
    ts = [sys.type_index[x] for x in flag]
    if len(set(ts)) != len(ts):
        return False
    return all(y in sys.neighbours[x] for x, y in itertools.combinations(flag, 2))


def normalize_flag(sys: IncidenceSystem, flag: Iterable[int]) -> tuple:
    """Sorted by type position; raises NotAFlag if the set is not a flag."""
    flag = tuple(flag)
    if not is_flag(sys, flag):
        raise NotAFlag(f"{flag} is not a flag")
    return tuple(sorted(flag, key=lambda x: sys.type_index[x]))


def flag_type(sys: IncidenceSystem, flag: Iterable[int]) -> tuple:
    return tuple(sorted(sys.type_index[x] for x in flag))


def common_neighbours(sys: IncidenceSystem, flag: Sequence[int]) -> set:
    if not flag:
        return set(range(len(sys)))
    out = set(sys.neighbours[flag[0]])
    for x in flag[1:]:
        out &= sys.neighbours[x]
    return out


def flags_of_type(sys: IncidenceSystem, type_subset: Sequence[int]) -> Iterator[tuple]:
    """All flags whose type set is exactly ``type_subset`` (type positions).

    Yielded in canonical order: lexicographic on element positions taken in
    increasing type order.
    """
    ts = sorted(type_subset)
    by_type = sys.elements_by_type

    def extend(prefix, allowed, depth):
        if depth == len(ts):
            yield tuple(prefix)
            return
        for x in by_type[ts[depth]]:
            if allowed is None or x in allowed:
                nb = sys.neighbours[x]
                yield from extend(prefix + [x], nb if allowed is None else allowed & nb, depth + 1)

    yield from extend([], None, 0)


def type_subsets(rank: int, sizes: Iterable[int] | None = None) -> Iterator[tuple]:
    """Type subsets ordered by size, then lexicographically."""
    sizes = range(rank + 1) if sizes is None else sizes
    for k in sizes:
        yield from itertools.combinations(range(rank), k)


def chambers(sys: IncidenceSystem) -> list[tuple]:
    return list(flags_of_type(sys, range(sys.rank)))


# -- geometry ----------------------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    ok: bool
    witness: tuple | None = None

    def __bool__(self):
        return self.ok


def is_geometry(sys: IncidenceSystem, flag_cap: int = DEFAULT_FLAG_CAP) -> Verdict:
    """True iff every maximal flag is a chamber; otherwise witness one that is not.

    Flags are extended depth first; a flag whose common neighbourhood is empty
    is maximal.
    """
    rank = sys.rank
    n = len(sys)
    counter = [0]

    def visit(flag, cand, higher):
        counter[0] += 1
        if counter[0] > flag_cap:
            raise FlagBudgetExceeded(f"more than {flag_cap} flags")
        if not cand:
            if len(flag) < rank:
                return tuple(sorted(flag, key=lambda x: sys.type_index[x]))
            return None
        for x in sorted(higher):
            nb = sys.neighbours[x]
            bad = visit(flag + [x], cand & nb, higher & nb)
            if bad is not None:
                return bad
            higher = higher - {x}
        return None

    if n == 0:
        return Verdict(rank == 0, None if rank == 0 else ())
    bad = visit([], set(range(n)), set(range(n)))
    return Verdict(bad is None, bad)


def _require_geometry(sys, assume_geometry):
    if assume_geometry:
        return
    v = is_geometry(sys)
    if not v:
        raise NotAGeometry("incidence system is not a geometry", v.witness)


def residue(sys: IncidenceSystem, flag: Iterable[int]) -> IncidenceSystem:
    """The residue of ``flag``: elements incident to all of it, over the remaining types.

    Labels of the residue are the original labels; ``origin`` maps residue
    positions back to positions in ``sys``.
    """
    flag = normalize_flag(sys, flag)
    used = {sys.type_index[x] for x in flag}
    keep_types = [k for k in range(sys.rank) if k not in used]
    new_pos = {k: i for i, k in enumerate(keep_types)}
    members = sorted(common_neighbours(sys, flag) - set(flag))
    local = {x: i for i, x in enumerate(members)}
    neighbours = [frozenset(local[y] for y in sys.neighbours[x] if y in local) for x in members]
    out = IncidenceSystem(
        [sys.types[k] for k in keep_types],
        [sys.labels[x] for x in members],
        [new_pos[sys.type_index[x]] for x in members],
        neighbours,
    )
    out.origin = tuple(members)
    return out


def _connected_subset(sys: IncidenceSystem, members: set) -> bool:
    if len(members) <= 1:
        return True
    start = min(members)
    seen = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for y in sys.neighbours[x]:
            if y in members and y not in seen:
                seen.add(y)
                queue.append(y)
    return len(seen) == len(members)


def is_connected(sys: IncidenceSystem) -> bool:
    return _connected_subset(sys, set(range(len(sys))))


def is_residually_connected(
    sys: IncidenceSystem,
    reducer: Callable[[tuple, list], list] | None = None,
    flag_cap: int = DEFAULT_FLAG_CAP,
    assume_geometry: bool = False,
) -> Verdict:
    """Every residue of rank >= 2, Γ itself included, must be connected.

    ``reducer(type_subset, flags)`` may shrink each list of flags to orbit
    representatives. Rank <= 1 is vacuously residually connected.
    """
    _require_geometry(sys, assume_geometry)
    if sys.rank <= 1:
        return Verdict(True)
    seen = 0
    for ts in type_subsets(sys.rank, range(sys.rank - 1)):
        flags = list(flags_of_type(sys, ts))
        seen += len(flags)
        if seen > flag_cap:
            raise FlagBudgetExceeded(f"more than {flag_cap} flags")
        if reducer is not None:
            flags = reducer(ts, flags)
        for f in flags:
            if not _connected_subset(sys, common_neighbours(sys, f) - set(f)):
                return Verdict(False, f)
    return Verdict(True)


@dataclass(frozen=True)
class ThinnessReport:
    thin: bool
    firm: bool
    min_size: int | None
    min_flag: tuple | None
    max_size: int | None
    max_flag: tuple | None


def thinness_report(sys: IncidenceSystem, assume_geometry: bool = False) -> ThinnessReport:
    """Sizes of all rank-1 residues, with the flags that attain the extremes."""
    _require_geometry(sys, assume_geometry)
    lo = hi = None
    for i in range(sys.rank):
        ts = tuple(k for k in range(sys.rank) if k != i)
        for f in flags_of_type(sys, ts):
            size = len(common_neighbours(sys, f) - set(f))
            if lo is None or size < lo[0]:
                lo = (size, f)
            if hi is None or size > hi[0]:
                hi = (size, f)
    if lo is None:
        return ThinnessReport(True, True, None, None, None, None)
    return ThinnessReport(lo[0] == 2 and hi[0] == 2, lo[0] >= 2, lo[0], lo[1], hi[0], hi[1])


def chambers_and_adjacency(sys: IncidenceSystem, assume_geometry: bool = False):
    """All chambers, and for each chamber and type the list of i-adjacent chambers.

    Returns ``(chambers, adjacency)`` where ``adjacency[c][i]`` lists indices
    of chambers differing from chamber ``c`` exactly in the type-``i`` element.
    """
    _require_geometry(sys, assume_geometry)
    chs = chambers(sys)
    adjacency = [[[] for _ in range(sys.rank)] for _ in chs]
    for i in range(sys.rank):
        panels = {}
        for c, ch in enumerate(chs):
            panels.setdefault(ch[:i] + ch[i + 1:], []).append(c)
        for group in panels.values():
            for c in group:
                adjacency[c][i] = [d for d in group if d != c]
    return chs, adjacency


def export_dot(sys: IncidenceSystem, name: str = "incidence") -> str:
    """DOT text of the incidence graph, nodes labelled ``type:index``."""
    lines = [f"graph {name} {{", "  node [style=filled, fontcolor=white];"]
    node_id = {}
    for t, xs in enumerate(sys.elements_by_type):
        colour = PALETTE[t % len(PALETTE)]
        for j, x in enumerate(xs):
            node_id[x] = f"n{len(node_id)}"
            lines.append(f'  {node_id[x]} [label="{sys.types[t]}:{j}", fillcolor="{colour}"];')
    edges = sorted((min(node_id[x], node_id[y], key=_node_key), max(node_id[x], node_id[y], key=_node_key))
                   for x, y in sys.edges())
    for a, b in sorted(edges, key=lambda e: (_node_key(e[0]), _node_key(e[1]))):
        lines.append(f"  {a} -- {b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _node_key(nid: str) -> int:
    return int(nid[1:])
