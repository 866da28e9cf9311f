"""Group-theoretic criteria on generating sets and parabolic subgroups."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .cosets import CosetGeometrySpec, CPlusSpec, _check_types, parabolic
from .errors import (
    InternalInconsistency,
    NotInvolutions,
    OracleUnavailable,
    RDoesNotGenerate,
    TypeOutOfRange,
)
from .perm import (
    GroupRealization,
    close_under_generators,
    element_order,
    intersect_subgroups,
    join_subgroups,
    product_set,
    subgroup_from,
)


@dataclass
class CriterionReport:
    verdict: bool
    violations: list = field(default_factory=list)
    flags: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)

    def __bool__(self):
        return self.verdict

    def as_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "violations": self.violations,
            **({"flags": self.flags} if self.flags else {}),
            **({"warnings": self.warnings} if self.warnings else {}),
        }


def _subsets(n, min_size=0):
    for k in range(min_size, n + 1):
        yield from itertools.combinations(range(n), k)


def _pairs(subsets, sample, seed):
    pairs = list(itertools.combinations_with_replacement(subsets, 2))
    if sample is not None and sample < len(pairs):
        pairs = random.Random(seed).sample(pairs, sample)
        pairs.sort()
    return pairs


# -- C-groups ----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CGroupSpec:
    group: GroupRealization
    rho: tuple
    _memo: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "rho", tuple(self.rho))

    @property
    def rank(self) -> int:
        return len(self.rho)

    def generated(self, subset: Sequence[int]):
        """<rho_i : i in subset>, memoized."""
        key = tuple(sorted(subset))
        if key not in self._memo:
            self._memo[key] = subgroup_from(self.group, [self.rho[i] for i in key])
        return self._memo[key]


def cgroup_spec(group: GroupRealization, rho) -> CGroupSpec:
    cg = CGroupSpec(group, rho)
    for k, r in enumerate(cg.rho):
        if r not in group:
            raise RDoesNotGenerate(f"rho_{k} is not in the group")
    if close_under_generators(group.degree, cg.rho, group.cap).order != group.order:
        raise RDoesNotGenerate("rho does not generate the group")
    return cg


def geometry_from_cgroup(cg: CGroupSpec) -> CosetGeometrySpec:
    """Maximal parabolics G_i = <rho_j : j != i>."""
    n = cg.rank
    return CosetGeometrySpec(cg.group, tuple(cg.generated([j for j in range(n) if j != i]) for i in range(n)))


def check_c_group(cg: CGroupSpec, sample: int | None = None, seed: int = 0) -> CriterionReport:
    """The intersection condition over all pairs of subsets of generators."""
    for k, r in enumerate(cg.rho):
        if element_order(r) > 2:
            raise NotInvolutions(f"rho_{k} = {r} has order {element_order(r)}")
    violations = []
    for a, b in _pairs(list(_subsets(cg.rank)), sample, seed):
        got = intersect_subgroups(cg.generated(a), cg.generated(b))
        want = cg.generated(sorted(set(a) & set(b)))
        if got.elements != want.elements:
            violations.append({"subsets": [list(a), list(b)], "expected_order": want.order,
                               "actual_order": got.order})
    independent = all(
        cg.rho[i] not in cg.generated([j for j in range(cg.rank) if j != i]) for i in range(cg.rank)
    )
    return CriterionReport(not violations, violations, {"independent": independent})


# -- C+-groups ---------------------------------------------------------------


def check_c_plus_group(cp: CPlusSpec, sample: int | None = None, seed: int = 0) -> CriterionReport:
    """IC+: G+_J meet G+_K equals G+_(J meet K) whenever |J|, |K| >= 2.

    Independence of R is reported separately under ``flags["independent"]``.
    """
    if close_under_generators(cp.group.degree, cp.R, cp.group.cap).order != cp.group.order:
        raise RDoesNotGenerate("R does not generate the group")
    violations = []
    for a, b in _pairs(list(_subsets(cp.rank, 2)), sample, seed):
        got = intersect_subgroups(parabolic(cp, a), parabolic(cp, b))
        want = parabolic(cp, sorted(set(a) & set(b)))
        if got.elements != want.elements:
            violations.append({"subsets": [list(a), list(b)], "expected_order": want.order,
                               "actual_order": got.order})
    return CriterionReport(not violations, violations, {"independent": r_independent(cp)})


def r_independent(cp: CPlusSpec) -> bool:
    """No alpha_i lies in the subgroup generated by the other alphas."""
    for i in range(1, cp.rank):
        others = subgroup_from(cp.group, [cp.alpha(j) for j in range(1, cp.rank) if j != i])
        if cp.alpha(i) in others:
            return False
    return True


# -- coset geometry criteria -------------------------------------------------


def generated_by_overgroups(spec: CosetGeometrySpec, J: Sequence[int]):
    """<G_(J+i) : i not in J>."""
    J = set(J)
    rest = [i for i in range(spec.rank) if i not in J]
    return join_subgroups(spec.group, [parabolic(spec, sorted(J | {i})) for i in rest])


def buekenhout_hermand_rc(spec: CosetGeometrySpec, flag_transitive: bool | None = None) -> CriterionReport:
    """G_J = <G_(J+i) : i not in J> for every J leaving at least two types out.

    The verdict characterizes residual connectedness only when the group is
    flag-transitive; pass ``flag_transitive=True`` once that is established,
    otherwise the report carries a ``PreconditionUnverified`` warning.
    """
    violations = []
    n = spec.rank
    for J in _subsets(n):
        if n - len(J) < 2:
            continue
        want = parabolic(spec, J)
        got = generated_by_overgroups(spec, J)
        if got.elements != want.elements:
            violations.append({"subsets": [list(J)], "expected_order": want.order, "actual_order": got.order})
    report = CriterionReport(not violations, violations)
    if flag_transitive is not True:
        report.warnings.append("PreconditionUnverified: flag-transitivity not established")
    return report


def residue_connectivity_via_parabolics(spec: CosetGeometrySpec, J: Sequence[int]) -> bool:
    """Sufficient (not necessary) test that the residue of the base flag of type J is connected.

    Valid when the group is transitive on all flag types J + {i}; the caller
    asserts this (chiral or flag-transitive geometries).
    """
    J = tuple(sorted(set(J)))
    _check_types(spec.rank, J)
    if len(J) >= spec.rank:
        raise TypeOutOfRange("J must be a proper subset of the types")
    return generated_by_overgroups(spec, J).elements == parabolic(spec, J).elements


def _intersection_of_products(spec, J, i, orientation):
    out = None
    for j in J:
        a, b = spec.parabolics[j], spec.parabolics[i]
        s = product_set(a, b) if orientation == "ji" else product_set(b, a)
        out = s if out is None else out & s
    return out


def product_condition(spec: CosetGeometrySpec, J: Sequence[int], i: int, orientation: str = "ji") -> bool:
    """Compare an intersection of product sets with the product through G_J.

    ``orientation="ji"`` tests  meet_j G_j G_i == G_J G_i;
    ``orientation="ij"`` tests  meet_j G_i G_j == G_i G_J.
    """
    J = tuple(sorted(set(J)))
    _check_types(spec.rank, J + (i,))
    if not J:
        raise ValueError("J must be nonempty")
    if i in J:
        raise ValueError("i must not be in J")
    if orientation not in ("ji", "ij"):
        raise ValueError(f"unknown orientation {orientation!r}")
    lhs = _intersection_of_products(spec, J, i, orientation)
    gj, gi = parabolic(spec, J), spec.parabolics[i]
    rhs = product_set(gj, gi) if orientation == "ji" else product_set(gi, gj)
    return lhs == rhs


@dataclass(frozen=True)
class PhiReport:
    surjective: bool
    transitive_on_extensions: bool  # condition (1)
    products_and_transitive: bool  # condition (3)
    details: dict

    def __bool__(self):
        return self.surjective


def phi_surjectivity(spec: CosetGeometrySpec, J: Sequence[int],
                     orbit_oracle: Callable[[tuple], int] | None) -> PhiReport:
    """Decide surjectivity of the natural map onto the residue of the base flag of type J.

    Two characterizations are evaluated independently and must agree:
    transitivity on every flag type J + {i}, and the product-set condition for
    every i together with transitivity on flags of type J.
    ``orbit_oracle(type_subset)`` returns the number of group orbits on flags
    of that type.
    """
    if orbit_oracle is None:
        raise OracleUnavailable("an orbit oracle is required")
    J = tuple(sorted(set(J)))
    _check_types(spec.rank, J)
    rest = [i for i in range(spec.rank) if i not in J]
    if not rest:
        raise TypeOutOfRange("J must be a proper subset of the types")
    orbits_ext = {i: orbit_oracle(tuple(sorted(J + (i,)))) for i in rest}
    cond1 = all(v == 1 for v in orbits_ext.values())
    orbits_j = orbit_oracle(J)
    products = {i: (product_condition(spec, J, i) if J else True) for i in rest}
    cond3 = orbits_j == 1 and all(products.values())
    if cond1 != cond3:
        raise InternalInconsistency(f"conditions disagree for J={J}: {cond1} vs {cond3}")
    details = {
        "orbits_on_extensions": {str(i): v for i, v in orbits_ext.items()},
        "orbits_on_J": orbits_j,
        "product_conditions": {str(i): v for i, v in products.items()},
    }
    return PhiReport(cond1, cond1, cond3, details)
