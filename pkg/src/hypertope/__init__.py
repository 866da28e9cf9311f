"""Coset geometries of C-groups and C+-groups over finite permutation groups.

Build the incidence system of right cosets, test the intersection-type
criteria, and decide whether the result is a regular or chiral hypertope.
"""

from .cosets import (
    CosetGeometry,
    CosetGeometrySpec,
    CPlusSpec,
    cosets_intersect,
    cplus_spec,
    geometry_from_cplus,
    lemma_adjacent_chamber,
    parabolic,
    tits_build,
)
from .criteria import (
    buekenhout_hermand_rc,
    cgroup_spec,
    check_c_group,
    check_c_plus_group,
    geometry_from_cgroup,
    phi_surjectivity,
    product_condition,
    residue_connectivity_via_parabolics,
)
from .errors import HypertopeError
from .harness import parse_input, run_report, verify_main_theorem
from .incidence import (
    IncidenceSystem,
    chambers,
    export_dot,
    is_geometry,
    is_residually_connected,
    residue,
    thinness_report,
    validate_incidence_system,
)
from .perm import (
    GroupRealization,
    Permutation,
    close_under_generators,
    parse_permutation,
    subgroup_from,
)
from .symmetry import aut_type_preserving, classify, flag_orbits

__version__ = "0.1.0"

__all__ = [
    "CosetGeometry", "CosetGeometrySpec", "CPlusSpec", "cosets_intersect", "cplus_spec",
    "geometry_from_cplus", "lemma_adjacent_chamber", "parabolic", "tits_build",
    "buekenhout_hermand_rc", "cgroup_spec", "check_c_group", "check_c_plus_group",
    "geometry_from_cgroup", "phi_surjectivity", "product_condition",
    "residue_connectivity_via_parabolics", "HypertopeError", "parse_input", "run_report",
    "verify_main_theorem", "IncidenceSystem", "chambers", "export_dot", "is_geometry",
    "is_residually_connected", "residue", "thinness_report", "validate_incidence_system",
    "GroupRealization", "Permutation", "close_under_generators", "parse_permutation",
    "subgroup_from", "aut_type_preserving", "classify", "flag_orbits", "__version__",
]
