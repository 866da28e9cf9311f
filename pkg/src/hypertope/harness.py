"""Input parsing, the full analysis pipeline, the fixture catalog and the theorem suite."""

from __future__ import annotations

import itertools
import json
import os
import time
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Sequence

from . import criteria as crit
from .cosets import (
    CosetGeometry,
    CosetGeometrySpec,
    CPlusSpec,
    cplus_spec,
    geometry_from_cplus,
    tits_build,
)
from .errors import (
    InternalInconsistency,
    ParseError,
    RDoesNotGenerate,
)
from .incidence import export_dot as system_dot
from .incidence import is_connected, is_geometry, is_residually_connected, thinness_report, type_subsets
from .perm import (
    DEFAULT_CAP,
    GroupRealization,
    close_under_generators,
    element_order,
    inverse,
    parse_permutation,
    subgroup_from,
)
from .smallgroups import small_groups
from .symmetry import (
    CHIRAL,
    FLAG_TRANSITIVE,
    DEFAULT_ELEMENT_CAP,
    aut_type_preserving,
    chamber_orbits,
    classify,
    flag_type_transitivity_audit,
    orbit_count_oracle,
    residually_connected_from_chamber,
)

MODES = ("cplus", "cgroup", "explicit")

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_CAP = 3
EXIT_NOT_GEOMETRY = 4
EXIT_THEOREM = 5
EXIT_INCONSISTENT = 6


def default_cap() -> int:
    value = os.environ.get("HYPERTOPE_CAP")
    return int(value) if value else DEFAULT_CAP


# -- input -------------------------------------------------------------------


@dataclass
class InputSpec:
    degree: int
    mode: str
    generators: list
    subgroups: list | None = None
    cap: int | None = None
    name: str | None = None

    def echo(self) -> dict:
        out = {
            "degree": self.degree,
            "mode": self.mode,
            "generators": [g.cycle_string() for g in self.generators],
        }
        if self.subgroups is not None:
            out["subgroups"] = [[g.cycle_string() for g in sub] for sub in self.subgroups]
        if self.cap is not None:
            out["cap"] = self.cap
        return out


def parse_input(text: str) -> InputSpec:
    """Parse one JSON input document, collecting every problem found."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise ParseError("top level must be a JSON object")
    errors = []
    for key in ("degree", "mode", "generators"):
        if key not in doc:
            errors.append(f"field '{key}': missing")
    degree = doc.get("degree")
    if "degree" in doc and (not isinstance(degree, int) or isinstance(degree, bool) or degree < 1):
        errors.append(f"field 'degree': expected a positive integer, got {degree!r}")
        degree = None
    mode = doc.get("mode")
    if "mode" in doc and mode not in MODES:
        errors.append(f"field 'mode': unknown mode {mode!r} (expected one of {', '.join(MODES)})")

    def perms(values, where):
        out = []
        if not isinstance(values, list):
            errors.append(f"field '{where}': expected a list")
            return out
        for k, lit in enumerate(values):
            if degree is None:
                continue
            try:
                out.append(parse_permutation(lit, degree))
            except (ValueError, TypeError) as exc:
                errors.append(f"field '{where}[{k}]': {exc}")
        return out

    gens = perms(doc.get("generators", []), "generators")
    subgroups = None
    if mode == "explicit":
        if "subgroups" not in doc:
            errors.append("field 'subgroups': required in explicit mode")
        else:
            raw = doc["subgroups"]
            if not isinstance(raw, list):
                errors.append("field 'subgroups': expected a list of generator lists")
            else:
                subgroups = [perms(sub, f"subgroups[{k}]") for k, sub in enumerate(raw)]
    elif "subgroups" in doc:
        errors.append(f"field 'subgroups': only allowed in explicit mode, not {mode!r}")
    cap = doc.get("cap")
    if cap is not None and (not isinstance(cap, int) or isinstance(cap, bool) or cap < 1):
        errors.append(f"field 'cap': expected a positive integer, got {cap!r}")
    if mode in ("cplus", "cgroup") and "generators" in doc and not doc["generators"]:
        errors.append("field 'generators': must be nonempty")
    if errors:
        raise ParseError(errors)
    return InputSpec(degree, mode, gens, subgroups, cap, doc.get("name"))


# -- pipeline ----------------------------------------------------------------


@dataclass
class Pipeline:
    """Everything built from one input, kept for callers that need the objects."""

    spec: InputSpec
    group: GroupRealization
    coset_spec: CosetGeometrySpec
    geometry: CosetGeometry
    cplus: CPlusSpec | None = None
    cgroup: crit.CGroupSpec | None = None


def build(spec: InputSpec, cap: int | None = None) -> Pipeline:
    cap = cap or spec.cap or default_cap()
    group = close_under_generators(spec.degree, spec.generators, cap)
    cp = cg = None
    if spec.mode == "cplus":
        cp = cplus_spec(group, spec.generators)
        cs = geometry_from_cplus(cp)
    elif spec.mode == "cgroup":
        cg = crit.cgroup_spec(group, spec.generators)
        cs = crit.geometry_from_cgroup(cg)
    else:
        cs = CosetGeometrySpec(group, tuple(subgroup_from(group, sub) for sub in spec.subgroups))
    return Pipeline(spec, group, cs, tits_build(cs), cp, cg)


def _parabolic_criteria(p: Pipeline, action_ft: bool) -> dict:
    cs = p.coset_spec
    out = {}
    if p.cgroup is not None:
        out["c_group"] = crit.check_c_group(p.cgroup).as_dict()
    if p.cplus is not None:
        out["c_plus_group"] = crit.check_c_plus_group(p.cplus).as_dict()
    out["buekenhout_hermand"] = crit.buekenhout_hermand_rc(cs, flag_transitive=action_ft).as_dict()
    products = {}
    for J in type_subsets(cs.rank, range(1, cs.rank)):
        for i in range(cs.rank):
            if i not in J:
                products[f"{','.join(map(str, J))}|{i}"] = crit.product_condition(cs, J, i)
    out["product_conditions"] = products
    return out


def run_report(spec: InputSpec, cap: int | None = None, element_cap: int = DEFAULT_ELEMENT_CAP,
               include_timing: bool = False) -> dict:
    """Build, check and classify one input; returns the report as an ordered dict.

    The report never hides a failed consistency check: a chiral C+ geometry
    that is not residually connected sets ``verdicts.theorem_violation``, and
    any disagreement between two independent routes sets
    ``verdicts.internal_inconsistency``.
    """
    t0 = time.perf_counter()
    p = build(spec, cap)
    cs, geom, sys = p.coset_spec, p.geometry, p.geometry.system
    report = {
        "input": spec.echo(),
        "group": {"order": p.group.order, "degree": p.group.degree},
        "parabolics": {
            "orders": [h.order for h in cs.parabolics],
            "generators": [[g.cycle_string() for g in h.generators] for h in cs.parabolics],
        },
    }
    timing = {"build": time.perf_counter() - t0}
    inconsistencies = []
    witnesses = {}

    geo = is_geometry(sys)
    action = geom.action_group()
    action_ft = geo.ok and len(chamber_orbits(sys, action)) == 1
    t1 = time.perf_counter()
    report["criteria"] = _parabolic_criteria(p, action_ft)
    timing["criteria"] = time.perf_counter() - t1

    geometry = {
        "element_counts": list(sys.counts_by_type()),
        "is_geometry": geo.ok,
        "connected": is_connected(sys),
    }
    classification = None
    verdicts = {"hypertope": False, "regular_hypertope": False, "chiral_hypertope": False}
    if not geo.ok:
        witnesses["maximal_non_chamber_flag"] = _flag_names(geom, geo.witness)
    else:
        thin = thinness_report(sys, assume_geometry=True)
        rc = is_residually_connected(sys, assume_geometry=True)
        geometry.update({
            "chamber_count": None,
            "thin": thin.thin,
            "firm": thin.firm,
            "residually_connected": rc.ok,
            "rank1_residue_sizes": [thin.min_size, thin.max_size],
            "action_flag_transitive": action_ft,
        })
        if not rc:
            witnesses["disconnected_residue"] = _flag_names(geom, rc.witness)

        t2 = time.perf_counter()
        c = classify(sys, element_cap=element_cap, action=action)
        timing["classification"] = time.perf_counter() - t2
        geometry["chamber_count"] = c.chamber_count
        classification = c.as_dict()
        if c.witnesses.get("same_orbit_adjacent_pair") and c.kind != FLAG_TRANSITIVE:
            witnesses["same_orbit_adjacent_pair"] = c.witnesses["same_orbit_adjacent_pair"]
        if c.residually_connected != rc.ok:
            inconsistencies.append("orbit-reduced and exhaustive residual connectedness disagree")
        if action_ft:
            bh = report["criteria"]["buekenhout_hermand"]["verdict"]
            if bh != rc.ok:
                inconsistencies.append("Buekenhout-Hermand criterion disagrees with direct check")
        if c.kind in (FLAG_TRANSITIVE, CHIRAL) and c.confirmed:
            base = residually_connected_from_chamber(sys, geom.base_chamber)
            if base.ok != rc.ok:
                inconsistencies.append("base-chamber residues disagree with full residual connectedness")
        if c.kind == CHIRAL and c.confirmed:
            audit = flag_type_transitivity_audit(sys, aut_type_preserving(sys, element_cap=element_cap))
            classification["flag_type_transitivity"] = {"ok": audit.ok, "violations": audit.violations}
            if not audit.ok:
                inconsistencies.append("chiral geometry not transitive on a proper flag type")
        phi = {}
        oracle = orbit_count_oracle(sys, action)
        try:
            for J in type_subsets(cs.rank, range(cs.rank)):
                phi[",".join(map(str, J)) or "-"] = crit.phi_surjectivity(cs, J, oracle).surjective
        except InternalInconsistency as exc:
            inconsistencies.append(str(exc))
        report["criteria"]["phi_surjective"] = phi

        verdicts["hypertope"] = thin.thin and rc.ok
        verdicts["regular_hypertope"] = c.regular_hypertope
        verdicts["chiral_hypertope"] = c.chiral_hypertope

    report["geometry"] = geometry
    report["classification"] = classification

    theorem = []
    if p.cplus is not None and report["criteria"]["c_plus_group"]["verdict"] and geo.ok:
        if classification["kind"] == CHIRAL and not geometry["residually_connected"]:
            theorem.append("chiral C+ geometry is not residually connected")
        if cs.rank == 3 and not (geometry["residually_connected"] and geometry["firm"]):
            theorem.append("rank-3 C+ geometry is not residually connected and firm")
    verdicts["theorem_violation"] = bool(theorem)
    verdicts["internal_inconsistency"] = bool(inconsistencies)
    if theorem:
        witnesses["THEOREM-VIOLATION"] = theorem
    if inconsistencies:
        witnesses["internal_inconsistency"] = inconsistencies
    report["verdicts"] = verdicts
    report["witnesses"] = witnesses
    timing["total"] = time.perf_counter() - t0
    report["timing"] = {k: round(v, 6) for k, v in timing.items()} if include_timing else None
    return report


def _flag_names(geom: CosetGeometry, flag) -> list:
    return [str(geom.coset(x)) for x in flag]


def exit_code_for(report: dict) -> int:
    v = report["verdicts"]
    if v["internal_inconsistency"]:
        return EXIT_INCONSISTENT
    if v["theorem_violation"]:
        return EXIT_THEOREM
    if not report["geometry"]["is_geometry"]:
        return EXIT_NOT_GEOMETRY
    return EXIT_OK


def dumps_report(report: dict) -> str:
    return json.dumps(report, indent=2, ensure_ascii=False) + "\n"


# -- DOT export --------------------------------------------------------------


def export_dot(source, flag_selector: Sequence[int] = ()) -> str:
    """DOT text for the residue of the base-chamber flag with the given types.

    ``source`` is an :class:`InputSpec`, a :class:`CosetGeometrySpec` or a
    built :class:`CosetGeometry`. An empty selector exports the whole geometry.
    """
    if isinstance(source, InputSpec):
        geom = build(source).geometry
    elif isinstance(source, CosetGeometrySpec):
        geom = tits_build(source)
    else:
        geom = source
    types = sorted(set(flag_selector))
    res = geom.residue_of_base(types)
    name = "residue_" + "_".join(map(str, types)) if types else "geometry"
    return system_dot(res, name)


# -- catalog -----------------------------------------------------------------


def catalog_dir() -> Path:
    return Path(str(resources.files("hypertope") / "catalog"))


def load_catalog(names: Sequence[str] | None = None) -> list[tuple[str, InputSpec, dict | None]]:
    """Fixtures sorted by name, each with its stored expected values (if any)."""
    out = []
    for path in sorted(catalog_dir().glob("*.json")):
        if path.name.endswith(".expected.json"):
            continue
        name = path.stem
        if names and name not in names:
            continue
        spec = parse_input(path.read_text(encoding="utf-8"))
        spec.name = name
        exp_path = path.with_name(name + ".expected.json")
        expected = json.loads(exp_path.read_text(encoding="utf-8")) if exp_path.exists() else None
        out.append((name, spec, expected))
    return out


def summarize(report: dict) -> dict:
    """The values stored in catalog snapshots."""
    g, c = report["geometry"], report["classification"] or {}
    flags = c.get("hypertope_flags", {})
    return {
        "group_order": report["group"]["order"],
        "parabolic_orders": report["parabolics"]["orders"],
        "element_counts": g["element_counts"],
        "chamber_count": g.get("chamber_count"),
        "is_geometry": g["is_geometry"],
        "thin": flags.get("thin"),
        "firm": flags.get("firm"),
        "residually_connected": flags.get("residually_connected"),
        "kind": c.get("kind"),
        "aut_order": c.get("aut_order"),
    }


def compare_expected(report: dict, expected: dict) -> list[str]:
    live = summarize(report)
    return [f"{k}: expected {v!r}, got {live.get(k)!r}" for k, v in expected.items() if live.get(k) != v]


# -- main-theorem suite ------------------------------------------------------


@dataclass
class SuiteReport:
    catalog: list = field(default_factory=list)
    search: dict | None = None
    violations: list = field(default_factory=list)
    rank3_checked: int = 0
    rank3_rc_and_firm: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations

    def as_dict(self) -> dict:
        return {
            "catalog": self.catalog,
            "search": self.search,
            "rank3": {"checked": self.rank3_checked, "residually_connected_and_firm": self.rank3_rc_and_firm},
            "theorem_violations": self.violations,
            "ok": self.ok,
        }


def conjugacy_representatives(group: GroupRealization, length: int):
    """Tuples of non-identity elements, one per simultaneous-conjugacy class.

    Each yielded tuple is the lexicographically least member of its class.
    """
    pool = [g for g in group.elements if not g.is_identity()]
    conj = [(inverse(g), g) for g in group.elements]
    seen = set()
    for t in itertools.product(pool, repeat=length):
        if t in seen:
            continue
        for gi, g in conj:
            seen.add(tuple(gi * x * g for x in t))
        yield t


def search_cplus(max_order: int, ranks: Sequence[int] = (3, 4), rank4_max_order: int = 24,
                 degree: int | None = None, signature: Sequence[int] | None = None,
                 element_cap: int = DEFAULT_ELEMENT_CAP) -> dict:
    """Enumerate generating tuples in the built-in groups and test the theorem on every chiral hit.

    ``signature`` filters rank-3 tuples by (o(a1), o(a2), o(a1^-1 a2)).
    """
    counts = {"specs_tried": 0, "generating": 0, "ic_plus_passes": 0, "geometries": 0,
              "chiral_hits": 0, "theorem_confirmations": 0, "rank3_checked": 0, "rank3_rc_and_firm": 0}
    hits, violations, rank3_failures = [], [], []
    for name, group in small_groups(max_order, degree):
        for r in ranks:
            if r == 4 and group.order > rank4_max_order:
                continue
            for R in conjugacy_representatives(group, r - 1):
                if signature is not None and r == 3:
                    sig = (element_order(R[0]), element_order(R[1]), element_order(inverse(R[0]) * R[1]))
                    if sig != tuple(signature):
                        continue
                counts["specs_tried"] += 1
                try:
                    cp = cplus_spec(group, R)
                except RDoesNotGenerate:
                    continue
                counts["generating"] += 1
                if not crit.check_c_plus_group(cp):
                    continue
                counts["ic_plus_passes"] += 1
                geom = tits_build(geometry_from_cplus(cp))
                sys = geom.system
                if not is_geometry(sys):
                    continue
                counts["geometries"] += 1
                rc = is_residually_connected(sys, assume_geometry=True)
                label = {"group": name, "rank": r, "R": [g.cycle_string() for g in R]}
                if r == 3:
                    counts["rank3_checked"] += 1
                    firm = thinness_report(sys, assume_geometry=True).firm
                    if rc.ok and firm:
                        counts["rank3_rc_and_firm"] += 1
                    else:
                        rank3_failures.append(label)
                c = classify(sys, element_cap=element_cap, action=geom.action_group())
                if c.kind == CHIRAL:
                    counts["chiral_hits"] += 1
                    if rc.ok:
                        counts["theorem_confirmations"] += 1
                    else:
                        violations.append(label)
                    hits.append({**label, "element_counts": list(sys.counts_by_type()),
                                 "aut_order": c.aut_order, "confirmed": c.confirmed,
                                 "residually_connected": rc.ok})
    return {"counts": counts, "chiral_hits": hits, "theorem_violations": violations,
            "rank3_failures": rank3_failures}


def verify_main_theorem(catalog_filter: Sequence[str] | None = None, search: bool = False,
                        max_order: int = 60, **search_kwargs) -> SuiteReport:
    """Run the catalog (and optionally the search) and check the theorem on every chiral C+ geometry."""
    suite = SuiteReport()
    for name, spec, expected in load_catalog(catalog_filter):
        report = run_report(spec)
        entry = {
            "name": name,
            "mode": spec.mode,
            "kind": (report["classification"] or {}).get("kind"),
            "residually_connected": report["geometry"].get("residually_connected"),
            "firm": report["geometry"].get("firm"),
            "snapshot_mismatches": compare_expected(report, expected) if expected else [],
        }
        suite.catalog.append(entry)
        if report["verdicts"]["theorem_violation"]:
            suite.violations.append({"name": name, "reasons": report["witnesses"]["THEOREM-VIOLATION"]})
        if spec.mode == "cplus" and report["criteria"]["c_plus_group"]["verdict"] and len(spec.generators) == 2:
            suite.rank3_checked += 1
            if entry["residually_connected"] and entry["firm"]:
                suite.rank3_rc_and_firm += 1
    if search:
        result = search_cplus(max_order, **search_kwargs)
        suite.search = result
        suite.violations.extend(result["theorem_violations"])
        suite.violations.extend({"rank3": f} for f in result["rank3_failures"])
        suite.rank3_checked += result["counts"]["rank3_checked"]
        suite.rank3_rc_and_firm += result["counts"]["rank3_rc_and_firm"]
    return suite


__all__ = [
    "InputSpec", "parse_input", "build", "run_report", "exit_code_for", "dumps_report", "export_dot",
    "load_catalog", "summarize", "compare_expected", "verify_main_theorem", "search_cplus",
    "conjugacy_representatives", "SuiteReport", "EXIT_OK", "EXIT_PARSE", "EXIT_CAP",
    "EXIT_NOT_GEOMETRY", "EXIT_THEOREM", "EXIT_INCONSISTENT", "Pipeline", "catalog_dir", "default_cap",
]
