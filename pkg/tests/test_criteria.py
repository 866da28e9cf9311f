import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import CHIRAL_FIXTURES, P, catalog, group, pipeline, s4, s4_subgroups, tetrahedron_spec
from hypertope.cosets import CosetGeometrySpec, CPlusSpec, cplus_spec, parabolic, tits_build
from hypertope.criteria import (
    buekenhout_hermand_rc,
    cgroup_spec,
    check_c_group,
    check_c_plus_group,
    geometry_from_cgroup,
    phi_surjectivity,
    product_condition,
    r_independent,
    residue_connectivity_via_parabolics,
)
from hypertope.errors import (
    InternalInconsistency,
    NotInvolutions,
    OracleUnavailable,
    RDoesNotGenerate,
    TypeOutOfRange,
)
from hypertope.incidence import is_connected, is_geometry, is_residually_connected
from hypertope.perm import subgroup_from
from hypertope.symmetry import chamber_orbits, orbit_count_oracle


def cg(n, *rho):
    G = group(n, *rho)
    return cgroup_spec(G, [P(r, n) for r in rho])


def cp(n, *alphas):
    G = group(n, *alphas)
    return cplus_spec(G, [P(a, n) for a in alphas])


def s4_triple(*gens):
    G = s4()
    return CosetGeometrySpec(G, tuple(subgroup_from(G, [P(g) for g in gs]) for gs in gens))


def bad_triple():
    """Smallest S4 triple found where the product condition fails."""
    return s4_triple(["(2 3)"], ["(1 2)"], ["(1 2 3)"])


def direct_products(a, b):
    return {tuple(y.images[x] for x in u.images) for u in a.elements for y in b.elements}


def phi_oracle(spec):
    geom = tits_build(spec)
    return orbit_count_oracle(geom.system, geom.action_group())


class TestCGroup:
    def test_s4(self):
        r = check_c_group(cg(4, "(0 1)", "(1 2)", "(2 3)"))
        assert r.verdict and not r.violations and r.flags["independent"]

    def test_single_involution(self):
        assert check_c_group(cg(2, "(0 1)"))

    def test_dependent_generators_fail(self):
        r = check_c_group(cg(4, "(0 1)", "(0 1)(2 3)", "(2 3)"))
        assert not r.verdict and r.violations
        assert not r.flags["independent"]
        assert {"subsets", "expected_order", "actual_order"} <= set(r.violations[0])

    def test_not_involutions(self):
        with pytest.raises(NotInvolutions):
            check_c_group(cg(4, "(0 1 2)", "(2 3)"))

    def test_rho_must_generate(self):
        with pytest.raises(RDoesNotGenerate):
            cgroup_spec(s4(), [P("(0 1)"), P("(1 2)")])

    def test_sampling_agrees(self):
        spec = cg(5, "(0 1)", "(1 2)", "(2 3)", "(3 4)")
        assert check_c_group(spec, sample=20, seed=3).verdict == check_c_group(spec).verdict

    def test_passing_c_groups_are_independent(self):
        for p in (pipeline(n) for n in sorted(catalog())):
            if p.cgroup is not None and check_c_group(p.cgroup):
                rho = p.cgroup.rho
                for i in range(len(rho)):
                    assert rho[i] not in p.cgroup.generated([j for j in range(len(rho)) if j != i]).elements


class TestCPlusGroup:
    def test_a4(self):
        spec = cp(4, "(0 1 2)", "(0 2 3)")
        r = check_c_plus_group(spec)
        assert r.verdict and r.flags["independent"]
        for J, K in itertools.combinations([(0, 1), (0, 2), (1, 2)], 2):
            assert (parabolic(spec, J).elements & parabolic(spec, K).elements) == {spec.group.identity}

    def test_rank_two(self):
        assert check_c_plus_group(cp(5, "(0 1 2 3 4)"))

    def test_repeated_alpha_not_independent(self):
        G = group(4, "(0 1 2)")
        spec = CPlusSpec(G, (P("(0 1 2)"), P("(0 1 2)")))
        assert not r_independent(spec)
        assert check_c_plus_group(spec).flags["independent"] is False

    def test_must_generate(self):
        with pytest.raises(RDoesNotGenerate):
            check_c_plus_group(CPlusSpec(s4(), (P("(0 1 2)"), P("(0 1 2)"))))

    def test_resampled_pairs(self):
        rng = random.Random(0)
        for name in ["a4_hypertope_cplus", "a5_simplex_cplus", "chiral_torus_40"]:
            spec = pipeline(name).cplus
            assert check_c_plus_group(spec)
            subsets = [s for k in range(2, spec.rank + 1) for s in itertools.combinations(range(spec.rank), k)]
            for _ in range(100):
                J, K = rng.choice(subsets), rng.choice(subsets)
                meet = parabolic(spec, J).elements & parabolic(spec, K).elements
                assert meet == parabolic(spec, sorted(set(J) & set(K))).elements


class TestBuekenhoutHermand:
    def test_s4(self):
        r = buekenhout_hermand_rc(tetrahedron_spec(), flag_transitive=True)
        assert r.verdict and not r.warnings

    def test_warns_without_flag_transitivity(self):
        r = buekenhout_hermand_rc(tetrahedron_spec())
        assert r.warnings and r.warnings[0].startswith("PreconditionUnverified")

    def test_generating_family_passes_empty_j(self):
        assert residue_connectivity_via_parabolics(tetrahedron_spec(), [])

    def test_proper_subgroup_fails_at_empty_j(self):
        r = buekenhout_hermand_rc(s4_triple(["(0 1)"], ["(0 1)"], ["(2 3)"]))
        assert not r.verdict
        assert r.violations[0] == {"subsets": [[]], "expected_order": 24, "actual_order": 4}

    def test_agrees_with_direct_check_when_flag_transitive(self):
        checked = 0
        for name in sorted(catalog()):
            geom = pipeline(name).geometry
            if len(chamber_orbits(geom.system, geom.action_group())) != 1:
                continue
            checked += 1
            bh = buekenhout_hermand_rc(geom.spec, flag_transitive=True).verdict
            assert bh == is_residually_connected(geom.system).ok
        assert checked >= 3


class TestProductCondition:
    def test_singleton_j(self):
        for a, b in itertools.product(s4_subgroups()[::4], repeat=2):
            spec = CosetGeometrySpec(s4(), (a, b))
            assert product_condition(spec, [0], 1)
            assert product_condition(spec, [1], 0, "ij")

    def test_tetrahedron(self):
        assert product_condition(tetrahedron_spec(), [1, 2], 0)

    def test_counterexample(self):
        spec = bad_triple()
        assert not product_condition(spec, [0, 1], 2)
        assert not product_condition(spec, [0, 1], 2, orientation="ij")

    def test_errors(self):
        spec = tetrahedron_spec()
        with pytest.raises(TypeOutOfRange):
            product_condition(spec, [0, 5], 1)
        with pytest.raises(ValueError):
            product_condition(spec, [], 1)
        with pytest.raises(ValueError):
            product_condition(spec, [0, 1], 1)
        with pytest.raises(ValueError):
            product_condition(spec, [0], 1, orientation="xy")

    def test_direct_oracle_on_all_s4_triples(self):
        subs = s4_subgroups()
        prods = {(a, b): direct_products(subs[a], subs[b]) for a in range(30) for b in range(30)}
        index = {h.elements: k for k, h in enumerate(subs)}
        for a, b, c in itertools.product(range(30), repeat=3):
            spec = CosetGeometrySpec(s4(), (subs[a], subs[b], subs[c]))
            ab = index[subs[a].elements & subs[b].elements]
            want_ji = (prods[a, c] & prods[b, c]) == prods[ab, c]
            want_ij = (prods[c, a] & prods[c, b]) == prods[c, ab]
            assert product_condition(spec, [0, 1], 2) == want_ji
            assert product_condition(spec, [0, 1], 2, "ij") == want_ij

    @settings(max_examples=60, deadline=None)
    @given(st.tuples(*[st.integers(0, 29)] * 3))
    def test_orientations_agree(self, t):
        subs = s4_subgroups()
        spec = CosetGeometrySpec(s4(), tuple(subs[k] for k in t))
        assert product_condition(spec, [0, 1], 2) == product_condition(spec, [0, 1], 2, "ij")


class TestPhi:
    def test_singletons_surjective(self):
        for name in ["a4_hypertope_cplus", "chiral_torus_20", "s4_tetrahedron_cgroup"]:
            spec = pipeline(name).coset_spec
            oracle = phi_oracle(spec)
            for j in range(spec.rank):
                assert phi_surjectivity(spec, [j], oracle).surjective

    @pytest.mark.parametrize("name", CHIRAL_FIXTURES)
    def test_chiral_proper_subsets(self, name):
        p = pipeline(name)
        spec = p.coset_spec
        oracle = orbit_count_oracle(p.geometry.system, p.geometry.action_group())
        for k in range(spec.rank):
            for J in itertools.combinations(range(spec.rank), k):
                r = phi_surjectivity(spec, J, oracle)
                # a panel stabilizer cannot swap the two chambers on the panel
                assert r.surjective == (k <= spec.rank - 2)

    def test_counterexample_fails_both_ways(self):
        spec = bad_triple()
        r = phi_surjectivity(spec, [0, 1], phi_oracle(spec))
        assert not r.surjective
        assert not r.transitive_on_extensions and not r.products_and_transitive
        assert r.details["product_conditions"] == {"2": False}

    def test_needs_oracle(self):
        with pytest.raises(OracleUnavailable):
            phi_surjectivity(tetrahedron_spec(), [0], None)

    def test_full_type_set_rejected(self):
        spec = tetrahedron_spec()
        with pytest.raises(TypeOutOfRange):
            phi_surjectivity(spec, [0, 1, 2], phi_oracle(spec))

    def test_disagreement_is_reported(self):
        spec = tetrahedron_spec()
        oracle = phi_oracle(spec)

        def lying(ts):
            return 2 if len(ts) == 2 else oracle(ts)

        with pytest.raises(InternalInconsistency):
            phi_surjectivity(spec, [0], lying)

    def test_conditions_agree_on_all_s4_triples(self):
        subs = s4_subgroups()
        for t in itertools.product(range(0, 30, 3), repeat=3):
            spec = CosetGeometrySpec(s4(), tuple(subs[k] for k in t))
            oracle = phi_oracle(spec)
            for J in [(0,), (0, 1), (1, 2)]:
                phi_surjectivity(spec, J, oracle)  # raises on disagreement


class TestResidueConnectivity:
    def test_empty_j_for_cplus(self):
        for name in ["a4_hypertope_cplus", "a5_simplex_cplus", "chiral_torus_52"]:
            assert residue_connectivity_via_parabolics(pipeline(name).coset_spec, [])

    @pytest.mark.parametrize("name", ["a4_tetrahedron_cplus", "a4_hypertope_cplus"])
    def test_a4_vertex(self, name):
        # G_0 is nontrivial but both flag stabilizers G_01, G_02 are trivial,
        # so the sufficient test fails on a residue that is a connected circuit
        geom = pipeline(name).geometry
        assert parabolic(geom.spec, [0, 1]).order == parabolic(geom.spec, [0, 2]).order == 1
        assert not residue_connectivity_via_parabolics(geom.spec, [0])
        assert is_connected(geom.residue_of_base([0]))

    def test_tetrahedron_vertex(self):
        assert residue_connectivity_via_parabolics(tetrahedron_spec(), [0])

    def test_one_directional(self):
        spec = bad_triple()
        geom = tits_build(spec)
        assert is_geometry(geom.system)
        assert not residue_connectivity_via_parabolics(spec, [0])
        assert is_connected(geom.residue_of_base([0]))

    def test_sufficient_on_catalog(self):
        for name in sorted(catalog()):
            geom = pipeline(name).geometry
            for k in range(geom.rank - 1):
                for J in itertools.combinations(range(geom.rank), k):
                    if residue_connectivity_via_parabolics(geom.spec, J):
                        assert is_connected(geom.residue_of_base(J))

    def test_proper_subset_required(self):
        with pytest.raises(TypeOutOfRange):
            residue_connectivity_via_parabolics(tetrahedron_spec(), [0, 1, 2])


def test_cgroup_geometry_parabolics():
    spec = geometry_from_cgroup(cg(4, "(0 1)", "(1 2)", "(2 3)"))
    assert [h.order for h in spec.parabolics] == [6, 4, 6]
