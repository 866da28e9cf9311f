import itertools
import random

import pytest

from conftest import tetrahedron
from hypertope.errors import InvalidIncidence, NotAFlag, NotAGeometry
from hypertope.incidence import (
    IncidenceSystem,
    chambers,
    chambers_and_adjacency,
    export_dot,
    flags_of_type,
    is_connected,
    is_flag,
    is_geometry,
    is_residually_connected,
    residue,
    thinness_report,
    type_subsets,
    validate_incidence_system,
)


def system(types, elements, pairs):
    return validate_incidence_system({"types": types, "elements": elements, "incidence": pairs})


def hexagon():
    """6-cycle alternating types a and b."""
    els = [(f"a{k}", "a") for k in range(3)] + [(f"b{k}", "b") for k in range(3)]
    pairs = [(f"a{k}", f"b{k}") for k in range(3)] + [(f"a{(k + 1) % 3}", f"b{k}") for k in range(3)]
    return system(["a", "b"], els, pairs)


def k33():
    els = [(f"a{k}", 0) for k in range(3)] + [(f"b{k}", 1) for k in range(3)]
    return system([0, 1], els, [(f"a{i}", f"b{j}") for i in range(3) for j in range(3)])


def two_tetrahedra():
    t = tetrahedron().system
    n = len(t)
    els = [(k, t.type_of(k)) for k in range(n)] + [(k + n, t.type_of(k)) for k in range(n)]
    pairs = [(x, y) for x, y in t.edges()] + [(x + n, y + n) for x, y in t.edges()]
    return system(t.types, els, pairs)


def all_flags(sys):
    for ts in type_subsets(sys.rank):
        yield from flags_of_type(sys, ts)


class TestValidation:
    def test_empty_is_valid(self):
        s = validate_incidence_system({"types": [0, 1], "elements": [], "incidence": []})
        assert len(s) == 0 and s.rank == 2

    def test_same_type_incidence(self):
        with pytest.raises(InvalidIncidence) as exc:
            system([0, 1], [("x", 0), ("y", 0)], [("x", "y")])
        assert any("same type" in v for v in exc.value.violations)

    def test_collects_every_violation(self):
        cand = {"types": [0, 1], "elements": [("x", 0), ("y", 1), ("z", 7)],
                "incidence": {"x": ["y"], "y": [], "z": ["w"]}}
        with pytest.raises(InvalidIncidence) as exc:
            validate_incidence_system(cand)
        text = " | ".join(exc.value.violations)
        assert "asymmetric" in text and "unknown type" in text and "unknown element" in text

    def test_built_tetrahedron_revalidates(self):
        s = validate_incidence_system(tetrahedron().system)
        assert s.counts_by_type() == (4, 6, 4)

    def test_adjacency_matrix_symmetric(self):
        a = tetrahedron().system.adjacency_matrix
        assert (a == a.T).all() and a.trace() == 0


class TestGeometry:
    def test_single_chamber(self):
        s = system([0, 1, 2], [("a", 0), ("b", 1), ("c", 2)], [("a", "b"), ("b", "c"), ("a", "c")])
        assert is_geometry(s)
        assert chambers(s) == [(0, 1, 2)]

    def test_isolated_element_is_witness(self):
        s = system([0, 1], [("a", 0), ("b", 1), ("c", 0)], [("a", "b")])
        v = is_geometry(s)
        assert not v and v.witness == (2,)

    def test_tetrahedron(self):
        assert is_geometry(tetrahedron().system)

    def test_empty_system(self):
        assert not is_geometry(IncidenceSystem([0], [], [], []))
        assert is_geometry(IncidenceSystem([], [], [], []))


class TestResidues:
    def test_empty_flag_gives_everything(self):
        t = tetrahedron().system
        r = residue(t, ())
        assert r.counts_by_type() == t.counts_by_type()
        assert r.neighbours == t.neighbours

    def test_vertex_and_vertex_face(self):
        t = tetrahedron().system
        v = t.elements_by_type[0][0]
        assert residue(t, [v]).counts_by_type() == (3, 3)
        f = next(y for y in t.elements_by_type[2] if y in t.neighbours[v])
        assert residue(t, [v, f]).counts_by_type() == (2,)

    def test_not_a_flag(self):
        t = tetrahedron().system
        a, b = t.elements_by_type[0][:2]
        with pytest.raises(NotAFlag):
            residue(t, [a, b])

    def test_residue_composition(self):
        t = tetrahedron().system
        flags = list(all_flags(t))
        for f, g in itertools.product(flags, repeat=2):
            if set(f) & set(g) or not is_flag(t, f + g):
                continue
            r = residue(t, f)
            local = [r.origin.index(x) for x in g]
            rr = residue(r, local)
            assert sorted(r.origin[x] for x in rr.origin) == list(residue(t, f + g).origin)


class TestConnectivity:
    def test_single_element(self):
        assert is_connected(system([0], [("a", 0)], []))

    def test_two_unrelated(self):
        assert not is_connected(system([0, 1], [("a", 0), ("b", 1)], []))

    def test_rank_one_vacuous(self):
        s = system([0], [("a", 0), ("b", 0)], [])
        assert is_residually_connected(s)

    def test_two_tetrahedra(self):
        s = two_tetrahedra()
        assert is_geometry(s)
        v = is_residually_connected(s)
        assert not v and v.witness == ()

    def test_tetrahedron_rc_implies_residues_connected(self):
        t = tetrahedron().system
        assert is_residually_connected(t) and is_connected(t)
        rng = random.Random(1)
        flags = [f for f in all_flags(t) if len(f) <= t.rank - 2]
        for f in rng.sample(flags, 10):
            assert is_connected(residue(t, f))

    def test_requires_geometry(self):
        s = system([0, 1], [("a", 0), ("b", 1), ("c", 0)], [("a", "b")])
        with pytest.raises(NotAGeometry):
            is_residually_connected(s)
        with pytest.raises(NotAGeometry):
            thinness_report(s)


class TestThinness:
    def test_tetrahedron_thin(self):
        r = thinness_report(tetrahedron().system)
        assert r.thin and r.firm and r.min_size == r.max_size == 2

    def test_complete_bipartite(self):
        r = thinness_report(k33())
        assert r.firm and not r.thin and r.max_size == 3

    def test_pendant(self):
        s = system([0, 1], [("a", 0), ("b", 1), ("c", 0)], [("a", "b"), ("c", "b")])
        # a and c are pendant vertices: their residues hold one element
        r = thinness_report(s)
        assert not r.firm and r.min_size == 1


class TestChambers:
    def test_tetrahedron_adjacency(self):
        chs, adj = chambers_and_adjacency(tetrahedron().system)
        assert len(chs) == 24
        assert all(len(adj[c][i]) == 1 for c in range(24) for i in range(3))

    def test_thin_adjacency_is_involution(self):
        chs, adj = chambers_and_adjacency(tetrahedron().system)
        for c in range(len(chs)):
            for i in range(3):
                (d,) = adj[c][i]
                assert adj[d][i] == [c]
                assert sum(a != b for a, b in zip(chs[c], chs[d])) == 1

    def test_single_chamber(self):
        s = system([0, 1], [("a", 0), ("b", 1)], [("a", "b")])
        chs, adj = chambers_and_adjacency(s)
        assert chs == [(0, 1)] and adj == [[[], []]]

    def test_hexagon(self):
        chs, adj = chambers_and_adjacency(hexagon())
        assert len(chs) == 6
        assert all(len(adj[c][0]) == 1 and len(adj[c][1]) == 1 for c in range(6))


class TestDot:
    def test_labels_and_edges(self):
        text = export_dot(hexagon(), "hex")
        assert text.startswith("graph hex {")
        assert text.count(" -- ") == 6
        assert 'label="a:0"' in text and 'label="b:2"' in text

    def test_deterministic(self):
        t = tetrahedron().system
        assert export_dot(t) == export_dot(t)
