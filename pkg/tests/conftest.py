import functools
import itertools

import pytest

from hypertope.cosets import CosetGeometrySpec, tits_build
from hypertope.harness import build, load_catalog
from hypertope.perm import close_under_generators, parse_permutation, subgroup_from


def P(text, n=4):
    return parse_permutation(text, n)


def group(n, *gens):
    return close_under_generators(n, [P(g, n) for g in gens])


@functools.lru_cache(maxsize=None)
def s4():
    return group(4, "(0 1)", "(1 2)", "(2 3)")


@functools.lru_cache(maxsize=None)
def s4_subgroups():
    """All 30 subgroups of S4, ordered by size then elements."""
    G = s4()
    found = {}
    for a, b in itertools.product(G.elements, repeat=2):
        h = subgroup_from(G, [a, b])
        found.setdefault(h.elements, h)
    return tuple(sorted(found.values(), key=lambda h: (h.order, sorted(h.elements))))


def tetrahedron_spec():
    G = s4()
    gens = [["(1 2)", "(2 3)"], ["(0 1)", "(2 3)"], ["(0 1)", "(1 2)"]]
    return CosetGeometrySpec(G, tuple(subgroup_from(G, [P(g) for g in sub]) for sub in gens))


@functools.lru_cache(maxsize=None)
def tetrahedron():
    return tits_build(tetrahedron_spec())


@functools.lru_cache(maxsize=None)
def catalog():
    return {name: (spec, expected) for name, spec, expected in load_catalog()}


@functools.lru_cache(maxsize=None)
def pipeline(name):
    return build(catalog()[name][0])


CHIRAL_FIXTURES = ["chiral_hexagonal_42", "chiral_hypertope_21", "chiral_torus_20", "chiral_torus_40",
                   "chiral_torus_52"]


@pytest.fixture
def tet():
    return tetrahedron()


# acceptance results, printed once at the end of the run
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[key])
