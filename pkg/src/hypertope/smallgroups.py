"""Built-in list of small permutation groups used by the search harness.

Each entry is (name, degree, generators in cycle notation). The list favours
groups carrying rank-3 and rank-4 C+ structures: dihedral and alternating
groups, and the rotation groups Z_m : C_k (x -> u*x + b on Z_m) of the toroidal
maps, which are where small chiral examples live.
"""

from __future__ import annotations

from functools import lru_cache

from .perm import GroupRealization, Permutation, close_under_generators, parse_permutation


def _affine(m: int, u: int) -> list[str]:
    """Generators of {x -> u^k x + b} acting on Z_m."""
    shift = Permutation([(x + 1) % m for x in range(m)])
    mult = Permutation([(u * x) % m for x in range(m)])
    return [shift.cycle_string(), mult.cycle_string()]


def _dihedral(n: int) -> list[str]:
    rot = Permutation([(x + 1) % n for x in range(n)])
    ref = Permutation([(-x) % n for x in range(n)])
    return [rot.cycle_string(), ref.cycle_string()]


SMALL_GROUPS = (
    ("C5", 5, ["(0 1 2 3 4)"]),
    ("S3", 3, ["(0 1)", "(0 1 2)"]),
    ("D4", 4, _dihedral(4)),
    ("D5", 5, _dihedral(5)),
    ("D6", 6, _dihedral(6)),
    ("A4", 4, ["(0 1 2)", "(1 2 3)"]),
    ("AGL(1,5)", 5, _affine(5, 2)),
    ("7:3", 7, _affine(7, 2)),
    ("S4", 4, ["(0 1)", "(0 1 2 3)"]),
    ("C2xS4", 6, ["(0 1)", "(0 1 2 3)", "(4 5)"]),
    ("S3xS3", 6, ["(0 1)", "(0 1 2)", "(3 4)", "(3 4 5)"]),
    ("13:3", 13, _affine(13, 3)),
    ("Z10:C4", 10, _affine(10, 3)),
    ("AGL(1,7)", 7, _affine(7, 3)),
    ("13:4", 13, _affine(13, 5)),
    ("11:5", 11, _affine(11, 3)),
    ("A5", 5, ["(0 1 2)", "(0 1 2 3 4)"]),
)


@lru_cache(maxsize=None)
def small_group(name: str) -> GroupRealization:
    for n, degree, gens in SMALL_GROUPS:
        if n == name:
            return close_under_generators(degree, [parse_permutation(g, degree) for g in gens])
    raise KeyError(name)


def small_groups(max_order: int | None = None, degree: int | None = None):
    """(name, group) pairs in list order, filtered by order and degree."""
    out = []
    for name, deg, _ in SMALL_GROUPS:
        if degree is not None and deg != degree:
            continue
        g = small_group(name)
        if max_order is not None and g.order > max_order:
            continue
        out.append((name, g))
    return out
