"""Small S4 subgroup triples where the coset criteria fail, with the reason."""
from hypertope import CosetGeometrySpec, is_geometry, product_condition, subgroup_from, tits_build
from hypertope import buekenhout_hermand_rc, parse_permutation
from hypertope.perm import close_under_generators


def P(text):
    return parse_permutation(text, 4)


S4 = close_under_generators(4, [P("(0 1)"), P("(1 2)"), P("(2 3)")])


def triple(*gens):
    return CosetGeometrySpec(S4, tuple(subgroup_from(S4, [P(g) for g in gs]) for gs in gens))


spec = triple(["(2 3)"], ["(1 2)"], ["(1 2 3)"])
print("product condition at J={0,1}, i=2:", product_condition(spec, [0, 1], 2))

spec = triple(["(2 3)"], ["(1 2)"], ["(0 1)"], ["(0 1)(2 3)"])
v = is_geometry(tits_build(spec).system)
print("four small parabolics form a geometry:", bool(v), "witness", v.witness)

spec = triple(["(0 1)"], ["(0 1)"], ["(2 3)"])
r = buekenhout_hermand_rc(spec)
print("parabolic connectivity test:", r.verdict, r.violations[0])
print("warnings:", r.warnings)
