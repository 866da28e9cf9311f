"""The tetrahedron from the Coxeter generators of S4, as a regular hypertope."""
from hypertope import check_c_group, classify, parse_input, run_report
from hypertope.harness import build

TEXT = '{"degree": 4, "mode": "cgroup", "generators": ["(0 1)", "(1 2)", "(2 3)"]}'

spec = parse_input(TEXT)
p = build(spec)
print("group order     ", p.group.order)
print("parabolic orders", [h.order for h in p.coset_spec.parabolics])
print("C-group         ", bool(check_c_group(p.cgroup)))
print("element counts  ", p.geometry.system.counts_by_type())

c = classify(p.geometry.system, action=p.geometry.action_group())
print("classification  ", c.label, "aut order", c.aut_order)
print("regular         ", run_report(spec)["verdicts"]["regular_hypertope"])
