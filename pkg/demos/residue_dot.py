"""Print the type-0 residue of two A4 geometries as DOT: a hexagon and a square.

Pipe into `dot -Tpng` to draw it.
"""
import json

from hypertope import parse_input
from hypertope.harness import build, export_dot
from hypertope.perm import element_order, inverse

for gens in (["(0 1 2)", "(1 2 3)"], ["(0 1 2)", "(0 2 3)"]):
    p = build(parse_input(json.dumps({"degree": 4, "mode": "cplus", "generators": gens})))
    a1, a2 = p.cplus.R
    print(f"// R = {gens}, order of a1^-1 a2 = {element_order(inverse(a1) * a2)}")
    print(export_dot(p.geometry, [0]))
