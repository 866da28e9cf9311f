"""Search the built-in groups for chiral C+ geometries and confirm each is residually connected."""
from hypertope.harness import search_cplus

result = search_cplus(20, ranks=(3,))
counts = result["counts"]
print(f"tried {counts['specs_tried']} tuples, {counts['ic_plus_passes']} pass the intersection test")
for hit in result["chiral_hits"]:
    flag = "rc" if hit["residually_connected"] else "NOT rc"
    print(f"  {hit['group']:10} R={hit['R']}  counts={hit['element_counts']}  aut={hit['aut_order']}  {flag}")
print("violations:", result["theorem_violations"] or "none")
