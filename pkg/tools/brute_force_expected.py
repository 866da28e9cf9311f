"""Regenerate the catalog ``*.expected.json`` snapshots by brute force.

Deliberately independent of the ``hypertope`` package: permutations are plain
tuples, cosets are frozensets, incidence is set intersection, and the
automorphism group is found by extending a chamber-to-chamber map (valid for
thin, residually connected geometries). Run from the repository root:

    python3 tools/brute_force_expected.py [--check]
"""

import argparse
import itertools
import json
import re
import sys
from pathlib import Path

CATALOG = Path(__file__).resolve().parent.parent / "src" / "hypertope" / "catalog"


def parse(text, n):
    img = list(range(n))
    for cyc in re.findall(r"\(([^()]*)\)", text):
        pts = [int(x) for x in cyc.replace(",", " ").split()]
        for a, b in zip(pts, pts[1:] + pts[:1]):
            img[a] = b
    return tuple(img)


def mul(p, q):  # p then q
    return tuple(q[x] for x in p)


def inv(p):
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def closure(gens, n):
    e = tuple(range(n))
    seen, todo = {e}, [e]
    while todo:
        g = todo.pop()
        for s in gens:
            h = mul(g, s)
            if h not in seen:
                seen.add(h)
                todo.append(h)
    return seen


def parabolics(doc):
    n = doc["degree"]
    gens = [parse(g, n) for g in doc["generators"]]
    if doc["mode"] == "explicit":
        return closure(gens, n), [closure([parse(g, n) for g in sub], n) for sub in doc["subgroups"]]
    if doc["mode"] == "cgroup":
        r = len(gens)
        return closure(gens, n), [closure([gens[j] for j in range(r) if j != i], n) for i in range(r)]
    alpha = [tuple(range(n))] + gens
    r = len(alpha)
    subs = []
    for i in range(r):
        if i == 0:
            hs = [mul(inv(alpha[1]), alpha[j]) for j in range(2, r)]
        else:
            hs = [alpha[j] for j in range(1, r) if j != i]
        subs.append(closure(hs, n))
    return closure(gens, n), subs


def geometry(group, subs):
    elements = []  # (type, frozenset)
    for i, h in enumerate(subs):
        seen = set()
        for g in sorted(group):
            c = frozenset(mul(x, g) for x in h)
            if c not in seen:
                seen.add(c)
                elements.append((i, c))
    m = len(elements)
    adj = [set() for _ in range(m)]
    for a, b in itertools.combinations(range(m), 2):
        if elements[a][0] != elements[b][0] and elements[a][1] & elements[b][1]:
            adj[a].add(b)
            adj[b].add(a)
    return [t for t, _ in elements], adj


def all_flags(types, adj):
    out = [()]
    frontier = [()]
    while frontier:
        nxt = []
        for f in frontier:
            for x in range(len(types)):
                if f and x <= f[-1]:
                    continue
                if all(x in adj[y] and types[x] != types[y] for y in f):
                    nxt.append(f + (x,))
        out.extend(nxt)
        frontier = nxt
    return out


def connected(nodes, adj):
    nodes = set(nodes)
    if not nodes:
        return True
    start = next(iter(nodes))
    seen, todo = {start}, [start]
    while todo:
        x = todo.pop()
        for y in adj[x] & nodes:
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return seen == nodes


def analyse(doc):
    group, subs = parabolics(doc)
    r = len(subs)
    types, adj = geometry(group, subs)
    flags = all_flags(types, adj)
    flagset = set(flags)
    chambers = [f for f in flags if len(f) == r]
    maximal = [f for f in flags if not any(
        all(x in adj[y] for y in f) and types[x] not in {types[y] for y in f} for x in range(len(types)))]
    is_geo = all(len(f) == r for f in maximal) and (r == 0 or bool(chambers))
    out = {
        "group_order": len(group),
        "parabolic_orders": [len(h) for h in subs],
        "element_counts": [types.count(i) for i in range(r)],
        "chamber_count": None,
        "is_geometry": is_geo,
    }
    if not is_geo:
        return out
    out["chamber_count"] = len(chambers)

    def res(f):
        return {x for x in range(len(types)) if all(x in adj[y] and types[x] != types[y] for y in f)}

    panels = [f for f in flags if len(f) == r - 1]
    sizes = [len(res(f)) for f in panels]
    thin = all(s == 2 for s in sizes)
    firm = all(s >= 2 for s in sizes)
    rc = all(connected(res(f), adj) for f in flags if len(f) <= r - 2)
    out.update({"thin": thin, "firm": firm, "residually_connected": rc, "kind": None, "aut_order": None})
    if not (thin and rc):
        return out

    # chamber graph: neighbour of c across type i
    def across(c, i):
        rest = tuple(x for x in c if types[x] != i)
        (y,) = [x for x in res(rest) if x not in c]
        return tuple(sorted(rest + (y,)))

    base = chambers[0]
    auts = []
    for target in chambers:
        phi = dict(zip(sorted(base, key=types.__getitem__), sorted(target, key=types.__getitem__)))
        cmap, todo, ok = {base: target}, [base], True
        while todo and ok:
            c = todo.pop()
            for i in range(r):
                d, e = across(c, i), across(cmap[c], i)
                (u,) = [x for x in d if x not in c]
                (v,) = [x for x in e if x not in cmap[c]]
                if phi.get(u, v) != v:
                    ok = False
                    break
                phi[u] = v
                if d not in cmap:
                    cmap[d] = e
                    todo.append(d)
                elif cmap[d] != e:
                    ok = False
                    break
        if not ok or len(phi) != len(types) or len(set(phi.values())) != len(types):
            continue
        if all(phi[y] in adj[phi[x]] for x in range(len(types)) for y in adj[x]):
            if all(tuple(sorted(phi[x] for x in f)) in flagset for f in chambers):
                auts.append(phi)
    orbit_of = {}
    for c in chambers:
        if c in orbit_of:
            continue
        for phi in auts:
            orbit_of.setdefault(tuple(sorted(phi[x] for x in c)), c)
    orbits = len(set(orbit_of.values()))
    if orbits == 1:
        kind = "FlagTransitive"
    elif orbits == 2 and all(orbit_of[c] != orbit_of[across(c, i)] for c in chambers for i in range(r)):
        kind = "Chiral"
    else:
        kind = "Neither"
    out["kind"] = kind
    out["aut_order"] = len(auts)
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--check", action="store_true", help="compare instead of writing")
    args = ap.parse_args(argv)
    bad = 0
    for path in sorted(CATALOG.glob("*.json")):
        if path.name.endswith(".expected.json"):
            continue
        result = analyse(json.loads(path.read_text()))
        target = path.with_name(path.stem + ".expected.json")
        text = json.dumps(result, indent=2) + "\n"
        if args.check:
            if not target.exists() or target.read_text() != text:
                print(f"MISMATCH {path.stem}")
                bad += 1
        else:
            target.write_text(text)
        print(path.stem, json.dumps(result))
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
