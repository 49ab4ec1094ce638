"""Shared test utilities: corpus loading, random instance generators, and the
independent oracles the main implementations are checked against.  Every
oracle here is deliberately naive and shares no code path with the module it
validates."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from pathlib import Path

from vassbound import lp
from vassbound.core import Vass, validate
from vassbound.parser import load

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


def corpus_vass(name: str) -> Vass:
    return load(str(CORPUS / f"{name}.vass"))


def corpus_path(name: str) -> str:
    return str(CORPUS / f"{name}.vass")


# ---------------------------------------------------------------------------
# random instances


def random_vass(rng: random.Random, max_states: int = 4, dimension: int = 2,
                density: float = 0.45) -> Vass:
    nstates = rng.randint(1, max_states)
    states = [f"s{i}" for i in range(nstates)]
    transitions = []
    seen = set()
    for p in states:
        for q in states:
            if rng.random() < density:
                update = tuple(rng.choice((-1, 0, 1)) for _ in range(dimension))
                if (p, update, q) not in seen:
                    seen.add((p, update, q))
                    transitions.append((p, update, q))
    return validate(dimension, states, transitions)


def random_strongly_connected_vass(rng: random.Random, max_states: int = 3,
                                   dimension: int = 2, extra: int = 3) -> Vass:
    """A ring through all states plus a few random extra transitions."""
    nstates = rng.randint(1, max_states)
    states = [f"s{i}" for i in range(nstates)]
    transitions = []
    seen = set()

    def add(p, q):
        update = tuple(rng.choice((-1, 0, 1)) for _ in range(dimension))
        if (p, update, q) not in seen:
            seen.add((p, update, q))
            transitions.append((p, update, q))

    for i in range(nstates):
        add(states[i], states[(i + 1) % nstates])
    for _ in range(rng.randint(0, extra)):
        add(rng.choice(states), rng.choice(states))
    return validate(dimension, states, transitions)


# ---------------------------------------------------------------------------
# SCC oracle: transitive closure by breadth-first reachability


def scc_oracle(vass: Vass) -> set[frozenset[str]]:
    succ = {s: set() for s in vass.states}
    for t in vass.transitions:
        succ[t.source].add(t.target)

    def reach(start: str) -> set[str]:
        seen = {start}
        frontier = [start]
        while frontier:
            node = frontier.pop()
            for nxt in succ[node]:
                if nxt not in seen:
                    seen.add(nxt)
                    frontier.append(nxt)
        return seen

    reachable = {s: reach(s) for s in vass.states}
    comps = set()
    for s in vass.states:
        comp = frozenset(q for q in vass.states if q in reachable[s] and s in reachable[q])
        comps.add(comp)
    return comps


# ---------------------------------------------------------------------------
# LP oracle: vertex enumeration with exact Gaussian elimination


def gauss_solve(rows: list[list[Fraction]], rhs: list[Fraction]):
    """Solve a square exact linear system; None if singular."""
    n = len(rows)
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            return None
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = aug[col][col]
        aug[col] = [x / inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [x - factor * y for x, y in zip(aug[r], aug[col])]
    return [aug[r][n] for r in range(n)]


def lp_vertex_oracle(problem: lp.LinearProgram):
    """(feasible, optimal value) by enumerating all candidate vertices, i.e.
    intersections of n constraint hyperplanes.  Sound for LPs with a bounded
    feasible region."""
    n = len(problem.variables)
    cons = problem.constraints
    sense, objective = problem.objective
    best = None
    feasible = False
    for subset in itertools.combinations(range(len(cons)), n):
        rows = [list(cons[i].coeffs) for i in subset]
        rhs = [cons[i].rhs for i in subset]
        point = gauss_solve(rows, rhs)
        if point is None:
            continue
        if not lp.check_point(problem, point):
            continue
        feasible = True
        value = lp.dot(objective, point)
        if best is None:
            best = value
        elif sense == lp.MAXIMIZE:
            best = max(best, value)
        else:
            best = min(best, value)
    return feasible, best


def random_bounded_lp(rng: random.Random) -> lp.LinearProgram:
    """Random bounded LP with at most 4 variables and 6 constraints: per-
    variable lower bounds plus one positive-combination cap guarantee
    boundedness, the rest are random rows."""
    n = rng.randint(1, 4)
    names = tuple(f"x{i}" for i in range(n))
    cons = []
    for i in range(n):
        row = [Fraction(0)] * n
        row[i] = Fraction(1)
        cons.append(lp.constraint(row, lp.GEQ, rng.randint(-3, 1)))
    cap = [Fraction(rng.randint(1, 3)) for _ in range(n)]
    cons.append(lp.constraint(cap, lp.LEQ, rng.randint(2, 12)))
    while len(cons) < 6 and rng.random() < 0.7:
        row = [Fraction(rng.randint(-3, 3)) for _ in range(n)]
        if all(x == 0 for x in row):
            continue
        cons.append(lp.constraint(row, lp.LEQ, rng.randint(-4, 8)))
    objective = [Fraction(rng.randint(-4, 4)) for _ in range(n)]
    sense = rng.choice((lp.MAXIMIZE, lp.MINIMIZE))
    return lp.program(sense, objective, names, cons)


# ---------------------------------------------------------------------------
# two-dimensional classification oracle: exact ray geometry
#
# Covering normals form a closed convex cone N.  In the plane, every boundary
# ray of N (and of its intersection with the nonnegative quadrant) is either
# perpendicular to some effect or lies on a coordinate axis, so the candidate
# ray set below contains representatives of every extreme ray.  A strictly
# positive covering normal exists iff among the covering nonnegative
# candidates some has a positive first coordinate and some has a positive
# second coordinate (their sum is then positive, covering and nonnegative).


def classify_2d_oracle(effects) -> str:
    effs = [tuple(e) for e in effects]
    base = {(1, 0), (-1, 0), (0, 1), (0, -1)}
    for v in effs:
        if v != (0, 0):
            base.add((-v[1], v[0]))
            base.add((v[1], -v[0]))

    def covers(c):
        return all(v[0] * c[0] + v[1] * c[1] <= 0 for v in effs)

    covering = [c for c in base if covers(c)]
    nonneg = [c for c in covering if c[0] >= 0 and c[1] >= 0]
    has_pos = any(c[0] > 0 for c in nonneg) and any(c[1] > 0 for c in nonneg)
    if has_pos:
        return "C"
    if nonneg:
        return "D"
    if covering:
        return "B"
    return "A"


# ---------------------------------------------------------------------------
# report mutations: single-field corruptions that are guaranteed to make a
# valid report semantically invalid (no-ops are never produced)


def applicable_mutations(doc: dict) -> list[tuple[str, callable]]:
    """List of (label, mutator) pairs applicable to a parsed JSON report doc.
    Each mutator edits a deep copy in place."""
    from fractions import Fraction

    muts: list[tuple[str, callable]] = []

    def scc_with(key):
        return [i for i, s in enumerate(doc.get("sccs", [])) if s.get(key)]

    for i in scc_with("good_normal"):
        def zero_entry(d, i=i):
            d["sccs"][i]["good_normal"][0] = "0"

        def negate_entry(d, i=i):
            value = Fraction(d["sccs"][i]["good_normal"][0])
            d["sccs"][i]["good_normal"][0] = str(-value)

        muts.append((f"scc{i}.good_normal[0] := 0", zero_entry))
        muts.append((f"scc{i}.good_normal[0] negated", negate_entry))

        def bogus_neutral(d, i=i):
            dim = len(d["sccs"][i]["good_normal"])
            d["sccs"][i]["neutral"].append([len(d["states"]) + 1] * dim)

        muts.append((f"scc{i}.neutral gains bogus vector", bogus_neutral))
        if doc["sccs"][i]["neutral"]:
            def drop_neutral(d, i=i):
                d["sccs"][i]["neutral"].pop()

            muts.append((f"scc{i}.neutral loses an element", drop_neutral))

    for i in scc_with("cover_normal"):
        def zero_cover(d, i=i):
            d["sccs"][i]["cover_normal"] = ["0"] * len(d["sccs"][i]["cover_normal"])

        muts.append((f"scc{i}.cover_normal := 0", zero_cover))

    def wlr_sites():
        sites = []
        for i, s in enumerate(doc.get("sccs", [])):
            if s.get("wlr"):
                sites.append(("sccs", i))
        for i, _ in enumerate(doc.get("global_wlr") or []):
            sites.append(("global_wlr", i))
        return sites

    for where, i in wlr_sites():
        def get(d, where=where, i=i):
            return d[where][i]["wlr"] if where == "sccs" else d[where][i]

        def kill_epsilon(d, get=get):
            get(d)["epsilon"] = "0"

        muts.append((f"{where}[{i}].wlr.epsilon := 0", kill_epsilon))

        def negate_epsilon(d, get=get):
            entry = get(d)
            entry["epsilon"] = str(-Fraction(entry["epsilon"]))

        muts.append((f"{where}[{i}].wlr.epsilon negated", negate_epsilon))

    def tree_sites():
        sites = []

        def walk(node, path):
            if node is None:
                return
            if node.get("normal"):
                sites.append(path)
            for j, child in enumerate(node.get("children", [])):
                walk(child, path + (j,))

        for i, s in enumerate(doc.get("sccs", [])):
            walk(s.get("derivation"), (i,))
        return sites

    for path in tree_sites():
        def zero_tree_normal(d, path=path):
            node = d["sccs"][path[0]]["derivation"]
            for j in path[1:]:
                node = node["children"][j]
            node["normal"][0] = "0"

        muts.append((f"derivation{list(path)}.normal[0] := 0", zero_tree_normal))

    def flip_fingerprint(d):
        fp = d["fingerprint"]
        d["fingerprint"] = ("0" if fp[0] != "0" else "1") + fp[1:]

    muts.append(("fingerprint flipped", flip_fingerprint))
    return muts


def mutated_docs(doc: dict, rng, count: int):
    """Yield (label, corrupted JSON text) pairs, sampling the menu."""
    import copy
    import json

    menu = applicable_mutations(doc)
    for _ in range(count):
        label, mutator = rng.choice(menu)
        clone = copy.deepcopy(doc)
        mutator(clone)
        yield label, json.dumps(clone)


def random_gadget_vass(rng: random.Random, dimension: int = 2) -> Vass:
    """Random strongly connected instances biased toward compensating loop
    pairs, so polynomial (degree >= 2) verdicts actually occur: per-state
    self-loops drawn from a reversible pair, ring connectors mostly neutral
    or decreasing."""
    nstates = rng.randint(2, 3)
    states = [f"g{i}" for i in range(nstates)]
    pair = [(-1, 1), (1, -1)] if dimension == 2 else [(-1, 1) + (0,) * (dimension - 2),
                                                      (1, -1) + (0,) * (dimension - 2)]
    connector_pool = [(0,) * dimension]
    for i in range(dimension):
        dec = [0] * dimension
        dec[i] = -1
        connector_pool.append(tuple(dec))
    transitions = []
    seen = set()

    def add(p, update, q):
        if (p, update, q) not in seen:
            seen.add((p, update, q))
            transitions.append((p, update, q))

    for i, s in enumerate(states):
        add(s, pair[i % 2] if rng.random() < 0.8 else rng.choice(pair), s)
    for i in range(nstates):
        add(states[i], rng.choice(connector_pool), states[(i + 1) % nstates])
    if rng.random() < 0.4:
        p, q = rng.choice(states), rng.choice(states)
        add(p, tuple(rng.choice((-1, 0, 1)) for _ in range(dimension)), q)
    return validate(dimension, states, transitions)


def random_mixed_scc_vass(rng: random.Random, dimension: int = 2) -> Vass:
    """Half plain random strongly connected instances, half compensating
    gadgets; both families are strongly connected by construction."""
    if rng.random() < 0.5:
        return random_strongly_connected_vass(rng, max_states=3, dimension=dimension)
    return random_gadget_vass(rng, dimension)
