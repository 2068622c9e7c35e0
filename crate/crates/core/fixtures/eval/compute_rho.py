#!/usr/bin/env python3
"""Independent reference value for the bundled judgment fixture.

Recomputes each pair's spatial similarity from the context file with
networkx shortest paths over hand-written graphs, then takes Spearman's
rho with scipy. Shares no code with the Rust implementation.

Usage: python3 compute_rho.py > expected_rho.txt
"""
import itertools
import os

import networkx as nx
from scipy.stats import spearmanr

HERE = os.path.dirname(os.path.abspath(__file__))

# scenes each fixture query invokes, worked out by hand from the .mdx files
SCENES = {
    "q1": [("Zone1", "meet", "Zone2")],
    "q2": [("Zone2", "overlap", "Zone3")],
    "q3": [("Zone4", "disjoint", "Zone5")],
    "q4": [("Zone3", "meet", "Zone4")],
    "q5": [("Zone1", "disjoint", "Zone3")],
}

GROUP = {"disjoint": 1, "meet": 2, "overlap": 2, "equal": 3, "covers": 3,
         "coveredBy": 3, "contains": 3, "inside": 3}
TOPO_EDGES = [("disjoint", "meet"), ("meet", "overlap"), ("overlap", "covers"),
              ("overlap", "coveredBy"), ("overlap", "equal"), ("covers", "contains"),
              ("coveredBy", "inside"), ("equal", "covers"), ("equal", "coveredBy")]
COMPASS = ["north", "northeast", "east", "southeast", "south", "southwest", "west", "northwest"]
OPPOSITE = {d: COMPASS[(i + 4) % 8] for i, d in enumerate(COMPASS)}
METRIC_ORDINAL = {"equal": 0, "near": 1, "medium": 2, "far": 3}


def topo_graph():
    g = nx.Graph()
    for a, b in TOPO_EDGES:
        g.add_edge(a, b, weight=2 if GROUP[a] == GROUP[b] else 3)
    return g


def direction_graph():
    g = nx.Graph()
    for i, d in enumerate(COMPASS):
        g.add_edge(d, COMPASS[(i + 1) % 8], weight=2)
        g.add_edge("same", d, weight=2)
    return g


def load_context(path):
    orient, metric = {}, {}
    with open(path) as f:
        for raw in f:
            fields = raw.split("#")[0].split()
            if not fields:
                continue
            if fields[0] == "orientation":
                _, a, b, d = fields
                orient[(a, b)] = d
                orient.setdefault((b, a), OPPOSITE[d])
            elif fields[0] == "metric":
                _, a, b, c = fields
                metric[frozenset((a, b))] = c
    return orient, metric


def main():
    orient, metric = load_context(os.path.join(HERE, "..", "example", "example.ctx"))
    tg, dg = topo_graph(), direction_graph()

    def cost(g, a, b):
        return nx.shortest_path_length(g, a, b, weight="weight")

    def distance(qa, qb):
        total = 0
        for (a1, r1, b1), (a2, r2, b2) in itertools.product(SCENES[qa], SCENES[qb]):
            total += cost(tg, r1, r2)
            total += cost(dg, orient[(a1, b1)], orient[(a2, b2)])
        objs_a = sorted({o for s in SCENES[qa] for o in (s[0], s[2])})
        objs_b = sorted({o for s in SCENES[qb] for o in (s[0], s[2])})
        for i in objs_a:
            for j in objs_b:
                cat = metric.get(frozenset((i, j)), "equal" if i == j else None)
                total += METRIC_ORDINAL[cat]
        return total

    human, system = [], []
    with open(os.path.join(HERE, "judgments.txt")) as f:
        rows = [l.split("#")[0].split() for l in f]
    rows = sorted((r for r in rows if r), key=lambda r: r[0])
    for pair, qa, qb, score in rows:
        d = distance(qa, qb)
        human.append(float(score))
        system.append(1.0 / (1 + d))
        print(f"# {pair} {qa} {qb} distance={d} similarity={1.0 / (1 + d):.6f}")
    rho = spearmanr(human, system).statistic
    print(f"rho={float(rho)!r}")


if __name__ == "__main__":
    main()
