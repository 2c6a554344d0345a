"""Freeze exact transition distributions for the 5-node, 1-attribute fixture.

Computed with Fractions over a hand-written adjacency table, independently
of the package. Run from the tests/ directory to regenerate
five_node_hand_table.json; the JSON is committed so tests never depend on
this script at run time.

Fixture: raw cycle 0-1-2-3-4-0 with chord 0-2; edge (0,1) has weight 2,
all others 1; attribute a0 sits on nodes 1 and 3, giving the attribute
node unified id 5. Parameters p=2, q=1/2, r=1/4.
"""

import json
from fractions import Fraction
from pathlib import Path

P = Fraction(2)
Q = Fraction(1, 2)
R = Fraction(1, 4)

ADJ = {
    0: {1: Fraction(2), 2: Fraction(1), 4: Fraction(1)},
    1: {0: Fraction(2), 2: Fraction(1), 5: Fraction(1)},
    2: {0: Fraction(1), 1: Fraction(1), 3: Fraction(1)},
    3: {2: Fraction(1), 4: Fraction(1), 5: Fraction(1)},
    4: {0: Fraction(1), 3: Fraction(1)},
    5: {1: Fraction(1), 3: Fraction(1)},
}
ATTR_NODES = {5}


def beta(u, x):
    if x == u:
        return 1 / P
    if x in ADJ[u]:
        return Fraction(1)
    return 1 / Q


def alpha(strategy, u, v, x):
    v_attr = v in ATTR_NODES
    x_attr = x in ATTR_NODES
    if strategy == "sf":
        return 1 / R if v_attr else beta(u, x)
    if strategy == "tf":
        return 1 / R if x_attr else beta(u, x)
    return 1 / R if (v_attr or x_attr) else beta(u, x)


def gamma(strategy, v, x):
    if strategy in ("tf", "stf") and x in ATTR_NODES:
        return 1 / R
    if strategy in ("sf", "stf") and v in ATTR_NODES:
        return 1 / R
    return Fraction(1)


def normalized(pairs):
    z = sum(w for _, w in pairs)
    return {str(x): float(w / z) for x, w in pairs}


def main():
    table = {}
    for strategy in ("sf", "tf", "stf"):
        states = {}
        for v in sorted(ADJ):
            pairs = [(x, ADJ[v][x] * gamma(strategy, v, x)) for x in sorted(ADJ[v])]
            states[f"start,{v}"] = normalized(pairs)
        for u in sorted(ADJ):
            for v in sorted(ADJ[u]):
                pairs = [(x, ADJ[v][x] * alpha(strategy, u, v, x)) for x in sorted(ADJ[v])]
                states[f"{u},{v}"] = normalized(pairs)
        table[strategy] = states
    out = Path(__file__).parent / "five_node_hand_table.json"
    out.write_text(json.dumps(table, indent=1, sort_keys=True))
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
