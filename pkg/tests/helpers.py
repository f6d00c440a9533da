"""Shared builders for the test corpus."""

import json
import os

import numpy as np

from gcadec import corpus as C

DATA = os.path.join(os.path.dirname(__file__), "data")


def z2_table():
    with open(os.path.join(DATA, "z2_linear_rules.json"), encoding="utf-8") as fh:
        return json.load(fh)["rules"]


def z2_rule(coefficients):
    """``c_v -> a c_{v-1} + b c_v + c c_{v+1}`` over Z/2."""
    mats = [np.array([[a]]) for a in coefficients]
    return C.linear_rule(2, mats, [(-1,), (0,), (1,)])


def sampled_linear_rules(count=192, seed=2024):
    """Seeded rules over (Z/2)^2, (Z/3)^1 and (Z/2)^1 in dimension 1, size at most 8."""
    rng = np.random.default_rng(seed)
    rules = []
    shapes = [(2, 2), (3, 1), (2, 1), (5, 1), (7, 1)]
    for i in range(count):
        p, n = shapes[i % len(shapes)]
        rules.append(C.random_linear_rule(rng, p, n, d=1, max_k=3))
    return rules


def z2_family(count=192, seed=2024):
    """The 8 rules over Z/2 and ``count`` seeded rules over (Z/2)^2, all with offsets in {-1,0,1}."""
    rules = [z2_rule(e["coefficients"]) for e in z2_table()]
    rng = np.random.default_rng(seed)
    for _ in range(count):
        k = int(rng.integers(1, 4))
        offsets = sorted(int(x) for x in rng.choice([-1, 0, 1], size=k, replace=False))
        mats = [rng.integers(0, 2, size=(2, 2)) for _ in range(k)]
        rules.append(C.linear_rule(2, mats, [(u,) for u in offsets]))
    return rules
