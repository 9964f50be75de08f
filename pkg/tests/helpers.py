"""Shared generators for randomized checks.

Random tuples are built the way the theory builds them: start from a rank-one
system with non-trivial monodromy at 0 and 1, then apply random twists and
middle convolutions.  Every tuple produced this way is irreducible, and the
generator tracks the cyclotomic order needed to read off Jordan data.
"""

from __future__ import annotations

from math import lcm

from rigidmc.convolution import (
    MonodromyTuple,
    jordan_profile,
    middle_convolution,
    rank_one_tuple,
    twist,
)
from rigidmc.cyclotomic import rou_to_cyc
from rigidmc.localdata import (
    FormalLocalSystem,
    GroupTag,
    JordanClass,
    mc_rank,
    validate_class_in_group,
)

NONTRIVIAL_ROUS = [
    (2, 1), (3, 1), (3, 2), (4, 1), (4, 3),
    (6, 1), (6, 5), (12, 1), (12, 5), (12, 7), (12, 11),
]
ALL_ROUS = [(1, 0)] + NONTRIVIAL_ROUS


def random_rou(rng, nontrivial=False):
    pool = NONTRIVIAL_ROUS if nontrivial else ALL_ROUS
    return pool[rng.randrange(len(pool))]


def random_irreducible_tuple(rng, ops=2, max_rank=4, max_order=12):
    """(tuple, profile, search_order); the tuple is irreducible by construction."""
    s0 = random_rou(rng, nontrivial=True)
    s1 = random_rou(rng, nontrivial=True)
    t = rank_one_tuple(("0", "1"), {"0": rou_to_cyc(s0), "1": rou_to_cyc(s1)})
    order = lcm(s0[0], s1[0])
    f = jordan_profile(t, order)
    for _ in range(ops):
        if rng.random() < 0.5:
            scalars = {}
            for p in ("0", "1"):
                if rng.random() < 0.7:
                    scalars[p] = random_rou(rng)
            scalars = {k: v for k, v in scalars.items() if v != (1, 0)}
            if scalars:
                new_order = lcm(order, *[v[0] for v in scalars.values()])
                if new_order <= max_order:
                    t = twist(t, {k: rou_to_cyc(v) for k, v in scalars.items()})
                    order = new_order
                    f = jordan_profile(t, order)
        lam = random_rou(rng, nontrivial=True)
        if lcm(order, lam[0]) > max_order:
            continue
        nontrivial = sum(1 for _, c in f.finite_items() if not c.is_trivial())
        if f.rank == 1 and nontrivial < 2:
            continue
        m = mc_rank(f, lam)
        if m < 1 or m > max_rank:
            continue
        t = middle_convolution(t, rou_to_cyc(lam))
        order = lcm(order, lam[0])
        f = jordan_profile(t, order)
    return t, f, order


def random_jordan_class(rng, size, max_order=12):
    """Random class of the given total size with eigenvalue orders dividing
    max_order."""
    parts = []
    left = size
    while left:
        block = rng.randint(1, left)
        parts.append((random_rou(rng), block))
        left -= block
    return JordanClass(parts)


def random_sp4_class(rng):
    """Random class realizable in Sp4 (rejection sampling)."""
    sp4 = GroupTag("Sp", 4)
    while True:
        c = random_jordan_class(rng, 4)
        if validate_class_in_group(c, sp4):
            return c
