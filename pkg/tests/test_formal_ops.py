"""Oracle agreement: every formal transform must reproduce the Jordan profile
of the corresponding matrix-level operation.  These are the working checks;
the acceptance module re-runs them at the full advertised instance counts."""

import random
from math import lcm

import pytest

from rigidmc.convolution import (
    jordan_profile,
    middle_convolution,
    rank_one_tuple,
    sym2,
    lambda2,
    tensor,
    twist,
)
from rigidmc.cyclotomic import rou_to_cyc
from rigidmc.errors import MathError
from rigidmc.localdata import (
    FormalLocalSystem,
    GroupTag,
    JordanClass,
    euler_characteristic,
    lambda2_formal,
    mc_formal,
    mc_rank,
    pullback_power_formal,
    sym2_formal,
    tensor_formal,
    twist_formal,
)

from helpers import NONTRIVIAL_ROUS, random_irreducible_tuple, random_rou

ONE = (1, 0)
M1 = (2, 1)


def J(*parts):
    return JordanClass(list(parts))


U = JordanClass.unipotent


def test_sym2_of_single_block():
    f = FormalLocalSystem(["inf", "0", "1"], [U(2), U(2, M1), U(2)], GroupTag("GL", 2))
    s = sym2_formal(f)
    assert s.class_at("inf") == U(3)
    assert s.class_at("0") == U(3)
    assert s.rank == 3


def test_lambda2_of_regular_semisimple():
    c = J(((6, 1), 1), ((3, 1), 1), ((12, 7), 1), ((12, 11), 1))
    from rigidmc.localdata import lambda2_class

    wedge = lambda2_class(c)
    assert wedge == J(
        ((12, 1), 1), ((4, 1), 1), ((4, 3), 1), ((12, 11), 1), (M1, 1), (M1, 1)
    )


def test_tensor_with_trivial():
    f = FormalLocalSystem(["inf", "0", "1"], [U(2), U(2, M1), U(2)], GroupTag("GL", 2))
    triv = FormalLocalSystem(
        ["inf", "0", "1"], [J((ONE, 1))] * 3, GroupTag("GL", 1)
    )
    assert tensor_formal(f, triv) == f


def test_mc_formal_trivial_character_rejected():
    f = FormalLocalSystem(["inf", "0", "1"], [U(2), U(2, M1), U(2)], GroupTag("GL", 2))
    with pytest.raises(MathError) as err:
        mc_formal(f, (1, 0))
    assert err.value.code == "TRIVIAL_CHARACTER"


def test_mc_formal_kummer_pass_through():
    f = FormalLocalSystem(
        ["inf", "0", "1"],
        [J(((3, 2), 1)), J(((3, 1), 1)), J((ONE, 1))],
        GroupTag("GL", 1),
    )
    with pytest.raises(MathError) as err:
        mc_formal(f, M1)
    assert err.value.code == "PASS_THROUGH"


def test_mc_formal_classical_rank_one():
    f = FormalLocalSystem(
        ["inf", "0", "1"], [J((ONE, 1)), J((M1, 1)), J((M1, 1))], GroupTag("GL", 1)
    )
    out = mc_formal(f, M1)
    assert out.rank == 2
    assert out.class_at("0") == U(2)
    assert out.class_at("1") == U(2)
    assert out.class_at("inf") == U(2, M1)


def test_mc_formal_dwork_table():
    sp4 = FormalLocalSystem(
        ["inf", "0", "1"],
        [
            U(4),
            J(((12, 1), 1), ((4, 1), 1), ((4, 3), 1), ((12, 11), 1)),
            J((M1, 1), (M1, 1), (ONE, 1), (ONE, 1)),
        ],
        GroupTag("GL", 4),
    )
    out = mc_formal(sp4, M1)
    assert out.rank == 6
    assert out.class_at("inf") == J((M1, 5), (M1, 1))
    assert out.class_at("0") == J(
        ((12, 7), 1), ((4, 3), 1), ((4, 1), 1), ((12, 5), 1), (ONE, 1), (ONE, 1)
    )
    assert out.class_at("1") == J((ONE, 2), (ONE, 2), (ONE, 1), (ONE, 1))


def test_mc_formal_involution_on_profiles():
    rng = random.Random(42)
    done = 0
    while done < 10:
        t, f, order = random_irreducible_tuple(rng, ops=2, max_rank=3)
        if f.rank < 2:
            continue
        lam = random_rou(rng, nontrivial=True)
        try:
            once = mc_formal(f, lam)
            back = mc_formal(once, (lam[0], lam[0] - lam[1]))
        except MathError:
            continue
        assert back == f.with_group(GroupTag("GL", f.rank))
        done += 1


def test_pullback_identity():
    f = FormalLocalSystem(["inf", "0", "1"], [U(2), U(2, M1), U(2)], GroupTag("GL", 2))
    assert pullback_power_formal(f, 1) == f


def test_pullback_cube_kills_cube_root():
    f = FormalLocalSystem(
        ["inf", "0", "1"],
        [J(((3, 2), 1)), J(((3, 1), 1)), J((ONE, 1))],
        GroupTag("GL", 1),
    )
    out = pullback_power_formal(f, 3)
    assert out.class_at("0") == J((ONE, 1))
    assert len(out.punctures) == 5


def test_pullback_rejects_extra_punctures():
    f = FormalLocalSystem(
        ["inf", "0", "2"], [J((ONE, 1)), J((M1, 1)), J((M1, 1))], GroupTag("GL", 1)
    )
    with pytest.raises(MathError) as err:
        pullback_power_formal(f, 2)
    assert err.value.code == "UNSUPPORTED_PUNCTURES"


# -- randomized oracle agreement ----------------------------------------------------


def test_twist_oracle_agreement():
    rng = random.Random(101)
    for _ in range(20):
        t, f, order = random_irreducible_tuple(rng, ops=1, max_rank=3)
        scalars = {"0": random_rou(rng), "1": random_rou(rng)}
        new_order = lcm(order, *[v[0] for v in scalars.values()])
        got = twist_formal(f, scalars)
        oracle = jordan_profile(
            twist(t, {k: rou_to_cyc(v) for k, v in scalars.items()}), new_order
        )
        assert got.with_group(oracle.group) == oracle


def test_tensor_oracle_agreement():
    rng = random.Random(102)
    for _ in range(8):
        t1, f1, o1 = random_irreducible_tuple(rng, ops=1, max_rank=2)
        t2, f2, o2 = random_irreducible_tuple(rng, ops=1, max_rank=3)
        order = lcm(o1, o2)
        got = tensor_formal(f1, f2)
        oracle = jordan_profile(tensor(t1, t2), order)
        assert got == oracle


def test_sym2_lambda2_oracle_agreement():
    rng = random.Random(103)
    done = 0
    while done < 8:
        t, f, order = random_irreducible_tuple(rng, ops=2, max_rank=3)
        if f.rank < 2:
            continue
        assert sym2_formal(f) == jordan_profile(sym2(t), order)
        assert lambda2_formal(f) == jordan_profile(lambda2(t), order)
        done += 1


def test_mc_oracle_agreement():
    rng = random.Random(104)
    done = 0
    while done < 12:
        t, f, order = random_irreducible_tuple(rng, ops=2, max_rank=4)
        lam = random_rou(rng, nontrivial=True)
        nontrivial = sum(1 for _, c in f.finite_items() if not c.is_trivial())
        if f.rank == 1 and nontrivial < 2:
            continue
        m = mc_rank(f, lam)
        if m < 1 or m > 5:
            continue
        new_order = lcm(order, lam[0])
        got = mc_formal(f, lam)
        oracle = jordan_profile(middle_convolution(t, rou_to_cyc(lam)), new_order)
        assert got == oracle
        done += 1


def test_pullback_oracle_agreement():
    # Oracle: k-th powers of explicit representatives at 0 and infinity.
    from rigidmc.localdata import group_representative, jordan_type

    rng = random.Random(105)
    done = 0
    while done < 10:
        t, f, order = random_irreducible_tuple(rng, ops=1, max_rank=3)
        k = rng.randint(2, 4)
        out = pullback_power_formal(f, k)
        assert out.rank == f.rank
        assert len(out.punctures) == k + 2
        for label, source in (("0", "0"), ("inf", "inf")):
            a, _ = group_representative(f.class_at(source), GroupTag("GL", f.rank))
            assert out.class_at(label) == jordan_type(a.power(k), order)
        done += 1


def test_chi_invariance_under_twist_and_mc():
    rng = random.Random(106)
    done = 0
    while done < 10:
        t, f, order = random_irreducible_tuple(rng, ops=2, max_rank=4)
        gl = GroupTag("GL", f.rank)
        chi = euler_characteristic(f, gl)
        scalars = {"0": random_rou(rng, nontrivial=True)}
        twisted = twist_formal(f, scalars)
        assert euler_characteristic(twisted, GroupTag("GL", f.rank)) == chi
        lam = random_rou(rng, nontrivial=True)
        nontrivial = sum(1 for _, c in f.finite_items() if not c.is_trivial())
        if f.rank == 1 and nontrivial < 2:
            continue
        m = mc_rank(f, lam)
        if m < 1:
            continue
        out = mc_formal(f, lam)
        assert euler_characteristic(out, GroupTag("GL", out.rank)) == chi
        done += 1
