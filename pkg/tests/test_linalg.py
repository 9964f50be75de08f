import random
from fractions import Fraction
from itertools import combinations

import pytest

from rigidmc.cyclotomic import CyclotomicNumber, zeta
from rigidmc.errors import MathError
from rigidmc.linalg import (
    GroupSpec,
    Matrix,
    commutant_dim,
    invariant_bilinear,
    kernel,
    rank,
    solve,
)
from rigidmc.localdata import JordanClass, centralizer_dim_gl, group_representative, GroupTag

from helpers import random_jordan_class


def _random_matrix(rng, rows, cols, order=6):
    from rigidmc.cyclotomic import euler_phi

    return Matrix(
        [
            [
                CyclotomicNumber(
                    order, [Fraction(rng.randint(-2, 2)) for _ in range(euler_phi(order))]
                )
                for _ in range(cols)
            ]
            for _ in range(rows)
        ]
    )


def _det_by_minors(m: Matrix) -> CyclotomicNumber:
    # Laplace expansion along the first row; exponential, fine for n <= 5.
    n = m.rows
    if n == 1:
        return m.entries[0][0]
    total = CyclotomicNumber.from_rational(0)
    for j in range(n):
        entry = m.entries[0][j]
        if entry.is_zero():
            continue
        minor = Matrix(
            [
                [m.entries[r][c] for c in range(n) if c != j]
                for r in range(1, n)
            ]
        )
        term = entry * _det_by_minors(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def _rank_by_minors(m: Matrix) -> int:
    # Largest k with a non-vanishing k x k minor.
    for k in range(min(m.rows, m.cols), 0, -1):
        for rows_sel in combinations(range(m.rows), k):
            for cols_sel in combinations(range(m.cols), k):
                sub = Matrix(
                    [[m.entries[r][c] for c in cols_sel] for r in rows_sel]
                )
                if not _det_by_minors(sub).is_zero():
                    return k
    return 0


def test_kernel_identity():
    assert kernel(Matrix.identity(3)) == []


def test_kernel_rank_one_symmetric():
    basis = kernel(Matrix([[1, 1], [1, 1]]))
    assert len(basis) == 1
    v = basis[0]
    assert v[0] == -1 and v[1] == 1


def test_kernel_against_minor_rank_oracle():
    rng = random.Random(99)
    for _ in range(12):
        m = _random_matrix(rng, 5, 5)
        expected_rank = _rank_by_minors(m)
        assert rank(m) == expected_rank
        basis = kernel(m)
        assert len(basis) == 5 - expected_rank
        for v in basis:
            assert all(x.is_zero() for x in m.mat_vec(v))


def test_rank_plus_nullity():
    rng = random.Random(5)
    for _ in range(15):
        rows = rng.randint(1, 5)
        cols = rng.randint(1, 5)
        m = _random_matrix(rng, rows, cols)
        assert rank(m) + len(kernel(m)) == cols


def test_solve_consistency():
    rng = random.Random(11)
    for _ in range(10):
        m = _random_matrix(rng, 4, 3)
        x = tuple(CyclotomicNumber.from_rational(rng.randint(-3, 3)) for _ in range(3))
        b = m.mat_vec(x)
        got = solve(m, b)
        assert got is not None
        assert m.mat_vec(got) == b


def test_inverse_round_trip():
    a = Matrix([[1, zeta(6)], [zeta(3), 2]])
    assert a @ a.inverse() == Matrix.identity(2)


def test_commutant_identity_full():
    assert commutant_dim([Matrix.identity(4)], GroupSpec.gl(4)) == 16


def test_commutant_regular_unipotent():
    u4 = Matrix([[1 if j in (i, i + 1) else 0 for j in range(4)] for i in range(4)])
    assert commutant_dim([u4], GroupSpec.gl(4)) == 4


def test_commutant_matches_partition_formula():
    # gl commutant of a single quasi-unipotent element equals the sum of
    # squared conjugate-partition entries, class by class.
    rng = random.Random(20260809)
    checked = 0
    while checked < 50:
        c = random_jordan_class(rng, rng.randint(1, 6))
        a, _ = group_representative(c, GroupTag("GL", c.rank))
        assert commutant_dim([a], GroupSpec.gl(c.rank)) == centralizer_dim_gl(c)
        checked += 1


def test_commutant_form_constraints():
    ident = Matrix.identity(2)
    sym = Matrix([[0, 1], [1, 0]])
    alt = Matrix([[0, 1], [-1, 0]])
    assert commutant_dim([ident], GroupSpec.so(sym)) == 1
    assert commutant_dim([ident], GroupSpec.sp(alt)) == 3
    with pytest.raises(MathError) as err:
        GroupSpec.so(Matrix([[1, 0], [0, 0]]))
    assert err.value.code == "FORM_NOT_INVERTIBLE"


def test_invariant_bilinear_identity_is_multiple():
    assert invariant_bilinear([Matrix.identity(2)]).kind == "multiple"


def test_invariant_bilinear_none():
    # Distinct-scale diagonal and a generic unipotent share no invariant form.
    mats = [Matrix([[2, 0], [0, 1]]), Matrix([[1, 1], [0, 1]])]
    assert invariant_bilinear(mats).kind == "none"


def test_invariant_bilinear_conjugation_congruence():
    from rigidmc.convolution import middle_convolution, rank_one_tuple, twist

    seed = twist(
        middle_convolution(rank_one_tuple(("0", "1"), {"0": "-1", "1": "-1"}), "-1"),
        {"0": "-1"},
    )
    mats = list(seed.matrices)
    base = invariant_bilinear(mats)
    assert base.kind == "symplectic"
    p = Matrix([[1, 2], [1, 3]])
    res = invariant_bilinear([p @ m @ p.inverse() for m in mats])
    assert res.kind == "symplectic"
    pulled = p.transpose() @ res.form @ p
    ratio = next(
        pulled.entries[i][j] / base.form.entries[i][j]
        for i in range(2)
        for j in range(2)
        if not base.form.entries[i][j].is_zero()
    )
    assert pulled == base.form.scale(ratio)
