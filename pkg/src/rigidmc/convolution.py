"""Matrix-level operations on monodromy tuples.

A MonodromyTuple stores the invertible matrices at the finite punctures in
order; the monodromy at infinity is always derived from the product relation
A_inf * A_p * ... * A_1 = I and never stored.

Middle convolution follows the block-matrix model: the tuple (B_1 ... B_p)
acts on the p*r-dimensional sum, the invariant subspaces are K = (+)_k
ker(A_k - I) and the joint fixed space L of all B_k, and the result is the
induced action on the quotient by K + L.  Quotient bases are chosen in a
fixed scan order, so outputs are bit-reproducible.
"""

from __future__ import annotations

from .cyclotomic import ONE, ZERO, CyclotomicNumber, parse_cyclotomic
from .errors import MathError
from .linalg import (
    IndependentSet,
    Matrix,
    Vector,
    commutant_dim,
    GroupSpec,
    invariant_bilinear,
    invariant_forms_of_parity,
    invertible_combination,
    kernel,
    solve,
)
from .localdata import (
    INFINITY,
    FormalLocalSystem,
    GroupTag,
    jordan_type,
)

CONVENTION = "Ainf*Ap*...*A1=I"


class MonodromyTuple:
    """Ordered invertible matrices at the finite punctures."""

    __slots__ = ("rank", "punctures", "matrices")

    def __init__(self, punctures, matrices, check: bool = True):
        punctures = tuple(punctures)
        matrices = tuple(matrices)
        if not matrices:
            raise MathError("a tuple needs at least one finite puncture")
        if len(punctures) != len(matrices):
            raise MathError("punctures and matrices differ in length")
        if INFINITY in punctures:
            raise MathError("the infinity monodromy is derived, not stored")
        if len(set(punctures)) != len(punctures):
            raise MathError("duplicate puncture labels")
        n = matrices[0].rows
        for a in matrices:
            if not a.is_square() or a.rows != n:
                raise MathError("tuple matrices must be square of equal size",
                                code="SIZE_MISMATCH")
        if check:
            for p, a in zip(punctures, matrices):
                if not a.is_invertible():
                    raise MathError(f"monodromy at {p!r} is singular")
        object.__setattr__(self, "rank", n)
        object.__setattr__(self, "punctures", punctures)
        object.__setattr__(self, "matrices", matrices)

    def __setattr__(self, *a):
        raise AttributeError("MonodromyTuple is immutable")

    def matrix_at(self, label: str) -> Matrix:
        try:
            return self.matrices[self.punctures.index(label)]
        except ValueError:
            raise MathError(f"no puncture {label!r}") from None

    def a_infinity(self) -> Matrix:
        prod = self.matrices[0]
        for a in self.matrices[1:]:
            prod = a @ prod  # ordered product A_p ... A_1
        return prod.inverse()

    def __eq__(self, other):
        if not isinstance(other, MonodromyTuple):
            return NotImplemented
        return self.punctures == other.punctures and self.matrices == other.matrices

    __hash__ = None

    def __repr__(self):
        return f"MonodromyTuple(rank={self.rank}, punctures={self.punctures})"


def rank_one_tuple(punctures, scalars) -> MonodromyTuple:
    """Rank-1 tuple with the given scalar monodromy at each finite puncture."""
    mats = []
    for p in punctures:
        c = parse_cyclotomic(scalars.get(p, 1)) if isinstance(scalars, dict) else None
        if c is None:
            raise MathError("scalars must be a mapping")
        mats.append(Matrix([[c]]))
    return MonodromyTuple(punctures, mats)


def jordan_profile(t: MonodromyTuple, search_order: int) -> FormalLocalSystem:
    """Formal local data of a tuple: classes at infinity and at each finite
    puncture, tagged GL."""
    classes = [jordan_type(t.a_infinity(), search_order)]
    classes.extend(jordan_type(a, search_order) for a in t.matrices)
    return FormalLocalSystem(
        (INFINITY,) + t.punctures, classes, GroupTag("GL", t.rank)
    )


# -- middle convolution -------------------------------------------------------------


def _convolution_blocks(t: MonodromyTuple, lam: CyclotomicNumber) -> list[Matrix]:
    p = len(t.matrices)
    n = t.rank
    ident_small = Matrix.identity(n)
    big = []
    for k in range(p):
        rows = [[ZERO] * (p * n) for _ in range(p * n)]
        for i in range(p * n):
            rows[i][i] = ONE
        for j in range(p):
            if j < k:
                block = (t.matrices[j] - ident_small).scale(lam)
            elif j == k:
                block = t.matrices[k].scale(lam)
            else:
                block = t.matrices[j] - ident_small
            for r in range(n):
                for c in range(n):
                    rows[k * n + r][j * n + c] = block.entries[r][c]
        big.append(Matrix(rows))
    return big


def middle_convolution(t: MonodromyTuple, lam) -> MonodromyTuple:
    """Middle convolution by the character lam (a root of unity != 1)."""
    lam = parse_cyclotomic(lam)
    if lam.is_one():
        raise MathError("middle convolution needs a non-trivial character",
                        code="TRIVIAL_CHARACTER")
    if lam.is_zero():
        raise MathError("character must be non-zero", code="TRIVIAL_CHARACTER")
    p = len(t.matrices)
    n = t.rank
    big = _convolution_blocks(t, lam)
    dim = p * n
    ident_small = Matrix.identity(n)
    ident_big = Matrix.identity(dim)

    span = IndependentSet(dim)
    for k, a in enumerate(t.matrices):
        for v in kernel(a - ident_small):
            vec = [ZERO] * dim
            vec[k * n : (k + 1) * n] = list(v)
            span.add(vec)
    stacked = Matrix([row for b in big for row in (b - ident_big).entries])
    for v in kernel(stacked):
        span.add(v)

    invariant_dim = len(span)
    m = dim - invariant_dim
    if m == 0:
        raise MathError("middle convolution quotient is zero", code="ZERO_QUOTIENT")
    columns = list(span.vectors)
    complement_cols = []
    for i in range(dim):
        e = [ZERO] * dim
        e[i] = ONE
        if span.add(e):
            columns.append(tuple(e))
            complement_cols.append(i)
    basis = Matrix([[columns[j][i] for j in range(dim)] for i in range(dim)])
    basis_inv = basis.inverse()
    out = []
    for b in big:
        conj = basis_inv @ b @ basis
        for i in range(invariant_dim, dim):
            for j in range(invariant_dim):
                if not conj.entries[i][j].is_zero():  # pragma: no cover
                    raise MathError("invariant subspace was not invariant")
        d = Matrix(
            [
                [conj.entries[i][j] for j in range(invariant_dim, dim)]
                for i in range(invariant_dim, dim)
            ]
        )
        out.append(d)
    result = MonodromyTuple(t.punctures, out)
    return result


# -- twists and functors ---------------------------------------------------------------


def twist(t: MonodromyTuple, scalars: dict) -> MonodromyTuple:
    """Multiply the monodromy at each listed finite puncture by a scalar."""
    parsed = {}
    for label, value in scalars.items():
        if label not in t.punctures:
            raise MathError(f"twist scalar at unknown puncture {label!r}")
        c = parse_cyclotomic(value)
        if c.is_zero():
            raise MathError("twist scalars must be non-zero")
        parsed[label] = c
    mats = [
        a.scale(parsed[p]) if p in parsed else a
        for p, a in zip(t.punctures, t.matrices)
    ]
    return MonodromyTuple(t.punctures, mats, check=False)


def tensor(t1: MonodromyTuple, t2: MonodromyTuple) -> MonodromyTuple:
    if t1.punctures != t2.punctures:
        raise MathError("puncture sets differ", code="PUNCTURE_MISMATCH")
    mats = [a.kron(b) for a, b in zip(t1.matrices, t2.matrices)]
    return MonodromyTuple(t1.punctures, mats, check=False)


def _sym2_matrix(a: Matrix) -> Matrix:
    n = a.rows
    basis = [(i, j) for i in range(n) for j in range(i, n)]
    index = {b: x for x, b in enumerate(basis)}
    out = [[ZERO] * len(basis) for _ in range(len(basis))]
    for col, (k, l) in enumerate(basis):
        for i in range(n):
            aik = a.entries[i][k]
            if aik.is_zero():
                continue
            for j in range(n):
                c = aik * a.entries[j][l]
                if c.is_zero():
                    continue
                r = index[(i, j) if i <= j else (j, i)]
                out[r][col] = out[r][col] + c
    return Matrix(out)


def _lambda2_matrix(a: Matrix) -> Matrix:
    n = a.rows
    basis = [(i, j) for i in range(n) for j in range(i + 1, n)]
    index = {b: x for x, b in enumerate(basis)}
    out = [[ZERO] * len(basis) for _ in range(len(basis))]
    for col, (k, l) in enumerate(basis):
        for i in range(n):
            aik = a.entries[i][k]
            if aik.is_zero():
                continue
            for j in range(n):
                if i == j:
                    continue
                c = aik * a.entries[j][l]
                if c.is_zero():
                    continue
                if i < j:
                    out[index[(i, j)]][col] = out[index[(i, j)]][col] + c
                else:
                    out[index[(j, i)]][col] = out[index[(j, i)]][col] - c
    return Matrix(out)


def sym2(t: MonodromyTuple) -> MonodromyTuple:
    return MonodromyTuple(t.punctures, [_sym2_matrix(a) for a in t.matrices], check=False)


def lambda2(t: MonodromyTuple) -> MonodromyTuple:
    if t.rank < 2:
        raise MathError("exterior square needs rank >= 2")
    return MonodromyTuple(t.punctures, [_lambda2_matrix(a) for a in t.matrices], check=False)


# -- isogeny projections ------------------------------------------------------------------


def project_sp4_to_so5(t: MonodromyTuple) -> MonodromyTuple:
    """Exterior square on the 6-dimensional space, restricted to the invariant
    complement of the line spanned by the symplectic form."""
    if t.rank != 4:
        raise MathError("projection needs rank 4", code="RANK_NOT_4")
    bil = invariant_bilinear(list(t.matrices))
    if bil.kind == "symplectic":
        g = bil.form
    elif bil.kind == "multiple":
        # Reducible-ish tuples can have a large form space; pick an invertible
        # alternating member if one exists.
        g = invertible_combination(
            invariant_forms_of_parity(list(t.matrices), alternating=True)
        )
        if g is None:
            raise MathError("tuple does not preserve a symplectic form",
                            code="NOT_SYMPLECTIC")
    else:
        raise MathError("tuple does not preserve a symplectic form",
                        code="NOT_SYMPLECTIC")
    pairs = [(i, j) for i in range(4) for j in range(i + 1, 4)]
    # The contraction functional <G, e_i ^ e_j> = G[i][j] cuts out the 5-dim
    # invariant complement of the form line.
    functional = Matrix([[g.entries[i][j] for (i, j) in pairs]])
    w_basis = kernel(functional)
    assert len(w_basis) == 5
    w_mat = Matrix([[w_basis[j][i] for j in range(5)] for i in range(6)])
    out = []
    for a in t.matrices:
        la = _lambda2_matrix(a)
        cols = []
        for w in w_basis:
            image = la.mat_vec(w)
            coords = solve(w_mat, image)
            if coords is None:  # pragma: no cover
                raise MathError("complement was not invariant")
            cols.append(coords)
        out.append(Matrix([[cols[j][i] for j in range(5)] for i in range(5)]))
    return MonodromyTuple(t.punctures, out, check=False)


def project_sl4_to_so6(t: MonodromyTuple) -> MonodromyTuple:
    """Exterior square carries SL4 onto SO6 (wedge pairing into Lambda^4)."""
    if t.rank != 4:
        raise MathError("projection needs rank 4", code="RANK_NOT_4")
    for p, a in zip(t.punctures, t.matrices):
        if a.det() != 1:
            raise MathError(f"monodromy at {p!r} has determinant != 1",
                            code="DET_NOT_ONE")
    return lambda2(t)


# -- conjugacy and irreducibility ------------------------------------------------------------


def is_irreducible(t: MonodromyTuple) -> bool:
    """Absolute irreducibility: the joint gl-commutant is the scalars."""
    return commutant_dim(list(t.matrices), GroupSpec.gl(t.rank)) == 1


def are_conjugate(t1: MonodromyTuple, t2: MonodromyTuple) -> Matrix | None:
    """An invertible X with X A_k = B_k X for all k, or None.

    The full solution space of the intertwining equations is computed; an
    invertible element is searched on a grid large enough that exhausting it
    proves the determinant vanishes identically on the space.
    """
    if t1.punctures != t2.punctures or t1.rank != t2.rank:
        raise MathError("tuples differ in shape", code="SHAPE_MISMATCH")
    n = t1.rank
    rows = []
    for a, b in zip(t1.matrices, t2.matrices):
        for r in range(n):
            for c in range(n):
                row = [ZERO] * (n * n)
                # (X A - B X)[r][c]
                for k in range(n):
                    row[r * n + k] = row[r * n + k] + a.entries[k][c]
                    row[k * n + c] = row[k * n + c] - b.entries[r][k]
                rows.append(row)
    basis = kernel(Matrix(rows))
    if not basis:
        return None
    candidates = [
        Matrix([[v[i * n + j] for j in range(n)] for i in range(n)]) for v in basis
    ]
    return invertible_combination(candidates)
