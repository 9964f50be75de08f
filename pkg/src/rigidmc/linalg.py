"""Dense exact linear algebra over cyclotomic numbers.

Plain Gaussian elimination with full reduction; pivots are normalized to 1,
so echelon forms, kernels and the bases derived from them are canonical and
every downstream computation is bit-reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .cyclotomic import ONE, ZERO, CyclotomicNumber, format_cyclotomic
from .errors import MathError

Vector = tuple[CyclotomicNumber, ...]


def _coerce_entry(x) -> CyclotomicNumber:
    if isinstance(x, CyclotomicNumber):
        return x
    if isinstance(x, (int, Fraction)):
        return CyclotomicNumber.from_rational(x)
    if isinstance(x, str):
        from .cyclotomic import parse_cyclotomic

        return parse_cyclotomic(x)
    raise TypeError(f"bad matrix entry: {x!r}")


class Matrix:
    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries):
        grid = [[_coerce_entry(x) for x in row] for row in entries]
        if not grid or not grid[0]:
            raise MathError("empty matrix")
        if any(len(row) != len(grid[0]) for row in grid):
            raise MathError("ragged matrix rows", code="SIZE_MISMATCH")
        # A common cyclotomic order keeps later arithmetic on the fast path.
        order = 1
        for row in grid:
            for x in row:
                order = lcm(order, x.order)
        object.__setattr__(
            self,
            "entries",
            tuple(tuple(x.embed(order) for x in row) for row in grid),
        )
        object.__setattr__(self, "rows", len(grid))
        object.__setattr__(self, "cols", len(grid[0]))

    def __setattr__(self, *a):
        raise AttributeError("Matrix is immutable")

    @staticmethod
    def identity(n: int) -> "Matrix":
        return Matrix([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @staticmethod
    def zeros(r: int, c: int) -> "Matrix":
        return Matrix([[0] * c for _ in range(r)])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i: int) -> Vector:
        return self.entries[i]

    def col(self, j: int) -> Vector:
        return tuple(self.entries[i][j] for i in range(self.rows))

    def is_square(self) -> bool:
        return self.rows == self.cols

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if (self.rows, self.cols) != (other.rows, other.cols):
            return False
        return all(
            self.entries[i][j] == other.entries[i][j]
            for i in range(self.rows)
            for j in range(self.cols)
        )

    __hash__ = None

    def __add__(self, other):
        self._same_shape(other)
        return Matrix(
            [
                [self.entries[i][j] + other.entries[i][j] for j in range(self.cols)]
                for i in range(self.rows)
            ]
        )

    def __sub__(self, other):
        self._same_shape(other)
        return Matrix(
            [
                [self.entries[i][j] - other.entries[i][j] for j in range(self.cols)]
                for i in range(self.rows)
            ]
        )

    def _same_shape(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise MathError("matrix shape mismatch", code="SIZE_MISMATCH")

    def scale(self, c) -> "Matrix":
        c = _coerce_entry(c)
        return Matrix([[c * x for x in row] for row in self.entries])

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise MathError("matrix product shape mismatch", code="SIZE_MISMATCH")
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = ZERO
                for k in range(self.cols):
                    a = self.entries[i][k]
                    if a.is_zero():
                        continue
                    acc = acc + a * other.entries[k][j]
                row.append(acc)
            out.append(row)
        return Matrix(out)

    def mat_vec(self, v: Vector) -> Vector:
        if self.cols != len(v):
            raise MathError("matrix/vector shape mismatch", code="SIZE_MISMATCH")
        out = []
        for i in range(self.rows):
            acc = ZERO
            for k in range(self.cols):
                a = self.entries[i][k]
                if not a.is_zero():
                    acc = acc + a * v[k]
            out.append(acc)
        return tuple(out)

    def transpose(self) -> "Matrix":
        return Matrix(
            [[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)]
        )

    def power(self, k: int) -> "Matrix":
        if not self.is_square():
            raise MathError("power of a non-square matrix", code="SIZE_MISMATCH")
        if k < 0:
            return self.inverse().power(-k)
        result = Matrix.identity(self.rows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base if k > 1 else base
            k >>= 1
        return result

    def kron(self, other: "Matrix") -> "Matrix":
        out = []
        for i in range(self.rows):
            for k in range(other.rows):
                row = []
                for j in range(self.cols):
                    a = self.entries[i][j]
                    row.extend(a * other.entries[k][l] for l in range(other.cols))
                out.append(row)
        return Matrix(out)

    def direct_sum(self, other: "Matrix") -> "Matrix":
        n, m = self.rows + other.rows, self.cols + other.cols
        out = [[ZERO] * m for _ in range(n)]
        for i in range(self.rows):
            for j in range(self.cols):
                out[i][j] = self.entries[i][j]
        for i in range(other.rows):
            for j in range(other.cols):
                out[self.rows + i][self.cols + j] = other.entries[i][j]
        return Matrix(out)

    def det(self) -> CyclotomicNumber:
        if not self.is_square():
            raise MathError("determinant of a non-square matrix", code="SIZE_MISMATCH")
        work = [list(row) for row in self.entries]
        n = self.rows
        det = ONE
        for col in range(n):
            pivot = next((r for r in range(col, n) if not work[r][col].is_zero()), None)
            if pivot is None:
                return ZERO
            if pivot != col:
                work[col], work[pivot] = work[pivot], work[col]
                det = -det
            p = work[col][col]
            det = det * p
            for r in range(col + 1, n):
                if work[r][col].is_zero():
                    continue
                f = work[r][col] / p
                for c in range(col, n):
                    work[r][c] = work[r][c] - f * work[col][c]
        return det

    def inverse(self) -> "Matrix":
        if not self.is_square():
            raise MathError("inverse of a non-square matrix", code="SIZE_MISMATCH")
        n = self.rows
        work = [list(self.entries[i]) + list(Matrix.identity(n).entries[i]) for i in range(n)]
        reduced, pivots = rref(work)
        if len(pivots) < n or pivots != list(range(n)):
            raise MathError("matrix is singular", code="SINGULAR")
        return Matrix([row[n:] for row in reduced])

    def is_invertible(self) -> bool:
        return self.is_square() and rank(self) == self.rows

    def trace(self) -> CyclotomicNumber:
        acc = ZERO
        for i in range(self.rows):
            acc = acc + self.entries[i][i]
        return acc

    def __repr__(self):
        rows = [
            "[" + ", ".join(format_cyclotomic(x) for x in row) + "]"
            for row in self.entries
        ]
        return "Matrix([" + ", ".join(rows) + "])"


def rref(rows: list[list[CyclotomicNumber]]) -> tuple[list[list[CyclotomicNumber]], list[int]]:
    """Reduced row echelon form (in place on the given row lists)."""
    if not rows:
        return rows, []
    n_cols = len(rows[0])
    pivots = []
    r = 0
    for c in range(n_cols):
        pivot_row = next((i for i in range(r, len(rows)) if not rows[i][c].is_zero()), None)
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        p = rows[r][c]
        if not p.is_one():
            inv = p.inverse()
            rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and not rows[i][c].is_zero():
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank(m: Matrix) -> int:
    _, pivots = rref([list(row) for row in m.entries])
    return len(pivots)


def kernel(m: Matrix) -> list[Vector]:
    """Canonical kernel basis: one vector per free column of the RREF."""
    reduced, pivots = rref([list(row) for row in m.entries])
    free = [c for c in range(m.cols) if c not in pivots]
    basis = []
    for f in free:
        v = [ZERO] * m.cols
        v[f] = ONE
        for i, p in enumerate(pivots):
            v[p] = -reduced[i][f]
        basis.append(tuple(v))
    return basis


def solve(a: Matrix, b: Vector) -> Vector | None:
    """One solution of a x = b, or None if inconsistent."""
    if a.rows != len(b):
        raise MathError("solve shape mismatch", code="SIZE_MISMATCH")
    aug = [list(a.entries[i]) + [_coerce_entry(b[i])] for i in range(a.rows)]
    reduced, pivots = rref(aug)
    if a.cols in pivots:
        return None
    x = [ZERO] * a.cols
    for i, p in enumerate(pivots):
        x[p] = reduced[i][a.cols]
    return tuple(x)


class IndependentSet:
    """Incremental row-space tracker; add() keeps a vector iff it is new."""

    def __init__(self, dim: int):
        self.dim = dim
        self._echelon: list[tuple[int, list[CyclotomicNumber]]] = []  # (pivot, row)
        self.vectors: list[Vector] = []

    def reduce(self, v) -> list[CyclotomicNumber]:
        row = [_coerce_entry(x) for x in v]
        for pivot, basis_row in self._echelon:
            if not row[pivot].is_zero():
                f = row[pivot]
                row = [x - f * y for x, y in zip(row, basis_row)]
        return row

    def add(self, v) -> bool:
        row = self.reduce(v)
        pivot = next((i for i, x in enumerate(row) if not x.is_zero()), None)
        if pivot is None:
            return False
        inv = row[pivot].inverse()
        row = [x * inv for x in row]
        self._echelon.append((pivot, row))
        self.vectors.append(tuple(_coerce_entry(x) for x in v))
        return True

    def __len__(self):
        return len(self.vectors)

    def contains(self, v) -> bool:
        return all(x.is_zero() for x in self.reduce(v))


# -- group-constrained commutants ------------------------------------------------


@dataclass(frozen=True)
class GroupSpec:
    """Lie algebra cut out inside gl(n): gl, sl, or so/sp with a Gram matrix."""

    family: str  # "gl" | "sl" | "so" | "sp"
    size: int
    form: Matrix | None = None

    def __post_init__(self):
        if self.family not in ("gl", "sl", "so", "sp"):
            raise MathError(f"unknown group family {self.family!r}")
        if self.family in ("so", "sp"):
            g = self.form
            if g is None or not g.is_square() or g.rows != self.size:
                raise MathError("so/sp spec needs a square form of matching size",
                                code="SIZE_MISMATCH")
            if not g.is_invertible():
                raise MathError("Gram form is singular", code="FORM_NOT_INVERTIBLE")
            gt = g.transpose()
            if self.family == "so" and gt != g:
                raise MathError("so spec needs a symmetric form", code="FORM_NOT_INVERTIBLE")
            if self.family == "sp" and gt != g.scale(-1):
                raise MathError("sp spec needs an alternating form", code="FORM_NOT_INVERTIBLE")

    @staticmethod
    def gl(n: int) -> "GroupSpec":
        return GroupSpec("gl", n)

    @staticmethod
    def sl(n: int) -> "GroupSpec":
        return GroupSpec("sl", n)

    @staticmethod
    def so(form: Matrix) -> "GroupSpec":
        return GroupSpec("so", form.rows, form)

    @staticmethod
    def sp(form: Matrix) -> "GroupSpec":
        return GroupSpec("sp", form.rows, form)


def commutant_dim(mats: list[Matrix], spec: GroupSpec) -> int:
    """dim of {X in the spec'd Lie algebra : A X = X A for all A}.

    Unknowns are the n^2 entries of X (row-major); each condition contributes
    linear rows and the dimension is n^2 minus the rank of the stack.
    """
    n = spec.size
    for a in mats:
        if not a.is_square() or a.rows != n:
            raise MathError("commutant size mismatch", code="SIZE_MISMATCH")
    rows: list[list[CyclotomicNumber]] = []

    def idx(i, j):
        return i * n + j

    for a in mats:
        for r in range(n):
            for c in range(n):
                row = [ZERO] * (n * n)
                # (X A - A X)[r][c] = sum_k X[r,k] A[k,c] - A[r,k] X[k,c]
                for k in range(n):
                    row[idx(r, k)] = row[idx(r, k)] + a.entries[k][c]
                    row[idx(k, c)] = row[idx(k, c)] - a.entries[r][k]
                rows.append(row)
    if spec.family == "sl":
        rows.append([ONE if i == j else ZERO for i in range(n) for j in range(n)])
    if spec.family in ("so", "sp"):
        g = spec.form
        for r in range(n):
            for c in range(n):
                row = [ZERO] * (n * n)
                # (X^T G + G X)[r][c] = sum_k X[k,r] G[k,c] + G[r,k] X[k,c]
                for k in range(n):
                    row[idx(k, r)] = row[idx(k, r)] + g.entries[k][c]
                    row[idx(k, c)] = row[idx(k, c)] + g.entries[r][k]
                rows.append(row)
    _, pivots = rref(rows)
    return n * n - len(pivots)


# -- invariant bilinear forms -------------------------------------------------------


@dataclass(frozen=True)
class BilinearClassification:
    kind: str  # "orthogonal" | "symplectic" | "none" | "multiple"
    form: Matrix | None
    dimension: int  # of the full solution space of A^T G A = G


def invertible_combination(candidates: list[Matrix]) -> Matrix | None:
    """An invertible element of the span, or None if the determinant vanishes
    identically.  Exhausting the grid {0..n}^d certifies the latter because
    det has degree at most n in each coefficient."""
    if not candidates:
        return None
    for x in candidates:
        if x.is_invertible():
            return x
    n = candidates[0].rows
    d = len(candidates)
    if (n + 1) ** d > 200_000:
        raise MathError("combination space too large to certify singularity",
                        code="UNDECIDED")
    from itertools import product as iter_product

    for coeffs in iter_product(range(n + 1), repeat=d):
        if not any(coeffs):
            continue
        x = Matrix.zeros(n, n)
        for c, cand in zip(coeffs, candidates):
            if c:
                x = x + cand.scale(c)
        if x.is_invertible():
            return x
    return None


def _invariant_form_rows(mats: list[Matrix], n: int) -> list[list[CyclotomicNumber]]:
    rows = []

    def idx(i, j):
        return i * n + j

    for a in mats:
        for r in range(n):
            for c in range(n):
                row = [ZERO] * (n * n)
                # (A^T G A - G)[r][c] = sum_{k,l} A[k,r] G[k,l] A[l,c] - G[r,c]
                for k in range(n):
                    akr = a.entries[k][r]
                    if akr.is_zero():
                        continue
                    for l in range(n):
                        alc = a.entries[l][c]
                        if alc.is_zero():
                            continue
                        row[idx(k, l)] = row[idx(k, l)] + akr * alc
                row[idx(r, c)] = row[idx(r, c)] - ONE
                rows.append(row)
    return rows


def invariant_forms_of_parity(mats: list[Matrix], alternating: bool) -> list[Matrix]:
    """Basis of the invariant symmetric (or alternating) pairings."""
    if not mats:
        raise MathError("empty tuple")
    n = mats[0].rows
    rows = _invariant_form_rows(mats, n)
    sign = -1 if alternating else 1
    for i in range(n):
        for j in range(i, n):
            row = [ZERO] * (n * n)
            row[i * n + j] = row[i * n + j] + ONE
            row[j * n + i] = row[j * n + i] - sign * ONE
            rows.append(row)
    basis = kernel(Matrix(rows))
    return [
        Matrix([[v[i * n + j] for j in range(n)] for i in range(n)]) for v in basis
    ]


def invariant_bilinear(mats: list[Matrix]) -> BilinearClassification:
    """Classify the pairings G with A^T G A = G for every A in the tuple.

    kind "orthogonal"/"symplectic" means a one-dimensional solution space
    spanned by an invertible symmetric/alternating G (returned); "none"
    covers both no solution and a degenerate one; "multiple" means the
    solution space has dimension > 1.
    """
    if not mats:
        raise MathError("empty tuple")
    n = mats[0].rows
    for a in mats:
        if not a.is_square() or a.rows != n:
            raise MathError("invariant_bilinear size mismatch", code="SIZE_MISMATCH")
    basis = kernel(Matrix(_invariant_form_rows(mats, n)))
    if not basis:
        return BilinearClassification("none", None, 0)
    if len(basis) > 1:
        return BilinearClassification("multiple", None, len(basis))
    g = Matrix([[basis[0][i * n + j] for j in range(n)] for i in range(n)])
    gt = g.transpose()
    if not g.is_invertible():
        return BilinearClassification("none", None, 1)
    if gt == g:
        return BilinearClassification("orthogonal", g, 1)
    if gt == g.scale(-1):
        return BilinearClassification("symplectic", g, 1)
    # The solution space is transpose-stable, so a 1-dim space is sym or alt.
    return BilinearClassification("none", None, 1)  # pragma: no cover
