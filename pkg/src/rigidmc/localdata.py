"""Matrix-free local monodromy data.

A JordanClass is the conjugacy-class datum of one local monodromy: a multiset
of (root of unity, block size) pairs, with eigenvalues stored as canonical
(order, exponent) pairs.  A FormalLocalSystem is rank + punctures + one class
per puncture + a group tag; the Euler characteristic count, the rigidity
test, and the formal transforms (twist, tensor, Sym^2, Lambda^2, middle
convolution, power pull-back) all operate at this level.

The finite/infinity middle-convolution tables used by mc_formal are exercised
against the matrix-level operation by the test suite; the matrix computation
is the ground truth.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm

from .cyclotomic import (
    ONE,
    Rou,
    rou_inv,
    rou_is_one,
    rou_mul,
    rou_normalize,
    rou_pow,
    rou_str,
    rou_to_cyc,
)
from .errors import MathError
from .linalg import GroupSpec, Matrix, commutant_dim, rank

INFINITY = "inf"


# -- Jordan classes ------------------------------------------------------------


class JordanClass:
    """Multiset of (eigenvalue, block size); eigenvalues are roots of unity."""

    __slots__ = ("parts",)

    def __init__(self, parts):
        norm = []
        for mu, size in parts:
            if not isinstance(mu, tuple):
                rou = mu.as_root_of_unity()
                if rou is None:
                    raise MathError("Jordan class eigenvalues must be roots of unity")
                mu = rou
            else:
                mu = rou_normalize(*mu)
            if size < 1:
                raise MathError(f"bad block size {size}")
            norm.append((mu, int(size)))
        norm.sort(key=lambda p: (p[0][0], p[0][1], -p[1]))
        object.__setattr__(self, "parts", tuple(norm))

    def __setattr__(self, *a):
        raise AttributeError("JordanClass is immutable")

    @staticmethod
    def identity(n: int) -> "JordanClass":
        return JordanClass([((1, 0), 1)] * n)

    @staticmethod
    def unipotent(size: int, eigenvalue: Rou = (1, 0)) -> "JordanClass":
        """A single Jordan block: U(size) scaled by the given eigenvalue."""
        return JordanClass([(eigenvalue, size)])

    @property
    def rank(self) -> int:
        return sum(size for _, size in self.parts)

    def det(self) -> Rou:
        out = (1, 0)
        for mu, size in self.parts:
            out = rou_mul(out, rou_pow(mu, size))
        return out

    def eigenvalues(self) -> list[Rou]:
        return sorted({mu for mu, _ in self.parts})

    def blocks_at(self, mu: Rou) -> list[int]:
        mu = rou_normalize(*mu)
        return sorted((s for m, s in self.parts if m == mu), reverse=True)

    def geometric_multiplicity(self, mu: Rou) -> int:
        mu = rou_normalize(*mu)
        return sum(1 for m, _ in self.parts if m == mu)

    def algebraic_multiplicity(self, mu: Rou) -> int:
        mu = rou_normalize(*mu)
        return sum(s for m, s in self.parts if m == mu)

    def scale(self, c: Rou) -> "JordanClass":
        c = rou_normalize(*c)
        return JordanClass([(rou_mul(c, mu), s) for mu, s in self.parts])

    def power(self, k: int) -> "JordanClass":
        # In characteristic zero J_l(mu)^k keeps a single size-l block.
        if k < 1:
            raise MathError("power exponent must be positive")
        return JordanClass([(rou_pow(mu, k), s) for mu, s in self.parts])

    def is_trivial(self) -> bool:
        return all(rou_is_one(mu) and s == 1 for mu, s in self.parts)

    def __eq__(self, other):
        return isinstance(other, JordanClass) and self.parts == other.parts

    def __hash__(self):
        return hash(self.parts)

    def __repr__(self):
        return f"JordanClass({format_class(self)})"


def format_class(c: JordanClass) -> str:
    out = []
    for mu, size in c.parts:
        label = rou_str(mu)
        if size == 1:
            out.append(label)
        elif label == "1":
            out.append(f"U({size})")
        elif label == "-1":
            out.append(f"-U({size})")
        else:
            out.append(f"{label}*U({size})")
    return ", ".join(out)


def parse_class_part(eigenvalue, size: int) -> tuple[Rou, int]:
    from .cyclotomic import parse_cyclotomic

    x = parse_cyclotomic(eigenvalue)
    rou = x.as_root_of_unity()
    if rou is None:
        raise MathError(f"eigenvalue {eigenvalue!r} is not a root of unity")
    return rou, size


# -- Jordan type of an explicit matrix ------------------------------------------


def jordan_type(a: Matrix, search_order: int) -> JordanClass:
    """Jordan class of an invertible matrix, searching eigenvalues among the
    roots of unity of order dividing search_order.

    Block sizes come from the rank sequence of (A - mu I)^j.  If the found
    multiplicities do not exhaust the size, the matrix has an eigenvalue
    outside the searched set and NOT_QUASI_UNIPOTENT is raised.
    """
    n = a.rows
    if not a.is_square():
        raise MathError("jordan_type needs a square matrix", code="SIZE_MISMATCH")
    parts = []
    total = 0
    ident = Matrix.identity(n)
    for k in range(search_order):
        mu = rou_normalize(search_order, k)
        b = a - ident.scale(rou_to_cyc(mu))
        d1 = n - rank(b)
        if d1 == 0:
            continue
        ds = [0, d1]
        power = b
        while ds[-1] > ds[-2]:
            power = power @ b
            ds.append(n - rank(power))
            if len(ds) > n + 1:
                break
        for size in range(1, len(ds)):
            atleast_this = ds[size] - ds[size - 1]
            atleast_next = ds[size + 1] - ds[size] if size + 1 < len(ds) else 0
            for _ in range(atleast_this - atleast_next):
                parts.append((mu, size))
                total += size
        if total == n:
            break
    if total != n:
        raise MathError(
            f"eigenvalues outside the roots of unity of order dividing {search_order}",
            code="NOT_QUASI_UNIPOTENT",
        )
    return JordanClass(parts)


# -- centralizer dimensions ------------------------------------------------------


def _conjugate_partition(sizes: list[int]) -> list[int]:
    if not sizes:
        return []
    sizes = sorted(sizes, reverse=True)
    return [sum(1 for s in sizes if s >= i) for i in range(1, sizes[0] + 1)]


def centralizer_dim_gl(c: JordanClass) -> int:
    """dim of the gl-centralizer: sum over eigenvalues of sum (lambda'_i)^2."""
    total = 0
    for mu in c.eigenvalues():
        total += sum(x * x for x in _conjugate_partition(c.blocks_at(mu)))
    return total


# -- group tags and realizability --------------------------------------------------


@dataclass(frozen=True)
class GroupTag:
    family: str  # "GL" | "SL" | "SO" | "Sp"
    size: int

    def __post_init__(self):
        if self.family not in ("GL", "SL", "SO", "Sp"):
            raise MathError(f"unknown group family {self.family!r}")
        if self.size < 1:
            raise MathError(f"bad group size {self.size}")
        if self.family == "Sp" and self.size % 2:
            raise MathError("Sp needs even size", code="NOT_REALIZABLE")

    def dim(self) -> int:
        n = self.size
        return {
            "GL": n * n,
            "SL": n * n - 1,
            "SO": n * (n - 1) // 2,
            "Sp": n * (n + 1) // 2,
        }[self.family]

    def rigidity_threshold(self) -> int:
        # 2 * dim of the center of the Lie algebra.
        if self.family == "GL":
            return 2
        if self.family == "SO" and self.size == 2:
            return 2
        return 0

    def __str__(self):
        return f"{self.family}{self.size}"


_GROUP_RE = re.compile(r"^(GL|SL|SO|SP|Sp|gl|sl|so|sp)(\d+)$")


def parse_group(text: str) -> GroupTag:
    m = _GROUP_RE.match(text.strip())
    if not m:
        raise MathError(f"bad group tag {text!r}")
    family = m.group(1).upper()
    family = {"GL": "GL", "SL": "SL", "SO": "SO", "SP": "Sp"}[family]
    return GroupTag(family, int(m.group(2)))


def validate_class_in_group(c: JordanClass, g: GroupTag) -> bool:
    """True iff some element of the group has Jordan type c."""
    if c.rank != g.size:
        raise MathError(
            f"class rank {c.rank} does not match group size {g.size}",
            code="RANK_MISMATCH",
        )
    if g.family == "GL":
        return True
    if g.family == "SL":
        return rou_is_one(c.det())
    # Orthogonal/symplectic: classes closed under mu <-> mu^-1, with the
    # classical parity constraints on block multiplicities at mu = +-1.
    for mu in c.eigenvalues():
        if c.blocks_at(mu) != c.blocks_at(rou_inv(mu)):
            return False
    one, minus_one = (1, 0), (2, 1)
    if g.family == "Sp":
        for mu in (one, minus_one):
            sizes = c.blocks_at(mu)
            for s in set(sizes):
                if s % 2 == 1 and sizes.count(s) % 2:
                    return False
        return True
    # SO: even blocks at +-1 pair up, and det must be 1.
    for mu in (one, minus_one):
        sizes = c.blocks_at(mu)
        for s in set(sizes):
            if s % 2 == 0 and sizes.count(s) % 2:
                return False
    return rou_is_one(c.det())


# -- explicit group representatives --------------------------------------------------


def _jordan_block(mu: Rou, size: int) -> Matrix:
    z = rou_to_cyc(mu)
    return Matrix(
        [
            [z if i == j else (1 if j == i + 1 else 0) for j in range(size)]
            for i in range(size)
        ]
    )


@lru_cache(maxsize=None)
def _unipotent_exp(size: int) -> Matrix:
    # exp of the regular nilpotent: entries 1/(j-i)! above the diagonal.
    fact = [1]
    for k in range(1, size):
        fact.append(fact[-1] * k)
    return Matrix(
        [
            [Fraction(1, fact[j - i]) if j >= i else 0 for j in range(size)]
            for i in range(size)
        ]
    )


def _selfdual_single(mu: Rou, size: int) -> tuple[Matrix, Matrix]:
    # mu is +-1.  exp(N) preserves the alternating-sign anti-diagonal form,
    # which is symmetric for odd size and alternating for even size.
    a = _unipotent_exp(size)
    if mu == (2, 1):
        a = a.scale(-1)
    g = Matrix(
        [
            [(-1) ** i if i + j == size - 1 else 0 for j in range(size)]
            for i in range(size)
        ]
    )
    return a, g


def _dual_pair(mu: Rou, size: int, eps: int) -> tuple[Matrix, Matrix]:
    # diag(B, B^-T) preserves [[0, I], [eps I, 0]] for any invertible B.
    b = _jordan_block(mu, size)
    a = b.direct_sum(b.inverse().transpose())
    zero = Matrix.zeros(size, size)
    ident = Matrix.identity(size)
    g = Matrix(
        [
            list(zero.entries[i]) + list(ident.entries[i])
            for i in range(size)
        ]
        + [
            list(ident.scale(eps).entries[i]) + list(zero.entries[i])
            for i in range(size)
        ]
    )
    return a, g


def group_representative(c: JordanClass, g: GroupTag) -> tuple[Matrix, Matrix | None]:
    """A matrix of Jordan type c inside the tagged group, with its Gram form
    for SO/Sp (None for GL/SL)."""
    if not validate_class_in_group(c, g):
        raise MathError(
            f"class [{format_class(c)}] is not realizable in {g}",
            code="NOT_REALIZABLE",
        )
    if g.family in ("GL", "SL"):
        blocks = [_jordan_block(mu, s) for mu, s in c.parts]
        a = blocks[0]
        for b in blocks[1:]:
            a = a.direct_sum(b)
        return a, None

    eps = 1 if g.family == "SO" else -1
    solo_parity = 1 if g.family == "SO" else 0  # block sizes allowed solo (mod 2)
    pieces: list[tuple[Matrix, Matrix]] = []
    parts = list(c.parts)
    used = [False] * len(parts)
    for i, (mu, size) in enumerate(parts):
        if used[i]:
            continue
        used[i] = True
        if mu in ((1, 0), (2, 1)):
            if size % 2 == solo_parity:
                pieces.append(_selfdual_single(mu, size))
                continue
            partner = mu
        else:
            partner = rou_inv(mu)
        j = next(
            (
                k
                for k in range(i + 1, len(parts))
                if not used[k] and parts[k] == (partner, size)
            ),
            None,
        )
        if j is None:  # pragma: no cover - excluded by validate
            raise MathError("unpairable block", code="NOT_REALIZABLE")
        used[j] = True
        pieces.append(_dual_pair(mu, size, eps))
    a, form = pieces[0]
    for piece_a, piece_g in pieces[1:]:
        a = a.direct_sum(piece_a)
        form = form.direct_sum(piece_g)
    return a, form


def class_centralizer_dim(c: JordanClass, g: GroupTag) -> int:
    """dim of the Ad-fixed subspace of Lie(g) under a representative of c."""
    if g.family == "GL":
        return centralizer_dim_gl(c)
    if g.family == "SL":
        return centralizer_dim_gl(c) - 1
    a, form = group_representative(c, g)
    spec = GroupSpec.so(form) if g.family == "SO" else GroupSpec.sp(form)
    return commutant_dim([a], spec)


# -- formal local systems ---------------------------------------------------------------


class FormalLocalSystem:
    """rank + ordered punctures (with the distinguished label "inf") + one
    Jordan class per puncture + group tag."""

    __slots__ = ("rank", "punctures", "classes", "group")

    def __init__(self, punctures, classes, group: GroupTag, validate_group: bool = True):
        punctures = tuple(punctures)
        classes = tuple(classes)
        if len(punctures) != len(classes):
            raise MathError("punctures and classes differ in length")
        if punctures.count(INFINITY) != 1:
            raise MathError(f'punctures must contain "{INFINITY}" exactly once')
        if len(set(punctures)) != len(punctures):
            raise MathError("duplicate puncture labels")
        ranks = {c.rank for c in classes}
        if len(ranks) != 1:
            raise MathError("all classes must have the same rank")
        (n,) = ranks
        if group.size != n:
            raise MathError(
                f"group size {group.size} does not match rank {n}", code="RANK_MISMATCH"
            )
        det = (1, 0)
        for c in classes:
            det = rou_mul(det, c.det())
        if not rou_is_one(det):
            raise MathError(
                "product of class determinants is not 1", code="NOT_REALIZABLE"
            )
        if validate_group and group.family != "GL":
            for p, c in zip(punctures, classes):
                if not validate_class_in_group(c, group):
                    raise MathError(
                        f"class at {p!r} is not realizable in {group}",
                        code="NOT_REALIZABLE",
                    )
        object.__setattr__(self, "rank", n)
        object.__setattr__(self, "punctures", punctures)
        object.__setattr__(self, "classes", classes)
        object.__setattr__(self, "group", group)

    def __setattr__(self, *a):
        raise AttributeError("FormalLocalSystem is immutable")

    def class_at(self, label: str) -> JordanClass:
        try:
            return self.classes[self.punctures.index(label)]
        except ValueError:
            raise MathError(f"no puncture {label!r}") from None

    @property
    def infinity_class(self) -> JordanClass:
        return self.class_at(INFINITY)

    def finite_items(self) -> list[tuple[str, JordanClass]]:
        return [
            (p, c) for p, c in zip(self.punctures, self.classes) if p != INFINITY
        ]

    def finite_punctures(self) -> list[str]:
        return [p for p in self.punctures if p != INFINITY]

    def search_order(self) -> int:
        """lcm of the eigenvalue orders; jordan_type with this order finds
        every eigenvalue a realization of this profile can have."""
        order = 1
        for c in self.classes:
            for (m, _), _size in c.parts:
                order = lcm(order, m)
        return order

    def with_group(self, group: GroupTag) -> "FormalLocalSystem":
        return FormalLocalSystem(self.punctures, self.classes, group)

    def __eq__(self, other):
        if not isinstance(other, FormalLocalSystem):
            return NotImplemented
        return (
            self.rank == other.rank
            and self.group == other.group
            and dict(zip(self.punctures, self.classes))
            == dict(zip(other.punctures, other.classes))
        )

    __hash__ = None

    def __repr__(self):
        body = "; ".join(
            f"{p}: {format_class(c)}" for p, c in zip(self.punctures, self.classes)
        )
        return f"FormalLocalSystem({self.group}, {body})"


# -- Euler characteristic and rigidity -------------------------------------------------


def euler_characteristic(f: FormalLocalSystem, g: GroupTag) -> int:
    """dim H * (2 - |S|) + sum over punctures of the Ad-fixed dimension."""
    if g.size != f.rank:
        raise MathError("group size does not match rank", code="RANK_MISMATCH")
    total = sum(class_centralizer_dim(c, g) for c in f.classes)
    return g.dim() * (2 - len(f.punctures)) + total


@dataclass(frozen=True)
class RigidityReport:
    group: str
    chi: int
    threshold: int
    rigid: bool
    conditional: bool  # True when irreducibility was not assumed or verified


def is_cohomologically_rigid(
    f: FormalLocalSystem, g: GroupTag, assume_irreducible: bool = True
) -> RigidityReport:
    chi = euler_characteristic(f, g)
    threshold = g.rigidity_threshold()
    return RigidityReport(
        group=str(g),
        chi=chi,
        threshold=threshold,
        rigid=(chi == threshold),
        conditional=not assume_irreducible,
    )


# -- formal transforms ---------------------------------------------------------------


def _as_rou(x) -> Rou:
    if isinstance(x, tuple):
        return rou_normalize(*x)
    from .cyclotomic import parse_cyclotomic

    rou = parse_cyclotomic(x).as_root_of_unity()
    if rou is None:
        raise MathError(f"{x!r} is not a root of unity")
    return rou


def twist_formal(f: FormalLocalSystem, scalars: dict) -> FormalLocalSystem:
    """Scale the class at each finite puncture; the class at infinity picks up
    the inverse of the product so the determinant relation survives."""
    scalars = {label: _as_rou(v) for label, v in scalars.items()}
    finite = set(f.finite_punctures())
    for label in scalars:
        if label not in finite:
            raise MathError(f"twist scalar at unknown puncture {label!r}")
    product = (1, 0)
    for v in scalars.values():
        product = rou_mul(product, v)
    inf_scalar = rou_inv(product)
    classes = []
    for p, c in zip(f.punctures, f.classes):
        if p == INFINITY:
            classes.append(c.scale(inf_scalar))
        else:
            classes.append(c.scale(scalars.get(p, (1, 0))))
    group = f.group
    try:
        return FormalLocalSystem(f.punctures, classes, group)
    except MathError:
        return FormalLocalSystem(f.punctures, classes, GroupTag("GL", f.rank))


def _tensor_parts(a: tuple[Rou, int], b: tuple[Rou, int]) -> list[tuple[Rou, int]]:
    # J_a (x) J_b = J_(a+b-1) + J_(a+b-3) + ... + J_(|a-b|+1), eigenvalues multiply.
    (mu, s), (nu, t) = a, b
    ev = rou_mul(mu, nu)
    return [(ev, s + t - 1 - 2 * i) for i in range(min(s, t))]


def tensor_class(c1: JordanClass, c2: JordanClass) -> JordanClass:
    parts = []
    for a in c1.parts:
        for b in c2.parts:
            parts.extend(_tensor_parts(a, b))
    return JordanClass(parts)


def sym2_class(c: JordanClass) -> JordanClass:
    parts = []
    items = c.parts
    for i, (mu, s) in enumerate(items):
        ev = rou_pow(mu, 2)
        size = 2 * s - 1
        while size >= 1:
            parts.append((ev, size))
            size -= 4
        for b in items[i + 1 :]:
            parts.extend(_tensor_parts((mu, s), b))
    return JordanClass(parts)


def lambda2_class(c: JordanClass) -> JordanClass:
    parts = []
    items = c.parts
    for i, (mu, s) in enumerate(items):
        ev = rou_pow(mu, 2)
        size = 2 * s - 3
        while size >= 1:
            parts.append((ev, size))
            size -= 4
        for b in items[i + 1 :]:
            parts.extend(_tensor_parts((mu, s), b))
    return JordanClass(parts)


def _classwise(f: FormalLocalSystem, fn, new_rank: int) -> FormalLocalSystem:
    classes = [fn(c) for c in f.classes]
    return FormalLocalSystem(f.punctures, classes, GroupTag("GL", new_rank))


def tensor_formal(f1: FormalLocalSystem, f2: FormalLocalSystem) -> FormalLocalSystem:
    if f1.punctures != f2.punctures:
        raise MathError("puncture sets differ", code="PUNCTURE_MISMATCH")
    classes = [tensor_class(a, b) for a, b in zip(f1.classes, f2.classes)]
    return FormalLocalSystem(f1.punctures, classes, GroupTag("GL", f1.rank * f2.rank))


def sym2_formal(f: FormalLocalSystem) -> FormalLocalSystem:
    return _classwise(f, sym2_class, f.rank * (f.rank + 1) // 2)


def lambda2_formal(f: FormalLocalSystem) -> FormalLocalSystem:
    return _classwise(f, lambda2_class, f.rank * (f.rank - 1) // 2)


def mc_rank(f: FormalLocalSystem, lam: Rou) -> int:
    """Rank of the middle convolution by lam: p*n minus the geometric
    multiplicity of 1 at the finite punctures and of lam at infinity."""
    p = len(f.finite_punctures())
    drop = sum(c.geometric_multiplicity((1, 0)) for _, c in f.finite_items())
    drop += f.infinity_class.geometric_multiplicity(lam)
    return p * f.rank - drop


def mc_formal(f: FormalLocalSystem, lam) -> FormalLocalSystem:
    """Local data of the middle convolution by the character lam != 1.

    Finite punctures: J(mu, l) -> J(lam mu, l) generically, J(1, l) shrinks to
    J(lam, l-1), J(lam^-1, l) grows to J(1, l+1), and trivial blocks pad the
    new rank.  At infinity the special pair is {1, lam} and padding blocks
    carry eigenvalue lam^-1.
    """
    lam = _as_rou(lam)
    if rou_is_one(lam):
        raise MathError("middle convolution needs a non-trivial character",
                        code="TRIVIAL_CHARACTER")
    nontrivial = sum(1 for _, c in f.finite_items() if not c.is_trivial())
    if f.rank == 1 and nontrivial < 2:
        raise MathError(
            "rank-1 system with fewer than two non-trivial finite punctures",
            code="PASS_THROUGH",
        )
    m = mc_rank(f, lam)
    if m <= 0:
        raise MathError("middle convolution quotient is zero", code="ZERO_QUOTIENT")
    lam_inv = rou_inv(lam)
    one = (1, 0)
    classes = []
    for p, c in zip(f.punctures, f.classes):
        parts: list[tuple[Rou, int]] = []
        if p == INFINITY:
            for mu, l in c.parts:
                if mu == one:
                    parts.append((lam_inv, l + 1))
                elif mu == lam:
                    if l > 1:
                        parts.append((one, l - 1))
                else:
                    parts.append((rou_mul(lam_inv, mu), l))
            filler = lam_inv
        else:
            for mu, l in c.parts:
                if mu == one:
                    if l > 1:
                        parts.append((lam, l - 1))
                elif mu == lam_inv:
                    parts.append((one, l + 1))
                else:
                    parts.append((rou_mul(lam, mu), l))
            filler = one
        content = sum(l for _, l in parts)
        if content > m:
            raise MathError(
                "local data is incompatible with the convolution rank",
                code="ZERO_QUOTIENT",
            )
        parts.extend([(filler, 1)] * (m - content))
        classes.append(JordanClass(parts))
    return FormalLocalSystem(f.punctures, classes, GroupTag("GL", m))


def pullback_power_formal(f: FormalLocalSystem, k: int) -> FormalLocalSystem:
    """Pull back along z -> z^k: punctures {0, 1, inf} become {0, mu_k, inf};
    the classes at 0 and inf are raised to the k-th power and the class at 1
    is copied to every k-th root of unity."""
    if k < 1:
        raise MathError("pull-back exponent must be positive")
    allowed = {INFINITY, "0", "1"}
    if not set(f.punctures) <= allowed:
        raise MathError(
            f"power pull-back needs punctures inside {sorted(allowed)}",
            code="UNSUPPORTED_PUNCTURES",
        )
    trivial = JordanClass.identity(f.rank)

    def get(label):
        return f.class_at(label) if label in f.punctures else trivial

    punctures = [INFINITY, "0"]
    classes = [get(INFINITY).power(k), get("0").power(k)]
    at_one = get("1")
    for i in range(k):
        punctures.append(rou_str(rou_normalize(k, i)))
        classes.append(at_one)
    return FormalLocalSystem(punctures, classes, GroupTag("GL", f.rank))
