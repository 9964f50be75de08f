"""Class-level lifting through the low-rank isogenies.

Sp4 = Spin5 -> SO5 and SL4 = Spin6 -> SO6 admit inverse maps on conjugacy
classes, and SO(2n+1) classes (n <= 3) lift to the 2^n-dimensional spin
representation.  A class decomposes into commuting semisimple x unipotent
data; the graded eigenvalue multiset pairs off into n torus slots, the spin
values are the 2^n products of slot square roots, and the Jordan structure
is reassembled by peeling weight strings.  The canonical square root of
zeta_m^j is zeta_(2m)^j; flipping any choice flips the whole lift by the
central -1, so exactly two candidates exist.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iter_product

from .cyclotomic import Rou, rou_inv, rou_mul, rou_pow, rou_sqrt
from .errors import MathError
from .convolution import (
    MonodromyTuple,
    are_conjugate,
    project_sl4_to_so6,
    project_sp4_to_so5,
)
from .localdata import (
    GroupTag,
    JordanClass,
    format_class,
    lambda2_class,
    validate_class_in_group,
)

SPIN_RANK_CAP = 3  # SO(2n+1) lifting implemented for n <= 3


@dataclass(frozen=True)
class SpinLiftResult:
    """Both candidate lifts; they differ by scaling every eigenvalue by -1.
    candidates[canonical] is the one built from canonical square roots."""

    candidates: tuple[JordanClass, JordanClass]
    canonical: int = 0

    def contains(self, c: JordanClass) -> bool:
        return c in self.candidates


def _graded_eigenvalues(c: JordanClass) -> list[tuple[Rou, int]]:
    entries = []
    for mu, size in c.parts:
        entries.extend((mu, w) for w in range(size - 1, -size, -2))
    return entries


def _pair_into_slots(entries: list[tuple[Rou, int]]) -> list[tuple[Rou, int]]:
    """Pair each graded eigenvalue with its inverse; one representative per
    pair, chosen deterministically."""
    remaining = sorted(entries, key=lambda e: (e[0][0], e[0][1], -e[1]))
    slots = []
    while remaining:
        mu, w = remaining.pop(0)
        partner = (rou_inv(mu), -w)
        try:
            remaining.remove(partner)
        except ValueError:
            raise MathError(
                "graded eigenvalues do not pair under inversion",
                code="NOT_REALIZABLE",
            ) from None
        slots.append((mu, w))
    return slots


def _reassemble(values: list[tuple[Rou, int]]) -> JordanClass:
    """Rebuild Jordan blocks from (eigenvalue, weight) pairs by repeatedly
    peeling the string a, a-2, ..., -a off the weight multiset."""
    by_eigenvalue: dict[Rou, list[int]] = {}
    for nu, w in values:
        by_eigenvalue.setdefault(nu, []).append(w)
    parts = []
    for nu, weights in by_eigenvalue.items():
        weights.sort(reverse=True)
        while weights:
            top = weights[0]
            for w in range(top, -top - 1, -2):
                try:
                    weights.remove(w)
                except ValueError:
                    raise MathError(
                        "weights do not form symmetric strings",
                        code="NOT_REALIZABLE",
                    ) from None
            parts.append((nu, top + 1))
    return JordanClass(parts)


def _spin_values(slots, sign_patterns) -> list[tuple[Rou, int]]:
    roots = [rou_sqrt(mu) for mu, _ in slots]
    grades = [w for _, w in slots]
    if sum(grades) % 2:  # pragma: no cover - excluded by pairing
        raise MathError("slot grading has odd total parity")
    values = []
    for eps in sign_patterns:
        nu = (1, 0)
        for sign, root in zip(eps, roots):
            nu = rou_mul(nu, root if sign > 0 else rou_inv(root))
        w = sum(s * g for s, g in zip(eps, grades))
        values.append((nu, w // 2))
    return values


def spin_class(c: JordanClass, group: GroupTag) -> SpinLiftResult:
    """Spin lift of an SO(2n+1) class, n <= 3: a rank-2^n class pair."""
    if group.family != "SO" or group.size % 2 == 0:
        raise MathError("spin_class expects an odd special orthogonal group",
                        code="NOT_REALIZABLE")
    n = (group.size - 1) // 2
    if n > SPIN_RANK_CAP:
        raise MathError(f"spin lifting is capped at SO{2 * SPIN_RANK_CAP + 1}",
                        code="NOT_REALIZABLE")
    if not validate_class_in_group(c, group):
        raise MathError(
            f"class [{format_class(c)}] is not realizable in {group}",
            code="NOT_REALIZABLE",
        )
    entries = _graded_eigenvalues(c)
    try:
        entries.remove(((1, 0), 0))
    except ValueError:
        raise MathError("odd orthogonal class must fix a line",
                        code="NOT_REALIZABLE") from None
    slots = _pair_into_slots(entries)
    assert len(slots) == n
    values = _spin_values(slots, iter_product((1, -1), repeat=n))
    lifted = _reassemble(values)
    return SpinLiftResult((lifted, lifted.scale((2, 1))))


def lift_class_so6_to_sl4(c: JordanClass) -> SpinLiftResult:
    """Rank-4 classes whose exterior square is the given SO6 class."""
    group = GroupTag("SO", 6)
    if c.rank != 6 or not validate_class_in_group(c, group):
        raise MathError(
            f"class [{format_class(c)}] is not realizable in SO6",
            code="NOT_LIFTABLE",
        )
    slots = _pair_into_slots(_graded_eigenvalues(c))
    assert len(slots) == 3
    half_spin = [eps for eps in iter_product((1, -1), repeat=3)
                 if eps[0] * eps[1] * eps[2] == 1]
    lifted = _reassemble(_spin_values(slots, half_spin))
    if lambda2_class(lifted) != c:  # pragma: no cover - consistency guard
        raise MathError("lift does not project back", code="NOT_LIFTABLE")
    return SpinLiftResult((lifted, lifted.scale((2, 1))))


def project_class_sp4_to_so5(c: JordanClass) -> JordanClass:
    """Formal shadow of the Sp4 -> SO5 projection: exterior square minus one
    trivial block."""
    if c.rank != 4:
        raise MathError("projection needs a rank-4 class", code="RANK_NOT_4")
    wedge = lambda2_class(c)
    parts = list(wedge.parts)
    try:
        parts.remove(((1, 0), 1))
    except ValueError:
        raise MathError(
            "exterior square has no trivial line; class is not symplectic",
            code="NOT_SYMPLECTIC",
        ) from None
    return JordanClass(parts)


def verify_lift(
    lifted: MonodromyTuple, base: MonodromyTuple, mapping: str
) -> bool:
    """Check that the projection of a lifted tuple is conjugate to the base
    tuple.  The central ambiguity of the lift dies in the projection."""
    if mapping == "sp4_so5":
        expected_rank = 5
        projector = project_sp4_to_so5
    elif mapping == "sl4_so6":
        expected_rank = 6
        projector = project_sl4_to_so6
    else:
        raise MathError(f"unknown isogeny {mapping!r}")
    if lifted.rank != 4 or base.rank != expected_rank:
        raise MathError("tuple ranks do not match the isogeny",
                        code="SHAPE_MISMATCH")
    if lifted.punctures != base.punctures:
        raise MathError("puncture lists differ", code="SHAPE_MISMATCH")
    return are_conjugate(projector(lifted), base) is not None
