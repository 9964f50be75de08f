"""Rank reduction of rigid formal data and plan replay.

reduce_profile drives a cohomologically rigid irreducible GL profile down to
rank one by alternating twists with middle convolutions, recording the
inverse sequence as a ConstructionPlan; replay executes a plan on matrices
from its rank-one base.  At every step the twist scalars and the convolution
character are chosen by exhaustive search over the eigenvalues present,
minimizing the resulting rank; if no choice strictly decreases the rank the
reduction stops with STUCK rather than looping.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as iter_product

from .cyclotomic import Rou, rou_inv, rou_is_one, rou_normalize, rou_to_cyc
from .errors import MathError, StepFailedError, StuckError
from . import convolution
from .convolution import MonodromyTuple, rank_one_tuple
from .localdata import (
    FormalLocalSystem,
    GroupTag,
    is_cohomologically_rigid,
    mc_formal,
    mc_rank,
    twist_formal,
)

PROJECTION_MAPS = ("sp4_so5", "sl4_so6")


@dataclass(frozen=True)
class PlanStep:
    op: str  # "mc" | "twist" | "sym2" | "lambda2" | "tensor" | "project"
    lam: Rou | None = None
    scalars: tuple[tuple[str, Rou], ...] | None = None
    plan: "ConstructionPlan | None" = None
    mapping: str | None = None

    @staticmethod
    def mc(lam: Rou) -> "PlanStep":
        lam = rou_normalize(*lam)
        if rou_is_one(lam):
            raise MathError("trivial convolution character", code="TRIVIAL_CHARACTER")
        return PlanStep("mc", lam=lam)

    @staticmethod
    def twist(scalars: dict[str, Rou]) -> "PlanStep":
        items = tuple(sorted((k, rou_normalize(*v)) for k, v in scalars.items()))
        return PlanStep("twist", scalars=items)

    @staticmethod
    def project(mapping: str) -> "PlanStep":
        if mapping not in PROJECTION_MAPS:
            raise MathError(f"unknown projection {mapping!r}")
        return PlanStep("project", mapping=mapping)


@dataclass(frozen=True)
class ConstructionPlan:
    """Rank-one base (scalar per finite puncture) plus an operation list."""

    base: tuple[tuple[str, Rou], ...]
    steps: tuple[PlanStep, ...]

    def punctures(self) -> tuple[str, ...]:
        return tuple(label for label, _ in self.base)


@dataclass(frozen=True)
class TraceStep:
    scalars: tuple[tuple[str, Rou], ...]
    lam: Rou
    rank_before: int
    rank_after: int
    profile_after: FormalLocalSystem


@dataclass
class ReductionTrace:
    start: FormalLocalSystem
    steps: list[TraceStep] = field(default_factory=list)


def _candidate_reductions(f: FormalLocalSystem):
    """All (scalars, lam, new_rank) choices built from eigenvalues present."""
    labels = f.finite_punctures()
    options = []
    for label in labels:
        eigen = f.class_at(label).eigenvalues()
        options.append(sorted({rou_inv(mu) for mu in eigen}))
    for combo in iter_product(*options):
        scalars = dict(zip(labels, combo))
        twisted = twist_formal(f, scalars)
        lam_candidates = [
            mu for mu in twisted.infinity_class.eigenvalues() if not rou_is_one(mu)
        ]
        if not lam_candidates:
            lam_candidates = [(2, 1)]
        for lam in lam_candidates:
            yield scalars, lam, twisted, mc_rank(twisted, lam)


def reduce_profile(f: FormalLocalSystem) -> tuple[ConstructionPlan, ReductionTrace]:
    """Reduce a rigid irreducible GL profile to rank one; return the inverse
    construction plan and the audit trace."""
    if f.group.family != "GL":
        raise MathError("reduction operates on GL-tagged profiles")
    report = is_cohomologically_rigid(f, GroupTag("GL", f.rank), assume_irreducible=True)
    if not report.rigid:
        raise MathError(
            f"profile is not cohomologically rigid (chi = {report.chi}, need 2)",
            code="NOT_RIGID",
        )
    trace = ReductionTrace(start=f)
    rounds: list[tuple[dict[str, Rou], Rou]] = []
    cur = f
    guard = f.rank * len(f.punctures)
    while cur.rank > 1:
        if len(rounds) >= guard:  # pragma: no cover - termination safety net
            raise StuckError("reduction exceeded the step bound")
        best = None
        for scalars, lam, twisted, m in _candidate_reductions(cur):
            if m <= 0 or m >= cur.rank:
                continue
            if best is not None and m >= best[0]:
                continue
            try:
                nxt = mc_formal(twisted, lam)
            except MathError:
                continue
            best = (m, scalars, lam, nxt)
            if m == 1:
                break
        if best is None:
            raise StuckError(
                f"no twist/character choice reduces rank {cur.rank}",
                best_candidate=None,
            )
        m, scalars, lam, nxt = best
        rounds.append((scalars, lam))
        trace.steps.append(
            TraceStep(
                scalars=tuple(sorted(scalars.items())),
                lam=lam,
                rank_before=cur.rank,
                rank_after=m,
                profile_after=nxt,
            )
        )
        cur = nxt
    base = tuple(
        (label, cur.class_at(label).parts[0][0]) for label in cur.finite_punctures()
    )
    steps: list[PlanStep] = []
    for scalars, lam in reversed(rounds):
        steps.append(PlanStep.mc(rou_inv(lam)))
        inverse = {k: rou_inv(v) for k, v in scalars.items() if not rou_is_one(v)}
        if inverse:
            steps.append(PlanStep.twist(inverse))
    return ConstructionPlan(base=base, steps=tuple(steps)), trace


def replay(plan: ConstructionPlan) -> MonodromyTuple:
    """Execute a plan on matrices starting from its rank-one base."""
    scalars = {label: rou_to_cyc(v) for label, v in plan.base}
    t = rank_one_tuple(plan.punctures(), scalars)
    for index, step in enumerate(plan.steps):
        try:
            t = _apply_step(t, step)
        except MathError as exc:
            raise StepFailedError(index, exc) from exc
    return t


def _apply_step(t: MonodromyTuple, step: PlanStep) -> MonodromyTuple:
    if step.op == "mc":
        return convolution.middle_convolution(t, rou_to_cyc(step.lam))
    if step.op == "twist":
        return convolution.twist(
            t, {label: rou_to_cyc(v) for label, v in step.scalars}
        )
    if step.op == "sym2":
        return convolution.sym2(t)
    if step.op == "lambda2":
        return convolution.lambda2(t)
    if step.op == "tensor":
        return convolution.tensor(t, replay(step.plan))
    if step.op == "project":
        if step.mapping == "sp4_so5":
            return convolution.project_sp4_to_so5(t)
        return convolution.project_sl4_to_so6(t)
    raise MathError(f"unknown plan step {step.op!r}")


def realize(f: FormalLocalSystem) -> MonodromyTuple:
    """Explicit tuple with the given rigid irreducible formal data."""
    plan, _ = reduce_profile(f)
    return replay(plan)
