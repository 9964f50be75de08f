"""Exact computation with rigid local systems on the punctured projective line.

Monodromy tuples over cyclotomic fields, middle convolution and the other
geometric operations, cohomological rigidity tests, rank reduction with plan
replay, and class-level spin lifts through the low-rank isogenies.
"""

from .cyclotomic import CyclotomicNumber, format_cyclotomic, parse_cyclotomic, zeta
from .errors import InputError, MathError, RigidmcError, StepFailedError, StuckError
from .linalg import GroupSpec, Matrix, commutant_dim, invariant_bilinear, kernel, rank
from .localdata import (
    FormalLocalSystem,
    GroupTag,
    JordanClass,
    centralizer_dim_gl,
    class_centralizer_dim,
    euler_characteristic,
    group_representative,
    is_cohomologically_rigid,
    jordan_type,
    lambda2_formal,
    mc_formal,
    parse_group,
    pullback_power_formal,
    sym2_formal,
    tensor_formal,
    twist_formal,
    validate_class_in_group,
)
from .convolution import (
    MonodromyTuple,
    are_conjugate,
    is_irreducible,
    jordan_profile,
    lambda2,
    middle_convolution,
    project_sl4_to_so6,
    project_sp4_to_so5,
    rank_one_tuple,
    sym2,
    tensor,
    twist,
)
from .katz import ConstructionPlan, PlanStep, ReductionTrace, realize, reduce_profile, replay
from .isogeny import (
    SpinLiftResult,
    lift_class_so6_to_sl4,
    project_class_sp4_to_so5,
    spin_class,
    verify_lift,
)

__all__ = [name for name in dir() if not name.startswith("_")]
