"""Construct and verify 1-rotational k-factorizations of complete graphs.

The vertex set is a finite group ``G`` plus a point ``∞``; ``G`` acts by right
multiplication. The package certifies k-starters, develops them into
factorizations, lifts 2-starters to ``G x Z_n``, and splits the lift into
isomorphic 2-factors, which yields solutions to Oberwolfach problems.
"""

from .construct import (
    LiftedStarter,
    OPSolution,
    TwoStarterProfile,
    dihedral_double,
    expand_cycle,
    lift_2n,
    rotated_factor,
    solve_op,
    split_lift,
    two_starter_profile,
    walecki_cycles,
)
from .errors import InvariantViolation, NotATwoFactor, OberforgeError, ParameterError, PreconditionError
from .factors import (
    INF,
    Factor,
    act,
    build_factor,
    cycle_structure,
    cycles,
    difference_list,
    is_k_factor,
    stabilizer,
)
from .groups import FiniteGroup, GroupSpec, RkReport, check_rk_necessary, make_group
from .search import SearchSpec, enumerate_starters, find_starter
from .starter import (
    Factorization,
    OPSignature,
    Starter,
    develop,
    op_signature,
    verify_factorization,
    verify_starter,
)

__version__ = "0.1.0"
