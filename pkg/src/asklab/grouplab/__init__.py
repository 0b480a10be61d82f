"""Finite groups and orbit counts built from module representations and Lie data."""

from asklab.grouplab.groups import (
    GroupTable,
    abelian_group,
    baer_group,
    class_count_naive,
    conjugacy_classes,
    general_linear_group,
    heisenberg_group,
    matrix_group_closure,
    unitriangular_group,
)
from asklab.grouplab.lie import (
    LieData,
    elementary,
    full_nilpotent,
    lie_adjoint_rep,
    lie_exp_group,
    lie_inclusion_rep,
    lie_validate,
    load_lie,
)
from asklab.grouplab.orbits import (
    FiniteAction,
    burnside_orbits,
    mtheta_orbit_count,
    natural_orbit_count,
)
from asklab.grouplab.structural import class_count_structural
