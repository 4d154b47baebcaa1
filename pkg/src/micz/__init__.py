"""Generalized MICZ-Kepler problems in odd dimensions 2k+1.

Numerical toolkit for the so(2k) magnetic cone, the generalized Dirac
monopole, the Wong phase space Poisson structure, the so(2, 2k+2)
observables J_AB and the resulting super-integrable dynamics.
"""

from micz.liealg import (
    AlgElement,
    GroupElement,
    StructureConstants,
    alg_bracket,
    basis_index,
    coadjoint_act,
    invariant_metric,
    random_rotation,
    structure_constants,
)
from micz.cone import (
    ConePoint,
    NotOnConeError,
    casimir_Q,
    charge,
    cone_membership,
    sample_orbit_point,
    sigma_minus,
    sigma_plus,
)
from micz.monopole import (
    ChartSingularityError,
    covariant_derivative_F,
    field_scalar,
    field_strength,
    gauge_potential,
)
from micz.poisson import PhasePoint, Observable, evaluate_J, moment_map, poisson_bracket
from micz.dynamics import (
    IntegratorConfig,
    angular_momentum,
    eom_rhs,
    hamiltonian,
    integrate,
    lenz_vector,
)

__version__ = "0.1.0"

__all__ = [
    "AlgElement",
    "ChartSingularityError",
    "ConePoint",
    "GroupElement",
    "IntegratorConfig",
    "NotOnConeError",
    "Observable",
    "PhasePoint",
    "StructureConstants",
    "alg_bracket",
    "angular_momentum",
    "basis_index",
    "casimir_Q",
    "charge",
    "coadjoint_act",
    "cone_membership",
    "covariant_derivative_F",
    "eom_rhs",
    "evaluate_J",
    "field_scalar",
    "field_strength",
    "gauge_potential",
    "hamiltonian",
    "integrate",
    "invariant_metric",
    "lenz_vector",
    "moment_map",
    "poisson_bracket",
    "random_rotation",
    "sample_orbit_point",
    "sigma_minus",
    "sigma_plus",
    "structure_constants",
]
