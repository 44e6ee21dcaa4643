"""catsim: driven-dissipative optical cat states on truncated Fock spaces.

A small numpy/scipy library for building two-photon driven-dissipative
mode models, evolving their density matrices under the Lindblad equation,
and characterizing the resulting Schrodinger-cat states in phase space
(Wigner functions, homodyne quadrature distributions) and through
correlation measures (entropy, purity, partial-transpose negativity,
mutual information).  A JSON-configured command line drives complete
scenarios and parameter sweeps; see the ``catsim`` entry point.
"""

from ._version import __version__
from .fock import (
    FockSpace,
    basis_state,
    check_density_matrix,
    displacement,
    hermitian_eigensystem,
    ladder_operators,
    matrix_exponential,
    partial_trace,
    partial_transpose,
    projector,
    tensor_product,
)
from .models import (
    CouplingSpec,
    ModeParams,
    SystemModel,
    build_one_mode,
    build_two_mode,
    cat_state,
    coherent_state,
    steady_alpha,
)
from .dynamics import (
    DegenerateKernelError,
    NonConvergenceError,
    StepSizeUnderflowError,
    Trajectory,
    evolve,
    lindblad_rhs,
    liouvillian_matrix,
    steady_state,
)
from .observables import (
    EigenComponent,
    dominant_eigencomponents,
    expectation,
    fidelity_pure,
    mutual_information,
    negativity,
    purity,
    von_neumann_entropy,
)
from .phasespace import (
    PhaseSpaceGrid,
    QuadratureDistribution,
    hermite_functions,
    joint_quadrature_distribution,
    quadrature_distribution,
    reduced_wigner,
    wigner,
    wigner_cat_analytic,
)
from .config import ConfigError, ScenarioConfig, config_schema, load_config, parse_config
from .runner import run_scenario, run_sweep

__all__ = [
    "__version__",
    "FockSpace",
    "basis_state",
    "check_density_matrix",
    "displacement",
    "hermitian_eigensystem",
    "ladder_operators",
    "matrix_exponential",
    "partial_trace",
    "partial_transpose",
    "projector",
    "tensor_product",
    "CouplingSpec",
    "ModeParams",
    "SystemModel",
    "build_one_mode",
    "build_two_mode",
    "cat_state",
    "coherent_state",
    "steady_alpha",
    "DegenerateKernelError",
    "NonConvergenceError",
    "StepSizeUnderflowError",
    "Trajectory",
    "evolve",
    "lindblad_rhs",
    "liouvillian_matrix",
    "steady_state",
    "EigenComponent",
    "dominant_eigencomponents",
    "expectation",
    "fidelity_pure",
    "mutual_information",
    "negativity",
    "purity",
    "von_neumann_entropy",
    "PhaseSpaceGrid",
    "QuadratureDistribution",
    "hermite_functions",
    "joint_quadrature_distribution",
    "quadrature_distribution",
    "reduced_wigner",
    "wigner",
    "wigner_cat_analytic",
    "ConfigError",
    "ScenarioConfig",
    "config_schema",
    "load_config",
    "parse_config",
    "run_scenario",
    "run_sweep",
]
