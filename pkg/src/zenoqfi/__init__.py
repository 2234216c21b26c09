"""Quantum Fisher information for N-qubit frequency estimation under Gaussian dephasing."""

__version__ = "0.1.0"

from .bounds import (
    BoundReport,
    bound_escher,
    bound_single_collective,
    bound_single_local,
    bound_total_markovian_collective,
    bound_total_markovian_local,
    bound_total_zeno_collective,
    bound_total_zeno_css_collective,
    bound_total_zeno_local,
)
from .dephasing import (
    Markovian,
    NoiseGeometry,
    Tabulated,
    Zeno,
    apply_collective_dephasing,
    apply_local_dephasing,
    evolve,
    gamma_at,
    load_tabulated,
)
from .errors import (
    BracketError,
    ConvergenceError,
    DegenerateObjectiveError,
    DimensionError,
    InvalidStateError,
    ModelRangeError,
    UnsupportedCaseError,
    ZenoQfiError,
)
from .hilbert import (
    css_state,
    ghz_state,
    hamiltonian_diagonal,
    random_pure_state,
    variance_of_h,
)
from .protocol import (
    OptimumReport,
    ProtocolBudget,
    optimize_time_analytic,
    optimize_time_closed_form,
    optimize_time_numeric,
    total_qfi,
    verify_uniform_allocation,
)
from .qfi import (
    PovmMeasurement,
    SldSolution,
    analytic_qfi_css_local,
    analytic_qfi_ghz,
    classical_fisher,
    parity_povm,
    qfi_at,
    sld_initial_factor,
    solve_sld,
)
from .scaling import FigureLine, ScalingFit, SweepCase, figure_lines, fit_exponent, sweep_max_qfi
