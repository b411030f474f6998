"""Mass-conserving solver for hyperbolic-parabolic chemotaxis models on networks."""

from .network import (ArcSpec, GridSpec, GridError, NetworkError, NetworkSpec,
                      NodeSpec, admissible_time_steps, build_grid,
                      kernel_dimension_check, node_exchange_matrix,
                      two_arc_dissipative_family, validate_dissipative,
                      validate_flux_conservation, validate_network)
from .scheme import (HyperbolicState, SchemeCoefficients, check_monotonicity,
                     hyperbolic_step, interior_step, node_step,
                     outer_boundary_step, riemann_invariants, roe_aho_coefficients)
from .chemo import (CNSystem, ChemoConfigError, PhiState, assemble_cn_system,
                    chemotactic_source, phi_gradient, phi_step,
                    reconstruct_phi_gradient)
from .steady import (ConstantSteadyState, SimplifiedStationary, SteadyStateError,
                     constant_steady_state, simplified_stationary, steady_residual)
from .diagnostics import (BlowupReport, DiagnosticsRecord, classify_regime,
                          convergence_order, detect_blowup, discrete_energy,
                          discrete_mass, l1_self_convergence_error,
                          min_convergence_order, phi_mass)
from .runner import (ConfigError, InitialCondition, RunConfig, RunResult,
                     config_from_dict, converge, load_config, preset, run,
                     single_arc_network, sweep, twelve_arc_network,
                     two_arc_network, PRESET_NAMES)

__version__ = "0.1.0"
