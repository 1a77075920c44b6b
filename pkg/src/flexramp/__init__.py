"""Day-ahead market clearing with flexible ramping capability products."""

__version__ = "0.1.0"

from .errors import (FlexrampError, InfeasibleError, ModelBuildError, ParseError,
                     PricingError, SolveError, ValidationError)
from .system import (Generator, Line, NetworkModel, SystemModel, compute_ptdf,
                     dc_flows, load_system, nodal_loads, system_from_dict,
                     system_to_dict)
from .requirements import (NetLoadProfile, RampRequirements, compute_requirements,
                           hourly_down_requirement, hourly_up_requirement,
                           intra_hour_down_requirements, intra_hour_rhs,
                           intra_hour_up_requirements, load_profile_csv)
from .model import LinearModel
from .solver import (LpDualResult, MilpResult, ScipyHighsBackend, SolveOptions,
                     get_backend, register_backend)
from .damarket import (DAModel, DASolution, MODES, MODE_ENHANCED, MODE_GENERAL,
                       MODE_NONE, build_da_model, check_solution, max_violation,
                       production_cost, solve_da)
from .pricing import (PriceSolution, Settlement, compute_lmps, compute_settlements,
                      fix_and_price, frp_down_payment, frp_up_payment,
                      lmp_decomposition_residual, verify_pricing_identities)
from .rtuc import (DayValidationResult, PriorBindings, RTUCModel, RTUCRunResult,
                   Scenario, build_rtuc_model, detect_price_spikes,
                   generate_scenarios, roll_day, run_one_process_rtuc,
                   run_quarters)
from .evaluate import (EvaluationResult, ModeMetrics, clear_da_for_mode,
                       evaluate_designs, pairwise_improvements)
from .io import RunConfig
