"""Lockdown cost-benefit calculus: geometric death-rate scenarios, QALY
costing, end-state option values, SIR final size and the time-frame
inconsistency of truncated lockdown decisions."""

from .decision import (
    DecisionModel,
    InconsistencyWitness,
    SearchBox,
    block_easing_condition,
    find_inconsistency,
    quarterly_comparison,
    weekly_easing_condition,
    weekly_monotonicity_check,
)
from .epidemic import (
    FinalSizeResult,
    SirParams,
    final_size,
    herd_immunity_threshold,
    remaining_susceptible_advantage,
)
from .errors import ConfigError, DomainError, NumericError, SolverError
from .option_value import (
    EndState,
    EndStateValuation,
    TreatmentDiscoveryModel,
    VaccineModel,
    end_state_value_difference,
    mc_end_state_value,
    mortality_multiplier,
    project_future_deaths,
)
from .qaly import (
    AfterEffectParams,
    HospitalizationParams,
    IllnessCostParams,
    QalyValuation,
    aftereffect_qaly_per_death,
    death_qaly_cost,
    hospitalization_qaly_total,
    illness_qaly_per_death,
    monetize,
    total_qaly_per_death,
    valuation_preset,
)
from .scenario import (
    GeometricScenario,
    Trajectory,
    cumulative_deaths,
    excess_deaths,
    project_with_cap,
    weekly_deaths,
)

__version__ = "0.1.0"
