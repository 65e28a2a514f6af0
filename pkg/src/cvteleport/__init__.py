"""Quality criteria for continuous-variable quantum teleportation.

The package models a teleportation link as a linearized Gaussian channel
(a joint measurement stage plus a displacement reconstruction stage),
reduces it at unity gain to a four-variance noise budget, and evaluates
the standard quality criteria: equivalent output noises, signal-transfer
coefficients, coherent-state fidelity, and the conditional-variance
entanglement criterion.  A Monte Carlo simulator re-derives every figure
of merit from samples as an independent check.
"""

from .channel import (
    ChannelConfig,
    ComposedChannel,
    InputState,
    MeasurementStage,
    NoiseBudget,
    ReconstructionStage,
    budget_to_channel,
    compose,
    equivalent_measurement_noise,
    equivalent_output_noise,
    ideal_budget,
    shot_noise_budget,
    to_unity_gain_budget,
    transfer_coefficients,
    vacuum_input,
)
from .criteria import (
    CriteriaReport,
    EprCriterionResult,
    InequalityTrace,
    VerificationSummary,
    epr_criterion,
    fidelity_general,
    fidelity_mc_integrand,
    full_report,
    inequality_trace,
    run_chain_verification,
    verify_inequality_chain,
)
from .epr import (
    EprScenario,
    SweepPoint,
    closed_form,
    default_eta_grid,
    default_s_grid,
    sweep,
    to_noise_budget,
)
from .errors import (
    ConfigError,
    CvTeleportError,
    DegenerateConditioningError,
    GainConditionError,
    GainError,
    LabelError,
    UnsupportedRotationError,
    ValidityError,
    VerificationError,
)
from .gaussian import (
    GaussianVector,
    LinearForm,
    apply_form,
    conditional_variance,
    covariance_of,
    mean_of,
    sample,
    term,
    variance_of,
)
from .montecarlo import (
    Comparison,
    McReport,
    McRunConfig,
    estimate_conditional_variance,
    simulate_protocol,
)

__version__ = "0.1.0"

__all__ = [
    "ChannelConfig",
    "Comparison",
    "ComposedChannel",
    "ConfigError",
    "CriteriaReport",
    "CvTeleportError",
    "DegenerateConditioningError",
    "EprCriterionResult",
    "EprScenario",
    "GainConditionError",
    "GainError",
    "GaussianVector",
    "InequalityTrace",
    "InputState",
    "LabelError",
    "LinearForm",
    "McReport",
    "McRunConfig",
    "MeasurementStage",
    "NoiseBudget",
    "ReconstructionStage",
    "SweepPoint",
    "UnsupportedRotationError",
    "ValidityError",
    "VerificationError",
    "VerificationSummary",
    "apply_form",
    "budget_to_channel",
    "closed_form",
    "compose",
    "conditional_variance",
    "covariance_of",
    "default_eta_grid",
    "default_s_grid",
    "epr_criterion",
    "equivalent_measurement_noise",
    "equivalent_output_noise",
    "estimate_conditional_variance",
    "fidelity_general",
    "fidelity_mc_integrand",
    "full_report",
    "ideal_budget",
    "inequality_trace",
    "mean_of",
    "run_chain_verification",
    "sample",
    "shot_noise_budget",
    "simulate_protocol",
    "sweep",
    "term",
    "to_noise_budget",
    "to_unity_gain_budget",
    "transfer_coefficients",
    "vacuum_input",
    "variance_of",
    "verify_inequality_chain",
]
