"""qres: resolution bounds and Monte-Carlo estimation studies for
momentum-shift detection with generalized-Gaussian probes, plus
harmonic-oscillator contrast models."""

from .errors import (
    AccuracyError,
    DomainError,
    QresError,
    ResolutionError,
    UnboundedInformationError,
)
from .metrology import (
    BoundReport,
    RepetitionsEstimate,
    bound_report,
    crb,
    energy_bound,
    energy_bound_approx,
    error_propagation_bound,
    fisher_closed,
    fisher_numeric,
    normalized_bound,
    repetitions_required,
    scenario_chi_electric,
    scenario_chi_stern_gerlach,
)
from .numerics import RngStream, integrate, log_gamma, minimize_1d, sample_gamma
from .oscillator import (
    HOBoundInput,
    NumberShiftDistribution,
    NumberShiftFisher,
    NumberShiftModel,
    ho_energy_bound,
    mean_number,
    number_shift_distribution,
    number_shift_fisher,
)
from .probe import (
    ProbeSpec,
    absolute_moment,
    density,
    gamma_for_energy,
    log_density,
    mean_energy,
    position_variance,
    truncation_window,
    uncertainty_product,
)
from .simulate import (
    PosteriorGrid,
    SampleSet,
    TrialSummary,
    draw,
    draw_uniform,
    mle,
    posterior,
    run_trials,
)

__version__ = "0.1.0"

__all__ = [
    "AccuracyError",
    "BoundReport",
    "DomainError",
    "HOBoundInput",
    "NumberShiftDistribution",
    "NumberShiftFisher",
    "NumberShiftModel",
    "PosteriorGrid",
    "ProbeSpec",
    "QresError",
    "RepetitionsEstimate",
    "ResolutionError",
    "RngStream",
    "SampleSet",
    "TrialSummary",
    "UnboundedInformationError",
    "absolute_moment",
    "bound_report",
    "crb",
    "density",
    "draw",
    "draw_uniform",
    "energy_bound",
    "energy_bound_approx",
    "error_propagation_bound",
    "fisher_closed",
    "fisher_numeric",
    "gamma_for_energy",
    "ho_energy_bound",
    "integrate",
    "log_density",
    "log_gamma",
    "mean_energy",
    "mean_number",
    "minimize_1d",
    "mle",
    "normalized_bound",
    "number_shift_distribution",
    "number_shift_fisher",
    "position_variance",
    "posterior",
    "repetitions_required",
    "run_trials",
    "sample_gamma",
    "scenario_chi_electric",
    "scenario_chi_stern_gerlach",
    "truncation_window",
    "uncertainty_product",
]
