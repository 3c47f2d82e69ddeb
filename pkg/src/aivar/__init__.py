"""Quantitative AI risk engine: identifiability, fairness and performance metrics
feeding a FAIR Monte Carlo model with truncated-quantile AI-VaR reporting."""

from .errors import AivarError
from .fairness import (
    GroupSpec,
    OutcomeRule,
    average_odds_difference,
    demographic_parity_difference,
    favorable_rate,
    statistical_parity_difference,
    vulnerability_for_group,
)
from .masking import NameDictionary, mask_text, mask_token
from .perf_metrics import ConfusionMatrix, accuracy, confusion_matrix, mae, precision, recall, rmse
from .report import AssessmentReport, build_report, render
from .risk_model import (
    CalibratedEstimate,
    Scenario,
    VulnerabilityNode,
    calibrate_from_samples,
    compose_secondary_loss,
    get_template,
    pert_point_estimate,
    validate_scenario,
)
from .simulation import (
    LossDistribution,
    SimulationConfig,
    VarQuery,
    cvar,
    quantile,
    sample_pert,
    simulate,
    summarize,
    truncated_var,
)
from .tabular import (
    Dataset,
    equivalence_class_size,
    identifiability_report,
    identification_probability,
    load_dataset,
)

__version__ = "0.1.0"
