"""Multi-vendor procurement optimisation and disruption/optionality risk simulation."""

__version__ = "0.1.0"

from .errors import (
    EmptyDistribution,
    InstanceTooLarge,
    InvalidParameters,
    ParseError,
    TooManySuppliers,
    UnknownSupplier,
    ValidationError,
)
from .model import DemandPoint, Scenario, Supplier, load_scenario, make_scenario, restrict_suppliers, validate_scenario
from .flow import ShipmentPlan, Status, build_flow_network, oracle_min_cost, solve, solve_min_cost
from .sweep import SweepResult, marginal_value, sweep_subsets
from .disruption import (
    CapacityRule,
    DisruptionModel,
    PowerLaw,
    Quadrant,
    RiskSummary,
    classify_quadrant,
    sample_severity,
    simulate_horizon,
    summarize_risk,
)
