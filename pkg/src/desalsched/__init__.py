"""Threshold-based co-scheduling of water and power in hybrid desalination plants."""
from importlib.resources import files

__version__ = "0.1.0"

from .model import (  # noqa: E402
    ConfigError,
    CostParams,
    DispatchPoint,
    PlantConfig,
    RodpParams,
    Tariff,
    TdpParams,
    dispatch_from_waters,
    electricity_payment,
    load_document,
    profit,
    validate_config,
    water_revenue,
)
from .policy import Regime, ThresholdSet, Zone, compute_thresholds, optimal_dispatch, zone_of  # noqa: E402
from .estimators import HourlyNormalSampler, ThresholdDispatcher  # noqa: E402


def data_path(name: str):
    """Path to a bundled data file (``reference_plant.json``, ``solar_fixture.csv``, ...)."""
    return files(__name__) / "data" / name
