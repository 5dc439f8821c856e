"""Scenario configuration, closed-loop runner, logging, metrics and CLI."""

from .config import (ControllerConfig, DoubleIntegratorConfig, EstimatorConfig, OrbitConfig,
                     ScenarioConfig, SimConfig, TargetConfig, apply_overrides, load_config,
                     parse_config_text)
from .metrics import MetricsSummary, summarize
from .records import CSV_COLUMNS, LogRecord, format_csv, read_csv, write_csv
from .scenario import (BurnRecord, ScenarioResult, ScenarioSetup, prepare, run_scenario)

__all__ = [
    "ControllerConfig", "DoubleIntegratorConfig", "EstimatorConfig", "OrbitConfig",
    "ScenarioConfig", "SimConfig", "TargetConfig", "apply_overrides", "load_config",
    "parse_config_text", "MetricsSummary", "summarize", "CSV_COLUMNS", "LogRecord",
    "format_csv", "read_csv", "write_csv", "BurnRecord", "ScenarioResult", "ScenarioSetup",
    "prepare", "run_scenario",
]
