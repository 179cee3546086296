"""Worked experiments, each producing an :class:`ExperimentReport`."""

from .report import ExperimentReport, QuantityRecord
from .suite import EXPERIMENTS, run_suite

__all__ = ["EXPERIMENTS", "ExperimentReport", "QuantityRecord", "run_suite"]
