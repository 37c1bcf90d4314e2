"""Utilities package: step history, run settings and artifact export.

Only the history is re-exported here; ``settings`` and ``export`` depend on
the harness and are imported from their modules directly.
"""
from .history import StepHistory, StepRecord

__all__ = ['StepHistory', 'StepRecord']
