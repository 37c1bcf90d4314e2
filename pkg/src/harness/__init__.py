"""Harness package: convergence studies, order probes and the other verification studies."""
from .convergence import ConvergenceRow, ConvergenceReport, convergence_study
from .probes import QuantityTag, OrderProbeResult, critical_point_function, acp_order_probe
from .propositions import PropositionResult, proposition_check
from .nullspace import NullspaceResult, quadratic_form_nullspace, tau_cp1_form, forms_match
from .scaling import ScaleMode, ScaleCheckResult, scale_independence_check
from .timing import TimingRow, relative_timing
from .robustness import RobustnessObservation, robustness_matrix
from .acceptance import Verdict, run_acceptance

__all__ = [
    'ConvergenceRow', 'ConvergenceReport', 'convergence_study',
    'QuantityTag', 'OrderProbeResult', 'critical_point_function', 'acp_order_probe',
    'PropositionResult', 'proposition_check',
    'NullspaceResult', 'quadratic_form_nullspace', 'tau_cp1_form', 'forms_match',
    'ScaleMode', 'ScaleCheckResult', 'scale_independence_check',
    'TimingRow', 'relative_timing',
    'RobustnessObservation', 'robustness_matrix',
    'Verdict', 'run_acceptance',
]
