"""Static and dynamic analysis of hash chains"""

from .bottleneck import DEFAULT_MD5_PREIMAGE_BITS, BottleneckReport, effective_preimage_space
from .compliance import ComplianceChecker, ComplianceFinding, Severity, compliance_report
from .cost import GuessCost, format_scientific, guess_cost_estimate, render_duration, weakening_factor
from .propagation import PropagationProof, Verdict, collision_propagation_check
from .report import render_report, report_pairs

__all__ = [
    'DEFAULT_MD5_PREIMAGE_BITS', 'BottleneckReport', 'effective_preimage_space',
    'ComplianceChecker', 'ComplianceFinding', 'Severity', 'compliance_report',
    'GuessCost', 'format_scientific', 'guess_cost_estimate', 'render_duration', 'weakening_factor',
    'PropagationProof', 'Verdict', 'collision_propagation_check',
    'render_report', 'report_pairs',
]
