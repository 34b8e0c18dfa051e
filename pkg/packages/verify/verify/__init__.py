"""
Verification Package

Exhaustive counts (points, factorization patterns, value sets) and the checks
that compare them against exact identities and explicit estimates.
"""

from .census import BoundCheck, CountReport, count_points, verify_estimate
from .factpat import Census, LinearFamily, correspondence_check, family_census, verify_pattern_bounds
from .valueset import CoeffWindow, average_value_set_direct, average_value_set_via_chi, chi, verify_value_set_bounds

__all__ = [
    'BoundCheck',
    'CountReport',
    'count_points',
    'verify_estimate',
    'Census',
    'LinearFamily',
    'correspondence_check',
    'family_census',
    'verify_pattern_bounds',
    'CoeffWindow',
    'average_value_set_direct',
    'average_value_set_via_chi',
    'chi',
    'verify_value_set_bounds',
]
