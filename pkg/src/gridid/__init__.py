"""Identifying codes in the infinite square grid.

Balls and I-sets, exact shares and subcode share estimates, the ten
discharging rules, and an exhaustive verifier for the 35/6 bound on the
modified share of codewords that receive nothing.
"""
from .codeset import (CodeWindow, IdVerdict, PeriodicCode, density, is_identifying_on, iset,
                      parse_pattern, qn_size, read_pattern, separated, theorem34_lower_bound,
                      verify_periodic)
from .discharging import (AMOUNTS, RULES, RuleFiring, discharge_simulate, modified_share_sender,
                          rule_firings, rule_outflow, total_outflow)
from .errors import (GridError, InsufficientWindowError, ParameterError, PatternParseError,
                     UncoveredVertexError)
from .lattice import D4, GridPoint, Region, SymmetryOp, ball, region_algebra, transform
from .share import format_rational, share_estimate, share_exact
from .verifier import BaseIset, ProblemSet, stage1, stage2, verify_lemma33

__version__ = "0.1.0"

__all__ = [
    "AMOUNTS", "BaseIset", "CodeWindow", "D4", "GridError", "GridPoint", "IdVerdict",
    "InsufficientWindowError", "ParameterError", "PatternParseError", "PeriodicCode",
    "ProblemSet", "RULES", "Region", "RuleFiring", "SymmetryOp", "UncoveredVertexError", "ball",
    "density", "discharge_simulate", "format_rational", "is_identifying_on", "iset",
    "modified_share_sender", "parse_pattern", "qn_size", "read_pattern", "region_algebra",
    "rule_firings", "rule_outflow", "separated", "share_estimate", "share_exact", "stage1",
    "stage2", "theorem34_lower_bound", "total_outflow", "transform", "verify_lemma33",
    "verify_periodic",
]
