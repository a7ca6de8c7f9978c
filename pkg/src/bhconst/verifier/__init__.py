"""Empirical check of the inequality on explicit multilinear forms."""

from .forms import MultilinearForm, kahane_form, parse_form, read_form
from .norms import BHRatio, SupNorm, bh_ratio, lhs_norm, sup_norm

__all__ = [
    "BHRatio",
    "MultilinearForm",
    "SupNorm",
    "bh_ratio",
    "kahane_form",
    "lhs_norm",
    "parse_form",
    "read_form",
    "sup_norm",
]
