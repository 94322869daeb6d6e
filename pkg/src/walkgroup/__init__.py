"""Group of a small-step quarter-plane random walk: classification, order, cross-checks."""

from .catalog import CatalogEntry, entries, krsp4, random_delta0, random_zero_drift
from .finiteness_criterion import GroupOrderResult, ProofPath, Verdict, decide, lambda_form
from .group_orbit_oracle import delta_order, numeric_orbit
from .kernel_algebra import GenusClass, branch_points, build_kernel, genus_classify, is_singular
from .walk_model import StepWeights, angle_theta, delta_determinant, moments

__all__ = [
    "CatalogEntry",
    "GenusClass",
    "GroupOrderResult",
    "ProofPath",
    "StepWeights",
    "Verdict",
    "angle_theta",
    "branch_points",
    "build_kernel",
    "decide",
    "delta_determinant",
    "delta_order",
    "entries",
    "genus_classify",
    "is_singular",
    "krsp4",
    "lambda_form",
    "moments",
    "numeric_orbit",
    "random_delta0",
    "random_zero_drift",
]

__version__ = "0.1.0"
