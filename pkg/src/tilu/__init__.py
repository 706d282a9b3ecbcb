"""Ticketed learning with exact one-shot unlearning."""
from .base import Deletion, LearnOutput, Scheme, Verdict
from .domain import (AugmentedPointFunctions, Dataset, Example, ExplicitClass, Parities,
                     PointFunctions, ProductThresholds, Thresholds, canonical_erm, parse_dataset)
from .errors import TiluError
from .scheme_api import SCHEME_IDS, make_scheme, run_learn, run_unlearn

__version__ = "0.1.0"

__all__ = [
    "Deletion", "LearnOutput", "Scheme", "Verdict",
    "AugmentedPointFunctions", "Dataset", "Example", "ExplicitClass", "Parities", "PointFunctions",
    "ProductThresholds", "Thresholds", "canonical_erm", "parse_dataset",
    "TiluError", "SCHEME_IDS", "make_scheme", "run_learn", "run_unlearn",
]
