"""Exact ambiguity analysis for belief models over finite MDPs."""
from .choices import (ChoiceError, ChoiceTable, ambiguity_with_choices, choice_probabilities,
                      infer_from_choices, is_balanced, is_row_constant)
from .covering import CoverError, cover_report, covers, find_morphism, transferred_inference
from .linalg import LabelSet, LinalgError, Mat, Subspace, image_basis, kernel_basis, solve_affine
from .models import (BeliefModel, InfeasibleFeedback, ModelError, ValidSpec, ambiguity,
                     build_model, completeness, faithfulness, infer_return)

__all__ = [
    "BeliefModel",
    "ChoiceError",
    "ChoiceTable",
    "CoverError",
    "InfeasibleFeedback",
    "LabelSet",
    "LinalgError",
    "Mat",
    "ModelError",
    "Subspace",
    "ValidSpec",
    "ambiguity",
    "ambiguity_with_choices",
    "build_model",
    "choice_probabilities",
    "completeness",
    "cover_report",
    "covers",
    "faithfulness",
    "find_morphism",
    "image_basis",
    "infer_from_choices",
    "infer_return",
    "is_balanced",
    "is_row_constant",
    "kernel_basis",
    "solve_affine",
    "transferred_inference",
]
