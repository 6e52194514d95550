"""Relations between two belief models over the same trajectories and observations."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, Optional, Sequence

from .linalg import (
    LabelSet,
    Mat,
    Subspace,
    image_basis,
    is_contained,
    lift,
    map_subspace,
)
from .models import BeliefModel, InferenceResult, ambiguity, infer_return, restricted

__all__ = [
    "Morphism",
    "OntologyTranslation",
    "CoverReport",
    "CoverError",
    "covers",
    "find_morphism",
    "verify_morphism",
    "verify_translation",
    "compare_ambiguities",
    "transferred_inference",
    "cover_report",
]

Relation = Literal["subset", "superset", "equal", "incomparable"]


class CoverError(ValueError):
    pass


@dataclass(frozen=True)
class Morphism:
    source: BeliefModel
    target: BeliefModel
    phi: Mat


@dataclass(frozen=True)
class OntologyTranslation:
    psi: Mat
    is_translation: bool
    belief_compatible: bool


@dataclass(frozen=True)
class CoverReport:
    covers: bool
    morphism: Optional[Morphism]
    ambiguity_relation: Relation
    ambiguity_true: Subspace
    ambiguity_hat: Subspace


def _check_pair(M: BeliefModel, M_hat: BeliefModel) -> None:
    if M.trajectories != M_hat.trajectories:
        raise CoverError("models disagree on trajectory labels")
    if M.observations != M_hat.observations:
        raise CoverError("models disagree on observation labels")


def _stacked(M: BeliefModel) -> Mat:
    """[Λ; B] restricted to V, as a map from V-coordinates to R^Traj ⊕ R^O."""
    obs = LabelSet("obs:" + o for o in M.observations)
    stack = M.ontology.vstack(M.belief.relabel(rows=obs))
    return restricted(stack, M.valid)


def covers(M_hat: BeliefModel, M: BeliefModel) -> bool:
    """True iff every (G, G_O) represented by M is represented by M_hat."""
    _check_pair(M, M_hat)
    return is_contained(image_basis(_stacked(M)), image_basis(_stacked(M_hat)))


def find_morphism(M: BeliefModel, M_hat: BeliefModel) -> Optional[Morphism]:
    """A feature map M -> M_hat witnessing covering, or None.

    Lifts the stacked map of M through that of M_hat on the basis of V and
    extends by zero on the coordinate complement of V's pivot columns.
    """
    _check_pair(M, M_hat)
    C = lift(_stacked(M), _stacked(M_hat))
    if C is None:
        return None
    images = M_hat.valid.basis_columns() @ C  # F_hat x dim V
    zero = Fraction(0)
    cols = [[zero] * len(M_hat.features) for _ in M.features]
    for i, p in enumerate(M.valid.pivots):
        cols[p] = list(images.col(images.cols[i]))
    phi = Mat(M_hat.features, M.features, [list(r) for r in zip(*cols)]
              if cols else [[] for _ in M_hat.features])
    return Morphism(M, M_hat, phi)


def verify_morphism(phi: Mat, M: BeliefModel, M_hat: BeliefModel) -> bool:
    """Φ(V) ⊆ V̂, Λ̂Φ = Λ on V and B̂Φ = B on V, all checked exactly."""
    if phi.cols != M.features or phi.rows != M_hat.features:
        raise CoverError("morphism matrix has the wrong feature labels")
    _check_pair(M, M_hat)
    if not is_contained(map_subspace(phi, M.valid), M_hat.valid):
        return False
    K = M.valid.basis_columns()
    phiK = phi @ K
    return (M_hat.ontology @ phiK == M.ontology @ K
            and M_hat.belief @ phiK == M.belief @ K)


def verify_translation(psi: Mat, M: BeliefModel, M_hat: BeliefModel) -> OntologyTranslation:
    """Ψ: R^F_hat -> R^F with Ψ λ̂(τ) = λ(τ) for every trajectory τ."""
    if psi.rows != M.features or psi.cols != M_hat.features:
        raise CoverError("translation matrix has the wrong feature labels")
    _check_pair(M, M_hat)
    is_t = M_hat.ontology @ psi.T == M.ontology
    compatible = is_t and M_hat.belief @ psi.T == M.belief
    return OntologyTranslation(psi, is_t, compatible)


def compare_ambiguities(M: BeliefModel, M_hat: BeliefModel) -> Relation:
    """Relation of Amb(M) to Amb(M_hat)."""
    _check_pair(M, M_hat)
    a, b = ambiguity(M), ambiguity(M_hat)
    return _relation(a, b)


def _relation(a: Subspace, b: Subspace) -> Relation:
    sub, sup = is_contained(a, b), is_contained(b, a)
    if sub and sup:
        return "equal"
    if sub:
        return "subset"
    if sup:
        return "superset"
    return "incomparable"


def transferred_inference(M_hat: BeliefModel, G_O: Sequence) -> InferenceResult:
    """Infer through a (believed) covering model. When M_hat is complete and
    covers the latent true model, the unique result is the true return."""
    return infer_return(M_hat, G_O)


def cover_report(M: BeliefModel, M_hat: BeliefModel) -> CoverReport:
    _check_pair(M, M_hat)
    mor = find_morphism(M, M_hat)
    a, b = ambiguity(M), ambiguity(M_hat)
    rel = _relation(a, b)
    if mor is not None and rel not in ("equal", "subset"):
        raise AssertionError("covering model with a smaller ambiguity")
    return CoverReport(mor is not None, mor, rel, a, b)
