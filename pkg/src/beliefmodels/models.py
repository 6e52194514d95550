"""Belief models (features, ontology, feature belief, valid reward objects).

The ontology maps reward objects over features to return functions over
trajectories; the feature belief maps them to observation returns. Most
questions about a model reduce to kernels and images of these two maps
restricted to the valid subspace.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal, Optional, Sequence

from .linalg import (
    AffineSet,
    LabelSet,
    Mat,
    Subspace,
    factor_right,
    intersect,
    is_contained,
    kernel_basis,
    map_subspace,
    q,
    solve_affine_in,
    vector,
)
from .mdp import Mdp, MdpError, enumerate_trajectories

__all__ = [
    "BeliefModel",
    "ValidSpec",
    "InferenceResult",
    "ModelError",
    "InfeasibleFeedback",
    "build_model",
    "gamma_matrix",
    "model_from_posterior",
    "trivial_model",
    "ambiguity",
    "completeness",
    "faithfulness",
    "represents",
    "infer_return",
    "restricted",
]


class ModelError(ValueError):
    """Malformed model: label or shape mismatch."""


class InfeasibleFeedback(ValueError):
    """No valid reward object reproduces the given feedback."""


@dataclass(frozen=True)
class ValidSpec:
    """How the valid subspace is given: whole space, a spanning set, or constraints."""

    kind: Literal["full", "basis", "constraints"] = "full"
    vectors: tuple[tuple[Fraction, ...], ...] = ()

    @classmethod
    def full(cls) -> ValidSpec:
        return cls("full")

    @classmethod
    def basis(cls, vectors: Sequence[Sequence]) -> ValidSpec:
        return cls("basis", tuple(vector(v) for v in vectors))

    @classmethod
    def constraints(cls, vectors: Sequence[Sequence]) -> ValidSpec:
        return cls("constraints", tuple(vector(v) for v in vectors))

    def resolve(self, features: LabelSet) -> Subspace:
        for v in self.vectors:
            if len(v) != len(features):
                raise ModelError(
                    f"{self.kind} vector of length {len(v)} for {len(features)} features")
        if self.kind == "full":
            return Subspace.full(features)
        if self.kind == "basis":
            return Subspace(features, self.vectors)
        if self.kind == "constraints":
            if not self.vectors:
                return Subspace.full(features)
            return kernel_basis(Mat(LabelSet.numbered("c", len(self.vectors)), features,
                                    self.vectors))
        raise ModelError(f"unknown valid-space kind {self.kind!r}")


@dataclass(frozen=True)
class BeliefModel:
    features: LabelSet
    ontology: Mat
    belief: Mat
    valid: Subspace

    def __post_init__(self):
        if self.ontology.cols != self.features:
            raise ModelError("ontology columns differ from the feature labels")
        if self.belief.cols != self.features:
            raise ModelError("belief columns differ from the feature labels")
        if self.valid.ambient != self.features:
            raise ModelError("valid subspace lives outside the feature space")

    @property
    def trajectories(self) -> LabelSet:
        return self.ontology.rows

    @property
    def observations(self) -> LabelSet:
        return self.belief.rows

    def with_valid(self, valid: Subspace) -> BeliefModel:
        return BeliefModel(self.features, self.ontology, self.belief, valid)


@dataclass(frozen=True)
class InferenceResult:
    feedback_compatible: AffineSet
    ambiguity: Subspace
    reward_object: tuple[Fraction, ...] = field(default=())

    @property
    def complete(self) -> bool:
        return self.ambiguity.is_zero()

    @property
    def unique(self) -> Optional[tuple[Fraction, ...]]:
        return self.feedback_compatible.point if self.complete else None


def build_model(features: Sequence[str] | LabelSet, ontology: Mat, belief: Mat,
                valid: ValidSpec | Subspace | None = None) -> BeliefModel:
    features = features if isinstance(features, LabelSet) else LabelSet(features)
    if valid is None:
        valid = ValidSpec.full()
    V = valid if isinstance(valid, Subspace) else valid.resolve(features)
    return BeliefModel(features, ontology, belief, V)


def gamma_matrix(m: Mdp, gamma=1, granularity: str = "transitions") -> Mat:
    """Return-from-reward map: entry (traj, x) is the discounted count of x in traj."""
    gamma = q(gamma)
    if not 0 <= gamma <= 1:
        raise MdpError("discount must lie in [0, 1]")
    if m.horizon == 0:
        raise MdpError("horizon 0 makes the return map zero")
    if granularity == "transitions":
        cols = m.transition_labels()
        key = lambda s, a, t: f"{s},{a},{t}"
    elif granularity == "state-action":
        cols = m.state_action_labels()
        key = lambda s, a, t: f"{s},{a}"
    else:
        raise MdpError(f"unknown granularity {granularity!r}")
    labels, trajs = enumerate_trajectories(m)
    zero = Fraction(0)
    rows = []
    for tr in trajs:
        row = [zero] * len(cols)
        w = Fraction(1)
        for s, a, t in tr.transitions():
            row[cols.index(key(s, a, t))] += w
            w *= gamma
        rows.append(row)
    return Mat(labels, cols, rows)


def model_from_posterior(m: Mdp, gamma, bp: Mat, valid: ValidSpec | Subspace | None = None,
                         granularity: str = "transitions") -> BeliefModel:
    Gamma = gamma_matrix(m, gamma, granularity)
    if bp.cols != Gamma.rows:
        raise ModelError("posterior columns must be the enumerated trajectories")
    return build_model(Gamma.cols, Gamma, bp @ Gamma, valid)


def trivial_model(G: Sequence, G_O: Sequence, trajectories: LabelSet,
                  observations: LabelSet) -> tuple[BeliefModel, tuple[Fraction, ...]]:
    """One-feature model whose single reward object reproduces (G, G_O)."""
    star = LabelSet(["*"])
    lam = Mat.column(trajectories, G, "*")
    bel = Mat.column(observations, G_O, "*")
    return build_model(star, lam, bel), (Fraction(1),)


def restricted(A: Mat, V: Subspace) -> Mat:
    """A composed with the basis of V: the map on V in basis coordinates."""
    return A @ V.basis_columns()


def ambiguity(M: BeliefModel) -> Subspace:
    return map_subspace(M.ontology, intersect(kernel_basis(M.belief), M.valid))


def completeness(M: BeliefModel) -> tuple[bool, Optional[Mat]]:
    """Complete iff the ambiguity vanishes; then Z with Z·B = Λ on V."""
    if not ambiguity(M).is_zero():
        return False, None
    if M.valid.is_full():
        Z = factor_right(M.ontology, M.belief)
    else:
        Z = factor_right(restricted(M.ontology, M.valid), restricted(M.belief, M.valid))
    assert Z is not None, "complete model without a factorization witness"
    return True, Z


def faithfulness(M: BeliefModel) -> tuple[bool, Optional[Mat]]:
    """Faithful iff ker Λ ∩ V ⊆ ker B ∩ V; then Y with Y·Λ = B on V."""
    ok = is_contained(intersect(kernel_basis(M.ontology), M.valid),
                      intersect(kernel_basis(M.belief), M.valid))
    if not ok:
        return False, None
    if M.valid.is_full():
        Y = factor_right(M.belief, M.ontology)
    else:
        Y = factor_right(restricted(M.belief, M.valid), restricted(M.ontology, M.valid))
    assert Y is not None, "faithful model without a factorization witness"
    return True, Y


def represents(M: BeliefModel, G: Sequence, G_O: Sequence) -> Optional[tuple[Fraction, ...]]:
    """Some R in V with Λ R = G and B R = G_O, or None."""
    stacked = M.ontology.vstack(M.belief.relabel(
        rows=LabelSet("obs:" + o for o in M.observations)))
    sol = solve_affine_in(stacked, vector(G) + vector(G_O), M.valid)
    return None if sol is None else sol.point


def infer_return(M: BeliefModel, G_O: Sequence) -> InferenceResult:
    if len(G_O) != len(M.observations):
        raise ModelError(
            f"feedback has length {len(G_O)}, expected {len(M.observations)}")
    sol = solve_affine_in(M.belief, vector(G_O), M.valid)
    if sol is None:
        raise InfeasibleFeedback("no valid reward object reproduces the feedback")
    point = M.ontology.apply(sol.point)
    amb = ambiguity(M)
    return InferenceResult(AffineSet(point, amb), amb, sol.point)
