"""Pairwise-choice feedback for balanced belief models.

Choice probabilities are a link function applied to differences of
observation returns. The table keeps those differences exactly and only
applies the (generally irrational) link when probabilities are displayed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Optional, Sequence

from .linalg import AffineSet, LabelSet, Mat, Subspace, q, solve_columns, subspace_sum, vector
from .models import BeliefModel, InferenceResult, ambiguity

__all__ = [
    "SigmaLink",
    "LOGISTIC",
    "ChoiceTable",
    "ChoiceError",
    "is_row_constant",
    "is_balanced",
    "choice_probabilities",
    "recover_feedback",
    "ambiguity_with_choices",
    "infer_from_choices",
]


class ChoiceError(ValueError):
    pass


@dataclass(frozen=True)
class SigmaLink:
    name: str
    forward: Callable[[float], float]
    inverse: Callable[[float], float]


def _logistic(r: float) -> float:
    if r >= 0:
        return 1.0 / (1.0 + math.exp(-r))
    e = math.exp(r)
    return e / (1.0 + e)


def _logit(p: float) -> float:
    if not 0.0 < p < 1.0:
        raise ValueError("logit needs a probability strictly between 0 and 1")
    return math.log(p / (1.0 - p))


LOGISTIC = SigmaLink("logistic", _logistic, _logit)


class ChoiceTable:
    """P(o ≻ o') = σ(d(o, o')) for every ordered pair, stored as exact d."""

    def __init__(self, observations: LabelSet, diffs: Mapping[tuple[str, str], object]):
        self.observations = observations
        table: dict[tuple[str, str], Fraction] = {}
        for (o, o2), d in diffs.items():
            if o not in observations or o2 not in observations:
                raise ChoiceError(f"unknown observation in pair ({o}, {o2})")
            table[(o, o2)] = q(d)
        for o in observations:
            table.setdefault((o, o), Fraction(0))
            if table[(o, o)] != 0:
                raise ChoiceError(f"P({o} ≻ {o}) must be 1/2")
        for (o, o2), d in list(table.items()):
            back = table.get((o2, o))
            if back is None:
                table[(o2, o)] = -d
            elif back != -d:
                raise ChoiceError(f"P({o} ≻ {o2}) + P({o2} ≻ {o}) != 1")
        self._diffs = table

    def difference(self, o: str, o2: str) -> Fraction:
        """The exact pre-link value σ⁻¹(P(o ≻ o'))."""
        try:
            return self._diffs[(o, o2)]
        except KeyError:
            raise ChoiceError(f"missing pair ({o}, {o2})") from None

    def probability(self, o: str, o2: str, link: SigmaLink = LOGISTIC) -> float:
        return link.forward(float(self.difference(o, o2)))

    def is_complete(self) -> bool:
        return all((o, o2) in self._diffs for o in self.observations
                   for o2 in self.observations)

    def pairs(self) -> list[tuple[str, str, Fraction]]:
        """Each unordered pair once, in observation order."""
        obs = list(self.observations)
        out = []
        for i, o in enumerate(obs):
            for o2 in obs[i + 1:]:
                if (o, o2) in self._diffs:
                    out.append((o, o2, self._diffs[(o, o2)]))
        return out

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, ChoiceTable) and self.observations == other.observations
                and self._diffs == other._diffs)


def is_row_constant(A: Mat) -> Optional[Fraction]:
    """The common nonzero row sum, or None."""
    sums = set(A.row_sums())
    if len(sums) != 1:
        return None
    (c,) = sums
    return c if c != 0 else None


def is_balanced(M: BeliefModel) -> bool:
    if is_row_constant(M.ontology) is None or is_row_constant(M.belief) is None:
        return False
    return M.valid.contains([1] * len(M.features))


def choice_probabilities(M: BeliefModel, R: Sequence, link: SigmaLink = LOGISTIC
                         ) -> ChoiceTable:
    R = vector(R)
    if not M.valid.contains(R):
        raise ChoiceError("reward object is not valid")
    G_O = M.belief.apply(R)
    obs = M.observations
    return ChoiceTable(obs, {(o, o2): G_O[i] - G_O[j]
                             for i, o in enumerate(obs) for j, o2 in enumerate(obs)})


def recover_feedback(P: ChoiceTable, link: SigmaLink = LOGISTIC,
                     reference: Optional[str] = None) -> tuple[Fraction, ...]:
    """Observation returns up to a constant, normalized to 0 at the reference."""
    obs = P.observations
    if len(obs) == 0:
        raise ChoiceError("no observations to compare")
    ref = obs[0] if reference is None else reference
    if ref not in obs:
        raise ChoiceError(f"unknown reference observation {ref!r}")
    if not P.is_complete():
        raise ChoiceError("choice table is missing pairs")
    g = {o: P.difference(o, ref) for o in obs}
    for o in obs:
        for o2 in obs:
            if P.difference(o, o2) != g[o] - g[o2]:
                raise ChoiceError(
                    f"inconsistent choices: d({o},{o2}) != d({o},{ref}) - d({o2},{ref})")
    return tuple(g[o] for o in obs)


def ambiguity_with_choices(M: BeliefModel) -> Subspace:
    if not is_balanced(M):
        raise ChoiceError("model is not balanced; choice ambiguity is undefined")
    ones = Subspace(M.trajectories, [[1] * len(M.trajectories)])
    return subspace_sum(ambiguity(M), ones)


def infer_from_choices(M: BeliefModel, P: ChoiceTable, link: SigmaLink = LOGISTIC,
                       reference: Optional[str] = None) -> InferenceResult:
    """Solve B R = Ĝ_O + c·B(1) for R in V and a free constant c."""
    if P.observations != M.observations:
        raise ChoiceError("choice table and model disagree on observations")
    amb_p = ambiguity_with_choices(M)
    g_hat = recover_feedback(P, link, reference)
    K = M.valid.basis_columns()
    BK = M.belief @ K
    b_ones = M.belief.apply([Fraction(1)] * len(M.features))
    system = [list(row) + [-x] for row, x in zip(BK.data, b_ones)]
    sols = solve_columns(system, len(BK.cols) + 1, [list(g_hat)])
    if sols is None:
        raise ChoiceError("choices are not reproducible by any valid reward object")
    R = K.apply(sols[0][:-1])
    return InferenceResult(AffineSet(M.ontology.apply(R), amb_p), amb_p, R)
