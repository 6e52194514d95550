"""Finite-horizon MDPs with exact probabilities and exhaustive trajectories."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence, Union

from .linalg import LabelSet, Mat, q

__all__ = [
    "Mdp",
    "Trajectory",
    "Policy",
    "ObservationMap",
    "MdpError",
    "DEFAULT_TRAJECTORY_CAP",
    "enumerate_trajectories",
    "trajectory_distribution",
    "policy_evaluation",
    "backward_induction",
    "posterior_belief_matrix",
    "uniform_policy",
    "deterministic_policy",
]

DEFAULT_TRAJECTORY_CAP = 10**6


class MdpError(ValueError):
    pass


class Mdp:
    """States, actions, exact transition rows, initial distribution, horizon."""

    def __init__(self, states: Sequence[str], actions: Sequence[str],
                 transition: Mapping[tuple[str, str], Sequence], initial: Sequence,
                 horizon: int):
        self.states = states if isinstance(states, LabelSet) else LabelSet(states)
        self.actions = actions if isinstance(actions, LabelSet) else LabelSet(actions)
        for lab in list(self.states) + list(self.actions):
            if "-" in lab:
                raise MdpError(f"label {lab!r} may not contain '-'")
        if horizon < 0:
            raise MdpError("horizon must be non-negative")
        self.horizon = int(horizon)
        self.initial = _distribution(initial, len(self.states), "initial distribution")
        rows = {}
        for s in self.states:
            for a in self.actions:
                if (s, a) not in transition:
                    raise MdpError(f"missing transition row for ({s}, {a})")
                rows[(s, a)] = _distribution(transition[(s, a)], len(self.states),
                                             f"transition row ({s}, {a})")
        extra = set(transition) - set(rows)
        if extra:
            raise MdpError(f"transition rows for unknown pairs: {sorted(extra)}")
        self.transition = rows
        self._trajectories = None

    def state_action_labels(self) -> LabelSet:
        return LabelSet(f"{s},{a}" for s in self.states for a in self.actions)

    def transition_labels(self) -> LabelSet:
        return LabelSet(f"{s},{a},{t}" for s in self.states for a in self.actions
                        for t in self.states)

    def step(self, s: str, a: str) -> dict[str, Fraction]:
        row = self.transition[(s, a)]
        return {t: p for t, p in zip(self.states, row) if p}


def _distribution(values: Sequence, n: int, what: str) -> tuple[Fraction, ...]:
    vals = tuple(q(v) for v in values)
    if len(vals) != n:
        raise MdpError(f"{what} has length {len(vals)}, expected {n}")
    if any(v < 0 for v in vals):
        raise MdpError(f"{what} has a negative entry")
    if sum(vals) != 1:
        raise MdpError(f"{what} sums to {sum(vals)}, not 1")
    return vals


@dataclass(frozen=True)
class Trajectory:
    states: tuple[str, ...]
    actions: tuple[str, ...]

    @property
    def label(self) -> str:
        parts = [self.states[0]]
        for a, s in zip(self.actions, self.states[1:]):
            parts += [a, s]
        return "-".join(parts)

    def transitions(self) -> list[tuple[str, str, str]]:
        return [(self.states[t], self.actions[t], self.states[t + 1])
                for t in range(len(self.actions))]


class Policy:
    """Per-state exact action distributions."""

    def __init__(self, actions: LabelSet, rows: Mapping[str, Sequence]):
        self.actions = actions
        self.rows = {s: _distribution(r, len(actions), f"policy row {s}")
                     for s, r in rows.items()}

    def prob(self, s: str, a: str) -> Fraction:
        return self.rows[s][self.actions.index(a)]

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, Policy) and self.actions == other.actions
                and self.rows == other.rows)

    def __repr__(self) -> str:
        return f"Policy({len(self.rows)} states)"


# A time-indexed policy is a sequence with one Policy per step.
AnyPolicy = Union[Policy, Sequence[Policy]]


def uniform_policy(m: Mdp) -> Policy:
    p = Fraction(1, len(m.actions))
    return Policy(m.actions, {s: [p] * len(m.actions) for s in m.states})


def deterministic_policy(m: Mdp, choice: Mapping[str, str]) -> Policy:
    rows = {}
    for s in m.states:
        rows[s] = [1 if a == choice[s] else 0 for a in m.actions]
    return Policy(m.actions, rows)


def _policy_at(pi: AnyPolicy, t: int) -> Policy:
    if isinstance(pi, Policy):
        return pi
    return pi[t]


@dataclass(frozen=True)
class ObservationMap:
    """Total map from trajectory labels to observation labels."""

    table: Mapping[str, str]
    observations: LabelSet

    @classmethod
    def from_function(cls, trajectories: Sequence[Trajectory], fn) -> ObservationMap:
        table = {tr.label: fn(tr) for tr in trajectories}
        return cls(table, LabelSet(sorted(set(table.values()))))

    def __call__(self, traj_label: str) -> str:
        return self.table[traj_label]


def enumerate_trajectories(m: Mdp, cap: int = DEFAULT_TRAJECTORY_CAP
                           ) -> tuple[LabelSet, list[Trajectory]]:
    """All possible trajectories, ordered by (start state, actions, next states)."""
    if cap == DEFAULT_TRAJECTORY_CAP and m._trajectories is not None:
        return m._trajectories
    s_idx = {s: i for i, s in enumerate(m.states)}
    a_idx = {a: i for i, a in enumerate(m.actions)}
    found: list[Trajectory] = []
    starts = [s for s, p in zip(m.states, m.initial) if p]

    def extend(states: list[str], actions: list[str]) -> None:
        if len(actions) == m.horizon:
            if len(found) >= cap:
                raise MdpError(f"more than {cap} trajectories; instance too large")
            found.append(Trajectory(tuple(states), tuple(actions)))
            return
        s = states[-1]
        for a in m.actions:
            for t in m.step(s, a):
                extend(states + [t], actions + [a])

    for s in starts:
        extend([s], [])

    def key(tr: Trajectory):
        return (s_idx[tr.states[0]], tuple(a_idx[a] for a in tr.actions),
                tuple(s_idx[s] for s in tr.states[1:]))

    found.sort(key=key)
    result = (LabelSet(tr.label for tr in found), found)
    if cap == DEFAULT_TRAJECTORY_CAP:
        m._trajectories = result
    return result


def trajectory_distribution(m: Mdp, pi: AnyPolicy) -> tuple[Fraction, ...]:
    _, trajs = enumerate_trajectories(m)
    init = dict(zip(m.states, m.initial))
    out = []
    for tr in trajs:
        p = init[tr.states[0]]
        for t, (s, a, s2) in enumerate(tr.transitions()):
            if not p:
                break
            p *= _policy_at(pi, t).prob(s, a) * m.transition[(s, a)][m.states.index(s2)]
        out.append(p)
    return tuple(out)


def policy_evaluation(m: Mdp, pi: AnyPolicy, G: Sequence) -> Fraction:
    labels, _ = enumerate_trajectories(m)
    if len(G) != len(labels):
        raise MdpError(f"return vector has length {len(G)}, expected {len(labels)}")
    dist = trajectory_distribution(m, pi)
    return sum((p * q(g) for p, g in zip(dist, G) if p), Fraction(0))


def backward_induction(m: Mdp, reward: Mapping[tuple[str, str], object] | Sequence
                       ) -> tuple[list[Policy], Fraction]:
    """Optimal undiscounted finite-horizon control of a state-action reward.

    Returns one deterministic policy per time step (finite-horizon optima are
    time-dependent in general) and the optimal value under P0. Ties go to the
    lowest action index.
    """
    if not isinstance(reward, Mapping):
        sa = m.state_action_labels()
        if len(reward) != len(sa):
            raise MdpError(f"reward has length {len(reward)}, expected {len(sa)}")
        reward = {(s, a): reward[i * len(m.actions) + j]
                  for i, s in enumerate(m.states) for j, a in enumerate(m.actions)}
    r = {k: q(v) for k, v in reward.items()}
    value = {s: Fraction(0) for s in m.states}
    policies: list[Policy] = []
    for _ in range(m.horizon):
        new_value = {}
        choice = {}
        for s in m.states:
            best_a, best = None, None
            for a in m.actions:
                qv = r.get((s, a), Fraction(0)) + sum(
                    (p * value[t] for t, p in m.step(s, a).items()), Fraction(0))
                if best is None or qv > best:
                    best_a, best = a, qv
            new_value[s] = best
            choice[s] = best_a
        value = new_value
        policies.append(deterministic_policy(m, choice))
    policies.reverse()
    J = sum((p * value[s] for s, p in zip(m.states, m.initial)), Fraction(0))
    return policies, J


def posterior_belief_matrix(m: Mdp, prior: AnyPolicy, O: ObservationMap) -> Mat:
    """Rows: observations; row o is the prior restricted to O^{-1}(o), normalized."""
    labels, trajs = enumerate_trajectories(m)
    dist = trajectory_distribution(m, prior)
    obs = O.observations
    mass = {o: Fraction(0) for o in obs}
    for tr, p in zip(trajs, dist):
        mass[O(tr.label)] += p
    for o, w in mass.items():
        if not w:
            raise MdpError(f"observation {o!r} has zero prior mass")
    zero = Fraction(0)
    rows = [[zero] * len(labels) for _ in obs]
    for j, (tr, p) in enumerate(zip(trajs, dist)):
        o = O(tr.label)
        rows[obs.index(o)][j] = p / mass[o]
    return Mat(obs, labels, rows)


def all_deterministic_markov_policies(m: Mdp):
    """Every time-indexed deterministic policy (exhaustive; small instances only)."""
    per_step = [deterministic_policy(m, dict(zip(m.states, combo)))
                for combo in itertools.product(m.actions, repeat=len(m.states))]
    return itertools.product(per_step, repeat=m.horizon)
