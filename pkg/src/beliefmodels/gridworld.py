"""The 2x2 hand-and-button gridworld, its dihedral symmetry and three models.

A state is (hand position, button position), each one of the four cells
LU, RU, RD, LD (column then row). The hand moves with L/R/U/D; walls block
moves and P leaves the state unchanged. The evaluator looks at the grid from
below: they see which column the hand and the button are in and whether a
press happened, but not movement actions or rows.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .covering import verify_morphism
from .linalg import LabelSet, Mat, Subspace, map_subspace
from .mdp import (
    Mdp,
    ObservationMap,
    Trajectory,
    enumerate_trajectories,
    posterior_belief_matrix,
    uniform_policy,
)
from .models import BeliefModel, ambiguity, build_model, gamma_matrix

__all__ = [
    "POSITIONS",
    "ACTIONS",
    "GROUP",
    "REPRESENTATIVES",
    "REP_STATE_NAMES",
    "OrbitMap",
    "GridworldReport",
    "state_label",
    "d4_act",
    "compose",
    "build_gridworld",
    "true_reward",
    "build_orbit_map",
    "h_star_matrix",
    "build_observation_map",
    "posterior",
    "build_three_models",
    "run_ambiguity_analysis",
]

POSITIONS = ("LU", "RU", "RD", "LD")
ACTIONS = ("L", "R", "U", "D", "P")

_R_POS = {"LU": "RU", "RU": "RD", "RD": "LD", "LD": "LU"}
_F_POS = {"LU": "LD", "RU": "RD", "RD": "RU", "LD": "LU"}
_R_ACT = {"L": "U", "U": "R", "R": "D", "D": "L", "P": "P"}
_F_ACT = {"L": "L", "U": "D", "R": "R", "D": "U", "P": "P"}

# r^k f^j, with f applied first
GROUP = {"e": (0, 0), "r": (1, 0), "r2": (2, 0), "r3": (3, 0),
         "f": (0, 1), "rf": (1, 1), "r2f": (2, 1), "r3f": (3, 1)}

# Representative state-action pairs, one per orbit.
REP_STATE_NAMES = {"s0": "RD.RD", "s1": "LD.RD", "s2": "LU.RD"}
REPRESENTATIVES = tuple(
    f"{REP_STATE_NAMES[name]},{a}"
    for name, acts in (("s0", "LDP"), ("s1", "LRUDP"), ("s2", "LDP"))
    for a in acts
)

# Diagonal start states, as (hand, button).
START_STATES = (("LU", "RD"), ("RU", "LD"), ("RD", "LU"), ("LD", "RU"))


def state_label(hand: str, button: str) -> str:
    return f"{hand}.{button}"


def _split_state(label: str) -> tuple[str, str]:
    hand, button = label.split(".")
    return hand, button


def _apply(table: dict[str, str], x: str, times: int) -> str:
    for _ in range(times):
        x = table[x]
    return x


def d4_act(g: str, state: str, action: str) -> tuple[str, str]:
    """g.(s, a) for g in GROUP; acts on hand, button and action alike."""
    k, j = GROUP[g]
    hand, button = _split_state(state)
    hand, button = (_apply(_R_POS, _apply(_F_POS, p, j), k) for p in (hand, button))
    action = _apply(_R_ACT, _apply(_F_ACT, action, j), k)
    return state_label(hand, button), action


def compose(g: str, h: str) -> str:
    """The element acting as g after h."""
    k1, j1 = GROUP[g]
    k2, j2 = GROUP[h]
    # f r^k = r^{-k} f
    k = (k1 + (-k2 if j1 else k2)) % 4
    j = (j1 + j2) % 2
    for name, kj in GROUP.items():
        if kj == (k, j):
            return name
    raise AssertionError("unreachable")


def _move(pos: str, action: str) -> str:
    col, row = pos[0], pos[1]
    if action == "L":
        col = "L"
    elif action == "R":
        col = "R"
    elif action == "U":
        row = "U"
    elif action == "D":
        row = "D"
    return col + row


def _states() -> list[str]:
    return [state_label(h, b) for h in POSITIONS for b in POSITIONS]


def build_gridworld() -> Mdp:
    states = _states()
    idx = {s: i for i, s in enumerate(states)}
    transition = {}
    for s in states:
        hand, button = _split_state(s)
        for a in ACTIONS:
            row = [0] * len(states)
            row[idx[state_label(_move(hand, a), button)]] = 1
            transition[(s, a)] = row
    starts = {state_label(h, b) for h, b in START_STATES}
    initial = [Fraction(1, 4) if s in starts else 0 for s in states]
    return Mdp(states, ACTIONS, transition, initial, horizon=3)


def true_reward(m: Mdp) -> tuple[Fraction, ...]:
    """1 for pressing while the hand is on the button, over state-action labels."""
    out = []
    for s in m.states:
        hand, button = _split_state(s)
        for a in m.actions:
            out.append(Fraction(int(hand == button and a == "P")))
    return tuple(out)


@dataclass(frozen=True)
class OrbitMap:
    table: dict[str, str]
    representatives: LabelSet

    def __call__(self, pair: str) -> str:
        return self.table[pair]


def build_orbit_map() -> OrbitMap:
    reps = set(REPRESENTATIVES)
    table = {}
    for s in _states():
        for a in ACTIONS:
            hits = {",".join(d4_act(g, s, a)) for g in GROUP} & reps
            if len(hits) != 1:
                raise AssertionError(f"({s},{a}) has representatives {sorted(hits)}")
            table[f"{s},{a}"] = hits.pop()
    return OrbitMap(table, LabelSet(REPRESENTATIVES))


def h_star_matrix(h: OrbitMap, pairs: LabelSet) -> Mat:
    """Pullback along h: one 1 per row, in the column of the row's representative."""
    reps = h.representatives
    rows = []
    for pair in pairs:
        row = [0] * len(reps)
        row[reps.index(h(pair))] = 1
        rows.append(row)
    return Mat(pairs, reps, rows)


def _view(tr: Trajectory) -> str:
    parts = []
    for s, a, _ in tr.transitions():
        hand, button = _split_state(s)
        parts.append(f"{hand[0]}{button[0]}{'P' if a == 'P' else '_'}")
    hand, button = _split_state(tr.states[-1])
    parts.append(f"{hand[0]}{button[0]}")
    return "|".join(parts)


def build_observation_map(m: Mdp) -> ObservationMap:
    _, trajs = enumerate_trajectories(m)
    return ObservationMap.from_function(trajs, _view)


def posterior(m: Mdp) -> Mat:
    return posterior_belief_matrix(m, uniform_policy(m), build_observation_map(m))


@lru_cache(maxsize=1)
def _built():
    m = build_gridworld()
    h = build_orbit_map()
    gamma = gamma_matrix(m, 1, "state-action")
    hs = h_star_matrix(h, gamma.cols)
    bp = posterior(m)
    bg = bp @ gamma
    press_reps = [r for r in REPRESENTATIVES if r.endswith(",P")]
    reps = h.representatives
    v1 = Subspace(reps, [[int(r == p) for r in reps] for p in press_reps])
    lam1 = gamma @ hs
    m1 = build_model(reps, lam1, bp @ lam1, v1)
    m2 = build_model(gamma.cols, gamma, bg, map_subspace(hs, v1))
    press = [c for c in gamma.cols if c.endswith(",P")]
    v3 = Subspace(gamma.cols, [[int(c == p) for c in gamma.cols] for p in press])
    m3 = build_model(gamma.cols, gamma, bg, v3)
    return m, h, gamma, hs, bp, (m1, m2, m3)


def build_three_models() -> tuple[BeliefModel, BeliefModel, BeliefModel]:
    """M1 on orbit features, M2 and M3 on state-action features (press-only V)."""
    return _built()[5]


def gridworld_parts():
    """(mdp, orbit map, return map, h*, posterior) used to build the models."""
    return _built()[:5]


@dataclass(frozen=True)
class GridworldReport:
    n_trajectories: int
    n_observations: int
    ambiguities: tuple[Subspace, Subspace, Subspace]
    h_star_is_morphism: bool
    identity_is_morphism: bool
    witness: tuple[Fraction, ...]
    witness_return: tuple[Fraction, ...]
    witness_feedback: tuple[Fraction, ...]
    witness_in_amb3: bool


def witness_reward(features: LabelSet) -> tuple[Fraction, ...]:
    """+1 for pressing at s1' = (RU, RD), -1 at its up-down mirror s1'' = (RD, RU)."""
    plus, minus = "RU.RD,P", "RD.RU,P"
    return tuple(Fraction(1 if c == plus else -1 if c == minus else 0) for c in features)


def run_ambiguity_analysis() -> GridworldReport:
    m, h, gamma, hs, bp, (m1, m2, m3) = _built()
    amb = (ambiguity(m1), ambiguity(m2), ambiguity(m3))
    r_prime = witness_reward(m3.features)
    g_prime = gamma.apply(r_prime)
    return GridworldReport(
        n_trajectories=len(gamma.rows),
        n_observations=len(bp.rows),
        ambiguities=amb,
        h_star_is_morphism=verify_morphism(hs, m1, m2),
        identity_is_morphism=verify_morphism(Mat.identity(m2.features), m2, m3),
        witness=r_prime,
        witness_return=g_prime,
        witness_feedback=m3.belief.apply(r_prime),
        witness_in_amb3=amb[2].contains(g_prime),
    )
