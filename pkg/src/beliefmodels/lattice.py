"""Sixteen belief models built from one MDP at four feature granularities.

Features can be whole trajectories, transitions (s, a, s'), abstractions of
transitions f = h(s, a, s'), or sequences of abstractions. The models are
linked by morphisms whose ambiguities form an inclusion lattice; this module
builds all of them and checks every relation of that lattice.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .choices import is_row_constant
from .covering import verify_morphism
from .linalg import (
    LabelSet,
    Mat,
    Subspace,
    image_basis,
    intersect,
    is_contained,
    kernel_basis,
    map_subspace,
)
from .mdp import Mdp, ObservationMap, enumerate_trajectories, posterior_belief_matrix, uniform_policy
from .models import BeliefModel, ambiguity, build_model, gamma_matrix

__all__ = [
    "LatticeError",
    "LatticeInstance",
    "LatticeReport",
    "MODEL_NAMES",
    "ARROWS",
    "RELATIONS",
    "abstraction_matrices",
    "build_lattice",
    "random_instance",
    "run_lattice",
]


class LatticeError(ValueError):
    pass


MODEL_NAMES = (
    "M^F_F", "M^SAS_SAS", "M^SAS_F", "M^FT_FT", "M^FT_F",
    "M^Traj_Traj", "M^Traj_SAS", "M^Traj_FT", "M^Traj_F",
    "M'^F_F", "M'^SAS_F", "M'^SAS_SAS",
    "M''^F_F", "M''^FT_F", "M''^FT_FT",
    "M'''^F_F",
)

# (source, target, map name) for every arrow of the model diagram
ARROWS = (
    ("M^SAS_SAS", "M^Traj_SAS", "Gamma"),
    ("M^Traj_SAS", "M^Traj_Traj", "id_Traj"),
    ("M^SAS_F", "M^Traj_F", "Gamma"),
    ("M^Traj_F", "M^Traj_FT", "id_Traj"),
    ("M^F_F", "M^FT_F", "Gamma_F"),
    ("M^FT_F", "M^FT_FT", "id_FT"),
    ("M''^F_F", "M''^FT_F", "Gamma_F"),
    ("M''^FT_F", "M''^FT_FT", "id_FT"),
    ("M'^SAS_F", "M'^SAS_SAS", "id_SAS"),
    ("M^SAS_F", "M^SAS_SAS", "id_SAS"),
    ("M^Traj_F", "M^Traj_SAS", "id_Traj"),
    ("M^Traj_FT", "M^Traj_Traj", "id_Traj"),
    ("M'^F_F", "M'^SAS_F", "h*"),
    ("M^F_F", "M^SAS_F", "h*"),
    ("M^FT_F", "M^Traj_F", "hT*"),
    ("M^FT_FT", "M^Traj_FT", "hT*"),
)

# (left, relation, right) over ambiguities: rows of the diagram, then columns
RELATIONS = (
    ("M^SAS_SAS", "=", "M^Traj_SAS"),
    ("M^Traj_SAS", "<=", "M^Traj_Traj"),
    ("M^SAS_F", "=", "M^Traj_F"),
    ("M^Traj_F", "<=", "M^Traj_FT"),
    ("M^F_F", "=", "M^FT_F"),
    ("M^FT_F", "<=", "M^FT_FT"),
    ("M''^F_F", "=", "M''^FT_F"),
    ("M''^FT_F", "<=", "M''^FT_FT"),
    ("M'^SAS_F", "<=", "M'^SAS_SAS"),
    ("M^SAS_F", "<=", "M^SAS_SAS"),
    ("M^Traj_F", "<=", "M^Traj_SAS"),
    ("M^Traj_FT", "<=", "M^Traj_Traj"),
    ("M'^F_F", "=", "M'^SAS_F"),
    ("M^F_F", "=", "M^SAS_F"),
    ("M^FT_F", "=", "M^Traj_F"),
    ("M^FT_FT", "=", "M^Traj_FT"),
)


@dataclass(frozen=True)
class LatticeInstance:
    mdp: Mdp
    abstraction: Mapping[str, str]  # transition label -> abstraction label
    abstractions: LabelSet
    bp: Mat
    bp1: Mat  # observations x transitions
    bp2: Mat  # observations x abstraction sequences
    bp3: Mat  # observations x abstractions
    gamma: Fraction


@dataclass(frozen=True)
class LatticeReport:
    models: dict[str, BeliefModel]
    ambiguities: dict[str, Subspace]
    relations: tuple[tuple[str, str, str, bool], ...]
    formulas: tuple[tuple[str, bool], ...]
    arrows: tuple[tuple[str, str, str, bool], ...]
    composites_commute: bool
    commutes: bool

    @property
    def all_hold(self) -> bool:
        return (all(r[3] for r in self.relations) and all(f[1] for f in self.formulas)
                and all(a[3] for a in self.arrows) and self.composites_commute
                and self.commutes)


def abstraction_matrices(m: Mdp, abstraction: Mapping[str, str], abstractions: LabelSet,
                         gamma) -> dict[str, Mat]:
    """Γ, h*, Γ_F and hT* for an abstraction of transitions."""
    Gamma = gamma_matrix(m, gamma, "transitions")
    sas = Gamma.cols
    h_star = Mat(sas, abstractions,
                 [[int(abstraction[x] == f) for f in abstractions] for x in sas])
    T = m.horizon
    seqs = LabelSet("/".join(p) for p in itertools.product(abstractions, repeat=T))
    g = Fraction(gamma)
    gamma_f = []
    for seq in seqs:
        row = [Fraction(0)] * len(abstractions)
        for t, f in enumerate(seq.split("/")):
            row[abstractions.index(f)] += g ** t
        gamma_f.append(row)
    Gamma_F = Mat(seqs, abstractions, gamma_f)
    _, trajs = enumerate_trajectories(m)
    hT = []
    for tr in trajs:
        key = "/".join(abstraction[f"{s},{a},{t}"] for s, a, t in tr.transitions())
        hT.append([int(key == seq) for seq in seqs])
    hT_star = Mat(Gamma.rows, seqs, hT)
    return {"Gamma": Gamma, "h*": h_star, "Gamma_F": Gamma_F, "hT*": hT_star}


def build_lattice(inst: LatticeInstance) -> LatticeReport:
    for name, M in (("bp'", inst.bp1), ("bp''", inst.bp2), ("bp'''", inst.bp3)):
        if is_row_constant(M) is None:
            raise LatticeError(f"{name} is not row-constant")
    mats = abstraction_matrices(inst.mdp, inst.abstraction, inst.abstractions, inst.gamma)
    Gamma, h_star, Gamma_F, hT_star = mats["Gamma"], mats["h*"], mats["Gamma_F"], mats["hT*"]
    bp, bp1, bp2, bp3 = inst.bp, inst.bp1, inst.bp2, inst.bp3
    F, SAS, FT, Traj = inst.abstractions, Gamma.cols, Gamma_F.rows, Gamma.rows
    I_traj = Mat.identity(Traj)
    Gh = Gamma @ h_star
    commutes = Gh == hT_star @ Gamma_F

    def full(labels):
        return Subspace.full(labels)

    models = {
        "M^F_F": build_model(F, Gh, bp @ Gh, full(F)),
        "M^SAS_SAS": build_model(SAS, Gamma, bp @ Gamma, full(SAS)),
        "M^SAS_F": build_model(SAS, Gamma, bp @ Gamma, image_basis(h_star)),
        "M^FT_FT": build_model(FT, hT_star, bp @ hT_star, full(FT)),
        "M^FT_F": build_model(FT, hT_star, bp @ hT_star, image_basis(Gamma_F)),
        "M^Traj_Traj": build_model(Traj, I_traj, bp, full(Traj)),
        "M^Traj_SAS": build_model(Traj, I_traj, bp, image_basis(Gamma)),
        "M^Traj_FT": build_model(Traj, I_traj, bp, image_basis(hT_star)),
        "M^Traj_F": build_model(Traj, I_traj, bp, image_basis(Gh)),
        "M'^F_F": build_model(F, Gh, bp1 @ h_star, full(F)),
        "M'^SAS_F": build_model(SAS, Gamma, bp1, image_basis(h_star)),
        "M'^SAS_SAS": build_model(SAS, Gamma, bp1, full(SAS)),
        "M''^F_F": build_model(F, hT_star @ Gamma_F, bp2 @ Gamma_F, full(F)),
        "M''^FT_F": build_model(FT, hT_star, bp2, image_basis(Gamma_F)),
        "M''^FT_FT": build_model(FT, hT_star, bp2, full(FT)),
        "M'''^F_F": build_model(F, Gh, bp3, full(F)),
    }
    amb = {name: ambiguity(M) for name, M in models.items()}

    relations = []
    for left, rel, right in RELATIONS:
        a, b = amb[left], amb[right]
        ok = a == b if rel == "=" else is_contained(a, b)
        relations.append((left, rel, right, ok))

    def img(A, V):
        return map_subspace(A, V)

    kb = kernel_basis(bp)
    formulas = (
        ("Amb(M^Traj_Traj) = ker bp", amb["M^Traj_Traj"] == kb),
        ("Amb(M^SAS_SAS) = ker bp ∩ im Γ",
         amb["M^SAS_SAS"] == intersect(kb, image_basis(Gamma))),
        ("Amb(M^SAS_F) = ker bp ∩ im Γh*", amb["M^SAS_F"] == intersect(kb, image_basis(Gh))),
        ("Amb(M^Traj_FT) = ker bp ∩ im hT*",
         amb["M^Traj_FT"] == intersect(kb, image_basis(hT_star))),
        ("Amb(M'^SAS_SAS) = Γ(ker bp')", amb["M'^SAS_SAS"] == img(Gamma, kernel_basis(bp1))),
        ("Amb(M'''^F_F) = Γh*(ker bp''')", amb["M'''^F_F"] == img(Gh, kernel_basis(bp3))),
        ("Amb(M''^FT_FT) = hT*(ker bp'')",
         amb["M''^FT_FT"] == img(hT_star, kernel_basis(bp2))),
    )

    maps = {"Gamma": Gamma, "Gamma_F": Gamma_F, "h*": h_star, "hT*": hT_star,
            "id_Traj": I_traj, "id_SAS": Mat.identity(SAS), "id_FT": Mat.identity(FT)}
    arrows = tuple((s, t, name, verify_morphism(maps[name], models[s], models[t]))
                   for s, t, name in ARROWS)
    composites_commute = _check_composites(models, maps)
    return LatticeReport(models, amb, tuple(relations), formulas, arrows,
                         composites_commute, commutes)


def _check_composites(models: dict[str, BeliefModel], maps: dict[str, Mat]) -> bool:
    """Every path of arrows composes to a morphism, parallel paths agree,
    and identities are morphisms."""
    out: dict[str, list[tuple[str, str]]] = {}
    for s, t, name in ARROWS:
        out.setdefault(s, []).append((t, name))
    composite: dict[tuple[str, str], Mat] = {}

    def walk(start: str, node: str, acc: Mat) -> bool:
        for t, name in out.get(node, ()):
            nxt = maps[name] @ acc
            key = (start, t)
            if key in composite:
                if composite[key] != nxt:
                    return False
            else:
                composite[key] = nxt
                if not verify_morphism(nxt, models[start], models[t]):
                    return False
            if not walk(start, t, nxt):
                return False
        return True

    for name, M in models.items():
        if not verify_morphism(Mat.identity(M.features), M, M):
            return False
        if not walk(name, name, Mat.identity(M.features)):
            return False
    return True


def _row_constant(rng: random.Random, rows: LabelSet, cols: LabelSet, total: int) -> Mat:
    data = []
    for _ in rows:
        row = [rng.randint(-2, 2) for _ in cols]
        row[-1] += total - sum(row)
        data.append(row)
    return Mat(rows, cols, data)


def random_instance(seed: int) -> LatticeInstance:
    """A small seeded instance: 2-3 states, 2 actions, horizon 2."""
    rng = random.Random(seed)
    n_states = rng.choice((2, 3))
    states = [f"s{i}" for i in range(n_states)]
    actions = ["a0", "a1"]
    transition = {}
    for s in states:
        for a in actions:
            weights = [rng.randint(0, 2) for _ in states]
            if not any(weights):
                weights[rng.randrange(n_states)] = 1
            tot = sum(weights)
            transition[(s, a)] = [Fraction(w, tot) for w in weights]
    init_w = [rng.randint(0, 2) for _ in states]
    if not any(init_w):
        init_w[0] = 1
    initial = [Fraction(w, sum(init_w)) for w in init_w]
    m = Mdp(states, actions, transition, initial, horizon=2)
    labels, trajs = enumerate_trajectories(m)

    n_obs = rng.randint(2, max(2, min(5, len(trajs))))
    obs_of = [f"o{i}" for i in range(n_obs)]
    assign = [obs_of[i] if i < n_obs else rng.choice(obs_of) for i in range(len(trajs))]
    rng.shuffle(assign)
    table = {tr.label: o for tr, o in zip(trajs, assign)}
    O = ObservationMap(table, LabelSet(sorted(set(table.values()))))
    bp = posterior_belief_matrix(m, uniform_policy(m), O)

    n_f = rng.choice((2, 3))
    F = LabelSet(f"f{i}" for i in range(n_f))
    sas = m.transition_labels()
    abstraction = {x: F[i] if i < n_f else rng.choice(list(F)) for i, x in enumerate(sas)}
    keys = list(abstraction)
    vals = list(abstraction.values())
    rng.shuffle(vals)
    abstraction = dict(zip(keys, vals))

    seqs = LabelSet("/".join(p) for p in itertools.product(F, repeat=m.horizon))
    total = rng.choice((1, 2, 3))
    bp1 = _row_constant(rng, O.observations, sas, total)
    bp2 = _row_constant(rng, O.observations, seqs, total)
    bp3 = _row_constant(rng, O.observations, F, total)
    gamma = rng.choice((Fraction(1), Fraction(1, 2), Fraction(2, 3)))
    return LatticeInstance(m, abstraction, F, bp, bp1, bp2, bp3, gamma)


def run_lattice(seed: int) -> LatticeReport:
    return build_lattice(random_instance(seed))
