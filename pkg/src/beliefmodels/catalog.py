"""Named fixtures and the reports the command line prints.

Every report is a plain dict of JSON-ready values; :func:`render_text`
turns the same dict into the human-readable form.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Optional, Sequence

from . import gridworld
from .choices import (
    ChoiceTable,
    ambiguity_with_choices,
    infer_from_choices,
    is_balanced,
    is_row_constant,
)
from .covering import compare_ambiguities, cover_report, transferred_inference, verify_translation
from .io import mat_json, subspace_json, vector_json
from .lattice import run_lattice
from .linalg import LabelSet, Mat, Subspace, format_rational, vector
from .models import (
    BeliefModel,
    ValidSpec,
    ambiguity,
    build_model,
    completeness,
    faithfulness,
    infer_return,
    trivial_model,
)

__all__ = [
    "FEATURES",
    "BELIEF_VECTORS",
    "ALICE_FEEDBACK",
    "Pair",
    "build_fixture",
    "analysis_report",
    "inference_report",
    "choice_report",
    "cover_json",
    "gridworld_report",
    "lattice_report",
    "reproduce",
    "REPRODUCIBLE",
    "render_text",
]

FEATURES = LabelSet(["f1", "f2", "f3", "f4"])

BELIEF_VECTORS = {
    "o1": (1, 0, 0, 1),
    "o2": (0, 1, 0, 1),
    "o3": (0, 0, 1, 1),
    "o4": (0, 3, 0, 2),
    "o5": (0, 0, 0, 1),
}
# true feature strengths where they differ from the believed ones
TRUE_VECTORS = dict(BELIEF_VECTORS, o5=(1, 0, 0, 1))

ALICE_FEEDBACK = (-3, 1, 0, 4)


def _rows(labels: Sequence[str], table: dict) -> Mat:
    labels = LabelSet(labels)
    return Mat(labels, FEATURES, [table[o] for o in labels])


@dataclass(frozen=True)
class Pair:
    """A true model and a proposed covering model over the same data."""

    true: BeliefModel
    hat: BeliefModel
    translation: Mat  # Ψ: hat features -> true features


def _hat_features() -> LabelSet:
    return FEATURES.concat(LabelSet(["f5"]))


def _hat_ontology(lam: Mat) -> Mat:
    """A richer ontology: one extra feature equal to f2 + f3."""
    extra = [r[1] + r[2] for r in lam.data]
    return Mat(lam.rows, _hat_features(), [list(r) + [e] for r, e in zip(lam.data, extra)])


def _projection() -> Mat:
    hat = _hat_features()
    return Mat(FEATURES, hat, [[int(i == j) for j in range(len(hat))]
                               for i in range(len(FEATURES))])


def _e_pair(obs: Sequence[str], traj: Sequence[str], naive: bool) -> Pair:
    lam = _rows(traj, TRUE_VECTORS)
    lam_hat = _hat_ontology(lam)
    if naive:
        bel = _rows(traj, BELIEF_VECTORS)
        bel_hat = lam_hat
    else:
        bel = lam.select_rows(obs)
        bel_hat = lam_hat.select_rows(obs)
    true = build_model(FEATURES, lam, bel)
    hat = build_model(lam_hat.cols, lam_hat, bel_hat)
    return Pair(true, hat, _projection())


def build_fixture(name: str, **kw) -> Any:
    """Resolve a fixture id to its object graph."""
    key = name.upper()
    if key == "ALICE4":
        A = _rows(["o1", "o2", "o3", "o4"], BELIEF_VECTORS)
        return build_model(FEATURES, A, A)
    if key == "ALICE3":
        lam = _rows(["o1", "o2", "o3", "o4"], BELIEF_VECTORS)
        bel = _rows(["o1", "o2", "o4"], BELIEF_VECTORS)
        valid = ValidSpec.full() if kw.get("full_valid") else ValidSpec.constraints([[0, 0, 1, 1]])
        return build_model(FEATURES, lam, bel, valid)
    if key == "CODE4":
        labels = ["o2", "o3", "o4", "o5"]
        return build_model(FEATURES, _rows(labels, TRUE_VECTORS), _rows(labels, BELIEF_VECTORS))
    if key == "CODE5":
        labels = ["o1", "o2", "o3", "o4", "o5"]
        return build_model(FEATURES, _rows(labels, TRUE_VECTORS), _rows(labels, BELIEF_VECTORS))
    if key == "E1":
        labels = ["o1", "o2", "o3", "o4", "o5"]
        return _e_pair(labels, labels, naive=False)
    if key == "E2":
        labels = ["o1", "o2", "o3", "o4", "o5"]
        obs = ["o1", "o2", "o3", "o4"] if kw.get("spanning", True) else ["o2", "o3", "o4"]
        return _e_pair(obs, labels, naive=False)
    if key == "E3":
        labels = ["o2", "o3", "o4", "o5"]
        return _e_pair(labels, labels, naive=True)
    if key in ("GRID", "GRIDWORLD"):
        return gridworld.build_three_models()
    if key == "LATTICE":
        return run_lattice(int(kw.get("seed", 0)))
    if key == "TRIVIAL":
        G, G_O = kw["G"], kw["G_O"]
        return trivial_model(G, G_O, LabelSet.numbered("t", len(G)),
                             LabelSet.numbered("o", len(G_O)))
    raise KeyError(f"unknown fixture {name!r}")


# --- reports ----------------------------------------------------------------

def _q(x: Fraction) -> str:
    return format_rational(x)


def analysis_report(M: BeliefModel) -> dict:
    complete, Z = completeness(M)
    faithful, Y = faithfulness(M)
    amb = ambiguity(M)
    out = {
        "features": len(M.features),
        "trajectories": len(M.trajectories),
        "observations": len(M.observations),
        "valid_dim": M.valid.dim,
        "complete": complete,
        "faithful": faithful,
        "balanced": is_balanced(M),
        "ontology_row_constant": _opt(is_row_constant(M.ontology)),
        "belief_row_constant": _opt(is_row_constant(M.belief)),
        "ambiguity_dim": amb.dim,
        "ambiguity_basis": subspace_json(amb)["basis"],
    }
    if Z is not None:
        out["Z"] = mat_json(Z)
    if Y is not None:
        out["Y"] = mat_json(Y)
    return out


def _opt(x: Optional[Fraction]) -> Optional[str]:
    return None if x is None else _q(x)


def inference_report(M: BeliefModel, G_O: Sequence) -> dict:
    res = infer_return(M, G_O)
    return {
        "feedback": dict(zip(M.observations, vector_json(G_O))),
        "reward_object": dict(zip(M.features, vector_json(res.reward_object))),
        "return_point": dict(zip(M.trajectories, vector_json(res.feedback_compatible.point))),
        "unique": res.complete,
        "ambiguity_dim": res.ambiguity.dim,
        "ambiguity_basis": subspace_json(res.ambiguity)["basis"],
    }


def choice_report(M: BeliefModel, P: ChoiceTable) -> dict:
    res = infer_from_choices(M, P)
    return {
        "return_point": dict(zip(M.trajectories, vector_json(res.feedback_compatible.point))),
        "reward_object": dict(zip(M.features, vector_json(res.reward_object))),
        "choice_ambiguity_dim": res.ambiguity.dim,
        "choice_ambiguity_basis": subspace_json(res.ambiguity)["basis"],
        "note": "return determined up to the choice ambiguity (includes constants)",
    }


def cover_json(M: BeliefModel, M_hat: BeliefModel) -> dict:
    rep = cover_report(M, M_hat)
    out = {
        "covers": rep.covers,
        "ambiguity_relation": rep.ambiguity_relation,
        "ambiguity_true": subspace_json(rep.ambiguity_true),
        "ambiguity_hat": subspace_json(rep.ambiguity_hat),
        "complete_hat": rep.ambiguity_hat.is_zero(),
    }
    if rep.morphism is not None:
        out["phi"] = mat_json(rep.morphism.phi)
    return out


def gridworld_report() -> dict:
    rep = gridworld.run_ambiguity_analysis()
    m, h, gamma, hs, bp = gridworld.gridworld_parts()
    m1, m2, m3 = gridworld.build_three_models()
    R = gridworld.true_reward(m)
    G_true = gamma.apply(R)
    inferred = transferred_inference(m2, m2.belief.apply(R))
    return {
        "trajectories": rep.n_trajectories,
        "observations": rep.n_observations,
        "representatives": list(h.representatives),
        "ambiguity_dims": {"M1": rep.ambiguities[0].dim, "M2": rep.ambiguities[1].dim,
                           "M3": rep.ambiguities[2].dim},
        "valid_dims": {"M1": m1.valid.dim, "M2": m2.valid.dim, "M3": m3.valid.dim},
        "faithful": {"M1": faithfulness(m1)[0], "M2": faithfulness(m2)[0],
                     "M3": faithfulness(m3)[0]},
        "row_constant": {"M1": is_row_constant(m1.ontology) is not None
                         and is_row_constant(m1.belief) is not None,
                         "M2": is_row_constant(m2.ontology) is not None
                         and is_row_constant(m2.belief) is not None,
                         "M3": is_row_constant(m3.ontology) is not None
                         and is_row_constant(m3.belief) is not None},
        "balanced": {"M1": is_balanced(m1), "M2": is_balanced(m2), "M3": is_balanced(m3)},
        "h_star_morphism_M1_M2": rep.h_star_is_morphism,
        "identity_morphism_M2_M3": rep.identity_is_morphism,
        "relation_M1_M2": compare_ambiguities(m1, m2),
        "relation_M2_M3": compare_ambiguities(m2, m3),
        "witness_R_prime": {f: _q(x) for f, x in zip(m3.features, rep.witness) if x},
        "witness_return_nonzero": any(rep.witness_return),
        "witness_feedback_zero": not any(rep.witness_feedback),
        "witness_in_amb_M3": rep.witness_in_amb3,
        "transferred_inference_unique": inferred.complete,
        "transferred_inference_exact": inferred.feedback_compatible.point == G_true,
        "amb_M3_basis": subspace_json(rep.ambiguities[2])["basis"],
    }


def lattice_report(seed: int) -> dict:
    rep = run_lattice(seed)
    return {
        "seed": seed,
        "commutes": rep.commutes,
        "ambiguity_dims": {k: v.dim for k, v in rep.ambiguities.items()},
        "relations": [{"left": a, "rel": r, "right": b, "holds": ok}
                      for a, r, b, ok in rep.relations],
        "formulas": [{"claim": c, "holds": ok} for c, ok in rep.formulas],
        "arrows": [{"source": s, "target": t, "map": n, "is_morphism": ok}
                   for s, t, n, ok in rep.arrows],
        "composites_commute": rep.composites_commute,
        "all_hold": rep.all_hold,
    }


def _reproduce_alice() -> dict:
    M = build_fixture("ALICE4")
    res = infer_return(M, ALICE_FEEDBACK)
    return {"fixture": "ALICE4",
            "R_F": vector_json(res.reward_object),
            "complete": res.complete,
            "ambiguity_dim": res.ambiguity.dim,
            "G": vector_json(res.feedback_compatible.point)}


def _reproduce_alice_sym() -> dict:
    out = {"fixture": "ALICE3"}
    for label, full in (("constrained", False), ("full_valid", True)):
        M = build_fixture("ALICE3", full_valid=full)
        amb = ambiguity(M)
        out[label] = {"valid_dim": M.valid.dim, "complete": amb.is_zero(),
                      "ambiguity_dim": amb.dim, "ambiguity_basis": subspace_json(amb)["basis"]}
    return out


_CODE_REWARD = (-5, -2, 1, 3)


def _reproduce_code(name: str) -> dict:
    M = build_fixture(name)
    R = vector(_CODE_REWARD)
    G = M.ontology.apply(R)
    res = infer_return(M, M.belief.apply(R))
    amb = res.ambiguity
    f1_col = M.ontology.col("f1")
    return {"fixture": name,
            "complete": res.complete,
            "ambiguity_dim": amb.dim,
            "ambiguity_basis": subspace_json(amb)["basis"],
            "ambiguity_is_f1_column": amb == Subspace(M.trajectories, [f1_col]),
            "true_G": vector_json(G),
            "fc_contains_true_G": res.feedback_compatible.contains(G),
            "fc_contains_G_plus_f1_column": res.feedback_compatible.contains(
                [g + c for g, c in zip(G, f1_col)])}


def _pair_summary(name: str, pair: Pair) -> dict:
    R = vector(_CODE_REWARD)
    G_O = pair.true.belief.apply(R)
    res = infer_return(pair.hat, G_O)
    tr = verify_translation(pair.translation, pair.true, pair.hat)
    cj = cover_json(pair.true, pair.hat)
    return {"fixture": name,
            "covers": cj["covers"],
            "ambiguity_true_dim": cj["ambiguity_true"]["dim"],
            "ambiguity_hat_dim": cj["ambiguity_hat"]["dim"],
            "translation": tr.is_translation,
            "belief_compatible": tr.belief_compatible,
            "true_G": vector_json(pair.true.ontology.apply(R)),
            "inferred_G": vector_json(res.feedback_compatible.point),
            "inferred_unique": res.complete,
            "feedback": vector_json(G_O)}


def _reproduce_e2() -> dict:
    return {"spanning": _pair_summary("E2", build_fixture("E2", spanning=True)),
            "non_spanning": _pair_summary("E2", build_fixture("E2", spanning=False))}


REPRODUCIBLE = {
    "alice": _reproduce_alice,
    "alice-sym": _reproduce_alice_sym,
    "code": lambda: _reproduce_code("CODE4"),
    "code-rescued": lambda: _reproduce_code("CODE5"),
    "gridworld": gridworld_report,
    "e1": lambda: _pair_summary("E1", build_fixture("E1")),
    "e2": _reproduce_e2,
    "e3": lambda: _pair_summary("E3", build_fixture("E3")),
}


def reproduce(name: str) -> dict:
    try:
        fn = REPRODUCIBLE[name]
    except KeyError:
        raise KeyError(f"unknown example {name!r}") from None
    return fn()


# --- text rendering ---------------------------------------------------------

_LONG = 16


def _is_vector(x: Any) -> bool:
    return isinstance(x, list) and all(isinstance(v, str) for v in x)


def _vec_text(v: list[str]) -> str:
    if len(v) <= _LONG:
        return f"({', '.join(v)})"
    nonzero = sum(x != "0" for x in v)
    return f"<{len(v)} entries, {nonzero} nonzero; use --json for values>"


def render_text(report: dict, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    for key, val in report.items():
        if isinstance(val, dict) and {"rows", "cols", "entries"} <= set(val):
            lines.append(f"{pad}{key}: {len(val['rows'])}x{len(val['cols'])} matrix")
        elif isinstance(val, dict):
            if val and all(isinstance(v, (str, int, bool)) or v is None for v in val.values()):
                inner = ", ".join(f"{k}={_scalar(v)}" for k, v in val.items())
                lines.append(f"{pad}{key}: {inner}")
            else:
                lines.append(f"{pad}{key}:")
                lines.append(render_text(val, indent + 1))
        elif val == []:
            lines.append(f"{pad}{key}: (none)")
        elif _is_vector(val):
            lines.append(f"{pad}{key}: {_vec_text(val)}")
        elif isinstance(val, list) and val and all(_is_vector(v) for v in val):
            lines.append(f"{pad}{key}:")
            lines.extend(f"{pad}  {_vec_text(v)}" for v in val)
        elif isinstance(val, list) and val and all(isinstance(v, dict) for v in val):
            lines.append(f"{pad}{key}:")
            for v in val:
                lines.append(f"{pad}  - " + ", ".join(f"{k}={_scalar(x)}" for k, x in v.items()))
        elif isinstance(val, list):
            lines.append(f"{pad}{key}: {', '.join(map(str, val))}")
        else:
            lines.append(f"{pad}{key}: {_scalar(val)}")
    return "\n".join(l for l in lines if l)


def _scalar(v: Any) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "-"
    return str(v)
