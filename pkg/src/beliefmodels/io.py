"""JSON documents for models, MDPs, feedback and choice tables.

Rationals are always written as strings ``"p/q"`` (``"p"`` for integers).
Parsing accepts those strings and JSON integers; JSON floats are rejected.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Optional

from .choices import ChoiceTable
from .linalg import LabelSet, LinalgError, Mat, Subspace, format_rational, parse_rational
from .mdp import Mdp, MdpError
from .models import BeliefModel, ModelError, ValidSpec, build_model

__all__ = [
    "DocumentError",
    "ModelDocument",
    "parse_model",
    "serialize_model",
    "model_to_document",
    "parse_mdp",
    "serialize_mdp",
    "parse_feedback",
    "parse_choices",
    "serialize_choices",
    "rational_json",
    "mat_json",
    "subspace_json",
    "vector_json",
    "dump_json",
]


class DocumentError(ValueError):
    """Malformed document (bad JSON, bad rational, shape or label problems)."""


def _rational(x: Any, where: str) -> Fraction:
    if isinstance(x, bool) or isinstance(x, float):
        raise DocumentError(f"{where}: {x!r} is not an exact rational")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return parse_rational(x)
        except ValueError as e:
            raise DocumentError(f"{where}: {e}") from None
    raise DocumentError(f"{where}: {x!r} is not a rational")


def _labels(doc: dict, key: str) -> LabelSet:
    vals = doc.get(key)
    if not isinstance(vals, list) or not all(isinstance(v, str) for v in vals):
        raise DocumentError(f"'{key}' must be a list of strings")
    try:
        return LabelSet(vals)
    except LinalgError as e:
        raise DocumentError(f"'{key}': {e}") from None


def _matrix(doc: dict, key: str, rows: LabelSet, cols: LabelSet) -> Mat:
    data = doc.get(key)
    if not isinstance(data, list):
        raise DocumentError(f"'{key}' must be a list of rows")
    if len(data) != len(rows):
        raise DocumentError(f"'{key}' has {len(data)} rows, expected {len(rows)}")
    out = []
    for lab, row in zip(rows, data):
        if not isinstance(row, list) or len(row) != len(cols):
            n = len(row) if isinstance(row, list) else "no"
            raise DocumentError(f"'{key}' row {lab!r} has {n} entries, expected {len(cols)}")
        out.append([_rational(x, f"'{key}' row {lab!r}") for x in row])
    return Mat(rows, cols, out)


def _vectors(raw: Any, n: int, where: str) -> list[list[Fraction]]:
    if not isinstance(raw, list):
        raise DocumentError(f"{where} must be a list of vectors")
    out = []
    for i, v in enumerate(raw):
        if not isinstance(v, list) or len(v) != n:
            raise DocumentError(f"{where} vector {i} must have {n} entries")
        out.append([_rational(x, f"{where} vector {i}") for x in v])
    return out


def rational_json(x: Fraction) -> str:
    return format_rational(x)


def vector_json(v) -> list[str]:
    return [format_rational(x) for x in v]


def mat_json(A: Mat) -> dict:
    return {"rows": list(A.rows), "cols": list(A.cols),
            "entries": [vector_json(r) for r in A.data]}


def subspace_json(U: Subspace) -> dict:
    return {"dim": U.dim, "basis": [vector_json(v) for v in U.vectors]}


def dump_json(obj: Any) -> str:
    """Indented JSON with flat lists (matrix rows, vectors) kept on one line."""
    return _dump(obj, 0) + "\n"


def _dump(obj: Any, depth: int) -> str:
    pad, inner = "  " * depth, "  " * (depth + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(k, ensure_ascii=False)}: {_dump(v, depth + 1)}"
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, list) and any(isinstance(v, (list, dict)) for v in obj):
        items = [inner + _dump(v, depth + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    return json.dumps(obj, ensure_ascii=False)


@dataclass(frozen=True)
class ModelDocument:
    model: BeliefModel
    valid_spec: ValidSpec
    name: Optional[str] = None
    feedback: Optional[tuple[Fraction, ...]] = None
    choices: Optional[ChoiceTable] = None


def _load(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentError(f"invalid JSON: {e}") from None
    if not isinstance(doc, dict):
        raise DocumentError("document must be a JSON object")
    return doc


def parse_model(text: str) -> ModelDocument:
    doc = _load(text)
    features = _labels(doc, "features")
    trajs = _labels(doc, "trajectories")
    obs = _labels(doc, "observations")
    lam = _matrix(doc, "ontology", trajs, features)
    bel = _matrix(doc, "belief", obs, features)
    valid = doc.get("valid", {"kind": "full"})
    if not isinstance(valid, dict) or valid.get("kind") not in ("full", "basis", "constraints"):
        raise DocumentError("'valid' must be {\"kind\": full|basis|constraints, ...}")
    if valid["kind"] == "full":
        spec = ValidSpec.full()
    else:
        vecs = _vectors(valid.get("vectors", []), len(features), f"valid {valid['kind']}")
        spec = ValidSpec(valid["kind"], tuple(tuple(v) for v in vecs))
    try:
        model = build_model(features, lam, bel, spec)
    except ModelError as e:
        raise DocumentError(str(e)) from None
    feedback = None
    if "feedback" in doc:
        feedback = _feedback_values(doc["feedback"], obs)
    choices = None
    if "choices" in doc:
        choices = _choices(doc["choices"], obs)
    name = doc.get("name")
    return ModelDocument(model, spec, name if isinstance(name, str) else None, feedback, choices)


def model_to_document(model: BeliefModel, name: Optional[str] = None,
                      valid_spec: Optional[ValidSpec] = None, feedback=None,
                      choices: Optional[ChoiceTable] = None) -> ModelDocument:
    if valid_spec is None:
        valid_spec = (ValidSpec.full() if model.valid.is_full()
                      else ValidSpec.basis(model.valid.vectors))
    return ModelDocument(model, valid_spec, name,
                         None if feedback is None else tuple(feedback), choices)


def serialize_model(doc: ModelDocument) -> str:
    M = doc.model
    out: dict[str, Any] = {}
    if doc.name is not None:
        out["name"] = doc.name
    out["features"] = list(M.features)
    out["trajectories"] = list(M.trajectories)
    out["observations"] = list(M.observations)
    out["ontology"] = [vector_json(r) for r in M.ontology.data]
    out["belief"] = [vector_json(r) for r in M.belief.data]
    valid: dict[str, Any] = {"kind": doc.valid_spec.kind}
    if doc.valid_spec.kind != "full":
        valid["vectors"] = [vector_json(v) for v in doc.valid_spec.vectors]
    out["valid"] = valid
    if doc.feedback is not None:
        out["feedback"] = dict(zip(M.observations, vector_json(doc.feedback)))
    if doc.choices is not None:
        out["choices"] = serialize_choices(doc.choices)
    return dump_json(out)


def _feedback_values(raw: Any, obs: LabelSet) -> tuple[Fraction, ...]:
    if isinstance(raw, dict):
        missing = [o for o in obs if o not in raw]
        extra = [k for k in raw if k not in obs]
        if missing or extra:
            raise DocumentError(f"feedback labels mismatch: missing {missing}, unknown {extra}")
        return tuple(_rational(raw[o], f"feedback {o!r}") for o in obs)
    if isinstance(raw, list):
        if len(raw) != len(obs):
            raise DocumentError(f"feedback has {len(raw)} values, expected {len(obs)}")
        return tuple(_rational(x, f"feedback {o!r}") for x, o in zip(raw, obs))
    raise DocumentError("feedback must map observation labels to rationals")


def parse_feedback(text: str, observations: LabelSet) -> tuple[Fraction, ...]:
    """A feedback file: {"feedback": {obs: "p/q", ...}} or the bare mapping."""
    doc = _load(text)
    raw = doc.get("feedback", doc)
    return _feedback_values(raw, observations)


def _choices(raw: Any, obs: LabelSet) -> ChoiceTable:
    if not isinstance(raw, list):
        raise DocumentError("choices must be a list of [o, o', difference] triples")
    diffs = {}
    for i, item in enumerate(raw):
        if (not isinstance(item, list) or len(item) != 3
                or not isinstance(item[0], str) or not isinstance(item[1], str)):
            raise DocumentError(f"choice {i} must be [o, o', difference]")
        o, o2, d = item
        for lab in (o, o2):
            if lab not in obs:
                raise DocumentError(f"choice {i}: unknown observation {lab!r}")
        diffs[(o, o2)] = _rational(d, f"choice {i}")
    try:
        return ChoiceTable(obs, diffs)
    except ValueError as e:
        raise DocumentError(str(e)) from None


def parse_choices(text: str, observations: LabelSet) -> ChoiceTable:
    """A choice file: {"choices": [[o, o', "p/q"], ...]} with d = σ⁻¹(P(o ≻ o'))."""
    doc = _load(text)
    return _choices(doc.get("choices"), observations)


def serialize_choices(P: ChoiceTable) -> list[list[str]]:
    return [[o, o2, format_rational(d)] for o, o2, d in P.pairs()]


def parse_mdp(text: str) -> Mdp:
    doc = _load(text)
    states = _labels(doc, "states")
    actions = _labels(doc, "actions")
    horizon = doc.get("horizon")
    if not isinstance(horizon, int) or isinstance(horizon, bool):
        raise DocumentError("'horizon' must be an integer")
    raw = doc.get("transitions")
    if not isinstance(raw, dict):
        raise DocumentError("'transitions' must map \"s,a\" to a probability row")
    transition = {}
    for key, row in raw.items():
        parts = key.split(",")
        if len(parts) != 2:
            raise DocumentError(f"transition key {key!r} must be \"state,action\"")
        if not isinstance(row, list):
            raise DocumentError(f"transition {key!r} must be a list")
        transition[tuple(parts)] = [_rational(x, f"transition {key!r}") for x in row]
    initial = doc.get("initial")
    if not isinstance(initial, list):
        raise DocumentError("'initial' must be a list")
    try:
        return Mdp(states, actions, transition,
                   [_rational(x, "initial") for x in initial], horizon)
    except MdpError as e:
        raise DocumentError(str(e)) from None


def serialize_mdp(m: Mdp) -> str:
    out = {
        "states": list(m.states),
        "actions": list(m.actions),
        "transitions": {f"{s},{a}": vector_json(m.transition[(s, a)])
                        for s in m.states for a in m.actions},
        "initial": vector_json(m.initial),
        "horizon": m.horizon,
    }
    return dump_json(out)
