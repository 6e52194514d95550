import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from beliefmodels import gridworld
from beliefmodels.catalog import ALICE_FEEDBACK, build_fixture
from beliefmodels.choices import choice_probabilities
from beliefmodels.io import (
    DocumentError,
    model_to_document,
    parse_choices,
    parse_feedback,
    parse_mdp,
    parse_model,
    serialize_choices,
    serialize_mdp,
    serialize_model,
)
from beliefmodels.models import ValidSpec

from oracles import rand_model

TINY = {
    "features": ["a", "b"],
    "trajectories": ["t1", "t2"],
    "observations": ["o1"],
    "ontology": [["1/3", 0], [1, "-2"]],
    "belief": [[1, 1]],
}


def _doc(**changes):
    d = dict(TINY)
    d.update(changes)
    return json.dumps(d)


def test_rationals_parse_exactly():
    doc = parse_model(_doc())
    assert doc.model.ontology.data[0][0] == Fraction(1, 3)
    assert doc.model.valid.is_full()
    assert doc.valid_spec == ValidSpec.full()


def test_round_trip_is_stable():
    doc = model_to_document(build_fixture("ALICE4"), name="alice", feedback=ALICE_FEEDBACK)
    text = serialize_model(doc)
    again = parse_model(text)
    assert again.model.ontology == doc.model.ontology
    assert again.model.belief == doc.model.belief
    assert again.feedback == ALICE_FEEDBACK and again.name == "alice"
    assert serialize_model(again) == text


def test_constraint_valid_space_round_trip():
    M = build_fixture("ALICE3")
    spec = ValidSpec("constraints", ((0, 0, 1, 1),))
    text = serialize_model(model_to_document(M, valid_spec=spec))
    assert json.loads(text)["valid"] == {"kind": "constraints", "vectors": [["0", "0", "1", "1"]]}
    assert parse_model(text).model.valid == M.valid


def test_wrong_row_length_names_the_row():
    with pytest.raises(DocumentError, match="'t2'"):
        parse_model(_doc(ontology=[[1, 0], [1]]))
    with pytest.raises(DocumentError, match="rows"):
        parse_model(_doc(belief=[]))


@pytest.mark.parametrize("changes", [
    {"features": ["a", "a"]},
    {"ontology": [[0.5, 0], [1, 0]]},
    {"ontology": [["1/0", 0], [1, 0]]},
    {"ontology": [["one", 0], [1, 0]]},
    {"ontology": [[True, 0], [1, 0]]},
    {"valid": {"kind": "span"}},
    {"valid": {"kind": "basis", "vectors": [[1, 0, 0]]}},
    {"observations": "o1"},
])
def test_malformed_documents_rejected(changes):
    with pytest.raises(DocumentError):
        parse_model(_doc(**changes))


def test_not_json_rejected():
    with pytest.raises(DocumentError):
        parse_model("{")
    with pytest.raises(DocumentError):
        parse_model("[1, 2]")


def test_feedback_files():
    obs = build_fixture("ALICE4").observations
    by_label = {"feedback": dict(zip(obs, ["-3", 1, 0, "4"]))}
    assert parse_feedback(json.dumps(by_label), obs) == ALICE_FEEDBACK
    assert parse_feedback('{"feedback": [-3, 1, 0, 4]}', obs) == ALICE_FEEDBACK
    with pytest.raises(DocumentError, match="missing"):
        parse_feedback(json.dumps({"o1": 1}), obs)
    with pytest.raises(DocumentError):
        parse_feedback(json.dumps({"feedback": [1, 2]}), obs)


def test_choice_files():
    M = build_fixture("ALICE4")
    P = choice_probabilities(M, [-2, 2, 1, -1])
    text = json.dumps({"choices": serialize_choices(P)})
    assert parse_choices(text, M.observations) == P
    with pytest.raises(DocumentError, match="unknown observation"):
        parse_choices(json.dumps({"choices": [["o1", "zz", 1]]}), M.observations)
    with pytest.raises(DocumentError):
        parse_choices(json.dumps({"choices": [["o1", "o2"]]}), M.observations)
    with pytest.raises(DocumentError):
        parse_choices(json.dumps({"choices": [["o1", "o1", 1]]}), M.observations)


def test_mdp_round_trip():
    m = gridworld.build_gridworld()
    text = serialize_mdp(m)
    again = parse_mdp(text)
    assert again.states == m.states and again.actions == m.actions
    assert again.transition == m.transition and again.initial == m.initial
    assert again.horizon == m.horizon
    assert serialize_mdp(again) == text
    bad = json.loads(text)
    bad["horizon"] = "3"
    with pytest.raises(DocumentError):
        parse_mdp(json.dumps(bad))
    bad = json.loads(text)
    bad["initial"] = bad["initial"][1:]
    with pytest.raises(DocumentError):
        parse_mdp(json.dumps(bad))


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**9), st.booleans())
def test_random_model_round_trip(seed, full):
    M = rand_model(random.Random(seed), full_valid=full)
    text = serialize_model(model_to_document(M))
    again = parse_model(text).model
    assert again.ontology == M.ontology
    assert again.belief == M.belief
    assert again.valid == M.valid
