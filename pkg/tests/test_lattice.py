import dataclasses
import random

import pytest

from beliefmodels.lattice import (
    ARROWS,
    MODEL_NAMES,
    RELATIONS,
    LatticeError,
    abstraction_matrices,
    build_lattice,
    random_instance,
    run_lattice,
)
from beliefmodels.linalg import LabelSet, Mat


def test_seed_zero_lattice_holds():
    rep = run_lattice(0)
    assert set(rep.models) == set(MODEL_NAMES) and len(MODEL_NAMES) == 16
    assert len(rep.relations) == len(RELATIONS)
    assert len(rep.arrows) == len(ARROWS)
    assert rep.commutes
    assert rep.composites_commute
    assert all(ok for *_, ok in rep.relations)
    assert all(ok for _, ok in rep.formulas)
    assert rep.all_hold


def test_instances_are_deterministic():
    a, b = random_instance(4), random_instance(4)
    assert a.bp == b.bp and a.bp1 == b.bp1 and a.abstraction == b.abstraction


def test_several_seeds():
    for seed in range(1, 15):
        assert run_lattice(seed).all_hold, seed


def test_bottom_left_matches_when_beliefs_agree():
    inst = random_instance(2)
    mats = abstraction_matrices(inst.mdp, inst.abstraction, inst.abstractions, inst.gamma)
    bp3 = inst.bp @ mats["Gamma"] @ mats["h*"]
    rep = build_lattice(dataclasses.replace(inst, bp3=bp3))
    assert rep.ambiguities["M'''^F_F"] == rep.ambiguities["M^F_F"]


def test_identity_abstraction_collapses_columns():
    inst = random_instance(5)
    sas = inst.mdp.transition_labels()
    F = LabelSet(x.replace(",", "_") for x in sas)
    abstraction = {x: f for x, f in zip(sas, F)}
    rng = random.Random(1)
    rows = []
    for _ in inst.bp3.rows:
        r = [rng.randint(-1, 1) for _ in F]
        r[-1] += 1 - sum(r)
        rows.append(r)
    seqs = abstraction_matrices(inst.mdp, abstraction, F, inst.gamma)["Gamma_F"].rows
    bp2 = Mat(inst.bp2.rows, seqs, [[int(j == 0) for j in range(len(seqs))]] * len(inst.bp2.rows))
    rep = build_lattice(dataclasses.replace(
        inst, abstraction=abstraction, abstractions=F, bp2=bp2,
        bp3=Mat(inst.bp3.rows, F, rows)))
    assert rep.all_hold
    m_ff, m_sas = rep.models["M^F_F"], rep.models["M^SAS_SAS"]
    assert m_ff.ontology.data == m_sas.ontology.data
    assert m_ff.belief.data == m_sas.belief.data
    assert rep.ambiguities["M^F_F"] == rep.ambiguities["M^SAS_SAS"] == rep.ambiguities["M^SAS_F"]


def test_non_row_constant_belief_rejected():
    inst = random_instance(3)
    bad = inst.bp1.data[0][:-1] + (inst.bp1.data[0][-1] + 1,)
    bp1 = Mat(inst.bp1.rows, inst.bp1.cols, (bad,) + inst.bp1.data[1:])
    if len(bp1.rows) == 1:
        pytest.skip("single observation")
    with pytest.raises(LatticeError):
        build_lattice(dataclasses.replace(inst, bp1=bp1))
