"""Seeded checks of the model-level equivalences; each returns failure messages.

Every equivalence is checked along two routes: the library's verdict and an
independent rank computation (or a direct construction).
"""
from __future__ import annotations

import random

from beliefmodels.covering import covers, find_morphism, verify_morphism
from beliefmodels.linalg import Subspace, factor_right, is_contained
from beliefmodels.models import ambiguity, completeness, faithfulness, infer_return, restricted

from oracles import elim_rank, rand_cover_pair, rand_model, relabeled_like


def _stack(*mats):
    return [list(r) for m in mats for r in m.data]


def check_completeness(rng: random.Random, full_valid: bool) -> list[str]:
    M = rand_model(rng, full_valid=full_valid)
    bad = []
    complete, Z = completeness(M)
    amb_zero = ambiguity(M).is_zero()
    lamK, belK = restricted(M.ontology, M.valid), restricted(M.belief, M.valid)
    witness = factor_right(M.ontology, M.belief) if full_valid else factor_right(lamK, belK)
    # ker BK ⊆ ker ΛK iff stacking ΛK under BK adds no rank
    oracle = (M.valid.dim == 0
              or elim_rank(_stack(belK, lamK)) == elim_rank(_stack(belK)))
    if not (complete == amb_zero == (witness is not None) == oracle):
        bad.append(f"completeness: flag={complete} amb0={amb_zero} "
                   f"witness={witness is not None} oracle={oracle}")
    if Z is not None and Z @ belK != lamK:
        bad.append("completeness witness fails Z·B = Λ on V")
    return bad


def check_faithfulness(rng: random.Random) -> list[str]:
    M = rand_model(rng)
    faithful, Y = faithfulness(M)
    lamK, belK = restricted(M.ontology, M.valid), restricted(M.belief, M.valid)
    reverse = factor_right(belK, lamK)
    oracle = M.valid.dim == 0 or elim_rank(_stack(lamK, belK)) == elim_rank(_stack(lamK))
    bad = []
    if not (faithful == (reverse is not None) == oracle):
        bad.append(f"faithfulness: flag={faithful} reverse={reverse is not None} oracle={oracle}")
    if Y is not None and Y @ lamK != belK:
        bad.append("faithfulness witness fails Y·Λ = B on V")
    return bad


def _covering_oracle(M, M_hat) -> bool:
    """im [Λ;B]K ⊆ im [Λ̂;B̂]K̂ by column-rank comparison."""
    a = [list(c) for c in zip(*_stack(restricted(M.ontology, M.valid),
                                      restricted(M.belief, M.valid)))]
    b = [list(c) for c in zip(*_stack(restricted(M_hat.ontology, M_hat.valid),
                                      restricted(M_hat.belief, M_hat.valid)))]
    if not a:
        return True
    if not b:
        return all(not any(c) for c in a)
    return elim_rank(b + a) == elim_rank(b)


def check_covering(rng: random.Random) -> list[str]:
    bad = []
    M, M_hat, phi = rand_cover_pair(rng)
    other = relabeled_like(rng, M)
    for hat, built in ((M_hat, True), (other, False)):
        c = covers(hat, M)
        mor = find_morphism(M, hat)
        oracle = _covering_oracle(M, hat)
        if not (c == (mor is not None) == oracle):
            bad.append(f"covering: covers={c} morphism={mor is not None} oracle={oracle}")
        if mor is not None and not verify_morphism(mor.phi, M, hat):
            bad.append("found morphism fails verification")
        if built and not (verify_morphism(phi, M, hat) and c):
            bad.append("constructed morphism not recognized")
        if c and not is_contained(ambiguity(M), ambiguity(hat)):
            bad.append("covering without ambiguity containment")
        if c and ambiguity(hat).is_zero():
            for v in M.valid.vectors:
                res = infer_return(hat, M.belief.apply(v))
                if not res.complete or res.feedback_compatible.point != M.ontology.apply(v):
                    bad.append("complete covering model inferred the wrong return")
                    break
    return bad


def check_surjective_morphism(rng: random.Random) -> list[str]:
    M, M_hat, phi = rand_cover_pair(rng, widen_valid=False)
    image = Subspace(M_hat.features, [phi.apply(v) for v in M.valid.vectors])
    assert image == M_hat.valid
    if not verify_morphism(phi, M, M_hat):
        return ["pullback morphism fails verification"]
    if ambiguity(M) != ambiguity(M_hat):
        return ["Φ(V) = V̂ but ambiguities differ"]
    return []


def check_seed(seed: int) -> list[str]:
    rng = random.Random(seed)
    failures = []
    failures += check_completeness(rng, full_valid=True)
    failures += check_completeness(rng, full_valid=False)
    failures += check_faithfulness(rng)
    failures += check_covering(rng)
    failures += check_surjective_morphism(rng)
    return [f"seed {seed}: {f}" for f in failures]
