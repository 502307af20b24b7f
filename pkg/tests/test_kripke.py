import random
import logging
import itertools

import pytest

from gepstein import formula
from gepstein import ge_model
from gepstein import kripke
from gepstein import serialize
from gepstein import exceptions


def bridged(K, root, formulas, variant = None):
    """Pairs (forced at the root, root in the value of the bridged model) for each formula."""
    M = kripke.to_ge_model(K, root, variant)
    label = K.frame.worlds[K.frame.index(root)]
    memo = {}
    forced = [bool(kripke.truth_set(K, phi, memo)[K.frame.index(root)]) for phi in formulas]
    values = ge_model.evaluate_all(M, formulas)
    return list(zip(forced, [label in M.truth.as_set(v) for v in values]))


def test_stability_counterexample():
    K = serialize.load_kripke("tests/kripke/unstable.yaml")
    assert(kripke.validate_model(K).ok)
    report = kripke.content_stable(K, "r")
    logging.debug(f"Instability: {report}")
    assert(not report.ok)

    phi = formula.parse("[]~(p -> q)")
    assert(not kripke.forces(K, "r", phi))
    M = kripke.to_ge_model(K, "r")
    assert("r" in M.truth.as_set(ge_model.evaluate(M, phi)))
    # The arrow fails its content test at the root only.
    assert(not kripke.forces(K, "r", formula.parse("p -> q")))
    assert(kripke.forces(K, "b", formula.parse("p -> q")))


def test_stable_fixture():
    K = serialize.load_kripke("tests/kripke/stable.yaml")
    assert(kripke.content_stable(K, "r").ok)
    formulas = list(formula.formulae(["p", "q"], 2))
    for forced, value in bridged(K, "r", formulas, "lPAI"):
        assert(forced == value)


def test_bridge_sweep():
    formulas = list(formula.formulae(["p", "q"], 2))
    count = 0
    for K in kripke.sample_fine_models(["p", "q"], 60, max_worlds=3, max_topics=3, seed=42, stable_only=True):
        assert(kripke.validate_model(K).ok)
        for forced, value in bridged(K, 0, formulas):
            assert(forced == value)
        count += 1
    assert(count == 60)


def test_bridge_exhaustive():
    # With a single atom, every Fine model is content stable.
    formulas = list(formula.formulae(["p"], 2))
    for K in kripke.enumerate_fine_models(["p"], max_worlds=2, max_topics=2):
        assert(kripke.content_stable(K, 0).ok)
        for forced, value in bridged(K, 0, formulas):
            assert(forced == value)


def test_ferguson():
    K = serialize.load_kripke("tests/kripke/ferguson.yaml")
    assert(K.flavor == kripke.Flavor.ferguson)
    assert(kripke.content_stable(K, "a").ok)
    M = kripke.to_ge_model(K, "a")
    assert(M.variant == ge_model.LogicVariant.PAI0)
    assert(M.content.has_gru)
    formulas = list(formula.formulae(["p", "q"], 2))
    for forced, value in bridged(K, "a", formulas):
        assert(forced == value)
    with pytest.raises(exceptions.VariantError):
        kripke.to_ge_model(K, "a", "PAI")
    with pytest.raises(exceptions.KripkeModelError):
        kripke.surjectivize(K)


def test_invalid_models():
    with pytest.raises(exceptions.KripkeModelError):
        serialize.load_kripke("tests/kripke/not_persistent.yaml")
    K = serialize.load_kripke("tests/kripke/stable.yaml")
    with pytest.raises(exceptions.VariantError):
        kripke.to_ge_model(K, "r", "PAI0")
    with pytest.raises(exceptions.FrameError):
        kripke.to_ge_model(K, "nowhere")


def test_generated_submodel():
    formulas = list(formula.formulae(["p", "q"], 2))
    for K in kripke.sample_fine_models(["p", "q"], 30, seed=7):
        for root in range(K.frame.size):
            sub = kripke.generated_submodel(K, [root])
            assert(kripke.validate_model(sub).ok)
            memo, sub_memo = {}, {}
            for phi in formulas:
                whole = kripke.truth_set(K, phi, memo)
                part = kripke.truth_set(sub, phi, sub_memo)
                for w, label in enumerate(sub.frame.worlds):
                    assert(whole[K.frame.index(label)] == part[w])
    with pytest.raises(exceptions.KripkeModelError):
        kripke.generated_submodel(K, [])


def test_surjectivize():
    formulas = list(formula.formulae(["p", "q"], 2))
    for K in kripke.sample_fine_models(["p", "q"], 30, seed=11):
        S = kripke.surjectivize(K)
        assert(kripke.validate_model(S).ok)
        for w in range(K.frame.size):
            assert(S.topics[w].size <= K.topics[w].size)
        memo, s_memo = {}, {}
        for phi in formulas:
            assert((kripke.truth_set(K, phi, memo) == kripke.truth_set(S, phi, s_memo)).all())


def deep_formulae(atoms, count, seed):
    """Every formula to depth 2 and a reproducible sample of formulae of depth 3."""
    rng = random.Random(seed)
    shallow = list(formula.formulae(atoms, 2))
    deep = []
    while len(deep) < count:
        a, b = rng.choice(shallow), rng.choice(shallow)
        phi = rng.choice([formula.Neg(a), formula.Box(a), formula.Or(a, b), formula.Arrow(a, b)])
        if formula.depth(phi) == 3:
            deep.append(phi)
    return shallow + deep


@pytest.mark.slow
def test_bridge_at_scale():
    formulas = deep_formulae(["p", "q"], 200, seed=5)
    count = 0
    for K in kripke.sample_fine_models(["p", "q"], 500, max_worlds=3, max_topics=3, seed=2024, stable_only=True):
        for phi, (forced, value) in zip(formulas, bridged(K, 0, formulas)):
            if forced != value:
                logging.error(f"Bridge mismatch for {formula.to_text(phi)}")
            assert(forced == value)
        count += 1
    assert(count == 500)


@pytest.mark.slow
def test_submodels_at_scale():
    formulas = deep_formulae(["p", "q"], 200, seed=6)
    for K in kripke.sample_fine_models(["p", "q"], 500, max_worlds=3, max_topics=3, seed=2025):
        S = kripke.surjectivize(K)
        memo, s_memo = {}, {}
        for phi in formulas:
            assert((kripke.truth_set(K, phi, memo) == kripke.truth_set(S, phi, s_memo)).all())
        for root in range(K.frame.size):
            sub = kripke.generated_submodel(K, [root])
            sub_memo = {}
            for phi in formulas:
                whole = kripke.truth_set(K, phi, memo)
                part = kripke.truth_set(sub, phi, sub_memo)
                for w, label in enumerate(sub.frame.worlds):
                    assert(whole[K.frame.index(label)] == part[w])


def test_persistence_of_joins():
    # With two atoms, persistence of t(p) ≤ t(q) carries over to joins of atoms.
    atoms = ["p", "q"]
    subsets = [list(Q) for k in (1, 2) for Q in itertools.combinations(atoms, k)]
    for K in kripke.sample_fine_models(atoms, 40, seed=3):
        for w in range(K.frame.size):
            for v in K.frame.successors(w):
                v = int(v)
                for Q in subsets:
                    for p in atoms:
                        below_w = K.topics[w].order[K.topic_of[w][p], kripke._join_topics(K, w, Q)]
                        below_v = K.topics[v].order[K.topic_of[v][p], kripke._join_topics(K, v, Q)]
                        assert(below_v or not below_w)


if __name__ == "__main__":
    test_stability_counterexample()
    test_stable_fixture()
    test_bridge_sweep()
    test_bridge_exhaustive()
    test_ferguson()
    test_invalid_models()
    test_generated_submodel()
    test_surjectivize()
    test_bridge_at_scale()
    test_submodels_at_scale()
    test_persistence_of_joins()
