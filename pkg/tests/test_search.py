import logging

import pytest

import gepstein
from gepstein import formula
from gepstein import ge_model
from gepstein import search
from gepstein import exceptions
from gepstein.search import SearchBounds

VARIANTS = ["PAI0", "PAI", "lPAI", "DAI0", "DAI", "gD", "gdD", "gEq", "DAIbox"]


def test_preorders():
    assert([sum(1 for f in search.enumerate_preorders(n)) for n in range(1, 5)] == [1, 3, 9, 33])
    assert([sum(1 for f in search.enumerate_preorders(n, dedup_iso=False)) for n in range(1, 5)] == [1, 4, 29, 355])
    for frame in search.enumerate_preorders(3):
        assert(frame.validate().ok)
    with pytest.raises(exceptions.BoundsError):
        list(search.enumerate_preorders(5))


def test_bounds():
    with pytest.raises(exceptions.BoundsError):
        SearchBounds(max_worlds=5)
    with pytest.raises(exceptions.BoundsError):
        SearchBounds(max_topics=6)
    with pytest.raises(exceptions.BoundsError):
        SearchBounds(max_worlds=0)
    with pytest.raises(exceptions.BoundsError):
        SearchBounds(shard=(2, 2))
    with pytest.raises(exceptions.ConfigError):
        search.parse_shard("one/two")
    assert(search.parse_shard("1/3") == (1, 3))
    bounds = SearchBounds()
    assert(bounds.topics_for("PAI0") == search.AGNOSTIC_TOPIC_CAP)
    assert(bounds.topics_for("PAI") == 4)


def test_enumerate_models():
    bounds = SearchBounds(max_worlds=2, max_topics=2)
    count = search.count_models("PAI", ["p"], bounds)
    # (2 + 3 frames × 4) truth values, (1 + 2) contents.
    assert(count == 14 * 3)
    models = list(search.enumerate_models("PAI", ["p"], bounds))
    assert(len(models) == count)
    assert([repr(M) for M in models] == [repr(M) for M in search.enumerate_models("PAI", ["p"], bounds)])

    shards = [list(search.enumerate_models("PAI", ["p"], SearchBounds(max_worlds=2, max_topics=2, shard=(i, 3)))) for i in range(3)]
    assert(sum(len(s) for s in shards) == count)
    assert([repr(M) for M in shards[1]] == [repr(M) for M in models[1::3]])

    # Every ⊙ table on 2 topics.
    agnostic = list(search.enumerate_models("PAI0", ["p"], SearchBounds(max_worlds=1, max_topics=2)))
    assert(len(agnostic) == 2 * (1 + 2 * 2**4))
    assert(all(M.content.has_gru for M in agnostic))

    with pytest.raises(exceptions.SearchBudgetError) as e:
        list(search.enumerate_models("PAI", ["p", "q"], SearchBounds(budget=10)))
    assert(e.value.count > 10)


def test_validity():
    bounds = SearchBounds(max_worlds=2, max_topics=3)
    verdict = search.check_validity("PAI", [], formula.parse("(p /\\ q) -> p"), bounds)
    assert(verdict.valid)
    assert(verdict.examined > 0)
    assert(gepstein.check("PAI", [], "(p /\\ q) -> p", max_worlds=2, max_topics=2).valid)

    goal = formula.parse("(p < p) /\\ ((p \\/ q) < (q \\/ p))")
    assert(search.check_validity("PAI", [], goal, bounds).valid)


def test_proscriptive_countermodels():
    for variant in VARIANTS:
        v = ge_model.LogicVariant(variant)
        goal = v.parse("p -> (q \\/ ~q)")
        verdict = search.check_validity(v, [], goal, SearchBounds(max_worlds=1, max_topics=2))
        logging.debug(f"{variant}: {verdict.countermodel!r}")
        assert(not verdict.valid)
        M = verdict.countermodel
        assert(M.content.size <= 2)
        assert(not ge_model.consequence(M, [], goal))


def test_global_and_local():
    p, box_p = formula.parse("p"), formula.parse("[]p")
    assert(search.check_validity("PAI", [p], box_p).valid)

    verdict = search.check_validity("lPAI", [p], box_p)
    assert(not verdict.valid)
    M = verdict.countermodel
    assert(M.truth.frame.size <= 2)
    assert(verdict.witness is not None)
    assert(not M.truth.leq(verdict.witness, ge_model.evaluate(M, box_p)))
    assert(not ge_model.consequence(M, [p], box_p))


def test_jobs_and_shards():
    p, box_p = formula.parse("p"), formula.parse("[]p")
    goal = formula.parse("p -> (q \\/ ~q)")
    for variant, premises, phi in [("lPAI", [p], box_p), ("PAI0", [], goal)]:
        bounds = SearchBounds(max_worlds=2, max_topics=2)
        sequential = search.check_validity(variant, premises, phi, bounds)
        parallel = search.check_validity(variant, premises, phi, bounds, jobs=3)
        assert(sequential.index == parallel.index)
        assert(repr(sequential.countermodel) == repr(parallel.countermodel))

        found = []
        for i in range(2):
            v = search.check_validity(variant, premises, phi, SearchBounds(max_worlds=2, max_topics=2, shard=(i, 2)))
            if not v.valid:
                assert(v.index % 2 == i)
                found.append(v.index)
        assert(min(found) == sequential.index)


def test_shards_by_model_index():
    bounds = SearchBounds(max_worlds=2, max_topics=2)
    goal = formula.parse("(p /\\ q) -> p")
    whole = search.check_validity("PAI", [], goal, bounds)
    assert(whole.valid)
    parts = [search.check_validity("PAI", [], goal, SearchBounds(max_worlds=2, max_topics=2, shard=(i, 3)), jobs=2) for i in range(3)]
    assert(all(v.valid for v in parts))
    assert(sum(v.examined for v in parts) == whole.examined)

    # The countermodel of a shard is the first model of that shard which fails.
    goal = formula.parse("p -> (q \\/ ~q)")
    for i in range(3):
        v = search.check_validity("PAI", [], goal, SearchBounds(max_worlds=2, max_topics=2, shard=(i, 3)))
        models = search.enumerate_models("PAI", ["p", "q"], SearchBounds(max_worlds=2, max_topics=2, shard=(i, 3)))
        first = next(M for M in models if not ge_model.consequence(M, [], goal))
        logging.debug(f"Shard {i}/3: index {v.index}")
        assert(v.index % 3 == i)
        assert(repr(v.countermodel) == repr(first))


@pytest.mark.slow
def test_validity_at_default_bounds():
    for text in ["(p /\\ q) -> p", "p < p", "(p \\/ q) < (q \\/ p)"]:
        verdict = search.check_validity("PAI", [], formula.parse(text), SearchBounds(), jobs=4)
        logging.debug(f"{text}: {verdict.examined} models")
        assert(verdict.valid)
    verdict = search.check_validity("PAI", [], formula.parse("p -> (q \\/ ~q)"), SearchBounds())
    assert(not verdict.valid)
    assert(not ge_model.consequence(verdict.countermodel, [], formula.parse("p -> (q \\/ ~q)")))


def test_budget():
    goal = formula.parse("(p -> q) -> (r -> s)")
    with pytest.raises(exceptions.SearchBudgetError) as e:
        search.check_validity("PAI", [], goal, SearchBounds(budget=1000))
    logging.debug(f"Budget exceeded: {e.value.count}")
    assert(e.value.count > 1000)
    with pytest.raises(exceptions.BoundsError):
        search.check_validity("PAI", [], goal, SearchBounds(max_atoms=2))
    with pytest.raises(exceptions.LanguageModeError):
        search.check_validity("DAI", [], formula.parse("[]p"))


if __name__ == "__main__":
    test_preorders()
    test_bounds()
    test_enumerate_models()
    test_validity()
    test_proscriptive_countermodels()
    test_global_and_local()
    test_jobs_and_shards()
    test_shards_by_model_index()
    test_validity_at_default_bounds()
    test_budget()
