import logging

import pytest

from gepstein import formula
from gepstein import truth_algebra
from gepstein import content_algebra
from gepstein import ge_model
from gepstein import search
from gepstein import serialize
from gepstein import exceptions
from gepstein.ge_model import LogicVariant


def pai_model(variant = "PAI", values = None, contents = None):
    A = truth_algebra.complex_algebra(truth_algebra.PreorderFrame([[1, 1], [0, 1]]))
    B = content_algebra.chain(2)
    return ge_model.GEModel(A, B, variant, values or {"p": 1, "q": 3}, contents or {"p": 0, "q": 1})


def test_switches():
    assert(LogicVariant.PAI0.agnostic and LogicVariant.PAI0.modal and LogicVariant.PAI0.boxed)
    assert(not LogicVariant.PAI.agnostic)
    assert(LogicVariant.lPAI.consequence_mode == ge_model.ConsequenceMode.order)
    assert(LogicVariant.DAI.consequence_mode == ge_model.ConsequenceMode.assertional)
    assert(not LogicVariant.gD.modal and not LogicVariant.gD.boxed)
    assert(LogicVariant.DAI0.agnostic)
    assert(LogicVariant.gdD.precedence == "antecedent")
    assert(LogicVariant.gEq.precedence == "equality")
    assert(LogicVariant.DAIbox.identity_box)
    assert("PAI" in LogicVariant and "PA" not in LogicVariant)


def test_proscriptive():
    M = pai_model()
    # s(q) is not included in s(p).
    assert(ge_model.evaluate(M, formula.parse("p -> (q \\/ ~q)")) == M.truth.zero)
    assert(ge_model.evaluate(M, formula.parse("q -> (p \\/ ~p)")) == M.truth.one)
    assert(ge_model.evaluate(M, formula.parse("(p /\\ q) -> p")) == M.truth.one)
    assert(ge_model.evaluate(M, formula.parse("p < p")) == M.truth.one)
    assert(ge_model.evaluate(M, formula.parse("q < p")) == M.truth.zero)


def test_strict_and_material():
    # p holds at w0 only, w0 sees w1.
    M = pai_model()
    assert(ge_model.evaluate(M, formula.parse("[]p")) == 0)
    assert(ge_model.evaluate(M, formula.parse("[]q")) == 3)
    # The arrow is strict: □(¬q∨p).
    assert(ge_model.evaluate(M, formula.parse("q -> p")) == 0)
    assert(ge_model.evaluate(M, formula.parse("q => p")) == 1)

    A = truth_algebra.boolean_algebra(2)
    M = ge_model.GEModel(A, content_algebra.chain(2), "DAI", {"p": 1, "q": 3}, {"p": 0, "q": 0})
    assert(ge_model.evaluate(M, formula.parse("q -> p")) == 1)
    assert(ge_model.evaluate_all(M, [formula.parse("q -> p"), formula.parse("~p")]) == [1, 2])


def test_content_tests():
    A = truth_algebra.boolean_algebra(1)
    B = content_algebra.chain(2)
    v = {"p": 1, "q": 1}
    s = {"p": 0, "q": 1}
    arrow = formula.parse("p -> q")
    # gD: s(q) ≤ s(p); gdD: s(p) ≤ s(q); gEq: s(p) = s(q).
    assert(ge_model.evaluate(ge_model.GEModel(A, B, "gD", v, s), arrow) == 0)
    assert(ge_model.evaluate(ge_model.GEModel(A, B, "gdD", v, s), arrow) == 1)
    assert(ge_model.evaluate(ge_model.GEModel(A, B, "gEq", v, s), arrow) == 0)
    for variant in ("gD", "gdD", "gEq"):
        M = ge_model.GEModel(A, B, variant, v, s)
        p_below_q = M.variant.parse("p < q")
        q_below_p = M.variant.parse("q < p")
        assert(ge_model.evaluate(M, p_below_q) == 1)
        assert(ge_model.evaluate(M, q_below_p) == 0)


def test_model_errors():
    A = truth_algebra.boolean_algebra(1)
    B = content_algebra.chain(2)
    with pytest.raises(exceptions.VariantError):
        ge_model.GEModel(A, B, "PAI", {"p": 1}, {"p": 0})
    with pytest.raises(exceptions.VariantError):
        ge_model.GEModel(truth_algebra.discrete_algebra(1), B, "PAI0", {"p": 1}, {"p": 0})
    with pytest.raises(exceptions.VariantError):
        ge_model.GEModel(truth_algebra.complex_algebra(truth_algebra.PreorderFrame([[1, 1], [0, 1]])), B, "DAIbox", {"p": 1}, {"p": 0})
    with pytest.raises(exceptions.AssignmentError):
        ge_model.GEModel(A, B, "DAI", {"p": 2}, {"p": 0})

    M = ge_model.GEModel(A, B, "DAI", {"p": 1}, {"p": 0})
    with pytest.raises(exceptions.AssignmentError):
        ge_model.evaluate(M, formula.parse("p -> r"))
    with pytest.raises(exceptions.LanguageModeError):
        ge_model.evaluate(M, formula.Box(formula.Atom("p")))
    with pytest.raises(ValueError):
        LogicVariant("PA")


def test_consequence_modes():
    # p is true at w0 only, which sees w1: □p is empty.
    p, box_p = formula.parse("p"), formula.parse("[]p")
    local = pai_model("lPAI")
    assert(not ge_model.order_consequence(local, [p], box_p))
    assert(ge_model.assertional_consequence(local, [p], box_p))
    assert(not ge_model.consequence(local, [p], box_p))
    assert(ge_model.consequence(pai_model("PAI"), [p], box_p))
    assert(ge_model.order_consequence(local, [box_p], p))


def test_integer_line():
    M = serialize.load_model("tests/models/integer_line.json")
    box_p = formula.parse("[]p")
    arrow = formula.parse("(p \\/ ~p) -> p")
    # Equal truth values, different contents.
    assert(ge_model.evaluate(M, box_p) == ge_model.evaluate(M, arrow))
    assert(ge_model.content(M, box_p) == 0)
    assert(ge_model.content(M, arrow) == 2)

    context = ge_model.distinguishing_context(M, box_p, arrow)
    logging.debug(f"Distinguishing context: {[formula.to_text(f) for f in context]}")
    assert(context is not None)
    assert(ge_model.evaluate(M, context[0]) != ge_model.evaluate(M, context[1]))

    assert(ge_model.distinguishing_context(M, box_p, box_p) is None)


def test_interchangeable():
    box_p = formula.parse("[]p")
    arrow = formula.parse("(p \\/ ~p) -> p")
    verdict = ge_model.interchangeable("PAI0", box_p, arrow, search.SearchBounds(max_worlds=1, max_topics=2))
    assert(not verdict.valid)
    M = verdict.countermodel
    assert(ge_model.content(M, box_p) != ge_model.content(M, arrow))
    assert(ge_model.distinguishing_context(M, box_p, arrow) is not None)

    verdict = ge_model.interchangeable("PAI", box_p, arrow)
    assert(verdict.valid)


def test_dependence_model():
    M = ge_model.dependence_model(["a", "b"], {"p": ["a"], "q": ["a", "b"]}, {"p": True, "q": False})
    assert(M.variant == LogicVariant.gD)
    assert(ge_model.evaluate(M, formula.parse("q -> p")) == M.truth.one)
    assert(ge_model.evaluate(M, formula.parse("p -> q")) == M.truth.zero)
    with pytest.raises(exceptions.AssignmentError):
        ge_model.dependence_model(["a"], {"p": ["a"]}, {"p": True, "q": True})


if __name__ == "__main__":
    test_switches()
    test_proscriptive()
    test_strict_and_material()
    test_content_tests()
    test_model_errors()
    test_consequence_modes()
    test_integer_line()
    test_interchangeable()
    test_dependence_model()
