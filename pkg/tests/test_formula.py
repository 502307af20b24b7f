import logging

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gepstein import base
from gepstein import formula
from gepstein import exceptions
from gepstein.formula import Atom, Neg, Box, Or, Arrow

p, q, r = Atom("p"), Atom("q"), Atom("r")

atoms = st.sampled_from(["p", "q", "r"]).map(Atom)

def _extend(children):
    return st.one_of(
        children.map(Neg),
        children.map(Box),
        st.tuples(children, children).map(lambda t: Or(*t)),
        st.tuples(children, children).map(lambda t: Arrow(*t)),
    )

formulas = st.recursive(atoms, _extend, max_leaves=12)


def test_precedence():
    assert(formula.parse("~p \\/ q -> r") == Arrow(Or(Neg(p), q), r))
    assert(formula.parse("p -> q -> r") == Arrow(p, Arrow(q, r)))
    assert(formula.parse("p \\/ q \\/ r") == Or(p, Or(q, r)))
    assert(formula.parse("p /\\ q \\/ r") == Or(formula.conj(p, q), r))
    assert(formula.parse("[]p -> q") == Arrow(Box(p), q))
    assert(formula.parse("p => q -> r") == formula.implies(p, Arrow(q, r)))
    assert(formula.parse("p <-> q -> r") == formula.iff(p, Arrow(q, r)))


def test_derived_connectives():
    assert(formula.parse("p /\\ q") == Neg(Or(Neg(p), Neg(q))))
    assert(formula.parse("p => q") == Or(Neg(p), q))
    assert(formula.parse("tau p") == Or(p, Neg(p)))
    assert(formula.parse("taut") == Atom("taut"))


def test_unicode():
    assert(formula.parse("¬p ∨ □q") == formula.parse("~p \\/ []q"))
    assert(formula.parse("p ∧ q ⊃ τr") == formula.parse("p /\\ q => tau r"))
    assert(formula.parse("(p → q) ≡ (p ≺ q)") == formula.parse("(p -> q) <-> (p < q)"))


def test_precedes_expansion():
    assert(formula.parse("p < q") == Arrow(q, formula.tau(p)))
    assert(formula.parse("p < q", precedence=base.Precedence.antecedent) == Arrow(p, formula.tau(q)))
    assert(formula.parse("p < q", precedence=base.Precedence.equality) == Arrow(Or(p, q), formula.tau(q)))


def test_syntax_error():
    with pytest.raises(exceptions.FormulaSyntaxError) as e:
        formula.parse("p q")
    logging.debug(str(e.value))
    assert(e.value.line == 1)
    assert(e.value.column == 3)
    assert(e.value.text == "p q")

    with pytest.raises(exceptions.FormulaSyntaxError):
        formula.parse("p \\/")
    with pytest.raises(exceptions.ParsingError):
        formula.parse("(p -> q")


def test_atom_names():
    # Every atom prints to a text that parses back to it.
    for name in ["p", "taux", "tau_1", "p0"]:
        assert(formula.parse(formula.to_text(Atom(name))) == Atom(name))
    assert(formula.parse("tau taux") == formula.tau(Atom("taux")))
    for name in ["tau", "P", "", "p q", "1p"]:
        with pytest.raises(exceptions.FormulaSyntaxError):
            Atom(name)


def test_demodalized():
    assert(formula.parse("p -> ~q", base.LanguageMode.demodalized) == Arrow(p, Neg(q)))
    with pytest.raises(exceptions.LanguageModeError):
        formula.parse("[]p", base.LanguageMode.demodalized)
    with pytest.raises(exceptions.LanguageModeError):
        formula.check_language(Box(p), base.LanguageMode.demodalized)
    formula.check_language(Box(p), base.LanguageMode.modal)


def test_translate():
    phi = formula.parse("p -> ~[]q")
    assert(formula.translate(phi, base.TranslationMode.agnostic) == formula.Gru(formula.TAtom("p"), formula.TAtom("q")))
    assert(formula.translate(phi, base.TranslationMode.fused) == formula.Join(formula.TAtom("p"), formula.TAtom("q")))
    assert(formula.term_to_text(formula.translate(formula.parse("(p -> q) \\/ r"), "agnostic")) == "((p * q) + r)")


def test_syntactic_measures():
    phi = formula.parse("(p -> q) \\/ ~p")
    assert(formula.variables(phi) == {"p", "q"})
    assert(formula.depth(phi) == 2)
    subs = formula.subformulae(phi)
    assert(len(subs) == 5)
    # Children come first.
    for i, f in enumerate(subs):
        if isinstance(f, (Or, Arrow)):
            assert(subs.index(f.left) < i and subs.index(f.right) < i)
    assert(subs[-1] == phi)


def test_substitute_match():
    schema = formula.parse("A => (B => A)")
    assert(formula.metavariables(schema) == {"A", "B"})
    inst = formula.substitute(schema, {"A": Box(p), "B": Arrow(q, r)})
    assert(inst == formula.parse("[]p => ((q -> r) => []p)"))
    assert(formula.match(schema, inst) == {"A": Box(p), "B": Arrow(q, r)})
    assert(formula.match(schema, formula.parse("p => (q => r)")) is None)
    assert(formula.match(schema, inst, {"A": p}) is None)
    with pytest.raises(exceptions.SubstitutionError):
        formula.substitute(schema, {"A": p})


def test_enumerate_formulae():
    modal = list(formula.formulae(["p"], 1))
    assert(len(modal) == 5)
    assert(modal[0] == p)
    demodalized = list(formula.formulae(["p"], 1, base.LanguageMode.demodalized))
    assert(len(demodalized) == 4)
    assert(not any(formula.has_box(f) for f in formula.formulae(["p", "q"], 2, "demodalized")))
    assert(len(set(formula.formulae(["p", "q"], 2))) == len(list(formula.formulae(["p", "q"], 2))))


@given(formulas, st.booleans())
def test_print_parse(phi, unicode):
    assert(formula.parse(formula.to_text(phi, unicode)) == phi)


@given(formulas)
def test_translation_keeps_atoms(phi):
    for mode in base.TranslationMode:
        assert(formula.term_atoms(formula.translate(phi, mode)) == formula.variables(phi))


@settings(max_examples=50)
@given(formulas, formulas)
def test_substitute_then_match(a, b):
    schema = formula.parse("A -> (B \\/ A)")
    inst = formula.substitute(schema, {"A": a, "B": b})
    assert(formula.depth(inst) == 2 + max(formula.depth(a), formula.depth(b)))
    assert(formula.match(schema, inst) == {"A": a, "B": b})
    assert(formula.variables(inst) == formula.variables(a) | formula.variables(b))


if __name__ == "__main__":
    test_precedence()
    test_derived_connectives()
    test_unicode()
    test_precedes_expansion()
    test_syntax_error()
    test_atom_names()
    test_demodalized()
    test_translate()
    test_syntactic_measures()
    test_substitute_match()
    test_enumerate_formulae()
    test_print_parse()
    test_translation_keeps_atoms()
    test_substitute_then_match()
