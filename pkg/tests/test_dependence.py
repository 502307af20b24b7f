import logging

import yaml

from gepstein import formula
from gepstein import ge_model
from gepstein.ge_model import LogicVariant


def support(sets, phi):
    return set().union(*[set(sets[p]) for p in formula.variables(phi)])


def holds(values, sets, phi):
    """Classical truth, an arrow also asking the set of its antecedent to include the one of its consequent."""
    match phi:
        case formula.Atom(name):
            return bool(values[name])
        case formula.Neg(sub):
            return not holds(values, sets, sub)
        case formula.Or(left, right):
            return holds(values, sets, left) or holds(values, sets, right)
        case formula.Arrow(left, right):
            material = not holds(values, sets, left) or holds(values, sets, right)
            return material and support(sets, left) >= support(sets, right)
    raise TypeError(phi)


def load_fixtures():
    with open("tests/dependence/fixtures.yaml") as fd:
        return yaml.safe_load(fd)


def test_fixtures():
    fixtures = load_fixtures()
    assert(len(fixtures) == 20)
    for item in fixtures:
        M = ge_model.dependence_model(item["universe"], item["sets"], item["values"])
        for text in item["formulas"]:
            phi = LogicVariant.gD.parse(text)
            got = ge_model.evaluate(M, phi) == M.truth.one
            expected = holds(item["values"], item["sets"], phi)
            logging.debug(f"{item['name']}: {text} is {got}")
            assert(got == expected)


def test_every_shallow_formula():
    for item in load_fixtures():
        M = ge_model.dependence_model(item["universe"], item["sets"], item["values"])
        atoms = sorted(item["values"])
        for phi in formula.formulae(atoms, 1, "demodalized"):
            assert((ge_model.evaluate(M, phi) == M.truth.one) == holds(item["values"], item["sets"], phi))
            assert(set(M.content.as_set(ge_model.content(M, phi))) == support(item["sets"], phi))


if __name__ == "__main__":
    test_fixtures()
    test_every_shallow_formula()
