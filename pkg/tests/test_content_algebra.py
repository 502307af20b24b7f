import logging

import numpy as np
import pytest

from gepstein import formula
from gepstein import content_algebra
from gepstein import exceptions


def test_enumerate_semilattices():
    counts = [sum(1 for B in content_algebra.enumerate_semilattices(n, min_size=n)) for n in range(1, 6)]
    logging.debug(f"Semilattices up to isomorphism: {counts}")
    assert(counts == [1, 1, 2, 5, 15])
    for B in content_algebra.enumerate_semilattices(4):
        assert(B.validate().ok)

    # Labelled semilattices on 3 elements: 3! chains and 3 forks.
    assert(sum(1 for B in content_algebra.enumerate_semilattices(3, dedup_iso=False, min_size=3)) == 9)

    with pytest.raises(exceptions.BoundsError):
        list(content_algebra.enumerate_semilattices(6))


def test_chain():
    B = content_algebra.chain(3)
    assert(B.leq(0, 2) and not B.leq(2, 1))
    assert(B.join[1, 2] == 2)
    assert(not B.has_gru)
    G = B.with_gru(content_algebra.constant_gru(3, 2))
    assert(G.has_gru and G.gru[0, 0] == 2)
    assert(not G.without_gru().has_gru)


def test_from_tables():
    B = content_algebra.ContentAlgebra.from_tables([[0, 1], [1, 1]], [[1, 0], [0, 1]])
    assert(B.has_gru)
    with pytest.raises(exceptions.AlgebraError) as e:
        content_algebra.ContentAlgebra.from_tables([[0, 0], [1, 1]])
    assert(e.value.report.equation.startswith("join commutativity"))
    with pytest.raises(exceptions.AlgebraError):
        content_algebra.ContentAlgebra.from_tables([[0, 1], [1, 3]])


def test_eval_content():
    B = content_algebra.chain(3, content_algebra.constant_gru(3, 2))
    s = {"p": 0, "q": 1}
    t = formula.translate(formula.parse("p -> ~q"), "agnostic")
    assert(content_algebra.eval_content(B, s, t) == 2)
    t = formula.translate(formula.parse("p \\/ q"), "agnostic")
    assert(content_algebra.eval_content(B, s, t) == 1)
    with pytest.raises(exceptions.AssignmentError):
        content_algebra.eval_content(B, s, formula.TAtom("r"))
    with pytest.raises(exceptions.AlgebraError):
        content_algebra.eval_content(B.without_gru(), s, formula.Gru(formula.TAtom("p"), formula.TAtom("q")))


def test_union_assignment():
    B, s = content_algebra.union_assignment(["c", "a", "b"], {"p": ["a"], "q": ["b", "c"], "r": []})
    assert(B.size == 8)
    assert(B.labels == ("a", "b", "c"))
    assert(s == {"p": 1, "q": 6, "r": 0})
    assert(B.as_set(B.join[s["p"], s["q"]]) == ["a", "b", "c"])
    assert(B.leq(s["r"], s["p"]))
    with pytest.raises(exceptions.AssignmentError):
        content_algebra.union_assignment(["a"], {"p": ["z"]})


def test_generated_subsemilattice():
    B = content_algebra.powerset_semilattice(["a", "b", "c"])
    C, renum = content_algebra.generated_subsemilattice(B, [1, 2])
    assert(C.size == 3)
    assert(renum == {1: 0, 2: 1, 3: 2})
    assert(C.join[0, 1] == 2)
    assert(content_algebra.is_homomorphism(sorted(renum), C, B))


def test_homomorphisms_and_isomorphisms():
    B = content_algebra.chain(2)
    assert(content_algebra.is_homomorphism([0, 1], B, B))
    assert(content_algebra.is_homomorphism([0, 0], B, B))
    assert(not content_algebra.is_homomorphism([1, 0], B, B))
    assert(not content_algebra.is_homomorphism([0], B, B))

    C = content_algebra.chain(3)
    P = content_algebra.ContentAlgebra(content_algebra.permute(C.join, [2, 0, 1]))
    assert(P.validate().ok)
    assert(not np.array_equal(P.join, C.join))
    assert(content_algebra.canonical_form(P) == content_algebra.canonical_form(C))
    fork = content_algebra.powerset_semilattice(["a", "b"])
    assert(content_algebra.canonical_form(fork) != content_algebra.canonical_form(content_algebra.chain(4)))


if __name__ == "__main__":
    test_enumerate_semilattices()
    test_chain()
    test_from_tables()
    test_eval_content()
    test_union_assignment()
    test_generated_subsemilattice()
    test_homomorphisms_and_isomorphisms()
