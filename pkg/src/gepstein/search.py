"""Bounded exhaustive search over generalized Epstein models.

The models are enumerated in a fixed order:
truth algebras (by number of worlds, then by reach matrix),
content algebras (by size, then by table),
content assignments, ⊙ tables, then truth valuations,
all assignments being in lexicographic order.

Validity checking works on blocks of models sharing everything but the truth valuation,
whose rows are evaluated at once with numpy.
"""

import logging
import itertools
import functools
from dataclasses import dataclass, field
from typing import Optional
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import formula
from . import truth_algebra
from . import content_algebra
from . import ge_model
from . import exceptions

# Hard caps.
WORLD_CAP = 4
TOPIC_CAP = 5
AGNOSTIC_TOPIC_CAP = 3


@dataclass(frozen=True)
class SearchBounds:
    """Limits of the search.

    Attributes:
        max_worlds: largest frame (or Boolean algebra of 2^n elements).
        max_topics: largest content algebra; agnostic logics are capped at AGNOSTIC_TOPIC_CAP.
        max_atoms: largest number of atoms in a query, None for no limit.
        dedup_iso: enumerate frames and content algebras up to isomorphism.
        shard: (index, count), restricting the search to one part of the enumeration.
        budget: largest number of models a search may enumerate.
    """
    max_worlds: int = 3
    max_topics: int = 4
    max_atoms: Optional[int] = None
    dedup_iso: bool = True
    shard: Optional[tuple] = None
    budget: int = 20_000_000

    def __post_init__(self):
        if self.max_worlds < 1 or self.max_topics < 1 or self.budget < 1:
            raise exceptions.BoundsError(f"Search bounds must be positive: {self}.")
        if self.max_atoms is not None and self.max_atoms < 1:
            raise exceptions.BoundsError(f"Search bounds must be positive: {self}.")
        if self.max_worlds > WORLD_CAP:
            raise exceptions.BoundsError(f"At most {WORLD_CAP} worlds can be searched, not {self.max_worlds}.")
        if self.max_topics > TOPIC_CAP:
            raise exceptions.BoundsError(f"At most {TOPIC_CAP} topics can be searched, not {self.max_topics}.")
        if self.shard is not None:
            i, k = self.shard
            if not (k >= 1 and 0 <= i < k):
                raise exceptions.BoundsError(f"Invalid shard {i}/{k}.")

    def topics_for(self, variant) -> int:
        """Largest content algebra searched for the given logic."""
        variant = ge_model.LogicVariant(variant)
        if variant.agnostic and self.max_topics > AGNOSTIC_TOPIC_CAP:
            return AGNOSTIC_TOPIC_CAP
        return self.max_topics


def parse_shard(text: str) -> tuple:
    """Read a shard given as `i/k`."""
    try:
        i, k = (int(x) for x in text.split("/"))
    except ValueError:
        raise exceptions.BoundsError(f"A shard is written `i/k`, not `{text}`.")
    return i, k


##########################################################################
# Frames and algebras.
##########################################################################

@functools.lru_cache(maxsize=None)
def _preorder_keys(n: int, dedup_iso: bool) -> tuple:
    off = [(i, j) for i in range(n) for j in range(n) if i != j]
    keys = []
    for bits in itertools.product((0, 1), repeat=len(off)):
        R = np.eye(n, dtype=bool)
        for (i, j), b in zip(off, bits):
            R[i,j] = b
        if not ((R.astype(int) @ R.astype(int) > 0) <= R).all():
            continue
        key = tuple(int(b) for b in R.flatten())
        if dedup_iso:
            perms = [key if p == tuple(range(n)) else tuple(int(b) for b in R[np.ix_(p, p)].flatten())
                     for p in itertools.permutations(range(n))]
            if key != min(perms):
                continue
        keys.append(key)
    return tuple(sorted(keys))


def enumerate_preorders(n: int, dedup_iso: bool = True):
    """Yield every reflexive and transitive relation on n worlds, in lexicographic order of the reach matrix.

    With dedup_iso, yield only the smallest matrix of each isomorphism class.

    Raises:
        BoundsError: above WORLD_CAP worlds.
    """
    if not 1 <= n <= WORLD_CAP:
        raise exceptions.BoundsError(f"Preorders are enumerated on 1 to {WORLD_CAP} worlds, not {n}.")
    for key in _preorder_keys(n, dedup_iso):
        yield truth_algebra.PreorderFrame(np.array(key, dtype=bool).reshape(n, n))


def truth_algebras(variant, bounds: SearchBounds):
    """Truth algebras searched for the logic: complex algebras of frames,
    Boolean powersets for demodalized logics, identity □ for DAIbox."""
    variant = ge_model.LogicVariant(variant)
    for n in range(1, bounds.max_worlds+1):
        if not variant.modal:
            yield truth_algebra.boolean_algebra(n)
        elif variant.identity_box:
            yield truth_algebra.discrete_algebra(n)
        else:
            for frame in enumerate_preorders(n, bounds.dedup_iso):
                yield truth_algebra.complex_algebra(frame)


def content_algebras(variant, bounds: SearchBounds):
    return content_algebra.enumerate_semilattices(bounds.topics_for(variant), bounds.dedup_iso)


def _gru_choices(n: int, circuit) -> int:
    """Upper bound of the number of partial ⊙ tables branched on by a query."""
    if circuit is None:
        return n**(n*n)
    relevant_arrows = sum(1 for i in circuit.arrows if circuit.relevant[i])
    return n**min(relevant_arrows, n*n)


def count_models(variant, atoms, bounds: SearchBounds, formulas = None) -> int:
    """Number of models (or an upper bound, for agnostic logics with a query) the search would enumerate."""
    variant = ge_model.LogicVariant(variant)
    k = len(atoms)
    circuit = ge_model.Circuit(formulas, variant) if formulas else None
    truths = sum(A.size**k for A in truth_algebras(variant, bounds))
    contents = 0
    for B in content_algebras(variant, bounds):
        contents += B.size**k * (_gru_choices(B.size, circuit) if variant.agnostic else 1)
    return truths * contents


def _full_gru(n, partial):
    table = np.zeros((n, n), dtype=np.int64)
    for (x, y), v in partial.items():
        table[x,y] = v
    return table


##########################################################################
# Model stream.
##########################################################################

def enumerate_models(variant, atoms, bounds: Optional[SearchBounds] = None, formulas = None):
    """Yield every model within bounds over the given atoms.

    For agnostic logics, every ⊙ table is enumerated,
    unless formulas are given: then only the entries reached by their arrows are branched on,
    the other entries being 0.
    With bounds.shard = (i, k), only the models of index ≡ i mod k are yielded.

    Raises:
        SearchBudgetError: if more than bounds.budget models would be enumerated.
    """
    variant = ge_model.LogicVariant(variant)
    bounds = bounds or SearchBounds()
    atoms = sorted(atoms)
    count = count_models(variant, atoms, bounds, formulas)
    if count > bounds.budget:
        raise exceptions.SearchBudgetError(f"The search would enumerate {count} models, above the budget of {bounds.budget}.", count)
    shard_i, shard_k = bounds.shard or (0, 1)
    circuit = ge_model.Circuit(formulas, variant) if formulas else None

    index = 0
    for A in truth_algebras(variant, bounds):
        rows = list(itertools.product(range(A.size), repeat=len(atoms)))
        for B in content_algebras(variant, bounds):
            for s_values in itertools.product(range(B.size), repeat=len(atoms)):
                s = dict(zip(atoms, s_values))
                if not variant.agnostic:
                    grus = [B]
                elif circuit is None:
                    grus = (B.with_gru(g) for g in content_algebra.gru_tables(B.size))
                else:
                    grus = (B.with_gru(_full_gru(B.size, partial)) for _, partial in circuit.contents(B, s))
                for Bg in grus:
                    for row in rows:
                        if index % shard_k == shard_i:
                            yield ge_model.GEModel(A, Bg, variant, dict(zip(atoms, row)), s)
                        index += 1


##########################################################################
# Validity checking.
##########################################################################

@dataclass
class Block:
    """Models sharing their algebras, content assignment and ⊙ restriction."""
    number: int
    offset: int
    truth: truth_algebra.TruthAlgebra
    content: content_algebra.ContentAlgebra
    atom_content: dict
    contents: list
    partial_gru: dict
    rows: int


def blocks(variant, circuit, bounds: SearchBounds):
    """Yield the blocks of the model stream of a query, in enumeration order."""
    atoms = circuit.atoms
    number = 0
    offset = 0
    for A in truth_algebras(variant, bounds):
        rows = A.size**len(atoms)
        logging.debug(f"\tTruth algebra of {A.size} elements {A.frame!r}")
        for B in content_algebras(variant, bounds):
            for s_values in itertools.product(range(B.size), repeat=len(atoms)):
                s = dict(zip(atoms, s_values))
                for contents, partial in circuit.contents(B, s):
                    yield Block(number, offset, A, B, s, contents, partial, rows)
                    number += 1
                    offset += rows


@dataclass
class Verdict:
    """Result of a bounded search.

    Attributes:
        valid: no countermodel within bounds.
        examined: number of models evaluated.
        countermodel: the first countermodel in enumeration order.
        index: its index in the model stream.
        witness: for the logic of order, the lower bound of the premises not below the goal.
    """
    variant: ge_model.LogicVariant
    premises: list
    goal: formula.Formula
    bounds: SearchBounds
    examined: int = 0
    countermodel: Optional[ge_model.GEModel] = None
    index: Optional[int] = None
    witness: Optional[int] = None

    @property
    def valid(self):
        return self.countermodel is None


@functools.lru_cache(maxsize=64)
def _valuations(m: int, k: int):
    rows = np.array(list(itertools.product(range(m), repeat=k)), dtype=np.int64).reshape(-1, k)
    rows.setflags(write=False)
    return rows


def _search_shard(variant, circuit, bounds, worker = (0, 1)):
    """First failure (index, model, witness) among the blocks of a worker, and the number of models examined.

    A worker (w, jobs) takes the blocks of number ≡ w mod jobs,
    and within them the models of the shard of the bounds.
    """
    w, jobs = worker
    shard_i, shard_k = bounds.shard or (0, 1)
    order = variant.consequence_mode == ge_model.ConsequenceMode.order
    *premises, goal = circuit.roots
    atoms = circuit.atoms
    examined = 0
    for block in blocks(variant, circuit, bounds):
        if block.number % jobs != w:
            continue
        A, B = block.truth, block.content
        V = _valuations(A.size, len(atoms))
        values = {a: V[:,j] for j,a in enumerate(atoms)}
        gates = circuit.gates(B, block.contents)
        out = circuit.truths(A, values, gates)
        target = out[goal]
        if order:
            bound = np.full(len(V), A.one, dtype=np.int64)
            for p in premises:
                bound = A.meet[bound, out[p]]
            fail = A.join[bound, target] != target
        else:
            held = np.ones(len(V), dtype=bool)
            for p in premises:
                held &= out[p] == A.one
            fail = held & (target != A.one)
        if shard_k > 1:
            keep = (block.offset + np.arange(len(V))) % shard_k == shard_i
            fail &= keep
            examined += int(keep.sum())
        else:
            examined += len(V)
        if fail.any():
            r = int(np.argmax(fail))
            Bg = B.with_gru(_full_gru(B.size, block.partial_gru)) if variant.agnostic else B
            model = ge_model.GEModel(A, Bg, variant, {a: int(V[r,j]) for j,a in enumerate(atoms)}, block.atom_content)
            witness = int(bound[r]) if order else None
            logging.debug(f"\tCountermodel at index {block.offset + r}: {model!r}")
            return (block.offset + r, model, witness), examined
    return None, examined


def check_validity(variant, premises, goal, bounds: Optional[SearchBounds] = None, jobs: int = 0) -> Verdict:
    """Search the first model where premises ⊨ goal fails, for the consequence relation of the logic.

    Args:
        variant: the logic.
        premises: list of formulae.
        goal: formula.
        bounds: search bounds (defaults: 3 worlds, 4 topics).
        jobs: number of parallel workers, 0 or 1 for a sequential search.
            The reported countermodel does not depend on it.

    With bounds.shard = (i, k), only the models of index ≡ i mod k are examined,
    the same models enumerate_models yields for these bounds.

    Raises:
        LanguageModeError: if a formula uses □ in a demodalized logic.
        BoundsError, SearchBudgetError: if the bounds are invalid or too large.
    """
    variant = ge_model.LogicVariant(variant)
    bounds = bounds or SearchBounds()
    premises = list(premises)
    formulas = premises + [goal]
    for f in formulas:
        formula.check_language(f, variant.language_mode)
    circuit = ge_model.Circuit(formulas, variant)
    if bounds.max_atoms is not None and len(circuit.atoms) > bounds.max_atoms:
        raise exceptions.BoundsError(f"The query has {len(circuit.atoms)} atoms, above the bound of {bounds.max_atoms}.")
    count = count_models(variant, circuit.atoms, bounds, formulas)
    if count > bounds.budget:
        raise exceptions.SearchBudgetError(f"The search would enumerate up to {count} models, above the budget of {bounds.budget}.", count)

    if bounds.topics_for(variant) < bounds.max_topics:
        logging.warning(f"The ⊙ tables of {variant.value} are searched up to {AGNOSTIC_TOPIC_CAP} topics only (asked: {bounds.max_topics}).")
    logging.info(f"Checking {variant.value}: {', '.join(formula.to_text(p) for p in premises)} ⊨ {formula.to_text(goal)}")
    logging.info(f"\tup to {bounds.max_worlds} worlds, {bounds.topics_for(variant)} topics, {len(circuit.atoms)} atoms: at most {count} models")

    jobs = max(1, int(jobs))
    workers = [(w, jobs) for w in range(jobs)]
    if jobs > 1:
        logging.info(f"\tsearching with {jobs} workers")
        with ThreadPoolExecutor(max_workers=jobs) as executor:
            results = list(executor.map(lambda worker: _search_shard(variant, circuit, bounds, worker), workers))
    else:
        results = [_search_shard(variant, circuit, bounds)]

    verdict = Verdict(variant, premises, goal, bounds, examined = sum(n for _, n in results))
    found = [hit for hit, _ in results if hit is not None]
    if found:
        index, model, witness = min(found, key=lambda hit: hit[0])
        verdict.countermodel = model
        verdict.index = index
        verdict.witness = witness
        logging.info(f"\tcountermodel found at index {index}")
    else:
        logging.info(f"\tvalid up to bounds ({verdict.examined} models)")
    return verdict
