import logging

from . import exceptions
from . import base
from . import validate
from . import formula
from . import truth_algebra
from . import content_algebra
from . import ge_model
from . import search
from . import kripke
from . import calculus
from . import serialize

LogicVariant = ge_model.LogicVariant
GEModel = ge_model.GEModel
SearchBounds = search.SearchBounds
parse = formula.parse
evaluate = ge_model.evaluate

__all__ = ['LogicVariant', 'GEModel', 'SearchBounds', 'parse', 'evaluate', 'check', 'prove',
           'exceptions', 'base', 'validate', 'formula', 'truth_algebra', 'content_algebra',
           'ge_model', 'search', 'kripke', 'calculus', 'serialize']


def check(logic, premises, goal, max_worlds = 3, max_topics = 4, dedup_iso = True, shard = None, jobs = 0) -> search.Verdict:
    """Search a countermodel to premises ⊨ goal, formulae being given as text.

    Args:
        logic: name of the logic (e.g. "PAI").
        premises: list of formulae.
        goal: formula.
        max_worlds, max_topics, dedup_iso, shard: the search bounds.
        jobs: number of parallel workers.

    Returns:
        The search.Verdict.
    """
    variant = ge_model.LogicVariant(logic)
    premises = [variant.parse(p) if isinstance(p, str) else p for p in premises]
    goal = variant.parse(goal) if isinstance(goal, str) else goal
    if isinstance(shard, str):
        shard = search.parse_shard(shard)
    bounds = search.SearchBounds(max_worlds = max_worlds, max_topics = max_topics, dedup_iso = dedup_iso, shard = shard)
    return search.check_validity(variant, premises, goal, bounds, jobs)


def prove(calc, source) -> calculus.ProofCheck:
    """Check the proof read from a file (or given as text) in the named calculus."""
    proof = serialize.load_proof(source, calc)
    logging.info(f"Checking a proof of {len(proof)} lines in {calculus.calculus(calc).name}")
    return calculus.check_proof(calc, proof.premises, proof)
