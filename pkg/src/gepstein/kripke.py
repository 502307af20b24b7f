"""Topic-augmented Kripke models.

Each world of an S4 frame carries its own semilattice of topics and its own topic assignment.
Fine models compute the topic of every binary connective with ⊕,
Ferguson models compute the topic of the arrow with ⊙
and link the worlds by homomorphisms.
"""

import logging
import itertools
from typing import Optional

import numpy as np

from . import base
from . import formula
from . import validate
from . import truth_algebra
from . import content_algebra
from . import ge_model
from . import exceptions


class Flavor(str, base.Enumerable):
    fine = "fine"
    ferguson = "ferguson"


class TopicKripkeModel:
    """⟨W, R, (T_w)_w, (t_w)_w, v⟩, worlds being the indices of the frame."""

    def __init__(self,
                 frame: truth_algebra.PreorderFrame,
                 topics: list,
                 topic_of: list,
                 val: dict,
                 flavor = Flavor.fine,
                 homs: Optional[dict] = None,
                 check: bool = True,
                 ):
        """
        Args:
            frame: the S4 frame.
            topics: the content algebra of each world.
            topic_of: for each world, a map from atoms to topics.
            val: map from atoms to the set of world indices where they hold.
            flavor: "fine" or "ferguson".
            homs: for Ferguson models, map (w, w') → list, the topic map h_{w,w'} for w' ∈ R[w].
                Missing reflexive maps default to the identity.
            check: validate the model, raising KripkeModelError on a violation.
        """
        self.frame = frame
        self.topics = list(topics)
        self.topic_of = [dict(t) for t in topic_of]
        self.flavor = Flavor(flavor)
        self.val = {str(p): frozenset(int(w) for w in ws) for p, ws in val.items()}
        self.homs = None if homs is None else {(int(a), int(b)): list(h) for (a, b), h in homs.items()}
        if len(self.topics) != frame.size or len(self.topic_of) != frame.size:
            raise exceptions.KripkeModelError(f"Expected topic data for {frame.size} worlds, got {len(self.topics)} algebras and {len(self.topic_of)} assignments.")
        if check:
            report = validate_model(self)
            if not report.ok:
                raise exceptions.KripkeModelError(f"Invalid {self.flavor.value} model: {report}.")

    @property
    def atoms(self):
        names = set(self.val)
        for t in self.topic_of:
            names |= set(t)
        return sorted(names)

    def hom(self, w, v):
        if self.homs is not None and (w, v) in self.homs:
            return self.homs[(w, v)]
        if w == v:
            return list(range(self.topics[w].size))
        return None

    def __repr__(self):
        return f"<[TopicKripkeModel:{self.flavor.value}:{self.frame.key()}:{self.topic_of}:{dict(self.val)}]>"


def validate_model(M: TopicKripkeModel) -> validate.Report:
    """First violated model condition, if any."""
    report = M.frame.validate()
    if not report.ok:
        return report
    atoms = M.atoms
    for w, (T, t) in enumerate(zip(M.topics, M.topic_of)):
        report = T.validate()
        if not report.ok:
            return validate.Report(f"topics of {M.frame.worlds[w]}: {report.equation}", report.witness)
        for p in atoms:
            if p not in t or not 0 <= int(t[p]) < T.size:
                return validate.Report("topic assignment", (M.frame.worlds[w], p))
        if M.flavor == Flavor.ferguson and not T.has_gru:
            return validate.Report("⊙ table", (M.frame.worlds[w],))
    for p, ws in M.val.items():
        if not all(0 <= w < M.frame.size for w in ws):
            return validate.Report("valuation", (p,))

    for w in range(M.frame.size):
        for v in M.frame.successors(w):
            v = int(v)
            if M.flavor == Flavor.fine:
                if w == v:
                    continue
                Tw, Tv = M.topics[w], M.topics[v]
                tw, tv = M.topic_of[w], M.topic_of[v]
                for p, q in itertools.product(atoms, repeat=2):
                    if Tw.order[tw[p], tw[q]] and not Tv.order[tv[p], tv[q]]:
                        return validate.Report("persistence t_w(p)≤t_w(q) ⇒ t_w'(p)≤t_w'(q)", (M.frame.worlds[w], M.frame.worlds[v], p, q))
            else:
                h = M.hom(w, v)
                if h is None:
                    return validate.Report("missing homomorphism", (M.frame.worlds[w], M.frame.worlds[v]))
                if not content_algebra.is_homomorphism(h, M.topics[w], M.topics[v]):
                    return validate.Report("homomorphism h(x⊕y)=h(x)⊕h(y), h(x⊙y)=h(x)⊙h(y)", (M.frame.worlds[w], M.frame.worlds[v]))
                for p in atoms:
                    if h[M.topic_of[w][p]] != M.topic_of[v][p]:
                        return validate.Report("h(t_w(p))=t_w'(p)", (M.frame.worlds[w], M.frame.worlds[v], p))
    return validate.Report()


def content_stable(M: TopicKripkeModel, root) -> validate.Report:
    """Whether every world above the root decides topic inclusion as the root does.

    For Fine models: t(p) ≤ ⊕t(Q) holds at the root iff it holds at each successor,
    for every atom p and non-empty set of atoms Q.
    For Ferguson models: each h_{root,w} is injective on the topics generated by the atoms.
    The bridge to gE-models agrees with forcing on every formula under this condition.
    Persistence alone only gives one direction, which fails on arrows tested false
    at the root and true above it, under a negation within a box.
    """
    r = M.frame.index(root)
    atoms = M.atoms
    if not atoms:
        return validate.Report()
    subsets = [list(Q) for k in range(1, len(atoms)+1) for Q in itertools.combinations(atoms, k)]
    for w in M.frame.successors(r):
        w = int(w)
        if w == r:
            continue
        if M.flavor == Flavor.fine:
            for Q in subsets:
                jr, jw = _join_topics(M, r, Q), _join_topics(M, w, Q)
                for p in atoms:
                    at_root = M.topics[r].order[M.topic_of[r][p], jr]
                    above = M.topics[w].order[M.topic_of[w][p], jw]
                    if at_root != above:
                        return validate.Report("t(p)≤⊕t(Q) at the root iff above it", (M.frame.worlds[r], M.frame.worlds[w], p, tuple(Q)))
        else:
            h = M.hom(r, w)
            C, renum = content_algebra.generated_subsemilattice(M.topics[r], [M.topic_of[r][p] for p in atoms])
            images = [h[old] for old in renum]
            if len(set(images)) != len(images):
                return validate.Report("h injective on the generated topics", (M.frame.worlds[r], M.frame.worlds[w]))
    return validate.Report()



def _join_topics(M, w, atoms):
    J = M.topics[w].join
    result = M.topic_of[w][atoms[0]]
    for p in atoms[1:]:
        result = int(J[result, M.topic_of[w][p]])
    return result


def topic_at(M: TopicKripkeModel, w, phi: formula.Formula) -> int:
    """Topic of φ at world w.

    Raises:
        AssignmentError: if an atom has no topic.
    """
    w = M.frame.index(w)
    T, t = M.topics[w], M.topic_of[w]
    match phi:
        case formula.Atom(name):
            if name not in t:
                raise exceptions.AssignmentError(f"Atom `{name}` has no topic at {M.frame.worlds[w]}.")
            return int(t[name])
        case formula.Neg(sub) | formula.Box(sub):
            return topic_at(M, w, sub)
        case formula.Or(left, right):
            return int(T.join[topic_at(M, w, left), topic_at(M, w, right)])
        case formula.Arrow(left, right):
            table = T.gru if M.flavor == Flavor.ferguson else T.join
            return int(table[topic_at(M, w, left), topic_at(M, w, right)])
    raise TypeError(f"Not a formula: {phi!r}")


def truth_set(M: TopicKripkeModel, phi: formula.Formula, memo: Optional[dict] = None):
    """Boolean array of the worlds forcing φ."""
    memo = {} if memo is None else memo
    if phi in memo:
        return memo[phi]
    R = M.frame.reach
    n = M.frame.size
    match phi:
        case formula.Atom(name):
            if not all(name in t for t in M.topic_of):
                raise exceptions.AssignmentError(f"Atom `{name}` has no topic.")
            S = np.zeros(n, dtype=bool)
            S[list(M.val.get(name, ()))] = True
        case formula.Neg(sub):
            S = ~truth_set(M, sub, memo)
        case formula.Or(left, right):
            S = truth_set(M, left, memo) | truth_set(M, right, memo)
        case formula.Box(sub):
            inner = truth_set(M, sub, memo)
            S = ~(R & ~inner[None,:]).any(axis=1)
        case formula.Arrow(left, right):
            material = ~truth_set(M, left, memo) | truth_set(M, right, memo)
            strict = ~(R & ~material[None,:]).any(axis=1)
            # The consequent's topic is included in the antecedent's.
            included = np.array([M.topics[w].order[topic_at(M, w, right), topic_at(M, w, left)] for w in range(n)], dtype=bool)
            S = strict & included
        case _:
            raise TypeError(f"Not a formula: {phi!r}")
    memo[phi] = S
    return S


def forces(M: TopicKripkeModel, w, phi: formula.Formula) -> bool:
    """M, w ⊩ φ"""
    return bool(truth_set(M, phi)[M.frame.index(w)])


def generated_submodel(M: TopicKripkeModel, roots) -> TopicKripkeModel:
    """Restriction of M to the worlds reachable from the roots.

    The kept worlds are renumbered in their original order and keep their labels.
    """
    roots = list(roots)
    if not roots:
        raise exceptions.KripkeModelError("A generated submodel needs at least one root.")
    kept = M.frame.upward_closure(roots)
    renum = {old: new for new, old in enumerate(kept)}
    homs = None
    if M.homs is not None:
        homs = {(renum[a], renum[b]): h for (a, b), h in M.homs.items() if a in renum and b in renum}
    return TopicKripkeModel(
        M.frame.restrict(kept),
        [M.topics[w] for w in kept],
        [M.topic_of[w] for w in kept],
        {p: [renum[w] for w in ws if w in renum] for p, ws in M.val.items()},
        M.flavor,
        homs,
        check = False,
    )


def surjectivize(M: TopicKripkeModel) -> TopicKripkeModel:
    """Replace each topic algebra by the sub-semilattice generated by the topics of the atoms.

    Raises:
        KripkeModelError: on a Ferguson model.
    """
    if M.flavor != Flavor.fine:
        raise exceptions.KripkeModelError("Only Fine models can be surjectivized.")
    atoms = M.atoms
    topics = []
    topic_of = []
    for T, t in zip(M.topics, M.topic_of):
        C, renum = content_algebra.generated_subsemilattice(T.without_gru(), [t[p] for p in atoms])
        topics.append(C)
        topic_of.append({p: renum[int(t[p])] for p in atoms})
    return TopicKripkeModel(M.frame, topics, topic_of, M.val, M.flavor, None, check = False)


def to_ge_model(M: TopicKripkeModel, root, variant = None) -> ge_model.GEModel:
    """The gE-model of the submodel generated by the root.

    Its truth algebra is the complex algebra of the rooted frame,
    its content algebra the topics of the root,
    so that M, root ⊩ φ iff the root belongs to the value of φ,
    provided the model is content stable above the root.

    Args:
        M: the Kripke model.
        root: world index or label.
        variant: PAI or lPAI for Fine models (default PAI), PAI0 for Ferguson models.

    Raises:
        VariantError: if the variant does not match the flavor.
    """
    if M.flavor == Flavor.fine:
        allowed = (ge_model.LogicVariant.PAI, ge_model.LogicVariant.lPAI)
    else:
        allowed = (ge_model.LogicVariant.PAI0,)
    variant = allowed[0] if variant is None else ge_model.LogicVariant(variant)
    if variant not in allowed:
        raise exceptions.VariantError(f"A {M.flavor.value} model bridges to {', '.join(v.value for v in allowed)}, not {variant.value}.")

    label = M.frame.worlds[M.frame.index(root)]
    sub = generated_submodel(M, [M.frame.index(root)])
    r = sub.frame.index(label)
    if not content_stable(sub, r).ok:
        logging.warning(f"Topic inclusion above {label} differs from {label}, the bridge may disagree with forcing.")
    A = truth_algebra.complex_algebra(sub.frame)
    B = sub.topics[r] if M.flavor == Flavor.ferguson else sub.topics[r].without_gru()
    values = {p: A.from_set(sub.val.get(p, ())) for p in sub.atoms}
    contents = {p: int(sub.topic_of[r][p]) for p in sub.atoms}
    logging.debug(f"\tBridge at {label}: {len(sub.frame.worlds)} worlds, {B.size} topics")
    return ge_model.GEModel(A, B, variant, values, contents)


##########################################################################
# Model generation.
##########################################################################

def enumerate_fine_models(atoms, max_worlds: int = 2, max_topics: int = 2, dedup_iso: bool = True):
    """Yield every Fine model within bounds, in a deterministic order.

    Frames by size, then per-world topic algebras, topic assignments and valuations.
    """
    from . import search
    atoms = sorted(atoms)
    algebras = list(content_algebra.enumerate_semilattices(max_topics, dedup_iso))
    for n in range(1, max_worlds+1):
        for frame in search.enumerate_preorders(n, dedup_iso):
            for Ts in itertools.product(algebras, repeat=n):
                per_world = [list(itertools.product(range(T.size), repeat=len(atoms))) for T in Ts]
                for ts in itertools.product(*per_world):
                    topic_of = [dict(zip(atoms, t)) for t in ts]
                    M = TopicKripkeModel(frame, Ts, topic_of, {p: [] for p in atoms}, check = False)
                    if not validate_model(M).ok:
                        continue
                    for bits in itertools.product((False, True), repeat=n*len(atoms)):
                        val = {p: [w for w in range(n) if bits[i*n + w]] for i, p in enumerate(atoms)}
                        yield TopicKripkeModel(frame, Ts, topic_of, val, check = False)


def sample_fine_models(atoms, count: int, max_worlds: int = 3, max_topics: int = 3, seed: int = 0, stable_only: bool = False):
    """Draw count valid Fine models at random, reproducibly.

    Args:
        atoms: atom names.
        count: number of models.
        max_worlds, max_topics: bounds.
        seed: of the numpy random generator.
        stable_only: also reject models whose first world is not content stable.
    """
    from . import search
    rng = np.random.default_rng(seed)
    atoms = sorted(atoms)
    frames = [f for n in range(1, max_worlds+1) for f in search.enumerate_preorders(n, True)]
    algebras = list(content_algebra.enumerate_semilattices(max_topics, True))
    drawn = 0
    while drawn < count:
        frame = frames[rng.integers(len(frames))]
        n = frame.size
        Ts = [algebras[rng.integers(len(algebras))] for _ in range(n)]
        topic_of = [{p: int(rng.integers(T.size)) for p in atoms} for T in Ts]
        val = {p: [w for w in range(n) if rng.integers(2)] for p in atoms}
        M = TopicKripkeModel(frame, Ts, topic_of, val, check = False)
        if not validate_model(M).ok:
            continue
        if stable_only and not content_stable(M, 0).ok:
            continue
        drawn += 1
        yield M
