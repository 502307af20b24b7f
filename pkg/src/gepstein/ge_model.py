"""Generalized Epstein models.

A model pairs an algebra of truth values with an algebra of contents.
The truth value of an arrow is gated by a test on the contents of its two sides.
"""

import logging
from typing import Optional

import numpy as np

from . import base
from . import formula
from . import truth_algebra
from . import content_algebra
from . import exceptions


class ConsequenceMode(str, base.Enumerable):
    assertional = "assertional" # preserves 1
    order = "order"             # preserves lower bounds


class LogicVariant(str, base.Enumerable):
    """The logics, each fixing the switches of the valuation."""
    PAI0 = "PAI0"
    PAI = "PAI"
    lPAI = "lPAI"
    DAI0 = "DAI0"
    DAI = "DAI"
    gD = "gD"
    gdD = "gdD"
    gEq = "gEq"
    DAIbox = "DAIbox"

    @property
    def language_mode(self) -> base.LanguageMode:
        return _switches[self.value][0]

    @property
    def translation_mode(self) -> base.TranslationMode:
        return _switches[self.value][1]

    @property
    def boxed(self) -> bool:
        """Whether the arrow is strict (□ applied to the material conditional)."""
        return _switches[self.value][2]

    @property
    def precedence(self) -> base.Precedence:
        """The content condition of the arrow."""
        return _switches[self.value][3]

    @property
    def consequence_mode(self) -> ConsequenceMode:
        return _switches[self.value][4]

    @property
    def modal(self) -> bool:
        return self.language_mode == base.LanguageMode.modal

    @property
    def agnostic(self) -> bool:
        return self.translation_mode == base.TranslationMode.agnostic

    @property
    def identity_box(self) -> bool:
        """Models of DAIbox collapse □ to the identity."""
        return self.value == "DAIbox"

    def parse(self, text: str) -> formula.Formula:
        """Parse a formula in the language of this logic."""
        return formula.parse(text, self.language_mode, self.precedence)

    def precedes(self, a, b):
        return formula.precedes(a, b, self.precedence)


_M, _D = base.LanguageMode.modal, base.LanguageMode.demodalized
_A, _F = base.TranslationMode.agnostic, base.TranslationMode.fused
_C, _R, _E = base.Precedence.consequent, base.Precedence.antecedent, base.Precedence.equality
_S, _O = ConsequenceMode.assertional, ConsequenceMode.order

_switches = {
    #          language translation boxed content consequence
    "PAI0":   (_M, _A, True,  _C, _S),
    "PAI":    (_M, _F, True,  _C, _S),
    "lPAI":   (_M, _F, True,  _C, _O),
    "DAIbox": (_M, _F, True,  _C, _S),
    "DAI0":   (_D, _A, False, _C, _S),
    "DAI":    (_D, _F, False, _C, _S),
    "gD":     (_D, _F, False, _C, _S),
    "gdD":    (_D, _F, False, _R, _S),
    "gEq":    (_D, _F, False, _E, _S),
}


class GEModel:
    """⟨A, B, N, v_A, v_B⟩ for a given logic.

    The valuations are determined by the atom maps:
    `atom_value` into the truth algebra, `atom_content` into the content algebra.
    """

    def __init__(self,
                 truth: truth_algebra.TruthAlgebra,
                 content: content_algebra.ContentAlgebra,
                 variant,
                 atom_value: dict,
                 atom_content: dict,
                 ):
        self.variant = LogicVariant(variant)
        if truth.has_box != self.variant.modal:
            raise exceptions.VariantError(f"{self.variant.value} models need a truth algebra {'with' if self.variant.modal else 'without'} □.")
        if content.has_gru != self.variant.agnostic:
            raise exceptions.VariantError(f"{self.variant.value} models need a content algebra {'with' if self.variant.agnostic else 'without'} ⊙.")
        if self.variant.identity_box and not (truth.box == np.arange(truth.size)).all():
            raise exceptions.VariantError(f"{self.variant.value} models need □ to be the identity.")
        self.truth = truth
        self.content = content
        self.atom_value = {str(p): truth.check(x, f"truth value of `{p}`") for p,x in atom_value.items()}
        self.atom_content = {str(p): content.check(x, f"content of `{p}`") for p,x in atom_content.items()}

    @property
    def atoms(self):
        return sorted(set(self.atom_value) & set(self.atom_content))

    def covers(self, phi):
        """Raise an AssignmentError if an atom of φ is not valued in both algebras."""
        missing = formula.variables(phi) - set(self.atoms)
        if missing:
            raise exceptions.AssignmentError(f"Atoms {sorted(missing)} of `{formula.to_text(phi)}` are not assigned.")

    def __repr__(self):
        return f"<[GEModel:{self.variant.value}:{self.truth.size}x{self.content.size}:{self.atom_value}:{self.atom_content}]>"


class Circuit:
    """Formulae compiled into the list of their distinct subformulae, children first.

    The content side (the gates of the arrows) and the truth side are computed separately,
    so that the truth side can be evaluated at once over many valuations (numpy arrays).
    """

    def __init__(self, formulas, variant):
        self.variant = LogicVariant(variant)
        seen = {}
        for f in formulas:
            formula.subformulae(f, seen)
        self.nodes = list(seen)
        index = {f: i for i,f in enumerate(self.nodes)}
        self.ops = []
        for f in self.nodes:
            match f:
                case formula.Atom(name):
                    self.ops.append(("atom", name, None))
                case formula.Neg(sub):
                    self.ops.append(("neg", index[sub], None))
                case formula.Box(sub):
                    self.ops.append(("box", index[sub], None))
                case formula.Or(left, right):
                    self.ops.append(("or", index[left], index[right]))
                case formula.Arrow(left, right):
                    self.ops.append(("arrow", index[left], index[right]))
                case _:
                    raise exceptions.SubstitutionError(f"Cannot evaluate the schema `{formula.to_text(f)}`.")
        self.roots = [index[f] for f in formulas]
        self.atoms = sorted(set().union(*[formula.variables(f) for f in formulas])) if formulas else []
        self.arrows = [i for i,op in enumerate(self.ops) if op[0] == "arrow"]

        # A content matters only below an arrow, whose gate reads it.
        self.relevant = [False] * len(self.ops)
        for i in reversed(range(len(self.ops))):
            kind, a, b = self.ops[i]
            if kind == "atom":
                continue
            below = self.relevant[i] or kind == "arrow"
            for child in (a, b):
                if child is not None and below:
                    self.relevant[child] = True

    def contents(self, B, s, gru = None, complete = False):
        """Yield the content of each node.

        In agnostic mode without a ⊙ table, branch over the values of ⊙
        on each argument pair reached by a relevant arrow,
        yielding (contents, partial ⊙ map) for each choice, in lexicographic order.
        Otherwise yield a single pair.

        Args:
            B: content algebra.
            s: content assignment of the atoms.
            gru: a full ⊙ table, or None to branch.
            complete: compute every node, not only the relevant ones.
        """
        agnostic = self.variant.agnostic
        contents = [None] * len(self.ops)
        J = B.join
        ops = self.ops
        relevant = self.relevant

        def fill(start, partial):
            for i in range(start, len(ops)):
                if not (complete or relevant[i]):
                    continue
                kind, a, b = ops[i]
                if kind == "atom":
                    contents[i] = s[a]
                elif kind == "neg" or kind == "box":
                    contents[i] = contents[a]
                elif kind == "or" or not agnostic:
                    contents[i] = int(J[contents[a], contents[b]])
                else:
                    pair = (contents[a], contents[b])
                    if gru is not None:
                        contents[i] = int(gru[pair])
                    elif pair in partial:
                        contents[i] = partial[pair]
                    else:
                        for value in range(B.size):
                            partial[pair] = value
                            contents[i] = value
                            yield from fill(i+1, partial)
                        del partial[pair]
                        return
            yield list(contents), dict(partial)

        yield from fill(0, {})

    def gates(self, B, contents) -> dict:
        """Whether the content test of each arrow holds."""
        gates = {}
        order = B.order
        precedence = self.variant.precedence
        for i in self.arrows:
            _, a, b = self.ops[i]
            ca, cb = contents[a], contents[b]
            if ca is None or cb is None:
                continue
            if precedence == base.Precedence.consequent:
                gates[i] = bool(order[cb, ca])
            elif precedence == base.Precedence.antecedent:
                gates[i] = bool(order[ca, cb])
            else:
                gates[i] = ca == cb
        return gates

    def truths(self, A, values: dict, gates: dict) -> list:
        """Truth value of each node; atom values may be ints or numpy arrays."""
        out = [None] * len(self.ops)
        boxed = self.variant.boxed
        for i, (kind, a, b) in enumerate(self.ops):
            if kind == "atom":
                out[i] = values[a]
            elif kind == "neg":
                out[i] = A.neg[out[a]]
            elif kind == "box":
                out[i] = A.box[out[a]]
            elif kind == "or":
                out[i] = A.join[out[a], out[b]]
            elif gates[i]:
                material = A.join[A.neg[out[a]], out[b]]
                out[i] = A.box[material] if boxed else material
            else:
                out[i] = np.full(np.shape(out[a]), A.zero, dtype=np.int64)
        return out


def _check_formula(M: GEModel, phi):
    formula.check_language(phi, M.variant.language_mode)
    M.covers(phi)


def evaluate(M: GEModel, phi: formula.Formula) -> int:
    """Truth value of φ in M.

    ¬, ∨, □ are computed by the truth tables.
    An arrow α→β takes the value □(¬α∨β) (strict logics) or ¬α∨β (material logics)
    when the content test of the logic holds between the contents of α and β, and 0 otherwise.

    Raises:
        LanguageModeError: if φ uses □ in a demodalized logic.
        AssignmentError: if an atom of φ is not assigned.
    """
    return evaluate_all(M, [phi])[0]


def evaluate_all(M: GEModel, formulas) -> list:
    """Truth values of several formulae, sharing their common subformulae."""
    for phi in formulas:
        _check_formula(M, phi)
    circuit = Circuit(formulas, M.variant)
    contents, _ = next(circuit.contents(M.content, M.atom_content, gru = M.content.gru, complete = True))
    gates = circuit.gates(M.content, contents)
    out = circuit.truths(M.truth, M.atom_value, gates)
    return [int(out[r]) for r in circuit.roots]


def content(M: GEModel, phi: formula.Formula) -> int:
    """Content value of φ in M, that is v_B(N(φ))."""
    _check_formula(M, phi)
    return content_algebra.eval_content(M.content, M.atom_content, formula.translate(phi, M.variant.translation_mode))


def assertional_consequence(M: GEModel, premises, phi) -> bool:
    """If every premise takes the value 1, so does φ."""
    values = evaluate_all(M, list(premises) + [phi])
    if all(v == M.truth.one for v in values[:-1]):
        return values[-1] == M.truth.one
    return True


def order_consequence(M: GEModel, premises, phi) -> bool:
    """Every lower bound of the premises is below φ, i.e. meet(premises) ≤ φ."""
    values = evaluate_all(M, list(premises) + [phi])
    bound = M.truth.meet_all(values[:-1])
    return M.truth.leq(bound, values[-1])


def consequence(M: GEModel, premises, phi) -> bool:
    """The consequence relation of the model's logic."""
    if M.variant.consequence_mode == ConsequenceMode.order:
        return order_consequence(M, premises, phi)
    return assertional_consequence(M, premises, phi)


def check_validity(variant, premises, goal, bounds = None, jobs: int = 0):
    """Search every model within bounds for a counterexample to premises ⊨ goal.

    Returns:
        A search.Verdict, either valid up to bounds or holding the first countermodel.
    """
    from . import search
    return search.check_validity(variant, premises, goal, bounds, jobs)


def interchangeable(variant, phi, psi, bounds = None, jobs: int = 0):
    """Search a model where φ and ψ differ in truth value or in content.

    Formulae agreeing on both in every model can replace each other in any context.
    The query is (φ≡ψ)∧(φ≺ψ)∧(ψ≺φ).
    """
    variant = LogicVariant(variant)
    goal = formula.conj_all([formula.iff(phi, psi), variant.precedes(phi, psi), variant.precedes(psi, phi)])
    return check_validity(variant, [], goal, bounds, jobs)


def distinguishing_context(M: GEModel, phi, psi) -> Optional[tuple]:
    """A pair of formulae C[φ], C[ψ] taking different truth values in M, or None.

    The context is the identity when φ and ψ differ in truth value,
    otherwise x≺ψ or ψ≺x, which detect a difference of content.
    """
    if evaluate(M, phi) != evaluate(M, psi):
        return phi, psi
    cphi, cpsi = content(M, phi), content(M, psi)
    if cphi == cpsi:
        return None
    v = M.variant
    if not M.content.leq(cphi, cpsi):
        return v.precedes(phi, psi), v.precedes(psi, psi)
    return v.precedes(psi, phi), v.precedes(psi, psi)


def dependence_model(universe, assignment: dict, values: dict) -> GEModel:
    """A dependence model: classical truth values and a union set-assignment, read in gD.

    The content of a formula is the union of the sets of its variables,
    so that an arrow φ→ψ is true iff ¬φ∨ψ is true and s(φ) ⊇ s(ψ).

    Args:
        universe: the reference set.
        assignment: atom → subset of the reference set.
        values: atom → bool.
    """
    A = truth_algebra.boolean_algebra(1)
    B, s = content_algebra.union_assignment(universe, assignment)
    missing = set(s) ^ set(values)
    if missing:
        raise exceptions.AssignmentError(f"Atoms {sorted(missing)} need both a truth value and a set.")
    v = {p: A.one if bool(x) else A.zero for p, x in values.items()}
    return GEModel(A, B, LogicVariant.gD, v, s)
