"""Hilbert-style calculi and their proof checker.

A proof is a list of lines, each holding a formula and the way it is justified.
Lines are numbered from 1.
The checker computes which lines depend on a premise,
so that local necessitation (Nec) is refused on them
while its global companion (Nec_g) is not.
"""

import logging
import functools
import itertools
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import base
from . import formula
from . import exceptions

# Largest number of propositional slots of a tautology checked by truth table.
TAUTOLOGY_BOUND = 20


class Rule(str, base.Enumerable):
    MP = "MP"
    Nec = "Nec"       # ⊢φ ⇒ ⊢□φ
    Nec_g = "Nec_g"   # φ ⊢ □φ


class Kind(str, base.Enumerable):
    """How a proof line is justified."""
    premise = "premise"
    axiom = "axiom"
    mp = "mp"
    nec = "nec"
    nec_g = "nec_g"
    taut = "taut"


class Reason(str, base.Enumerable):
    """Why a proof is rejected."""
    bad_schema_match = "bad-schema-match"
    bad_mp = "bad-mp"
    bad_nec = "bad-nec"
    nec_on_premise = "nec-on-premise"
    rule_absent = "rule-absent"
    forward_reference = "forward-reference"
    not_tautology = "not-tautology"
    bad_premise = "bad-premise"
    goal_mismatch = "goal-mismatch"
    empty_proof = "empty-proof"
    unknown_axiom = "unknown-axiom"


##########################################################################
# Axioms.
##########################################################################

# Metavariables A, B, C, D stand for arbitrary formulae.
SCHEMATA = {
    "A1": "A => (B => A)",
    "A2": "(A => (B => C)) => ((A => B) => (A => C))",
    "A3": "(~A => ~B) => (B => A)",
    "A4": "(A -> B) <-> ([](A => B) /\\ (B < A))",
    "A4^D": "(A -> B) <-> ((A => B) /\\ (B < A))",
    "A4^dD": "(A -> B) <-> ((A => B) /\\ (A < B))",
    "A4^Eq": "(A -> B) <-> ((A => B) /\\ ((A < B) /\\ (B < A)))",
    "A5": "((A -> B) < (A \\/ B)) /\\ ((A \\/ B) < (A -> B))",
    "A6": "A => []A",
    "K": "[](A => B) => ([]A => []B)",
    "T": "[]A => A",
    "4": "[]A => [][]A",
    "O1": "A < A",
    "O2": "((A < B) /\\ (B < C)) => (A < C)",
    "O3": "(A < B) => ((A \\/ B) < B)",
    "O4": "((A < B) <-> (A < ~B)) /\\ ((A < B) <-> (~A < B))",
    "O5": "((A < B) <-> (A < []B)) /\\ ((A < B) <-> ([]A < B))",
    "C1": "(A < (A \\/ B)) /\\ (B < (A \\/ B))",
    "C2": "((A < C) /\\ (B < C)) => ((A \\/ B) < C)",
    "C3": "((A < C) /\\ ((C < A) /\\ ((B < D) /\\ (D < B)))) => ((A -> B) < (C -> D))",
}


@functools.lru_cache(maxsize=None)
def schema(name: str, precedence = base.Precedence.consequent) -> formula.Formula:
    """The axiom schema of the given name, ≺ being expanded for the given content test."""
    if name not in SCHEMATA:
        raise exceptions.ConfigError(f"Unknown axiom `{name}` (known: {', '.join(SCHEMATA)}).")
    return formula.parse(SCHEMATA[name], base.LanguageMode.modal, precedence)


@dataclass(frozen=True)
class Calculus:
    """A set of axiom schemata and rules, in the language of a logic."""
    name: str
    axioms: tuple
    rules: frozenset
    language_mode: base.LanguageMode = base.LanguageMode.modal
    precedence: base.Precedence = base.Precedence.consequent

    @property
    def schemata(self) -> dict:
        return {a: schema(a, self.precedence) for a in self.axioms}

    def has(self, rule) -> bool:
        return Rule(rule) in self.rules

    def precedes(self, a, b):
        return formula.precedes(a, b, self.precedence)

    def __repr__(self):
        return f"<[Calculus:{self.name}:{len(self.axioms)} axioms:{'+'.join(sorted(r.value for r in self.rules))}]>"


_S4 = ("A1", "A2", "A3", "K", "T", "4")
_PAI0 = ("A1", "A2", "A3", "A4", "K", "T", "4", "O1", "O2", "O3", "O4", "O5", "C1", "C2", "C3")
_PAI = _PAI0 + ("A5",)
_DAI = ("A1", "A2", "A3", "A4^D", "A5", "O1", "O2", "O3", "O4", "C1", "C2", "C3")
_DAI0 = tuple(a for a in _DAI if a != "A5")

def _swap(axioms, old, new):
    return tuple(new if a == old else a for a in axioms)

_M, _D = base.LanguageMode.modal, base.LanguageMode.demodalized
_local = frozenset([Rule.MP, Rule.Nec])
_global = frozenset([Rule.MP, Rule.Nec_g])
_mp = frozenset([Rule.MP])

CALCULI = {c.name: c for c in [
    Calculus("S4", _S4, _local, _M),
    Calculus("S4g", _S4, _global, _M),
    Calculus("PAI0", _PAI0, _global, _M),
    Calculus("PAI", _PAI, _global, _M),
    Calculus("lPAI", _PAI, _local, _M),
    Calculus("DAIbox", _PAI + ("A6",), _global, _M),
    Calculus("DAI0", _DAI0, _mp, _D),
    Calculus("DAI", _DAI, _mp, _D),
    Calculus("gD", _DAI, _mp, _D),
    Calculus("gdD", _swap(_DAI, "A4^D", "A4^dD"), _mp, _D, base.Precedence.antecedent),
    Calculus("gEq", _swap(_DAI, "A4^D", "A4^Eq"), _mp, _D, base.Precedence.equality),
]}


def calculus(name) -> Calculus:
    """The calculus of the given name, or the given calculus itself.

    Raises:
        ConfigError: on an unknown name.
    """
    if isinstance(name, Calculus):
        return name
    name = getattr(name, "value", name)
    if name not in CALCULI:
        raise exceptions.ConfigError(f"Unknown calculus `{name}` (known: {', '.join(CALCULI)}).")
    return CALCULI[name]


def axioms_of(calc) -> list:
    """Named schemata of the calculus, ≺ expanded, in listing order."""
    calc = calculus(calc)
    return [(a, schema(a, calc.precedence)) for a in calc.axioms]


def axiom_instances(calc, atoms, max_depth: int = 1, limit: Optional[int] = None):
    """Yield (name, instance) for the schemata of the calculus,
    their metavariables ranging over the formulae up to max_depth.

    Args:
        limit: largest number of instances per schema.
    """
    calc = calculus(calc)
    pool = list(formula.formulae(atoms, max_depth, calc.language_mode))
    for name, s in axioms_of(calc):
        metas = sorted(formula.metavariables(s))
        for n, values in enumerate(itertools.product(pool, repeat=len(metas))):
            if limit is not None and n >= limit:
                break
            yield name, formula.substitute(s, dict(zip(metas, values)))


def generic_instance(calc, name: str) -> formula.Formula:
    """The instance of an axiom binding its metavariables A, B, C, D to the atoms p, q, r, s."""
    calc = calculus(calc)
    if name not in calc.axioms:
        raise exceptions.ConfigError(f"`{name}` is not an axiom of {calc.name}.")
    s = schema(name, calc.precedence)
    atoms = dict(zip("ABCD", "pqrs"))
    return formula.substitute(s, {m: formula.Atom(atoms[m]) for m in formula.metavariables(s)})


##########################################################################
# Tautologies.
##########################################################################

def _skeleton(phi, slots: dict):
    """The propositional skeleton of φ: ¬ and ∨ over slots standing for atoms, □- and →-subformulae."""
    match phi:
        case formula.Neg(sub):
            return ("neg", _skeleton(sub, slots))
        case formula.Or(left, right):
            return ("or", _skeleton(left, slots), _skeleton(right, slots))
        case _:
            if phi not in slots:
                slots[phi] = len(slots)
            return ("slot", slots[phi])


def _truth_table(node, rows):
    match node:
        case ("slot", i):
            return rows[:,i]
        case ("neg", sub):
            return ~_truth_table(sub, rows)
        case ("or", left, right):
            return _truth_table(left, rows) | _truth_table(right, rows)


def is_tautology(phi: formula.Formula) -> bool:
    """Whether φ is a classical tautology, its maximal □- and →-subformulae read as atoms.

    Raises:
        BoundsError: above TAUTOLOGY_BOUND slots.
    """
    slots = {}
    tree = _skeleton(phi, slots)
    k = len(slots)
    if k > TAUTOLOGY_BOUND:
        raise exceptions.BoundsError(f"A tautology check over {k} slots exceeds the bound of {TAUTOLOGY_BOUND}.")
    rows = ((np.arange(2**k)[:,None] >> np.arange(k)[None,:]) & 1).astype(bool)
    return bool(_truth_table(tree, rows).all())


##########################################################################
# Proofs.
##########################################################################

@dataclass(frozen=True)
class Justification:
    """How a line is obtained.

    Attributes:
        kind: premise, axiom, mp, nec, nec_g or taut.
        args: cited line numbers (mp: i, j with line j = line i ⊃ this line; nec, nec_g: i),
            or for a premise, optionally its 1-based index in the premises.
        axiom: the name of the schema, for axiom lines.
        binding: metavariable → formula, possibly partial, for axiom lines.
    """
    kind: Kind
    args: tuple = ()
    axiom: Optional[str] = None
    binding: Optional[dict] = field(default=None, hash=False, compare=False)

    def __str__(self):
        if self.kind == Kind.axiom:
            return self.axiom
        if self.args:
            return f"{self.kind.value} {','.join(str(a) for a in self.args)}"
        return self.kind.value


@dataclass(frozen=True)
class Line:
    formula: formula.Formula
    justification: Justification


@dataclass
class Proof:
    lines: list
    premises: list = field(default_factory=list)
    goal: Optional[formula.Formula] = None

    def __len__(self):
        return len(self.lines)

    def __str__(self):
        width = len(str(len(self.lines)))
        return "\n".join(f"{i:>{width}}. {formula.to_text(l.formula, unicode=True)}\t[{l.justification}]" for i, l in enumerate(self.lines, start=1))


@dataclass(frozen=True)
class Rejection:
    line: int
    reason: Reason
    message: str = ""

    def __str__(self):
        return f"line {self.line}: {self.reason.value}" + (f" ({self.message})" if self.message else "")


@dataclass
class ProofCheck:
    """Outcome of check_proof: ok, or the first rejected line.

    Attributes:
        premise_dependent: for each checked line, whether it depends on a premise.
    """
    calculus: str
    rejection: Optional[Rejection] = None
    premise_dependent: list = field(default_factory=list)

    @property
    def ok(self):
        return self.rejection is None

    def __bool__(self):
        return self.ok

    def __str__(self):
        return "ok" if self.ok else f"rejected at {self.rejection}"


def _cited(args, current, count):
    """Cited line numbers, or None if one does not precede the current line."""
    try:
        cited = [int(a) for a in args]
    except (TypeError, ValueError):
        return None
    if len(cited) != count or not all(1 <= a < current for a in cited):
        return None
    return cited


def check_proof(calc, premises, proof: Proof) -> ProofCheck:
    """Check every line of a proof, stopping at the first unjustified one.

    Args:
        calc: a Calculus or its name.
        premises: the formulae a premise line may state.
        proof: the lines, and optionally the goal the last line must state.

    Raises:
        LanguageModeError: if a formula uses □ outside of the language of the calculus.
    """
    calc = calculus(calc)
    premises = list(premises)
    for phi in premises + [l.formula for l in proof.lines]:
        formula.check_language(phi, calc.language_mode)
    result = ProofCheck(calc.name)

    def reject(n, reason, message = ""):
        result.rejection = Rejection(n, reason, message)
        logging.info(f"Proof rejected in {calc.name}: {result.rejection}")
        return result

    if not proof.lines:
        return reject(0, Reason.empty_proof)

    dependent = result.premise_dependent
    schemata = calc.schemata
    for n, line in enumerate(proof.lines, start=1):
        phi, just = line.formula, line.justification
        kind = Kind(just.kind)
        logging.debug(f"\t{n}. {formula.to_text(phi)} [{just}]")

        if kind == Kind.premise:
            if just.args:
                i = int(just.args[0])
                if not 1 <= i <= len(premises) or premises[i-1] != phi:
                    return reject(n, Reason.bad_premise, f"premise #{i}")
            elif phi not in premises:
                return reject(n, Reason.bad_premise)
            dependent.append(True)

        elif kind == Kind.axiom:
            if just.axiom not in schemata:
                return reject(n, Reason.unknown_axiom, f"`{just.axiom}` is not an axiom of {calc.name}")
            s = schemata[just.axiom]
            binding = dict(just.binding or {})
            if not set(binding) <= formula.metavariables(s) or formula.match(s, phi, binding) is None:
                return reject(n, Reason.bad_schema_match, just.axiom)
            dependent.append(False)

        elif kind == Kind.mp:
            if not calc.has(Rule.MP):
                return reject(n, Reason.rule_absent, "MP")
            cited = _cited(just.args, n, 2)
            if cited is None:
                return reject(n, Reason.forward_reference)
            i, j = cited
            if proof.lines[j-1].formula != formula.implies(proof.lines[i-1].formula, phi):
                return reject(n, Reason.bad_mp, f"line {j} is not line {i} ⊃ line {n}")
            dependent.append(dependent[i-1] or dependent[j-1])

        elif kind in (Kind.nec, Kind.nec_g):
            rule = Rule.Nec if kind == Kind.nec else Rule.Nec_g
            if not calc.has(rule):
                return reject(n, Reason.rule_absent, rule.value)
            cited = _cited(just.args, n, 1)
            if cited is None:
                return reject(n, Reason.forward_reference)
            i = cited[0]
            if phi != formula.Box(proof.lines[i-1].formula):
                return reject(n, Reason.bad_nec, f"line {n} is not □ of line {i}")
            if rule == Rule.Nec and dependent[i-1]:
                return reject(n, Reason.nec_on_premise, f"line {i} depends on a premise")
            dependent.append(dependent[i-1])

        else:
            if not is_tautology(phi):
                return reject(n, Reason.not_tautology)
            dependent.append(False)

    if proof.goal is not None and proof.lines[-1].formula != proof.goal:
        return reject(len(proof.lines), Reason.goal_mismatch)
    logging.info(f"Proof of {len(proof.lines)} lines checked in {calc.name}")
    return result


##########################################################################
# Building proofs.
##########################################################################

def conjuncts(phi: formula.Formula) -> tuple:
    """(a, b) if φ is a∧b.

    Raises:
        DerivationError: if φ is not a conjunction.
    """
    match phi:
        case formula.Neg(formula.Or(formula.Neg(a), formula.Neg(b))):
            return a, b
    raise exceptions.DerivationError(f"`{formula.to_text(phi)}` is not a conjunction.")


class ProofBuilder:
    """Append justified lines, each method returning the number of the new line."""

    def __init__(self, calc, premises = ()):
        self.calculus = calculus(calc)
        self.premises = list(premises)
        self.lines = []

    def at(self, i) -> formula.Formula:
        """The formula of line i."""
        return self.lines[i-1].formula

    def _add(self, phi, just) -> int:
        self.lines.append(Line(phi, just))
        return len(self.lines)

    def premise(self, phi) -> int:
        if phi not in self.premises:
            raise exceptions.DerivationError(f"`{formula.to_text(phi)}` is not a premise.")
        return self._add(phi, Justification(Kind.premise, (self.premises.index(phi)+1,)))

    def axiom(self, name, **binding) -> int:
        if name not in self.calculus.axioms:
            raise exceptions.DerivationError(f"`{name}` is not an axiom of {self.calculus.name}.")
        phi = formula.substitute(schema(name, self.calculus.precedence), binding)
        return self._add(phi, Justification(Kind.axiom, (), name, dict(binding)))

    def mp(self, i, j) -> int:
        """From line i (φ) and line j (φ⊃ψ), ψ."""
        match self.at(j):
            case formula.Or(formula.Neg(a), b) if a == self.at(i):
                return self._add(b, Justification(Kind.mp, (i, j)))
        raise exceptions.DerivationError(f"Line {j} is not line {i} ⊃ something.")

    def nec(self, i) -> int:
        return self._add(formula.Box(self.at(i)), Justification(Kind.nec, (i,)))

    def nec_g(self, i) -> int:
        return self._add(formula.Box(self.at(i)), Justification(Kind.nec_g, (i,)))

    def taut(self, phi) -> int:
        if not is_tautology(phi):
            raise exceptions.DerivationError(f"`{formula.to_text(phi)}` is not a tautology.")
        return self._add(phi, Justification(Kind.taut))

    def conclude(self, goal, lines) -> int:
        """Derive a propositional consequence of the given lines.

        Adds the tautology l1⊃(l2⊃…⊃goal) and detaches it by modus ponens.
        """
        lines = list(lines)
        current = self.taut(formula.implies_all([self.at(i) for i in lines], goal))
        for i in lines:
            current = self.mp(i, current)
        return current

    def part(self, i, k: int) -> int:
        """The k-th conjunct (0 or 1) of line i."""
        return self.conclude(conjuncts(self.at(i))[k], [i])

    def proof(self, goal = None) -> Proof:
        return Proof(list(self.lines), list(self.premises), goal)


def _prec(b: ProofBuilder, x, y):
    return b.calculus.precedes(x, y)


def _transitive(b: ProofBuilder, x, y, z, xy: int, yz: int) -> int:
    """x≺z from lines x≺y and y≺z, by O2."""
    o2 = b.axiom("O2", A=x, B=y, C=z)
    return b.conclude(_prec(b, x, z), [xy, yz, o2])


def _union_upper(b: ProofBuilder, x, y, z, xz: int, yz: int) -> int:
    """(x∨y)≺z from lines x≺z and y≺z, by C2."""
    c2 = b.axiom("C2", A=x, B=y, C=z)
    return b.conclude(_prec(b, formula.Or(x, y), z), [xz, yz, c2])


def _negation_below(b: ProofBuilder, x) -> int:
    """¬x≺x, by O1 and O4."""
    o1 = b.axiom("O1", A=x)
    o4 = b.axiom("O4", A=x, B=x)
    return b.conclude(_prec(b, formula.Neg(x), x), [o1, o4])


def _box_transparency(b: ProofBuilder, psi) -> tuple:
    """Lines of ψ≺(τψ→ψ) and (τψ→ψ)≺ψ, from C1, A5, O1, O4, C2, O2."""
    t = formula.tau(psi)
    boxed = formula.Arrow(t, psi)
    both = formula.Or(t, psi)
    c1 = b.axiom("C1", A=t, B=psi)
    a5 = b.axiom("A5", A=t, B=psi)
    up = _transitive(b, psi, both, boxed, b.part(c1, 1), b.part(a5, 1))

    o1 = b.axiom("O1", A=psi)
    t_below = _union_upper(b, psi, formula.Neg(psi), psi, o1, _negation_below(b, psi))
    both_below = _union_upper(b, t, psi, psi, t_below, o1)
    down = _transitive(b, boxed, both, psi, b.part(a5, 0), both_below)
    return up, down


def _right_transparency(phi, psi) -> Proof:
    b = ProofBuilder("lPAI")
    boxed = formula.Arrow(formula.tau(psi), psi)
    up, down = _box_transparency(b, psi)
    o2 = b.axiom("O2", A=phi, B=psi, C=boxed)
    forward = b.conclude(formula.implies(_prec(b, phi, psi), _prec(b, phi, boxed)), [up, o2])
    o2 = b.axiom("O2", A=phi, B=boxed, C=psi)
    backward = b.conclude(formula.implies(_prec(b, phi, boxed), _prec(b, phi, psi)), [down, o2])
    goal = formula.iff(_prec(b, phi, psi), _prec(b, phi, boxed))
    b.conclude(goal, [forward, backward])
    return b.proof(goal)


def _left_transparency(phi, psi) -> Proof:
    b = ProofBuilder("lPAI")
    boxed = formula.Arrow(formula.tau(phi), phi)
    up, down = _box_transparency(b, phi)
    o2 = b.axiom("O2", A=boxed, B=phi, C=psi)
    forward = b.conclude(formula.implies(_prec(b, phi, psi), _prec(b, boxed, psi)), [down, o2])
    o2 = b.axiom("O2", A=phi, B=boxed, C=psi)
    backward = b.conclude(formula.implies(_prec(b, boxed, psi), _prec(b, phi, psi)), [up, o2])
    goal = formula.iff(_prec(b, phi, psi), _prec(b, boxed, psi))
    b.conclude(goal, [forward, backward])
    return b.proof(goal)


def _arrow_modus_ponens(phi, psi) -> Proof:
    """φ, φ→ψ ⊢ ψ from A4 and T."""
    premises = [phi, formula.Arrow(phi, psi)]
    b = ProofBuilder("PAI0", premises)
    p = b.premise(phi)
    arrow = b.premise(premises[1])
    a4 = b.axiom("A4", A=phi, B=psi)
    strict = b.conclude(formula.Box(formula.implies(phi, psi)), [arrow, a4])
    t = b.axiom("T", A=formula.implies(phi, psi))
    b.conclude(psi, [p, strict, t])
    return b.proof(psi)


def _conjunction_below(phi, psi, chi) -> Proof:
    """((φ≺χ)∧(ψ≺χ)) ⊃ ((φ∧ψ)≺χ), without the variable inclusion schema."""
    b = ProofBuilder("lPAI")
    both = formula.Or(phi, psi)
    c1 = b.axiom("C1", A=phi, B=psi)
    left = _transitive(b, formula.Neg(phi), phi, both, _negation_below(b, phi), b.part(c1, 0))
    right = _transitive(b, formula.Neg(psi), psi, both, _negation_below(b, psi), b.part(c1, 1))
    negs = formula.Or(formula.Neg(phi), formula.Neg(psi))
    negs_below = _union_upper(b, formula.Neg(phi), formula.Neg(psi), both, left, right)
    meet = formula.conj(phi, psi)
    meet_below = _transitive(b, meet, negs, both, _negation_below(b, negs), negs_below)

    c2 = b.axiom("C2", A=phi, B=psi, C=chi)
    o2 = b.axiom("O2", A=meet, B=both, C=chi)
    hypothesis = formula.conj(_prec(b, phi, chi), _prec(b, psi, chi))
    goal = formula.implies(hypothesis, _prec(b, meet, chi))
    b.conclude(goal, [meet_below, c2, o2])
    return b.proof(goal)


def derive_variable_inclusion(phi, psi, calc = "lPAI") -> Proof:
    """A proof of φ≺ψ from O1, O4, O5, C1, C2, A5 and O2, when Var(φ) ⊆ Var(ψ).

    First p≺β for every atom p of φ and every subformula β of ψ containing p,
    then α≺ψ for every subformula α of φ.

    Raises:
        DerivationError: if φ has an atom not in ψ.
    """
    b = ProofBuilder(calc)
    extra = formula.variables(phi) - formula.variables(psi)
    if extra:
        raise exceptions.DerivationError(f"Atoms {sorted(extra)} of `{formula.to_text(phi)}` do not occur in `{formula.to_text(psi)}`.")

    def join_above(x, left, right, below: int, k: int) -> int:
        """x≺(left∨right) from x≺left (k=0) or x≺right (k=1)."""
        c1 = b.axiom("C1", A=left, B=right)
        return _transitive(b, x, (left, right)[k], formula.Or(left, right), below, b.part(c1, k))

    above = {}
    def atom_below(p, beta) -> int:
        key = (p, beta)
        if key in above:
            return above[key]
        match beta:
            case formula.Atom(_):
                n = b.axiom("O1", A=p)
            case formula.Neg(sub):
                o4 = b.axiom("O4", A=p, B=sub)
                n = b.conclude(_prec(b, p, beta), [atom_below(p, sub), b.part(o4, 0)])
            case formula.Box(sub):
                o5 = b.axiom("O5", A=p, B=sub)
                n = b.conclude(_prec(b, p, beta), [atom_below(p, sub), b.part(o5, 0)])
            case formula.Or(left, right) | formula.Arrow(left, right):
                k = 0 if p.name in formula.variables(left) else 1
                n = join_above(p, left, right, atom_below(p, (left, right)[k]), k)
                if isinstance(beta, formula.Arrow):
                    a5 = b.axiom("A5", A=left, B=right)
                    n = _transitive(b, p, formula.Or(left, right), beta, n, b.part(a5, 1))
        above[key] = n
        return n

    below = {}
    def sub_below(alpha) -> int:
        if alpha in below:
            return below[alpha]
        match alpha:
            case formula.Atom(_):
                n = atom_below(alpha, psi)
            case formula.Neg(sub):
                o4 = b.axiom("O4", A=sub, B=psi)
                n = b.conclude(_prec(b, alpha, psi), [sub_below(sub), b.part(o4, 1)])
            case formula.Box(sub):
                o5 = b.axiom("O5", A=sub, B=psi)
                n = b.conclude(_prec(b, alpha, psi), [sub_below(sub), b.part(o5, 1)])
            case formula.Or(left, right) | formula.Arrow(left, right):
                n = _union_upper(b, left, right, psi, sub_below(left), sub_below(right))
                if isinstance(alpha, formula.Arrow):
                    a5 = b.axiom("A5", A=left, B=right)
                    n = _transitive(b, alpha, formula.Or(left, right), psi, b.part(a5, 0), n)
        below[alpha] = n
        return n

    sub_below(phi)
    return b.proof(_prec(b, phi, psi))


##########################################################################
# Corpus.
##########################################################################

@dataclass
class CorpusItem:
    name: str
    calculus: str
    proof: Proof
    expect: Optional[Reason] = None   # None: the proof must be accepted

    @property
    def premises(self):
        return self.proof.premises

    @property
    def goal(self):
        return self.proof.goal


def derivation_corpus() -> list:
    """Machine-checked replays of derivations known to hold."""
    p, q, r = formula.Atom("p"), formula.Atom("q"), formula.Atom("r")
    return [
        CorpusItem("arrow-modus-ponens", "PAI0", _arrow_modus_ponens(p, q)),
        CorpusItem("box-transparency-right", "lPAI", _right_transparency(p, q)),
        CorpusItem("box-transparency-left", "lPAI", _left_transparency(p, q)),
        CorpusItem("conjunction-below", "lPAI", _conjunction_below(p, q, r)),
    ]


def inclusion_corpus(atoms = ("p", "q"), max_depth: int = 1, calc = "lPAI") -> list:
    """Proofs of φ≺ψ for every pair of formulae up to max_depth with Var(φ) ⊆ Var(ψ)."""
    calc = calculus(calc)
    pool = list(formula.formulae(atoms, max_depth, calc.language_mode))
    items = []
    for phi, psi in itertools.product(pool, repeat=2):
        if formula.variables(phi) <= formula.variables(psi):
            name = f"inclusion {formula.to_text(phi)} < {formula.to_text(psi)}"
            items.append(CorpusItem(name, calc.name, derive_variable_inclusion(phi, psi, calc)))
    return items


def necessitation_fixtures() -> list:
    """p ⊢ □p: refused with local necessitation, accepted with the global one."""
    p = formula.Atom("p")
    def lines(kind):
        return [Line(p, Justification(Kind.premise, (1,))), Line(formula.Box(p), Justification(kind, (1,)))]
    return [
        CorpusItem("nec-on-premise", "lPAI", Proof(lines(Kind.nec), [p], formula.Box(p)), Reason.nec_on_premise),
        CorpusItem("nec-g-on-premise", "PAI", Proof(lines(Kind.nec_g), [p], formula.Box(p))),
    ]


def with_global_necessitation(proof: Proof) -> Proof:
    """The same proof, every Nec line justified by Nec_g instead."""
    lines = [Line(l.formula, Justification(Kind.nec_g, l.justification.args)) if l.justification.kind == Kind.nec else l
             for l in proof.lines]
    return Proof(lines, list(proof.premises), proof.goal)
