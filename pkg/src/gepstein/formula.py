"""Object language of analytic implication.

Formulae are built over the primitive connectives ⟨¬,∨,□,→⟩.
The derived connectives (∧, ⊃, ≡, ≺, τ) are abbreviations,
expanded when parsing or when calling the constructors of this module,
so that an AST never stores them.

The concrete grammar accepts both ASCII and UTF-8 symbols:

    ============  =======  =====
    connective    ASCII    UTF-8
    ============  =======  =====
    negation      ~        ¬
    necessity     []       □
    tautology     tau      τ
    conjunction   /\\      ∧
    disjunction   \\/      ∨
    arrow         ->       →
    material      =>       ⊃
    equivalence   <->      ≡
    precedence    <        ≺
    ============  =======  =====

Unary connectives bind tighter than ∧, then ∨, then →/⊃, then ≡/≺.
All binary connectives are right-associative.
Lowercase identifiers are atoms, uppercase identifiers are metavariables.
"""

import re
import logging
import itertools
from dataclasses import dataclass
from abc import ABCMeta as ABSTRACT
from typing import Optional

import lark

from . import base
from . import exceptions


ATOM_NAME = re.compile(r"[a-z][a-z0-9_]*")
RESERVED = ("tau",)


class Formula(metaclass = ABSTRACT):
    """Base class of the nodes of the formula AST."""

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True, repr=False)
class Atom(Formula):
    name: str

    def __post_init__(self):
        if self.name in RESERVED or not ATOM_NAME.fullmatch(self.name):
            raise exceptions.FormulaSyntaxError(f"`{self.name}` cannot name an atom, atoms are lowercase identifiers other than {', '.join(RESERVED)}.", self.name)

    def __repr__(self):
        return f"Atom({self.name})"


@dataclass(frozen=True, repr=False)
class Meta(Formula):
    """A schema metavariable."""
    name: str

    def __repr__(self):
        return f"Meta({self.name})"


@dataclass(frozen=True, repr=False)
class Neg(Formula):
    sub: Formula

    def __repr__(self):
        return f"Neg({self.sub!r})"


@dataclass(frozen=True, repr=False)
class Box(Formula):
    sub: Formula

    def __repr__(self):
        return f"Box({self.sub!r})"


@dataclass(frozen=True, repr=False)
class Or(Formula):
    left: Formula
    right: Formula

    def __repr__(self):
        return f"Or({self.left!r}, {self.right!r})"


@dataclass(frozen=True, repr=False)
class Arrow(Formula):
    left: Formula
    right: Formula

    def __repr__(self):
        return f"Arrow({self.left!r}, {self.right!r})"


UNARY = (Neg, Box)
BINARY = (Or, Arrow)


class ContentTerm(metaclass = ABSTRACT):
    """Base class of the terms of the content language ⟨⊕,⊙⟩."""
    pass


@dataclass(frozen=True)
class TAtom(ContentTerm):
    name: str


@dataclass(frozen=True)
class Join(ContentTerm):
    left: ContentTerm
    right: ContentTerm


@dataclass(frozen=True)
class Gru(ContentTerm):
    left: ContentTerm
    right: ContentTerm


##########################################################################
# Derived connectives.
##########################################################################

def conj(a, b):
    """a∧b := ¬(¬a∨¬b)"""
    return Neg(Or(Neg(a), Neg(b)))

def implies(a, b):
    """a⊃b := ¬a∨b"""
    return Or(Neg(a), b)

def iff(a, b):
    """a≡b := (a⊃b)∧(b⊃a)"""
    return conj(implies(a, b), implies(b, a))

def tau(a):
    """τa := a∨¬a"""
    return Or(a, Neg(a))

def precedes(a, b, precedence = base.Precedence.consequent):
    """a≺b, the content of a is included in the content of b.

    The abbreviation depends on the direction of the content test of the arrow:
    with the consequent below the antecedent, a≺b := b→τa;
    with the antecedent below the consequent, a≺b := a→τb;
    with content equality, a≺b := (a∨b)→τb.
    """
    precedence = base.Precedence(precedence)
    if precedence == base.Precedence.consequent:
        return Arrow(b, tau(a))
    elif precedence == base.Precedence.antecedent:
        return Arrow(a, tau(b))
    else:
        return Arrow(Or(a, b), tau(b))

def conj_all(formulas):
    """Right-nested conjunction of a non-empty list."""
    assert(len(formulas) > 0)
    result = formulas[-1]
    for f in reversed(formulas[:-1]):
        result = conj(f, result)
    return result

def implies_all(antecedents, goal):
    """a1⊃(a2⊃(…⊃goal))"""
    result = goal
    for f in reversed(antecedents):
        result = implies(f, result)
    return result


##########################################################################
# Parser.
##########################################################################

GRAMMAR = r"""
    ?start: equiv

    ?equiv: arrow
          | arrow _IFF equiv    -> iff
          | arrow _PREC equiv   -> prec

    ?arrow: disj
          | disj _ARROW arrow   -> analytic
          | disj _IMPLIES arrow -> material

    ?disj: conj
         | conj _OR disj        -> lor

    ?conj: unary
         | unary _AND conj      -> land

    ?unary: _NOT unary          -> neg
          | _BOX unary          -> box
          | _TAU unary          -> tau
          | atom

    ?atom: NAME                 -> var
         | META                 -> meta
         | "(" equiv ")"

    _IFF: "<->" | "≡"
    _PREC: "<" | "≺"
    _ARROW: "->" | "→"
    _IMPLIES: "=>" | "⊃"
    _OR: "\\/" | "∨"
    _AND: "/\\" | "∧"
    _NOT: "~" | "¬"
    _BOX: "[]" | "□"
    _TAU.2: /tau\b/ | "τ"

    NAME: /[a-z][a-z0-9_]*/
    META: /[A-Z][A-Za-z0-9_]*/

    %import common.WS
    %ignore WS
"""

_parser = lark.Lark(GRAMMAR, parser = "lalr")


class Expand(lark.Transformer):
    """Build the primitive AST, expanding the derived connectives."""

    def __init__(self, language_mode, precedence):
        super().__init__()
        self.language_mode = base.LanguageMode(language_mode)
        self.precedence = base.Precedence(precedence)

    def var(self, items):
        return Atom(str(items[0]))

    def meta(self, items):
        return Meta(str(items[0]))

    def neg(self, items):
        return Neg(items[0])

    def box(self, items):
        if self.language_mode == base.LanguageMode.demodalized:
            raise exceptions.LanguageModeError(f"The necessity operator is not available in the demodalized language (in `{to_text(Box(items[0]))}`).")
        return Box(items[0])

    def tau(self, items):
        return tau(items[0])

    def land(self, items):
        return conj(items[0], items[1])

    def lor(self, items):
        return Or(items[0], items[1])

    def analytic(self, items):
        return Arrow(items[0], items[1])

    def material(self, items):
        return implies(items[0], items[1])

    def iff(self, items):
        return iff(items[0], items[1])

    def prec(self, items):
        return precedes(items[0], items[1], self.precedence)


def parse(text: str, language_mode = base.LanguageMode.modal, precedence = base.Precedence.consequent) -> Formula:
    """Parse a formula written in the concrete grammar.

    Args:
        text: the formula.
        language_mode: "modal" or "demodalized" (in which □ is rejected).
        precedence: direction of the content test, which fixes the expansion of ≺.

    Returns:
        The AST over the primitive connectives.

    Raises:
        FormulaSyntaxError: with the position of the offending token.
        LanguageModeError: if □ occurs in demodalized mode.
    """
    try:
        tree = _parser.parse(text)
    except lark.exceptions.UnexpectedInput as e:
        context = e.get_context(text).rstrip()
        msg = f"Syntax error in formula at line {e.line}, column {e.column}:\n{context}"
        logging.debug(msg)
        raise exceptions.FormulaSyntaxError(msg, text = text, line = e.line, column = e.column) from e
    except lark.exceptions.LarkError as e:
        raise exceptions.FormulaSyntaxError(f"Cannot parse formula `{text}`: {e}", text = text) from e

    try:
        return Expand(language_mode, precedence).transform(tree)
    except lark.exceptions.VisitError as e:
        if isinstance(e.orig_exc, exceptions.GEpsteinError):
            raise e.orig_exc
        raise


##########################################################################
# Printer.
##########################################################################

_ascii = {"neg": "~", "box": "[]", "or": "\\/", "arrow": "->"}
_utf8 = {"neg": "¬", "box": "□", "or": "∨", "arrow": "→"}

def to_text(phi: Formula, unicode: bool = False) -> str:
    """Canonical fully parenthesized form, such that parse(to_text(φ)) == φ."""
    sym = _utf8 if unicode else _ascii
    match phi:
        case Atom(name) | Meta(name):
            return name
        case Neg(sub):
            return sym["neg"] + to_text(sub, unicode)
        case Box(sub):
            return sym["box"] + to_text(sub, unicode)
        case Or(left, right):
            return f"({to_text(left, unicode)} {sym['or']} {to_text(right, unicode)})"
        case Arrow(left, right):
            return f"({to_text(left, unicode)} {sym['arrow']} {to_text(right, unicode)})"
    raise TypeError(f"Not a formula: {phi!r}")


def term_to_text(t: ContentTerm) -> str:
    match t:
        case TAtom(name):
            return name
        case Join(left, right):
            return f"({term_to_text(left)} + {term_to_text(right)})"
        case Gru(left, right):
            return f"({term_to_text(left)} * {term_to_text(right)})"
    raise TypeError(f"Not a content term: {t!r}")


##########################################################################
# Syntactic operations.
##########################################################################

def variables(phi: Formula) -> frozenset:
    """Names of the atoms occurring in φ."""
    match phi:
        case Atom(name):
            return frozenset([name])
        case Meta(_):
            return frozenset()
        case Neg(sub) | Box(sub):
            return variables(sub)
        case Or(left, right) | Arrow(left, right):
            return variables(left) | variables(right)
    raise TypeError(f"Not a formula: {phi!r}")


def metavariables(phi: Formula) -> frozenset:
    match phi:
        case Meta(name):
            return frozenset([name])
        case Atom(_):
            return frozenset()
        case Neg(sub) | Box(sub):
            return metavariables(sub)
        case Or(left, right) | Arrow(left, right):
            return metavariables(left) | metavariables(right)
    raise TypeError(f"Not a formula: {phi!r}")


def term_atoms(t: ContentTerm) -> frozenset:
    match t:
        case TAtom(name):
            return frozenset([name])
        case Join(left, right) | Gru(left, right):
            return term_atoms(left) | term_atoms(right)
    raise TypeError(f"Not a content term: {t!r}")


def has_box(phi: Formula) -> bool:
    match phi:
        case Box(_):
            return True
        case Atom(_) | Meta(_):
            return False
        case Neg(sub):
            return has_box(sub)
        case Or(left, right) | Arrow(left, right):
            return has_box(left) or has_box(right)
    raise TypeError(f"Not a formula: {phi!r}")


def check_language(phi: Formula, language_mode):
    """Raise a LanguageModeError if φ uses □ in the demodalized language."""
    if base.LanguageMode(language_mode) == base.LanguageMode.demodalized and has_box(phi):
        raise exceptions.LanguageModeError(f"The necessity operator is not available in the demodalized language (in `{to_text(phi)}`).")


def depth(phi: Formula) -> int:
    match phi:
        case Atom(_) | Meta(_):
            return 0
        case Neg(sub) | Box(sub):
            return 1 + depth(sub)
        case Or(left, right) | Arrow(left, right):
            return 1 + max(depth(left), depth(right))
    raise TypeError(f"Not a formula: {phi!r}")


def subformulae(phi: Formula, into: Optional[dict] = None) -> list:
    """Distinct subformulae of φ, children before parents."""
    seen = {} if into is None else into
    stack = [(phi, False)]
    while stack:
        f, expanded = stack.pop()
        if f in seen:
            continue
        if expanded or isinstance(f, (Atom, Meta)):
            seen[f] = None
        else:
            stack.append((f, True))
            if isinstance(f, UNARY):
                stack.append((f.sub, False))
            else:
                stack.append((f.right, False))
                stack.append((f.left, False))
    return list(seen)


def translate(phi: Formula, translation_mode = base.TranslationMode.fused) -> ContentTerm:
    """The map N from formulae to content terms.

    ¬ and □ are transparent, ∨ is a join,
    → is the groupoid operation ⊙ in agnostic mode and a join in fused mode.
    """
    mode = base.TranslationMode(translation_mode)
    match phi:
        case Atom(name) | Meta(name):
            return TAtom(name)
        case Neg(sub) | Box(sub):
            return translate(sub, mode)
        case Or(left, right):
            return Join(translate(left, mode), translate(right, mode))
        case Arrow(left, right):
            if mode == base.TranslationMode.agnostic:
                return Gru(translate(left, mode), translate(right, mode))
            else:
                return Join(translate(left, mode), translate(right, mode))
    raise TypeError(f"Not a formula: {phi!r}")


def substitute(schema: Formula, binding: dict) -> Formula:
    """Simultaneous substitution of the metavariables of the schema.

    Raises:
        SubstitutionError: if a metavariable is not bound.
    """
    match schema:
        case Meta(name):
            if name not in binding:
                raise exceptions.SubstitutionError(f"Metavariable `{name}` is not bound (bound: {sorted(binding)}).")
            return binding[name]
        case Atom(_):
            return schema
        case Neg(sub):
            return Neg(substitute(sub, binding))
        case Box(sub):
            return Box(substitute(sub, binding))
        case Or(left, right):
            return Or(substitute(left, binding), substitute(right, binding))
        case Arrow(left, right):
            return Arrow(substitute(left, binding), substitute(right, binding))
    raise TypeError(f"Not a formula: {schema!r}")


def match(schema: Formula, phi: Formula, binding: Optional[dict] = None) -> Optional[dict]:
    """Find the binding making the schema equal to φ, or None.

    The binding is unique on the metavariables of the schema.
    An initial partial binding may be given.
    """
    bound = dict(binding) if binding else {}
    stack = [(schema, phi)]
    while stack:
        s, f = stack.pop()
        if isinstance(s, Meta):
            if s.name in bound:
                if bound[s.name] != f:
                    return None
            else:
                bound[s.name] = f
        elif isinstance(s, Atom):
            if s != f:
                return None
        elif type(s) is not type(f):
            return None
        elif isinstance(s, UNARY):
            stack.append((s.sub, f.sub))
        else:
            stack.append((s.right, f.right))
            stack.append((s.left, f.left))
    return bound


def formulae(atoms, max_depth: int, language_mode = base.LanguageMode.modal):
    """All formulae over the given atoms, of depth at most max_depth.

    Yields by increasing depth, in a deterministic order.
    """
    modal = base.LanguageMode(language_mode) == base.LanguageMode.modal
    levels = [[Atom(a) for a in sorted(atoms)]]
    yield from levels[0]
    below = list(levels[0])
    for d in range(1, max_depth+1):
        previous = levels[-1]
        level = []
        for f in previous:
            level.append(Neg(f))
            if modal:
                level.append(Box(f))
        # Binary nodes having at least one child at the previous depth.
        for l, r in itertools.product(below, repeat=2):
            if depth(l) == d-1 or depth(r) == d-1:
                level.append(Or(l, r))
                level.append(Arrow(l, r))
        levels.append(level)
        below = below + level
        yield from level
