"""Finite join-semilattices of topics, with an optional groupoid operation ⊙."""

import logging
import itertools
import functools
from typing import Optional

import numpy as np

from . import base
from . import formula
from . import validate
from . import exceptions

# Largest semilattice enumerated.
SEMILATTICE_BOUND = 5
# Largest reference set of a powerset semilattice.
UNIVERSE_BOUND = 5


class ContentAlgebra(base.FiniteAlgebra):
    """A join-semilattice ⟨S,⊕⟩, extended with ⊙ when `gru` is given.

    No law is imposed on ⊙.
    """

    def __init__(self, join, gru = None, labels: Optional[list] = None):
        self.join = np.asarray(join, dtype=np.int64)
        self.gru = None if gru is None else np.asarray(gru, dtype=np.int64)
        super().__init__(len(self.join))
        self.join.setflags(write=False)
        if self.gru is not None:
            self.gru.setflags(write=False)
        self.labels = None if labels is None else tuple(labels)
        self._order = None

    @classmethod
    def from_tables(cls, join, gru = None, error_manager = None):
        """Build and validate a content algebra from explicit tables.

        Raises:
            AlgebraError: on malformed tables or failing semilattice laws.
        """
        errors = error_manager or base.ErrorManager()
        n = len(join) if hasattr(join, "__len__") else 0
        if n == 0:
            errors.error("Empty content carrier.", section="content", exception=exceptions.AlgebraError)
        if not validate.TableValidator(n)(join):
            errors.error(f"Malformed `join` table for a carrier of size {n}.", section="content", exception=exceptions.AlgebraError)
        if gru is not None and not validate.TableValidator(n)(gru):
            errors.error(f"Malformed `gru` table for a carrier of size {n}.", section="content", exception=exceptions.AlgebraError)
        algebra = cls(join, gru)
        report = algebra.validate()
        if not report.ok:
            msg = f"Not a join-semilattice: {report}."
            logging.error(msg)
            raise exceptions.AlgebraError(msg, report)
        return algebra

    @property
    def has_gru(self):
        return self.gru is not None

    def validate(self) -> validate.Report:
        return validate.SemilatticeLaws()(self)

    @property
    def order(self):
        """Boolean matrix of x ≤ y, that is x⊕y = y."""
        if self._order is None:
            self._order = self.join == np.arange(self.size)[None,:]
            self._order.setflags(write=False)
        return self._order

    def leq(self, x, y) -> bool:
        x = self.check(x)
        y = self.check(y)
        return bool(self.order[x,y])

    def with_gru(self, gru):
        return ContentAlgebra(self.join, gru, self.labels)

    def without_gru(self):
        return ContentAlgebra(self.join, None, self.labels)

    def key(self):
        k = tuple(int(v) for v in self.join.flatten())
        if self.gru is not None:
            k += tuple(int(v) for v in self.gru.flatten())
        return k

    def as_set(self, x) -> list:
        x = self.check(x)
        if self.labels is None:
            raise exceptions.AlgebraError("Elements of this algebra are not sets.")
        return [l for i,l in enumerate(self.labels) if x >> i & 1]

    def to_dict(self):
        return {
            "carrier": self.size,
            "join": self.join.tolist(),
            "gru": None if self.gru is None else self.gru.tolist(),
        }

    def __eq__(self, other):
        return isinstance(other, ContentAlgebra) and self.key() == other.key() and self.has_gru == other.has_gru

    def __hash__(self):
        return hash(self.key())


def leq(B: ContentAlgebra, x, y) -> bool:
    return B.leq(x, y)


def eval_content(B: ContentAlgebra, s: dict, t: formula.ContentTerm) -> int:
    """Homomorphic evaluation of a content term under the atom assignment s.

    Raises:
        AssignmentError: if an atom is not assigned.
        AlgebraError: on a ⊙ node against an algebra without ⊙.
    """
    match t:
        case formula.TAtom(name):
            if name not in s:
                raise exceptions.AssignmentError(f"Atom `{name}` has no content (assigned: {sorted(s)}).")
            return B.check(s[name], f"content of `{name}`")
        case formula.Join(left, right):
            return int(B.join[eval_content(B, s, left), eval_content(B, s, right)])
        case formula.Gru(left, right):
            if B.gru is None:
                raise exceptions.AlgebraError(f"Cannot evaluate `{formula.term_to_text(t)}` without a ⊙ table.")
            return int(B.gru[eval_content(B, s, left), eval_content(B, s, right)])
    raise TypeError(f"Not a content term: {t!r}")


##########################################################################
# Constructors.
##########################################################################

def chain(n: int, gru = None) -> ContentAlgebra:
    """The chain 0 < 1 < … < n-1."""
    a = np.arange(n)
    return ContentAlgebra(np.maximum(a[:,None], a[None,:]), gru)


def constant_gru(n: int, value: int):
    return np.full((n, n), value, dtype=np.int64)


def powerset_semilattice(universe) -> ContentAlgebra:
    """Subsets of a reference set under union, the empty set included."""
    labels = sorted(str(u) for u in universe)
    if len(labels) == 0:
        raise exceptions.AlgebraError("A powerset semilattice needs a non-empty reference set.")
    if len(labels) > UNIVERSE_BOUND:
        raise exceptions.BoundsError(f"Reference set of {len(labels)} items exceeds the bound of {UNIVERSE_BOUND}.")
    a = np.arange(2**len(labels))
    return ContentAlgebra(a[:,None] | a[None,:], labels = labels)


def union_assignment(universe, assignment: dict):
    """Ingest a set-assignment on variables.

    Args:
        universe: the reference set.
        assignment: atom name → iterable of members of the reference set.

    Returns:
        The powerset semilattice and the content assignment (bitmasks),
        whose extension to formulae is the union of the variables' sets.
    """
    B = powerset_semilattice(universe)
    s = {}
    for atom, members in assignment.items():
        mask = 0
        for m in members:
            if str(m) not in B.labels:
                raise exceptions.AssignmentError(f"`{m}` assigned to `{atom}` is not in the reference set {B.labels}.")
            mask |= 1 << B.labels.index(str(m))
        s[atom] = mask
    return B, s


def generated_subsemilattice(B: ContentAlgebra, generators):
    """Closure of the generators under ⊕ (and ⊙ when present).

    Returns:
        The renumbered sub-algebra and the map from old to new ids.
    """
    closure = set(B.check(g) for g in generators)
    if not closure:
        raise exceptions.AlgebraError("Cannot generate a sub-semilattice from no generator.")
    tables = [B.join] + ([B.gru] if B.gru is not None else [])
    frontier = set(closure)
    while frontier:
        new = set()
        for x, y in itertools.product(closure, repeat=2):
            if x in frontier or y in frontier:
                for table in tables:
                    z = int(table[x,y])
                    if z not in closure:
                        new.add(z)
        closure |= new
        frontier = new
    kept = sorted(closure)
    renum = {old: new for new, old in enumerate(kept)}
    join = [[renum[int(B.join[x,y])] for y in kept] for x in kept]
    gru = None
    if B.gru is not None:
        gru = [[renum[int(B.gru[x,y])] for y in kept] for x in kept]
    labels = None
    return ContentAlgebra(join, gru, labels), renum


def is_homomorphism(h, B: ContentAlgebra, C: ContentAlgebra) -> bool:
    """True if h (list: element of B → element of C) preserves ⊕, and ⊙ when both have it."""
    h = np.asarray(h, dtype=np.int64)
    if h.shape != (B.size,) or (h < 0).any() or (h >= C.size).any():
        return False
    if not (h[B.join] == C.join[h[:,None], h[None,:]]).all():
        return False
    if B.gru is not None and C.gru is not None:
        if not (h[B.gru] == C.gru[h[:,None], h[None,:]]).all():
            return False
    return True


##########################################################################
# Enumeration.
##########################################################################

def permute(table, p):
    """Relabel a table by the permutation p (old id i becomes p[i])."""
    p = np.asarray(p)
    inv = np.argsort(p)
    return p[table[np.ix_(inv, inv)]]


def canonical_form(B: ContentAlgebra) -> tuple:
    """Smallest key among the relabellings of B, equal for isomorphic algebras."""
    best = None
    for p in itertools.permutations(range(B.size)):
        k = tuple(int(v) for v in permute(B.join, p).flatten())
        if B.gru is not None:
            k += tuple(int(v) for v in permute(B.gru, p).flatten())
        if best is None or k < best:
            best = k
    return best


def _join_from_order(L):
    """Join table of a partial order given as a boolean matrix, None if some pair has no join."""
    n = len(L)
    join = np.zeros((n, n), dtype=np.int64)
    for x in range(n):
        for y in range(x, n):
            upper = np.flatnonzero(L[x] & L[y])
            least = [u for u in upper if L[u, upper].all()]
            if not least:
                return None
            join[x,y] = join[y,x] = least[0]
    return join


@functools.lru_cache(maxsize=None)
def _semilattice_tables(n: int, dedup_iso: bool) -> tuple:
    """Sorted join tables (flattened) of all semilattices on n elements."""
    pairs = [(i, j) for i in range(n) for j in range(i+1, n)]
    tables = set()
    # Every poset has a natural labelling (x < y implies x < y as ids),
    # so upper-triangular relations reach every isomorphism class.
    for bits in itertools.product((False, True), repeat=len(pairs)):
        L = np.eye(n, dtype=bool)
        for (i, j), b in zip(pairs, bits):
            L[i,j] = b
        if not ((L.astype(int) @ L.astype(int) > 0) <= L).all():
            continue
        join = _join_from_order(L)
        if join is None:
            continue
        if dedup_iso:
            tables.add(canonical_form(ContentAlgebra(join)))
        else:
            for p in itertools.permutations(range(n)):
                tables.add(tuple(int(v) for v in permute(join, p).flatten()))
    logging.debug(f"\t{len(tables)} semilattices of size {n} (dedup: {dedup_iso})")
    return tuple(sorted(tables))


def enumerate_semilattices(max_size: int = SEMILATTICE_BOUND, dedup_iso: bool = True, min_size: int = 1):
    """Yield every join-semilattice on carriers of size min_size..max_size.

    Ordered by size, then by table.

    Args:
        max_size: largest carrier.
        dedup_iso: yield one algebra per isomorphism class.
        min_size: smallest carrier.

    Raises:
        BoundsError: above SEMILATTICE_BOUND.
    """
    if max_size > SEMILATTICE_BOUND:
        raise exceptions.BoundsError(f"Cannot enumerate semilattices of size {max_size} > {SEMILATTICE_BOUND}.")
    for n in range(max(1, min_size), max_size+1):
        for flat in _semilattice_tables(n, dedup_iso):
            yield ContentAlgebra(np.array(flat).reshape(n, n))


def gru_tables(n: int):
    """Every binary table on n elements, in lexicographic order."""
    for flat in itertools.product(range(n), repeat=n*n):
        yield np.array(flat, dtype=np.int64).reshape(n, n)
