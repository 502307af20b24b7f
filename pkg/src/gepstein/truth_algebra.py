"""Finite Boolean and interior algebras of truth values.

Elements are dense integer ids.
Powerset algebras encode a subset as the bitmask of its members,
bit i standing for the i-th label.
"""

import logging
from typing import Optional

import numpy as np

from . import base
from . import validate
from . import exceptions

# Largest carrier checked exhaustively.
CARRIER_BOUND = 64
# Largest set of atoms (or worlds) of a powerset algebra.
POWERSET_BOUND = 5


class PreorderFrame:
    """A finite frame ⟨W,R⟩, worlds being labelled indices 0..n-1."""

    def __init__(self, reach, worlds: Optional[list] = None):
        self._reach = np.array(reach, dtype=bool)
        if self._reach.ndim != 2 or self._reach.shape[0] != self._reach.shape[1] or self._reach.shape[0] == 0:
            raise exceptions.FrameError(f"The reachability relation must be a non-empty square matrix, not of shape {self._reach.shape}.")
        self._reach.setflags(write=False)
        n = self._reach.shape[0]
        if worlds is None:
            worlds = [f"w{i}" for i in range(n)]
        if len(worlds) != n or len(set(worlds)) != n:
            raise exceptions.FrameError(f"Expected {n} distinct world labels, got {worlds}.")
        self._worlds = tuple(str(w) for w in worlds)

    @property
    def size(self):
        return len(self._worlds)

    @property
    def worlds(self):
        return self._worlds

    @property
    def reach(self):
        return self._reach

    def index(self, world):
        """Index of a world given by its label (or already by its index)."""
        if isinstance(world, str):
            try:
                return self._worlds.index(world)
            except ValueError:
                raise exceptions.FrameError(f"Unknown world `{world}` (worlds: {self._worlds}).")
        w = int(world)
        if not 0 <= w < self.size:
            raise exceptions.FrameError(f"World index {w} out of [0,{self.size-1}].")
        return w

    def successors(self, w):
        return np.flatnonzero(self._reach[w])

    @property
    def successor_masks(self):
        """Bitmask of R[x], for each world x."""
        weights = 1 << np.arange(self.size)
        return (self._reach * weights[None,:]).sum(axis=1)

    def validate(self) -> validate.Report:
        return validate.PreorderLaws()(self)

    def upward_closure(self, roots) -> list:
        """Sorted indices of the worlds reachable from the roots."""
        roots = [self.index(r) for r in roots]
        return sorted(set(np.flatnonzero(self._reach[roots].any(axis=0))) | set(roots))

    def restrict(self, kept):
        """The subframe on the given world indices, keeping their labels."""
        kept = sorted(kept)
        return PreorderFrame(self._reach[np.ix_(kept, kept)], [self._worlds[i] for i in kept])

    def key(self):
        """Flattened reach matrix, ordering frames of the same size lexicographically."""
        return tuple(int(b) for b in self._reach.flatten())

    def to_dict(self):
        return {"worlds": list(self._worlds), "reach": self._reach.tolist()}

    def __eq__(self, other):
        return isinstance(other, PreorderFrame) and self._worlds == other._worlds and np.array_equal(self._reach, other._reach)

    def __hash__(self):
        return hash((self._worlds, self.key()))

    def __repr__(self):
        return f"<[PreorderFrame:{self.size}:{self.key()}]>"


class TruthAlgebra(base.FiniteAlgebra):
    """A finite Boolean algebra, with an optional interior operator □."""

    def __init__(self, join, meet, neg, zero: int, one: int, box = None, labels: Optional[list] = None, frame: Optional[PreorderFrame] = None):
        """Build from trusted tables; use `from_tables` for unchecked input.

        Args:
            join, meet: binary tables.
            neg: complement table.
            zero, one: bounds.
            box: interior operator table, None for a pure Boolean algebra.
            labels: for powerset algebras, the member standing for each bit.
            frame: for complex algebras, the generating frame.
        """
        self.join = np.asarray(join, dtype=np.int64)
        self.meet = np.asarray(meet, dtype=np.int64)
        self.neg = np.asarray(neg, dtype=np.int64)
        self.box = None if box is None else np.asarray(box, dtype=np.int64)
        super().__init__(len(self.neg))
        for table in (self.join, self.meet, self.neg, self.box):
            if table is not None:
                table.setflags(write=False)
        self.zero = int(zero)
        self.one = int(one)
        self.labels = None if labels is None else tuple(labels)
        self.frame = frame

    @classmethod
    def from_tables(cls, join, meet, neg, zero, one, box = None, error_manager = None):
        """Build and validate an algebra from explicit tables.

        Raises:
            AlgebraError: if a table is malformed or an equation fails.
        """
        errors = error_manager or base.ErrorManager()
        n = len(neg) if hasattr(neg, "__len__") else 0
        if not 0 < n <= CARRIER_BOUND:
            errors.error(f"Truth carrier size {n} out of [1,{CARRIER_BOUND}].", section="truth", exception=exceptions.AlgebraError)
        for name, table, arity in [("join", join, 2), ("meet", meet, 2), ("not", neg, 1)] + ([("box", box, 1)] if box is not None else []):
            if not validate.TableValidator(n, arity)(table):
                errors.error(f"Malformed `{name}` table for a carrier of size {n}.", section="truth", exception=exceptions.AlgebraError)
        for name, x in (("zero", zero), ("one", one)):
            if not (isinstance(x, int) and 0 <= x < n):
                errors.error(f"The `{name}` element {x} is out of the carrier.", section="truth", exception=exceptions.AlgebraError)
        algebra = cls(join, meet, neg, zero, one, box)
        report = algebra.validate()
        if not report.ok:
            msg = f"Not an {'interior' if box is not None else 'Boolean'} algebra: {report}."
            logging.error(msg)
            raise exceptions.AlgebraError(msg, report)
        return algebra

    @property
    def has_box(self):
        return self.box is not None

    def validate(self) -> validate.Report:
        """First failing Boolean or interior equation, if any."""
        if self.size > CARRIER_BOUND:
            raise exceptions.BoundsError(f"Cannot validate a carrier of size {self.size} > {CARRIER_BOUND}.")
        report = validate.BooleanLaws()(self)
        if report.ok and self.has_box:
            report = validate.InteriorLaws()(self)
        return report

    def leq(self, x, y) -> bool:
        x = self.check(x)
        y = self.check(y)
        return int(self.join[x,y]) == y

    def meet_all(self, elements):
        """Meet of a finite family, 1 for the empty family."""
        result = self.one
        for x in elements:
            result = int(self.meet[result, self.check(x)])
        return result

    def as_set(self, x) -> list:
        """The labels of the members of a powerset element."""
        x = self.check(x)
        if self.labels is None:
            raise exceptions.AlgebraError("Elements of this algebra are not sets.")
        return [l for i,l in enumerate(self.labels) if x >> i & 1]

    def from_set(self, members) -> int:
        if self.labels is None:
            raise exceptions.AlgebraError("Elements of this algebra are not sets.")
        mask = 0
        for m in members:
            if isinstance(m, str):
                if m not in self.labels:
                    raise exceptions.AssignmentError(f"`{m}` is not one of {self.labels}.")
                mask |= 1 << self.labels.index(m)
            else:
                if not 0 <= int(m) < len(self.labels):
                    raise exceptions.AssignmentError(f"Member index {m} out of [0,{len(self.labels)-1}].")
                mask |= 1 << int(m)
        return mask

    def to_dict(self):
        return {
            "carrier": self.size,
            "join": self.join.tolist(),
            "meet": self.meet.tolist(),
            "not": self.neg.tolist(),
            "box": None if self.box is None else self.box.tolist(),
            "zero": self.zero,
            "one": self.one,
        }


def _powerset_tables(n):
    a = np.arange(2**n)
    full = 2**n - 1
    return a[:,None] | a[None,:], a[:,None] & a[None,:], full ^ a, full


def powerset_algebra(atoms) -> TruthAlgebra:
    """The Boolean algebra of the subsets of the given atoms, without □.

    Raises:
        AlgebraError: on an empty set of atoms.
        BoundsError: above POWERSET_BOUND atoms.
    """
    labels = sorted(str(a) for a in atoms)
    if len(labels) == 0:
        raise exceptions.AlgebraError("A powerset algebra needs at least one atom.")
    if len(labels) > POWERSET_BOUND:
        raise exceptions.BoundsError(f"Powerset of {len(labels)} atoms exceeds the bound of {POWERSET_BOUND}.")
    join, meet, neg, full = _powerset_tables(len(labels))
    return TruthAlgebra(join, meet, neg, 0, full, labels = labels)


def boolean_algebra(n_worlds: int) -> TruthAlgebra:
    """Pure Boolean algebra of the subsets of n worlds labelled w0..w(n-1)."""
    algebra = powerset_algebra([f"w{i}" for i in range(n_worlds)])
    return algebra


def complex_algebra(frame: PreorderFrame) -> TruthAlgebra:
    """Powerset algebra of the worlds with □S = {x ∈ S | R[x] ⊆ S}.

    Raises:
        FrameError: if the frame is not S4.
    """
    report = frame.validate()
    if not report.ok:
        raise exceptions.FrameError(f"Not an S4 frame: {report}.")
    n = frame.size
    if n > POWERSET_BOUND:
        raise exceptions.BoundsError(f"Complex algebra of {n} worlds exceeds the bound of {POWERSET_BOUND}.")
    join, meet, neg, full = _powerset_tables(n)
    S = np.arange(2**n)
    box = np.zeros(2**n, dtype=np.int64)
    for x, succ in enumerate(frame.successor_masks):
        inside = (S >> x) & 1
        closed = (int(succ) & ~S) == 0
        box |= np.where(inside.astype(bool) & closed, 1 << x, 0)
    return TruthAlgebra(join, meet, neg, 0, full, box = box, labels = frame.worlds, frame = frame)


def discrete_frame(n: int) -> PreorderFrame:
    return PreorderFrame(np.eye(n, dtype=bool))


def discrete_algebra(n: int) -> TruthAlgebra:
    """Complex algebra of n isolated reflexive worlds: □ is the identity."""
    return complex_algebra(discrete_frame(n))
