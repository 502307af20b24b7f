import logging
from abc import ABCMeta, abstractmethod
from dataclasses import dataclass
from typing import Optional

import numpy as np
import pandas as pd
import pandera as pa
from pandera import Column, Check


@dataclass(frozen=True)
class Report:
    """Outcome of a validation: either ok, or the first failing equation with its witness tuple."""
    equation: Optional[str] = None
    witness: Optional[tuple] = None

    @property
    def ok(self):
        return self.equation is None

    def __bool__(self):
        return self.ok

    def __str__(self):
        if self.ok:
            return "ok"
        return f"violation of {self.equation} at {self.witness}"


class Validator(metaclass=ABCMeta):
    """Class used for data validation against a schema. The class uses the Pandera package to validate the data frame."""

    def __init__(self, validation_rules: pa.DataFrameSchema = None):
        """Constructor for the Validator class.

        Args:
            validation_rules: The schema used for validation.
        """

        self.validation_rules: pa.DataFrameSchema = validation_rules

    def __call__(self, df):
        """
        Validate the data frame against the schema.

        Args:
            df: The data frame to validate.

        Returns:
            bool: True if the data frame is valid, False otherwise.
        """
        if self.validation_rules:
            try:
                self.validation_rules.validate(df, lazy=True)
                return True
            except pa.errors.SchemaErrors as exc:
                logging.error(f"Validation failed with error: {exc.failure_cases}.")
                return False
            except pa.errors.SchemaError as exc:
                logging.error(f"Validation failed with error: {exc}.")
                return False
        else:
            raise ValueError("No schema provided for validation.")


class TableValidator(Validator):
    """Validate an operation table ingested from a file.

    The table must have the expected number of rows and columns,
    hold integers only, and stay within the carrier [0, size-1].
    """

    def __init__(self, size: int, arity: int = 2):
        self.size = size
        self.arity = arity
        ncols = size if arity == 2 else 1
        rules = pa.DataFrameSchema(
            {str(j): Column(int, checks=[Check.in_range(0, size-1)], nullable=False) for j in range(ncols)},
            checks=[Check(lambda df: len(df) == size, error=f"expected {size} rows")],
            strict=True,
        )
        super().__init__(rules)

    def frame(self, table):
        """Wrap the table in a data frame with string column labels."""
        if self.arity == 1:
            df = pd.DataFrame({"0": list(table)})
        else:
            df = pd.DataFrame([list(row) for row in table])
        df.columns = [str(c) for c in df.columns]
        return df

    def __call__(self, table):
        try:
            df = self.frame(table)
        except (TypeError, ValueError) as e:
            logging.error(f"Cannot read table: {e}")
            return False
        return super().__call__(df)


class LawValidator(metaclass=ABCMeta):
    """Exhaustive check of equations over a finite carrier.

    Each law is a function returning a boolean numpy array
    indexed by the tuples of elements, True where the equation holds.
    """

    @abstractmethod
    def laws(self, algebra):
        raise NotImplementedError

    def __call__(self, algebra) -> Report:
        for name, holds in self.laws(algebra):
            holds = np.asarray(holds)
            if not holds.all():
                witness = tuple(int(i) for i in np.argwhere(~holds)[0]) if holds.ndim > 0 else ()
                logging.debug(f"\tLaw `{name}` fails at {witness}")
                return Report(name, witness)
        return Report()


def _grids(n):
    a = np.arange(n)
    return a, a[:,None], a[None,:], a[:,None,None], a[None,:,None], a[None,None,:]


class BooleanLaws(LawValidator):
    """Equational basis of Boolean algebras."""

    def laws(self, t):
        J, M, N = t.join, t.meet, t.neg
        a, x, y, X, Y, Z = _grids(t.size)
        yield "join associativity (x∨y)∨z=x∨(y∨z)", J[J[X,Y],Z] == J[X,J[Y,Z]]
        yield "meet associativity (x∧y)∧z=x∧(y∧z)", M[M[X,Y],Z] == M[X,M[Y,Z]]
        yield "join commutativity x∨y=y∨x", J[x,y] == J[y,x]
        yield "meet commutativity x∧y=y∧x", M[x,y] == M[y,x]
        yield "absorption x∨(x∧y)=x", J[x,M[x,y]] == x
        yield "absorption x∧(x∨y)=x", M[x,J[x,y]] == x
        yield "distributivity x∧(y∨z)=(x∧y)∨(x∧z)", M[X,J[Y,Z]] == J[M[X,Y],M[X,Z]]
        yield "bottom x∨0=x", J[a,t.zero] == a
        yield "top x∧1=x", M[a,t.one] == a
        yield "complement x∨¬x=1", J[a,N[a]] == t.one
        yield "complement x∧¬x=0", M[a,N[a]] == t.zero


class InteriorLaws(LawValidator):
    """Equations of the interior operator, on top of a Boolean algebra."""

    def laws(self, t):
        M, B = t.meet, t.box
        a, x, y, X, Y, Z = _grids(t.size)
        yield "EqK1 □1=1", np.array(B[t.one] == t.one)
        yield "EqK2 □(x∧y)=□x∧□y", B[M[x,y]] == M[B[x],B[y]]
        yield "EqT □x∧x=□x", M[B[a],a] == B[a]
        yield "Eq4 □x∧□□x=□x", M[B[a],B[B[a]]] == B[a]


class SemilatticeLaws(LawValidator):
    """A join-semilattice: associative, commutative, idempotent."""

    def laws(self, c):
        J = c.join
        a, x, y, X, Y, Z = _grids(c.size)
        yield "join associativity (x⊕y)⊕z=x⊕(y⊕z)", J[J[X,Y],Z] == J[X,J[Y,Z]]
        yield "join commutativity x⊕y=y⊕x", J[x,y] == J[y,x]
        yield "join idempotence x⊕x=x", J[a,a] == a


class PreorderLaws(LawValidator):
    """S4 frames: reflexive and transitive reachability."""

    def laws(self, frame):
        R = frame.reach
        yield "reflexivity xRx", np.diagonal(R)
        yield "transitivity xRy∧yRz⇒xRz", ~(R[:,:,None] & R[None,:,:]) | R[:,None,:]
