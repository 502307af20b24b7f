import logging
from enum import Enum, EnumMeta
from abc import ABCMeta as ABSTRACT
from abc import abstractmethod as abstract

from . import exceptions


class ErrorManager:
    def __init__(self, raise_errors = True):
        self.raise_errors = raise_errors

    def error(self, msg, section = None, index = None, exception = exceptions.RunError, indent = 0):
        location = ""
        if section:
            location = f" [for {section}"
            if index is not None:
                location += f" #{index}"
            location += "]"

        err = "\t"*indent
        err += msg
        err += location

        logging.error(err)

        if self.raise_errors:
            raise exception(err)

        return err


class MetaEnum(EnumMeta):
    """
    Metaclass for Enum to allow checking if an item is in the Enum.
    """

    def __contains__(cls, item):
        try:
            cls(item)
        except ValueError:
            return False
        return True


class Enumerable(Enum, metaclass=MetaEnum):
    """
    Base class for Enums with MetaEnum metaclass.
    """
    pass


class LanguageMode(str, Enumerable):
    """Connectives available in the object language."""
    modal = "modal"               # ⟨¬,∨,□,→⟩
    demodalized = "demodalized"   # ⟨¬,∨,→⟩


class TranslationMode(str, Enumerable):
    """How the content of an arrow is computed."""
    agnostic = "agnostic" # N(φ→ψ) = N(φ)⊙N(ψ)
    fused = "fused"       # N(φ→ψ) = N(φ)⊕N(ψ)


class Precedence(str, Enumerable):
    """Direction of the content test of the arrow, which also fixes how ≺ is expanded."""
    consequent = "consequent"   # s(consequent) ≤ s(antecedent)
    antecedent = "antecedent"   # s(antecedent) ≤ s(consequent)
    equality = "equality"


class FiniteAlgebra(metaclass = ABSTRACT):
    """Base class of the finite algebras, whose elements are the dense ids 0..size-1."""

    def __init__(self, size: int):
        assert(size > 0)
        self._size = int(size)

    @property
    def size(self):
        return self._size

    @property
    def carrier(self):
        return range(self._size)

    def check(self, x, what = "element"):
        """Raise an AssignmentError if x is not an id of the carrier."""
        if not isinstance(x, (int,)) and not hasattr(x, "__index__"):
            raise exceptions.AssignmentError(f"The {what} `{x}` is not an element id.")
        if not 0 <= int(x) < self._size:
            raise exceptions.AssignmentError(f"The {what} `{x}` is out of the carrier [0,{self._size-1}].")
        return int(x)

    @abstract
    def to_dict(self):
        raise NotImplementedError

    def __repr__(self):
        return f"<[{self.__class__.__name__}:{self._size}]>"
