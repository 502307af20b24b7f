from . import gepstein

__all__ = ['gepstein']
