class GEpsteinError(Exception):
    pass

class ConfigError(GEpsteinError):
    pass

class BoundsError(ConfigError):
    pass

class SearchBudgetError(BoundsError):
    def __init__(self, msg, count):
        super().__init__(msg)
        self.count = count

class RunError(GEpsteinError):
    pass

class AlgebraError(RunError):
    def __init__(self, msg, report = None):
        super().__init__(msg)
        self.report = report

class AssignmentError(RunError):
    pass

class SubstitutionError(RunError):
    pass

class FrameError(RunError):
    pass

class KripkeModelError(RunError):
    pass

class VariantError(RunError):
    pass

class DerivationError(RunError):
    pass

class ParsingError(GEpsteinError):
    pass

class FormulaSyntaxError(ParsingError):
    def __init__(self, msg, text = "", line = None, column = None):
        super().__init__(msg)
        self.text = text
        self.line = line
        self.column = column

class LanguageModeError(ParsingError):
    pass

class ModelFileError(ParsingError):
    pass

class ProofFileError(ParsingError):
    pass

class InputError(ParsingError):
    pass
