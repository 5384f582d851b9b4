"""Exception hierarchy shared by every module.

Each class carries an ``exit_code`` so the command line can map failures to
a category without string matching.
"""


class DsmError(Exception):
    exit_code = 1


class ConfigurationError(DsmError, ValueError):
    exit_code = 2


class DomainError(DsmError, ValueError):
    exit_code = 3


class DegenerateDataError(DsmError, ValueError):
    exit_code = 3


class NumericalError(DsmError, ArithmeticError):
    exit_code = 3


class ParseError(DsmError, ValueError):
    exit_code = 4

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class EmptySelectionError(ParseError):
    pass


class DataIntegrityError(DsmError, ValueError):
    exit_code = 4
