"""
Exceptions raised across the toolkit. In-band outcomes (solver
unknowns, null dereferences, step limits) are values, not exceptions.
"""


class SpecSynthError(Exception):
    pass


class DiagnosticError(SpecSynthError):
    """
    A source file did not pass the front-end checks.
    """
    def __init__(self, diagnostics):
        self.diagnostics = tuple(diagnostics)
        message = '; '.join(str(d) for d in self.diagnostics)
        super(DiagnosticError, self).__init__(message)


class CallError(SpecSynthError):
    """
    A function was called with the wrong number or kind of arguments.
    """
    pass


class SafetyNetError(SpecSynthError):
    """
    Abstract symbolic execution hit its absolute unrolling bound.
    """
    pass


class ReplayRejected(SpecSynthError):
    """
    A model handed to the replay harness does not fit the leaf.
    """
    pass
