"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class CFTMError(Exception):
    """Base class for all errors raised by :mod:`cftm`."""


class DomainError(CFTMError, ValueError):
    """An argument lies outside the domain of the operation (e.g. mv > 1)."""


class InputError(CFTMError, ValueError):
    """An input string contains a symbol outside the machine's input alphabet."""


class InvalidMachineError(CFTMError, ValueError):
    """A machine definition failed validation.

    Attributes:
        violations: the list of :class:`~cftm.machine.Violation` found.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        lines = [f"{v.code}: {v.message}" for v in self.violations]
        super().__init__("invalid machine:\n  " + "\n  ".join(lines))


class MachineFileError(CFTMError, ValueError):
    """A machine file could not be parsed; carries line/column diagnostics."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("\n".join(str(d) for d in self.diagnostics))


class StrategyError(CFTMError, ValueError):
    """A resolution strategy name or parameter could not be resolved."""
