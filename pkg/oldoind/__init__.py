import datetime
import logging
from abc import ABC, abstractmethod
from typing import Any, Dict, List, Optional

logger = logging.getLogger(__name__)

SCHEMA = "oldoind/1"
"""Version tag written into every report."""


class OldoindError(Exception):
    """Base class of all errors raised by oldoind."""

    kind = "error"
    """Stable, machine readable name of the error class."""


class InvalidInput(OldoindError):
    kind = "invalid-input"


class CapacityExceeded(OldoindError):
    kind = "capacity-exceeded"


class ParseError(OldoindError):
    """
    Malformed textual input.

    Parameters
    ----------
    message: str
        Description of the problem.
    offset: int
        Byte offset into the input at which parsing failed.
    """

    kind = "parse-error"

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


class PreconditionViolated(OldoindError):
    kind = "precondition-violated"


class NotP4Tidy(PreconditionViolated):
    kind = "not-p4-tidy"


class NotCograph(PreconditionViolated):
    kind = "not-cograph"


class NotConnected(PreconditionViolated):
    kind = "not-connected"


class ClassMismatch(PreconditionViolated):
    kind = "class-mismatch"


class NotAnExactCover(OldoindError):
    kind = "not-an-exact-cover"


class WitnessInvalid(OldoindError):
    kind = "witness-invalid"


class SearchBudgetExceeded(OldoindError):
    kind = "search-budget-exceeded"


class InternalContractError(OldoindError):
    """A constructed witness failed its own verification; always a bug."""

    kind = "internal-contract-violation"


class AbstractMessage(ABC):
    """
    Abstract class for a message.
    """
    header: List[str]
    """Header for the as_list() method."""

    @property
    @abstractmethod
    def as_list(self) -> List:
        """
        Return the message as a list of values.

        Returns
        -------
        typing.List[typing.Any]
        """

    @property
    def as_dict(self) -> Dict:
        """
        Return the message as a dictionary.

        Returns
        -------
        typing.Dict[str, typing.Any]
        """
        return dict(zip(self.header, self.as_list))


class Report(AbstractMessage):
    """
    Result of a single command line invocation.

    Parameters
    ----------
    command: typing.List[str]
        The command and its positional parameters.
    input: typing.Optional[str]
        graph6 digest of the input graph.
    verdict: str
        Outcome of the command, e.g. "valid", "found", "yes" or "pass".
    witness: typing.Optional[typing.List[int]]
        A witness set as a sorted vertex list.
    witnesses: typing.Optional[typing.Dict[str, typing.List[int]]]
        Named witness parts, e.g. the two halves of a prism witness.
    derivation: typing.Optional[typing.Dict]
        Derivation trace of a decider.
    details: typing.Optional[typing.Dict]
        Command specific details.
    timing: typing.Optional[typing.Dict]
        Start timestamp and elapsed time, only present if requested.
    """

    NEGATIVE = ("invalid", "absent", "no", "fail")
    """Verdicts that map to exit code 1."""
    ERRONEOUS = ("budget-exceeded", "error")
    """Verdicts that map to exit code 2."""

    def __init__(self,
                 command: List[str],
                 verdict: str,
                 input: Optional[str] = None,
                 witness: Optional[List[int]] = None,
                 witnesses: Optional[Dict[str, List[int]]] = None,
                 derivation: Optional[Dict] = None,
                 details: Optional[Dict] = None,
                 timing: Optional[Dict[str, Any]] = None,
                 ):
        super().__init__()

        self.command = command
        self.input = input
        self.verdict = verdict
        self.witness = witness
        self.witnesses = witnesses
        self.derivation = derivation
        self.details = details
        self.timing = timing

    header: List[str] = ["schema", "command", "input", "verdict", "witness", "witnesses", "derivation", "details", "timing"]

    @property
    def as_list(self) -> List:
        return [
            SCHEMA,
            self.command,
            self.input,
            self.verdict,
            self.witness,
            self.witnesses,
            self.derivation,
            self.details,
            self.timing,
        ]

    @property
    def exit_code(self) -> int:
        """Exit code of the process emitting this report."""
        if self.verdict in Report.ERRONEOUS:
            return 2
        if self.verdict in Report.NEGATIVE:
            return 1
        return 0

    def stamp(self, started: datetime.datetime, stopped: datetime.datetime):
        """Attach timing information, used with --timing only."""
        self.timing = {"started": started, "elapsed": stopped - started}

    def __repr__(self) -> str:
        return f"Report({' '.join(self.command)}, {self.verdict})"
