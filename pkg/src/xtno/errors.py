"""Exception types shared across the package.

The CLI maps these onto its documented exit codes: parse failures exit
with 2, capability limits (parameter too large for the build) with 3,
and serialized-state format problems with 4.
"""

from __future__ import annotations


class XtnoError(Exception):
    """Base class for all library errors."""

    exit_code = 1


class ParseError(XtnoError):
    """Malformed input text (graph file, update script, session line)."""

    exit_code = 2


class CapabilityError(XtnoError):
    """Request exceeds a hard limit of this build (dimension cap, field size)."""

    exit_code = 3


class StateFormatError(XtnoError):
    """Serialized oracle state is corrupt or has an unsupported version."""

    exit_code = 4


class InvalidUpdateError(ParseError):
    """Update batch fails strict validation against the initial input."""


class UnknownHandleError(XtnoError):
    """Removal referenced a handle that is not live."""


class InstanceTooLargeError(XtnoError):
    """A brute-force reference oracle was asked to exceed its size guard."""
