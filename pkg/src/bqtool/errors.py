"""Exception hierarchy shared by all bqtool modules."""

from __future__ import annotations


class BqToolError(Exception):
    """Base class for all errors raised by bqtool."""


class NotNeighbours(BqToolError):
    """The two fractions are not Farey neighbours (|p·s − q·r| ≠ 1)."""


class NotPrimitive(BqToolError):
    """The word is not a primitive element (fails the cyclic-form test)."""


class NotAdmissible(BqToolError):
    """The fraction's parity type is not a member type of the basic pair."""


class NoPalindromeFound(BqToolError):
    """Internal invariant breach: a rewritten primitive word had no unique
    palindromic cyclic shift.  Must never occur for valid inputs."""


class CapExceeded(BqToolError):
    """A requested word would exceed the word-length cap."""


class Reducible(BqToolError):
    """The trace triple lies on the reducible locus and the requested
    construction degenerates there."""


class CertifiedLarge(BqToolError):
    """A trace value exceeded the overflow threshold (modulus > 1e300); the
    value is certified large and usable by the prune rule but cannot be
    materialized as a double."""


class NotCertified(BqToolError):
    """The operation requires a certified search outcome and none exists."""


class NoAxis(BqToolError):
    """The matrix is parabolic or ±identity and has no axis."""


class NotLoxodromic(BqToolError):
    """A loxodromic matrix was required."""


class SharedEndpoint(BqToolError):
    """The two lines share an ideal endpoint (includes equal lines)."""


class AxesIntersect(BqToolError):
    """The two axes intersect (or nearly so); no separating construction."""


class ChainStuck(BqToolError):
    """Internal invariant breach: the descending walk found no outgoing
    arrow before reaching the certified core.  Must never occur on a
    certified input."""
