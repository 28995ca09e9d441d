"""Exception hierarchy shared across the package.

Every domain error derives from RolealignError so callers can catch the
package's failures in one clause while infrastructure errors (OSError and
friends) propagate untouched.
"""

from __future__ import annotations


class RolealignError(Exception):
    """Base class for all domain errors raised by this package."""


# Instrument scoring


class MissingItemError(RolealignError):
    """A required questionnaire item has no response."""


class DuplicateItemError(RolealignError):
    """The same questionnaire item was answered more than once."""


class OutOfScaleError(RolealignError):
    """A response value lies outside the instrument's scale bounds."""


class ZeroVarianceError(RolealignError):
    """A norm entry has zero standard deviation, so z-scores are undefined."""


class UnknownInstrumentError(RolealignError):
    """The named instrument is not present in the loaded definitions."""


# Clustering


class TooFewProfilesError(RolealignError):
    """Fewer than two profiles were supplied for distance computation."""


class InvalidKError(RolealignError):
    """The requested cluster count is outside 1..n or an empty range."""


class EmptyModelError(RolealignError):
    """Classification was attempted against a model with no clusters."""


# Role recommendation and pairing


class UnclassifiedMemberError(RolealignError):
    """A member in the matching pool has no archetype classification."""


class InfeasibleMatchingError(RolealignError):
    """Hard pairing constraints leave some members impossible to pair."""


# Motivation monitoring


class InsufficientSamplesError(RolealignError):
    """Not enough founding samples to establish a baseline."""


class NoBaselineError(RolealignError):
    """Trigger evaluation requires a baseline that does not exist."""


# Statistics


class DegenerateVarianceError(RolealignError):
    """Within-group variance is zero, so the F statistic is undefined."""


class AllTiedError(RolealignError):
    """Every observation is identical, so rank statistics are undefined."""


class ZeroExpectedCellError(RolealignError):
    """A contingency table's expected count is zero in at least one cell."""


class ZeroPooledSDError(RolealignError):
    """Pooled standard deviation is zero, so Cohen's d is undefined."""


# Audit ledger


class SerializationError(RolealignError):
    """An event payload could not be canonically serialized."""


class StorageError(RolealignError):
    """The ledger file could not be written or parsed."""


class UnverifiedRangeError(RolealignError):
    """Memo export was requested for a range that fails verification."""


# Standards artifacts


class IncompleteAssessmentsError(RolealignError):
    """An artifact needs assessments that some team members lack."""


class NoDataError(RolealignError):
    """The requested reporting period contains no samples."""


class ProjectOpenError(RolealignError):
    """A closure summary was requested while the project is still open."""


# Service

class ValidationFailureError(RolealignError):
    """A request payload failed domain validation."""


class NoConsentError(RolealignError):
    """The member has not granted (or has revoked) the required consent."""


class UnknownMemberError(RolealignError):
    """No member with the given id exists."""


class UnknownTeamError(RolealignError):
    """No team with the given id exists."""


class TeamSizeExceededError(RolealignError):
    """Adding the member would push the team past the supported size."""


class ForbiddenPairIntroducedError(RolealignError):
    """A manual assignment edit would introduce a hard-blocked pair."""


class StaleProposalError(RolealignError):
    """The edit targets a proposal version that is no longer current."""


class ConfigError(RolealignError):
    """A configuration or bundled data file is missing, malformed, or fails its checksum."""
