"""Exceptions raised by the CVSS representation and scoring layer."""


class CvssError(ValueError):
    """Base class for all CVSS vector errors."""


class UnknownMetric(CvssError):
    """A metric abbreviation is not defined in any supported version."""


class DuplicateMetric(CvssError):
    """The same metric appears more than once in one vector."""


class IllegalValue(CvssError):
    """A metric value is not legal for its metric in the given version."""


class AmbiguousVersion(CvssError):
    """No single supported version admits the full metric set."""


class NoMatchingVersion(CvssError):
    """Version inference failed; an expert has to correct the vector."""


class VersionMismatch(CvssError):
    """Two vectors that must share a version do not."""


class MissingBaseMetric(CvssError):
    """Scoring requires the full base group to be present."""


class UnrecognizedMetricName(CvssError):
    """An expanded-text sentence does not start with a known metric name."""


class UnrecognizedValue(CvssError):
    """An expanded-text sentence carries an unknown value name."""
