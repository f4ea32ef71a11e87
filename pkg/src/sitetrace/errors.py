"""Exception hierarchy shared by all sitetrace modules.

Everything raised on bad data derives from SitetraceError so the CLI can
map it to a single exit code; plain OSError is left alone for I/O faults.
"""


class SitetraceError(Exception):
    """Base class for all data and configuration errors."""


class LogInputError(SitetraceError):
    """The log stream could not be read or decoded."""


class LogFormatError(SitetraceError):
    """Too many malformed lines to trust the input."""

    def __init__(self, first_bad_line: int, malformed: int, total: int):
        self.first_bad_line = first_bad_line
        self.malformed = malformed
        self.total = total
        super().__init__(
            f"{malformed} of {total} lines malformed "
            f"(first offending line: {first_bad_line})"
        )


class LabelConflictError(SitetraceError):
    """One session id carries both 'bot' and 'human' labels."""

    def __init__(self, session_id: str):
        self.session_id = session_id
        super().__init__(f"conflicting labels in session {session_id!r}")


class InvalidUriError(SitetraceError):
    """Request URI does not start with '/'."""


class SitemapFormatError(SitetraceError):
    """Sitemap file violates the JSON sitemap schema."""


class CrawlError(SitetraceError):
    """The crawl could not start (start URL unreachable)."""


class NumericalInstabilityError(SitetraceError):
    """Layout simulation produced a non-finite coordinate."""

    def __init__(self, iteration: int):
        self.iteration = iteration
        super().__init__(f"non-finite position at iteration {iteration}")


class EmptySessionError(SitetraceError):
    """A session with zero requests cannot be mapped."""


class InfeasibleConstraintsError(SitetraceError):
    """Radius constraints violate 0 < r_min < r_gate < r_max, x_gate > 1."""


class LayoutRequiredError(SitetraceError):
    """Rendering needs node coordinates; run the layout first."""


class DuplicateSessionError(SitetraceError):
    """Two trace images share a session id in one dataset."""

    def __init__(self, session_id: str):
        self.session_id = session_id
        super().__init__(f"duplicate session id {session_id!r}")


class ProfileConfigError(SitetraceError):
    """A synthetic traffic profile is inconsistent with the sitemap."""


class UndefinedMetricsError(SitetraceError):
    """Metrics requested on an empty or unlabeled input."""


class CoverageError(SitetraceError):
    """Predictions do not cover exactly the ground-truth session ids."""

    def __init__(self, missing: list, extra: list):
        self.missing = list(missing)
        self.extra = list(extra)
        parts = []
        if self.missing:
            parts.append(f"missing predictions for {self.missing}")
        if self.extra:
            parts.append(f"predictions for unknown ids {self.extra}")
        super().__init__("; ".join(parts) or "prediction coverage mismatch")
