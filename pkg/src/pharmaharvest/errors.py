"""Exception hierarchy shared across the package."""

from __future__ import annotations


class PharmaHarvestError(Exception):
    """Base class for all package errors."""


# -- fetch layer --------------------------------------------------------------

class FetchError(PharmaHarvestError):
    """Base class for network-layer failures."""


class RobotsDisallowed(FetchError):
    """The target path is disallowed by the host's robots rules.

    Terminal: callers must not bypass this by re-requesting the path.
    """

    def __init__(self, url: str, matched_rule: str | None = None):
        self.url = url
        self.matched_rule = matched_rule
        super().__init__(f"robots rules disallow {url!r}"
                         + (f" (rule: {matched_rule})" if matched_rule else ""))


class ExhaustedRetries(FetchError):
    """No successful response was obtained; carries the last HTTP status."""

    def __init__(self, url: str, status: int | None, attempts: int):
        self.url = url
        self.status = status
        self.attempts = attempts
        super().__init__(f"no successful response from {url!r} "
                         f"after {attempts} attempt(s), last status {status}")


class FetchTimeout(FetchError):
    """Every attempt timed out."""

    def __init__(self, url: str, attempts: int):
        self.url = url
        self.attempts = attempts
        super().__init__(f"request to {url!r} timed out after {attempts} attempt(s)")


# -- adapters ------------------------------------------------------------------

class AdapterError(PharmaHarvestError):
    """Base class for per-source retrieval failures."""


class DrugNotFound(AdapterError):
    """The source reported no entry for the searched term."""

    def __init__(self, source: str, term: str):
        self.source = source
        self.term = term
        super().__init__(f"{source}: no entry found for {term!r}")


class DomDrift(AdapterError):
    """An expected page element is absent: the source's structure has changed.

    Carries the failing selector so monitoring can pinpoint what broke.
    """

    def __init__(self, selector: str, detail: str = ""):
        self.selector = selector
        self.detail = detail
        msg = f"expected element {selector!r} not found"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class ExportTimeout(AdapterError):
    """The source did not finish preparing an export in time."""


class MalformedExport(AdapterError):
    """An export file was retrieved but cannot be parsed."""


class EmptyFile(AdapterError):
    """A flat file that must carry a header line is empty."""


class NotAZip(AdapterError):
    """A file imported as an archive is not a zip."""

    def __init__(self, path):
        self.path = path
        super().__init__(f"{path} is not a zip archive")


# -- tabulation ----------------------------------------------------------------

class UnknownLabel(PharmaHarvestError):
    """A referenced AE or drug label is not present in the matrix."""

    def __init__(self, label: str):
        self.label = label
        super().__init__(f"unknown label {label!r}")


class ClassMissingTarget(PharmaHarvestError):
    """Drug-class comparison requested with the target drug outside the class."""

    def __init__(self, drug: str):
        self.drug = drug
        super().__init__(f"target drug {drug!r} is not in the supplied drug class")


# -- storage -------------------------------------------------------------------

class StoreError(PharmaHarvestError):
    """Base class for persistence failures."""


class NotWritable(StoreError):
    """The storage root cannot be created or written."""


class FormatMismatch(StoreError):
    """A blob's format does not match the source's native format."""


class ChecksumMismatch(StoreError):
    """An existing file conflicts with the manifested checksum."""

    def __init__(self, path, expected: str, actual: str):
        self.path = path
        self.expected = expected
        self.actual = actual
        super().__init__(f"checksum mismatch for {path}: "
                         f"manifest {expected[:12]}.., file {actual[:12]}..")
