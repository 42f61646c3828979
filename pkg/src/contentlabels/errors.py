"""Exception types shared across the package."""


class ContentLabelsError(Exception):
    """Base class for all package errors."""


# --- numeric / data-shape contracts ---

class TooFewRows(ContentLabelsError):
    pass


class NonFiniteInput(ContentLabelsError):
    pass


class DimensionMismatch(ContentLabelsError):
    pass


class LengthMismatch(ContentLabelsError):
    pass


class ConstantInput(ContentLabelsError):
    pass


class OutOfRange(ContentLabelsError):
    pass


# --- embedding providers ---

class EmptyInput(ContentLabelsError):
    pass


class ProviderUnavailable(ContentLabelsError):
    pass


# --- fetching ---

class FetchError(ContentLabelsError):
    """Base class for webpage retrieval failures."""


class NetworkError(FetchError):
    pass


class HttpStatusError(FetchError):
    def __init__(self, status_code: int, url: str = ""):
        super().__init__(f"HTTP {status_code} for {url}" if url else f"HTTP {status_code}")
        self.status_code = status_code
        self.url = url


class NotHtml(FetchError):
    def __init__(self, content_type: str):
        super().__init__(f"content type {content_type!r} is not HTML/XHTML")
        self.content_type = content_type


class TooManyRedirects(FetchError):
    pass


# --- training data ---

class FileMissing(ContentLabelsError, FileNotFoundError):
    pass


class ParseError(ContentLabelsError):
    pass


class TooFewGroups(ContentLabelsError):
    pass


class MissingDimension(ContentLabelsError):
    pass


# --- persistence ---

class StorageUnavailable(ContentLabelsError):
    pass
