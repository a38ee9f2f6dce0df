"""Domain error types shared across all modules.

Every error carries a stable machine-readable ``code`` used by the gateway
and the CLI; messages are for humans and may change.
"""

from __future__ import annotations


class MediaflowError(Exception):
    """Base class for all domain errors."""

    code = "INTERNAL"

    def __init__(self, message: str = ""):
        super().__init__(message or self.__class__.__name__)
        self.message = message or self.__class__.__name__


class EmptyPayload(MediaflowError):
    code = "EMPTY_PAYLOAD"


class StorageFailure(MediaflowError):
    code = "STORAGE_FAILURE"


class NotFound(MediaflowError):
    code = "NOT_FOUND"


class UnknownAsset(NotFound):
    code = "UNKNOWN_ASSET"


class UnknownWorkflow(NotFound):
    code = "UNKNOWN_WORKFLOW"


class UnknownExecution(NotFound):
    code = "UNKNOWN_EXECUTION"


class InvalidDefinition(MediaflowError):
    code = "INVALID_DEFINITION"


class UnsupportedMediaKind(MediaflowError):
    code = "UNSUPPORTED_MEDIA_KIND"


class UnsupportedParameters(MediaflowError):
    code = "UNSUPPORTED_PARAMETERS"


class OperatorFailure(MediaflowError):
    code = "OPERATOR_FAILURE"


class MalformedContainer(MediaflowError):
    code = "MALFORMED_CONTAINER"


class MalformedImage(MediaflowError):
    code = "MALFORMED_IMAGE"


class ZeroDimension(MediaflowError):
    code = "ZERO_DIMENSION"


class TooSmall(MediaflowError):
    code = "TOO_SMALL"


class DatasetTooSmall(MediaflowError):
    code = "DATASET_TOO_SMALL"


class NoPositives(MediaflowError):
    code = "NO_POSITIVES"


class DegenerateBox(MediaflowError):
    code = "DEGENERATE_BOX"


class InvalidBox(MediaflowError):
    code = "INVALID_BOX"


class EmptyQuery(MediaflowError):
    code = "EMPTY_QUERY"


class BodyTooLarge(MediaflowError):
    code = "BODY_TOO_LARGE"


class BadRequest(MediaflowError):
    code = "BAD_REQUEST"
