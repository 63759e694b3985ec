# models/errors.py
from typing import Any, Optional


class DetFacetError(Exception):
    """Base error; carries the CLI exit code and the HTTP status it maps to"""

    exit_code = 1
    http_status = 500

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_dict(self) -> dict:
        return {"error": type(self).__name__, "message": self.message, **self.details}


class VerificationFailed(DetFacetError):
    exit_code = 1
    http_status = 200


class DocumentError(DetFacetError, ValueError):
    """Malformed JSON or a document violating the ComplexDocument schema"""

    exit_code = 2
    http_status = 422


class LayoutError(DetFacetError, ValueError):
    exit_code = 3
    http_status = 422


class ConfigurationError(DetFacetError, ValueError):
    exit_code = 3
    http_status = 422


class EmptyInputError(DetFacetError, ValueError):
    exit_code = 3
    http_status = 422


class ArgumentError(DetFacetError, ValueError):
    exit_code = 3
    http_status = 422


class StructuralError(DetFacetError):
    """A structural precondition on the complex does not hold"""

    exit_code = 4
    http_status = 409


class SequenceValidationError(StructuralError):
    def __init__(self, message: str, condition: int, **details: Any):
        super().__init__(message, condition=condition, **details)
        self.condition = condition


class ResourceLimitError(DetFacetError):
    exit_code = 5
    http_status = 413

    def __init__(self, message: str, limit: str, value: int, partial: Optional[Any] = None, **details: Any):
        super().__init__(message, limit=limit, value=value, **details)
        self.limit = limit
        self.value = value
        self.partial = partial

    def to_dict(self) -> dict:
        payload = super().to_dict()
        if self.partial is not None:
            payload["partial"] = self.partial
        return payload


class UnsupportedShapeError(DetFacetError):
    exit_code = 6
    http_status = 409


class LinearQuotientsError(DetFacetError):
    exit_code = 6
    http_status = 409

    def __init__(self, message: str, index: int, colon_generators: list):
        super().__init__(message, index=index, colon_generators=colon_generators)
        self.index = index
        self.colon_generators = colon_generators
