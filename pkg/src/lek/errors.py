"""Exception hierarchy shared by every pipeline stage."""


class LekError(Exception):
    """Base class for toolkit errors; the CLI maps these to exit code 1."""


class MalformedFileError(LekError):
    """Bytes that cannot be decoded as the claimed image format."""


class UnsupportedFormatError(LekError):
    """Decodable file, but in a format the operation does not accept."""


class ZeroDimensionError(LekError):
    """Resize target with a dimension below one pixel."""


class EmptyImageError(LekError):
    """Operation applied to an image with no pixels."""


class AllBlackImageError(LekError):
    """Illuminant estimation on an image whose channels are all zero."""


class DimensionMismatchError(LekError):
    """Two grids that must share dimensions do not."""


class EmptyCountsError(LekError):
    """Confusion counts covering zero pixels."""


class EmptyInputError(LekError):
    """Aggregation or selection over an empty collection."""


class ManifestError(LekError):
    """Structurally invalid dataset manifest."""


class MissingColumnError(ManifestError):
    pass


class DuplicateCaseIdError(ManifestError):
    pass


class UnknownLesionTypeError(ManifestError):
    pass


class CaseEvaluationError(LekError):
    """Failure while evaluating one case; carries the case id."""

    def __init__(self, case_id, cause):
        super().__init__(f"case {case_id}: {cause}")
        self.case_id = case_id
        self.cause = cause


class EvaluationFailedError(LekError):
    """One or more cases failed during a dataset run."""

    def __init__(self, case_errors):
        super().__init__(f"{len(case_errors)} case(s) failed")
        self.case_errors = list(case_errors)
