"""Exception hierarchy shared by every pipeline stage."""

from __future__ import annotations


class NewsRankError(Exception):
    """Base class for all errors raised by newsrank."""


class MalformedRecord(NewsRankError):
    def __init__(self, path, line: int, reason: str):
        self.path = str(path)
        self.line = line
        self.reason = reason
        super().__init__(f"{self.path}:{line}: {reason}")


class DuplicateId(NewsRankError):
    def __init__(self, path, line: int, record_id: str):
        self.path = str(path)
        self.line = line
        self.record_id = record_id
        super().__init__(f"{self.path}:{line}: duplicate id {record_id!r}")


class UnknownSite(NewsRankError):
    pass


class ConfigError(NewsRankError):
    pass


class SingleClassTrainingSet(NewsRankError):
    pass


class NoPositivePredictions(NewsRankError):
    pass


class EmptyCorpus(NewsRankError):
    pass


class EmptyDocument(NewsRankError):
    pass


class EmptyCluster(NewsRankError):
    pass


class EmptyEventSet(NewsRankError):
    pass


class MalformedUrl(NewsRankError):
    pass


class MissingFixture(NewsRankError):
    def __init__(self, query: str):
        self.query = query
        super().__init__(f"no recorded results for query {query!r}")


class ClientUnavailable(NewsRankError):
    pass


class StageError(NewsRankError):
    """A pipeline stage failed; wraps the underlying error with the stage name."""

    def __init__(self, stage: str, cause: BaseException):
        self.stage = stage
        self.cause = cause
        super().__init__(f"stage {stage!r} failed: {cause}")
