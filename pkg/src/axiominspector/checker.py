import enum
import logging
import typing
from pathlib import Path

from axiominspector.categories import Transformation
from axiominspector.categories import Verdict
from axiominspector.categories import preserves
from axiominspector.formula import Formula
from axiominspector.galois import Corpus
from axiominspector.profile import ProfileSequence
from axiominspector.prover import BudgetExceeded

LOGGER = logging.getLogger(Path(__file__).name)


class CheckEvent(enum.Enum):
    CHECK_STARTING = enum.auto()
    CHECK_PASSED = enum.auto()
    CHECK_FAILED = enum.auto()
    RUN_SUCCEEDED = enum.auto()
    RUN_FAILED = enum.auto()
    ERROR = enum.auto()


class CategoryChecker:
    """
    Runs preservation checks for a list of candidate transformations against one
    theory and one family of test sets, reporting progress to registered
    reporters. A reporter is any callable taking `(event, transformation, **kwargs)`.
    """

    def __init__(
        self,
        formulas: typing.Iterable[Formula],
        tests: typing.Iterable[typing.Iterable[ProfileSequence]],
        corpus: typing.Optional[Corpus] = None,
    ):
        self.formulas = list(formulas)
        self.tests = [frozenset(test) for test in tests]
        self.corpus = corpus
        self.reporters = []
        self.verdicts: dict[str, Verdict] = {}

    def add_reporter(self, reporter):
        self.reporters.append(reporter)

    def report(self, event, transformation, kwargs):
        for reporter in self.reporters:
            reporter(event, transformation, **kwargs)

    def check(self, transformation: Transformation) -> bool:
        self.report(CheckEvent.CHECK_STARTING, transformation, {})

        try:
            verdict = preserves(transformation, self.formulas, self.tests, self.corpus)
        except BudgetExceeded as ex:
            LOGGER.debug("%s: %s", transformation, ex)
            self.report(CheckEvent.ERROR, transformation, {"message": str(ex)})
            raise

        self.verdicts[transformation.name] = verdict

        if verdict.preserved:
            self.report(
                CheckEvent.CHECK_PASSED, transformation, {"tests": len(self.tests)}
            )
            return True

        self.report(
            CheckEvent.CHECK_FAILED,
            transformation,
            {"verdict": verdict, "witness": verdict.witness},
        )
        return False

    def run(self, candidates: typing.Iterable[Transformation]) -> bool:
        success = True

        for transformation in candidates:
            success = self.check(transformation) & success

        if success:
            self.report(CheckEvent.RUN_SUCCEEDED, None, {})
        else:
            self.report(CheckEvent.RUN_FAILED, None, {})

        return success
