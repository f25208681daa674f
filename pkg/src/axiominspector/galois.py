import dataclasses
import functools
import json
import logging
import typing
from pathlib import Path

from axiominspector.formula import BOTTOM
from axiominspector.formula import Formula
from axiominspector.miner import PLAIN_ATOMS
from axiominspector.miner import GroundImplication
from axiominspector.miner import InvariantSet
from axiominspector.miner import mine
from axiominspector.parser import read_sequence_file
from axiominspector.profile import ProfileSequence
from axiominspector.prover import DEFAULT_BUDGET
from axiominspector.prover import ProofContext

LOGGER = logging.getLogger(Path(__file__).name)


class CorpusError(Exception):
    pass


@functools.lru_cache(maxsize=256)
def proof_context(
    sequence: ProfileSequence, budget: int = DEFAULT_BUDGET
) -> ProofContext:
    return ProofContext(mine(sequence).formulas(), budget)


@functools.lru_cache(maxsize=65536)
def sequence_derives(
    sequence: ProfileSequence, formula: Formula, budget: int = DEFAULT_BUDGET
) -> bool:
    return proof_context(sequence, budget).derives(formula)


class Corpus:
    """A finite, named family of profile sequences. Polarities are relative to it."""

    def __init__(
        self,
        entries: typing.Mapping[str, ProfileSequence],
        budget: int = DEFAULT_BUDGET,
    ):
        self.entries = dict(entries)
        self.budget = budget

    @classmethod
    def load(cls, manifest_path: typing.Union[str, Path], budget=DEFAULT_BUDGET):
        manifest_path = Path(manifest_path)

        with open(manifest_path, encoding="utf-8") as f:
            try:
                manifest = json.load(f)
            except json.JSONDecodeError as ex:
                raise CorpusError(f"{manifest_path}: invalid JSON: {ex}") from ex

        if not isinstance(manifest, dict) or not all(
            isinstance(v, str) for v in manifest.values()
        ):
            raise CorpusError(f"{manifest_path}: manifest must map names to paths")

        entries = {}
        for name, path in manifest.items():
            sequence_path = (manifest_path.parent / path).resolve()
            LOGGER.debug("corpus entry %s: %s", name, sequence_path)
            entries[name] = read_sequence_file(sequence_path)

        return cls(entries, budget)

    @classmethod
    def from_sequences(
        cls, sequences: typing.Mapping[str, ProfileSequence], budget=DEFAULT_BUDGET
    ):
        return cls(sequences, budget)

    @property
    def names(self) -> frozenset[str]:
        return frozenset(self.entries)

    def sequence(self, name: str) -> ProfileSequence:
        try:
            return self.entries[name]
        except KeyError:
            raise CorpusError(f"{name!r} is not part of the corpus") from None

    def derives(self, name: str, formula: Formula) -> bool:
        return sequence_derives(self.sequence(name), formula, self.budget)

    def __len__(self):
        return len(self.entries)


ALL_GROUND_IMPLICATIONS = InvariantSet(
    frozenset(GroundImplication(a, c) for a in PLAIN_ATOMS for c in PLAIN_ATOMS),
    "top",
)


@dataclasses.dataclass(frozen=True)
class TheoryHandle:
    """
    The theory of every formula derivable from the mined invariants of each member.
    With no members it is the top theory, which contains every formula.
    """

    members: frozenset[ProfileSequence]
    budget: int = dataclasses.field(default=DEFAULT_BUDGET, compare=False)

    @property
    def is_top(self) -> bool:
        return not self.members

    @property
    def ground_base(self) -> InvariantSet:
        if self.is_top:
            return ALL_GROUND_IMPLICATIONS
        bases = [mine(p) for p in self.members]
        return InvariantSet(
            frozenset.intersection(*(b.implications for b in bases)),
            " & ".join(sorted(b.provenance for b in bases)),
        )

    def contains(self, formula: Formula) -> bool:
        return all(sequence_derives(p, formula, self.budget) for p in self.members)

    def meet(self, other: "TheoryHandle") -> "TheoryHandle":
        return TheoryHandle(self.members | other.members, self.budget)

    def minimal_bases(self) -> frozenset[frozenset[GroundImplication]]:
        bases = {mine(p).implications for p in self.members}
        return frozenset(b for b in bases if not any(o < b for o in bases))


def theory_of(
    sequences: typing.Iterable[ProfileSequence], budget: int = DEFAULT_BUDGET
) -> TheoryHandle:
    theory = TheoryHandle(frozenset(sequences), budget)
    if theory.is_top:
        LOGGER.warning("empty selection, using the top theory")
    return theory


def theory_leq(a: TheoryHandle, b: TheoryHandle) -> bool:
    """
    Whether every formula of `a` belongs to `b`. A member R of `b` contains all of
    `a` iff some member Q of `a` has all its invariants among R's: the disjunction
    of the conjoined invariant sets of `a`'s members lies in `a`, and R's theory is
    prime and decides ground implications by membership.
    """
    if b.is_top:
        return True
    if a.is_top:
        # mined bases are satisfied by the all-true valuation, so never top
        return False

    return all(any(mine(q) <= mine(r) for q in a.members) for r in b.members)


def theory_equal(a: TheoryHandle, b: TheoryHandle) -> bool:
    if a.is_top or b.is_top:
        return a.is_top and b.is_top
    return a.minimal_bases() == b.minimal_bases()


def right_polarity(formulas: typing.Iterable[Formula], c: Corpus) -> frozenset[str]:
    formulas = list(formulas)
    result = frozenset(
        name
        for name in c.entries
        if all(c.derives(name, formula) for formula in formulas)
    )
    LOGGER.debug("right polarity of %s formulas: %s", len(formulas), sorted(result))
    return result


def _check_names(names: typing.Iterable[str], c: Corpus) -> frozenset[str]:
    names = frozenset(names)
    unknown = names - c.names
    if unknown:
        raise CorpusError(f"not part of the corpus: {', '.join(sorted(unknown))}")
    return names


def left_polarity(names: typing.Iterable[str], c: Corpus) -> TheoryHandle:
    names = _check_names(names, c)
    return theory_of((c.sequence(n) for n in names), c.budget)


def right_polarity_of(theory: TheoryHandle, c: Corpus) -> frozenset[str]:
    return frozenset(
        name
        for name, sequence in c.entries.items()
        if theory_leq(theory, theory_of([sequence], c.budget))
    )


def adjunction_check(
    formulas: typing.Iterable[Formula], names: typing.Iterable[str], c: Corpus
) -> bool:
    formulas = list(formulas)
    names = _check_names(names, c)
    theory = left_polarity(names, c)
    return (names <= right_polarity(formulas, c)) == all(
        theory.contains(formula) for formula in formulas
    )


def kernel_equiv_formulas(
    formulas: typing.Iterable[Formula],
    other: typing.Iterable[Formula],
    c: Corpus,
) -> bool:
    return right_polarity(formulas, c) == right_polarity(other, c)


def kernel_equiv_sequences(
    names: typing.Iterable[str], other: typing.Iterable[str], c: Corpus
) -> bool:
    return theory_equal(left_polarity(names, c), left_polarity(other, c))


@dataclasses.dataclass(frozen=True)
class KernelClass:
    """
    A class of formula sets with the same right polarity. Classes compare by
    polarity; the representative is any member.
    """

    representative: frozenset[Formula] = dataclasses.field(compare=False)
    polarity: frozenset[str]


def kernel_class(formulas: typing.Iterable[Formula], c: Corpus) -> KernelClass:
    representative = frozenset(formulas)
    return KernelClass(representative, right_polarity(representative, c))


def _representative(
    operand: typing.Union[KernelClass, typing.Iterable[Formula]]
) -> frozenset[Formula]:
    if isinstance(operand, KernelClass):
        return operand.representative
    return frozenset(operand)


def quotient_join(
    left: typing.Union[KernelClass, typing.Iterable[Formula]],
    right: typing.Union[KernelClass, typing.Iterable[Formula]],
    c: Corpus,
) -> KernelClass:
    return kernel_class(_representative(left) | _representative(right), c)


def quotient_bottom(c: Corpus) -> KernelClass:
    return kernel_class([], c)


def quotient_top(c: Corpus) -> KernelClass:
    return kernel_class([BOTTOM], c)


def quotient_leq(left: KernelClass, right: KernelClass, c: Corpus) -> bool:
    return quotient_join(left, right, c) == right
