import dataclasses
import functools
import hashlib
import itertools
import logging
import typing
from enum import Enum
from pathlib import Path

import numpy as np

from axiominspector.formula import Atom
from axiominspector.formula import Formula
from axiominspector.formula import Implies
from axiominspector.formula import atom_true_at
from axiominspector.formula import conjunction
from axiominspector.formula import iff
from axiominspector.profile import FACTORS
from axiominspector.profile import PLAIN_SIGNATURES
from axiominspector.profile import Factor
from axiominspector.profile import PlainSignature
from axiominspector.profile import Profile
from axiominspector.profile import ProfileSequence
from axiominspector.profile import Signature
from axiominspector.profile import code
from axiominspector.prover import DEFAULT_BUDGET
from axiominspector.prover import Prover

LOGGER = logging.getLogger(Path(__file__).name)

# (antecedent factor, consequent factor, antecedent code, consequent code)
TABLE_SHAPE = (
    len(FACTORS),
    len(FACTORS),
    len(PLAIN_SIGNATURES),
    len(PLAIN_SIGNATURES),
)

PLAIN_ATOMS = tuple(Atom.plain(f, s) for f in FACTORS for s in PLAIN_SIGNATURES)

Cell = tuple[Factor, Factor, PlainSignature, PlainSignature]


class InvariantClass(Enum):
    VACUOUS_CONSEQUENT = "vacuous-consequent"
    VACUOUS_ANTECEDENT = "vacuous-antecedent"
    NON_VACUOUS = "non-vacuous"


class NotAnInvariantError(Exception):
    def __init__(self, implication: "GroundImplication"):
        self.implication = implication
        super().__init__(f"{implication} is not an invariant of the sequence")


@dataclasses.dataclass(frozen=True)
class GroundImplication:
    antecedent: Atom
    consequent: Atom

    def __post_init__(self):
        for atom in (self.antecedent, self.consequent):
            if not atom.is_plain:
                raise ValueError(f"ground implications use plain atoms, got {atom}")

    @classmethod
    def from_cell(cls, a: int, c: int, va: int, vc: int) -> "GroundImplication":
        return cls(
            Atom.plain(FACTORS[a], PLAIN_SIGNATURES[va]),
            Atom.plain(FACTORS[c], PLAIN_SIGNATURES[vc]),
        )

    @property
    def cell(self) -> tuple[int, int, int, int]:
        return (
            self.antecedent.factor.index,
            self.consequent.factor.index,
            code(self.antecedent.plain_signature),
            code(self.consequent.plain_signature),
        )

    @property
    def is_reflexive(self) -> bool:
        return self.antecedent == self.consequent

    def to_formula(self) -> Formula:
        return Implies(self.antecedent, self.consequent)

    def __str__(self):
        return f"{self.antecedent} -> {self.consequent}"


@dataclasses.dataclass(frozen=True)
class InvariantSet:
    implications: frozenset[GroundImplication]
    provenance: str = dataclasses.field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "implications", frozenset(self.implications))

    def __contains__(self, implication):
        return implication in self.implications

    def __iter__(self):
        return iter(self.sorted())

    def __len__(self):
        return len(self.implications)

    def __le__(self, other: "InvariantSet") -> bool:
        return self.implications <= other.implications

    def __ge__(self, other: "InvariantSet") -> bool:
        return self.implications >= other.implications

    def sorted(self) -> list[GroundImplication]:
        return sorted(self.implications, key=lambda g: g.cell)

    def formulas(self) -> list[Formula]:
        return [g.to_formula() for g in self.sorted()]


@dataclasses.dataclass(frozen=True, eq=False)
class ImplicationTable:
    counts: np.ndarray
    sequence_length: int

    def __post_init__(self):
        counts = np.array(self.counts, dtype=np.int64)
        if counts.shape != TABLE_SHAPE:
            raise ValueError(f"table shape must be {TABLE_SHAPE}, got {counts.shape}")
        counts.setflags(write=False)
        object.__setattr__(self, "counts", counts)

    def __eq__(self, other):
        if not isinstance(other, ImplicationTable):
            return NotImplemented
        return self.sequence_length == other.sequence_length and np.array_equal(
            self.counts, other.counts
        )

    __hash__ = None

    def count(
        self, a: Factor, c: Factor, va: PlainSignature, vc: PlainSignature
    ) -> int:
        return int(self.counts[a.index, c.index, code(va), code(vc)])

    def zeros(self, provenance: str = "") -> InvariantSet:
        return InvariantSet(
            frozenset(
                GroundImplication.from_cell(*map(int, cell))
                for cell in np.argwhere(self.counts == 0)
            ),
            provenance,
        )


def sequence_id(sequence: ProfileSequence) -> str:
    digest = hashlib.sha1(str(sequence).encode()).hexdigest()[:10]
    return f"seq-{len(sequence)}-{digest}"


def _truth_matrix(profile: Profile) -> np.ndarray:
    truth = np.zeros((len(FACTORS), len(PLAIN_SIGNATURES)), dtype=bool)
    truth[np.arange(len(FACTORS)), profile.codes()] = True
    return truth


def _discount(counts: np.ndarray, profile: Profile) -> np.ndarray:
    truth = _truth_matrix(profile)

    # everything implies truth: (a, c, v, code(c's signature)) for all a, v
    everything_implies_truth = np.broadcast_to(
        truth[np.newaxis, :, np.newaxis, :], TABLE_SHAPE
    )
    # falsehood implies everything: false antecedent and false consequent
    falsehood_implies_everything = (
        ~truth[:, np.newaxis, :, np.newaxis] & ~truth[np.newaxis, :, np.newaxis, :]
    )

    return (
        counts
        - everything_implies_truth.astype(np.int64)
        - falsehood_implies_everything.astype(np.int64)
    )


@functools.lru_cache(maxsize=1024)
def update(sequence: ProfileSequence) -> ImplicationTable:
    """
    Every cell starts at the sequence length and is decremented once for each
    profile at which its material implication holds, so the final value is the
    number of profiles at which it fails.
    """
    initial = np.full(TABLE_SHAPE, len(sequence), dtype=np.int64)
    counts = functools.reduce(_discount, sequence, initial)
    LOGGER.debug("updated table for %s", sequence_id(sequence))
    return ImplicationTable(counts, len(sequence))


@functools.lru_cache(maxsize=1024)
def mine(sequence: ProfileSequence) -> InvariantSet:
    return update(sequence).zeros(sequence_id(sequence))


def truth_profile(sequence: ProfileSequence, atom: Atom) -> frozenset[int]:
    return frozenset(i for i, p in enumerate(sequence) if atom_true_at(p, atom))


@functools.lru_cache(maxsize=1024)
def _truth_profiles(sequence: ProfileSequence) -> dict[Atom, frozenset[int]]:
    return {atom: truth_profile(sequence, atom) for atom in PLAIN_ATOMS}


def oracle_mine(sequence: ProfileSequence) -> InvariantSet:
    truth = _truth_profiles(sequence)

    # holds at every profile iff the antecedent's profiles are among the consequent's
    return InvariantSet(
        frozenset(
            GroundImplication(a, c)
            for a in PLAIN_ATOMS
            for c in PLAIN_ATOMS
            if truth[a] <= truth[c]
        ),
        sequence_id(sequence),
    )


def classify(
    implication: GroundImplication, sequence: ProfileSequence
) -> InvariantClass:
    truth = _truth_profiles(sequence)
    antecedent = truth[implication.antecedent]
    consequent = truth[implication.consequent]

    if not antecedent <= consequent:
        raise NotAnInvariantError(implication)
    if len(consequent) == len(sequence):
        return InvariantClass.VACUOUS_CONSEQUENT
    if not antecedent:
        return InvariantClass.VACUOUS_ANTECEDENT
    return InvariantClass.NON_VACUOUS


def non_vacuous_invariants(sequence: ProfileSequence) -> set[GroundImplication]:
    # A -> A is left out, it holds for every atom and tells nothing
    return {
        g
        for g in mine(sequence).implications
        if not g.is_reflexive
        and classify(g, sequence) == InvariantClass.NON_VACUOUS
    }


def causal_factors(sequence: ProfileSequence) -> list[tuple[Atom, int]]:
    invariants = non_vacuous_invariants(sequence)
    implied = {g.consequent for g in invariants}

    consequents: dict[Atom, set[Atom]] = {}
    for g in invariants:
        if g.antecedent not in implied:
            consequents.setdefault(g.antecedent, set()).add(g.consequent)

    return sorted(
        ((atom, len(c)) for atom, c in consequents.items()),
        key=lambda item: (
            -item[1],
            item[0].factor.index,
            code(item[0].plain_signature),
        ),
    )


@dataclasses.dataclass(frozen=True)
class ConjunctiveInvariant:
    antecedent: frozenset[Atom]
    consequent: Atom

    def __post_init__(self):
        object.__setattr__(self, "antecedent", frozenset(self.antecedent))

    def sorted_antecedent(self) -> list[Atom]:
        return sorted(
            self.antecedent, key=lambda a: (a.factor.index, code(a.plain_signature))
        )

    def to_formula(self) -> Formula:
        return Implies(conjunction(self.sorted_antecedent()), self.consequent)

    def __str__(self):
        return f"{' & '.join(map(str, self.sorted_antecedent()))} -> {self.consequent}"


def _antecedent_sets(max_arity: int) -> typing.Iterator[tuple[Atom, ...]]:
    """All atom sets with at most one atom per factor, smallest first."""
    for size in range(1, max_arity + 1):
        for factors in itertools.combinations(FACTORS, size):
            for signatures in itertools.product(PLAIN_SIGNATURES, repeat=size):
                yield tuple(Atom.plain(f, s) for f, s in zip(factors, signatures))


def _masks(sequence: ProfileSequence) -> dict[Atom, int]:
    return {
        atom: sum(1 << i for i in indices)
        for atom, indices in _truth_profiles(sequence).items()
    }


def _joint_mask(
    masks: dict[Atom, int], atoms: typing.Iterable[Atom], full: int
) -> int:
    return functools.reduce(lambda acc, a: acc & masks[a], atoms, full)


def _check_arity(max_arity: int) -> None:
    if not 1 <= max_arity <= len(FACTORS):
        raise ValueError(f"max_arity must be between 1 and {len(FACTORS)}")


def mine_conjunctive(
    sequence: ProfileSequence,
    max_arity: int,
    target: typing.Optional[Atom] = None,
    non_vacuous: bool = False,
) -> set[ConjunctiveInvariant]:
    """
    Minimal antecedent sets S, at most one atom per factor and at most
    `max_arity` atoms, such that at every profile some atom of S is false or the
    consequent is true. The empty set counts, so always-true consequents yield
    nothing. For |S| ≥ 2 minimality already rules out sets where a single member
    implies the consequent on its own.

    `non_vacuous` additionally drops sets that are never jointly true and sets
    containing the consequent.
    """
    _check_arity(max_arity)

    masks = _masks(sequence)
    full = (1 << len(sequence)) - 1
    consequents = [target] if target is not None else list(PLAIN_ATOMS)
    candidates = list(_antecedent_sets(max_arity))

    found = set()
    for consequent in consequents:
        if masks[consequent] == full:
            continue

        minimal: list[frozenset[Atom]] = []
        for atoms in candidates:
            joint = _joint_mask(masks, atoms, full)
            if joint & ~masks[consequent]:
                continue

            antecedent = frozenset(atoms)
            if any(m <= antecedent for m in minimal):
                continue
            minimal.append(antecedent)

            if non_vacuous and (joint == 0 or consequent in antecedent):
                continue
            found.add(ConjunctiveInvariant(antecedent, consequent))

    LOGGER.debug("%s conjunctive invariants up to arity %s", len(found), max_arity)
    return found


def equivalence_characterisations(
    sequence: ProfileSequence, max_arity: int, budget: int = DEFAULT_BUDGET
) -> set[tuple[Atom, frozenset[Atom]]]:
    """
    Pairs (A', S) where S is jointly sufficient for A' and A' implies every
    member of S, each confirmed by deriving (∧S) ↔ A' from the mined invariants
    together with the conjunctive invariant ∧S → A'.
    """
    _check_arity(max_arity)

    masks = _masks(sequence)
    full = (1 << len(sequence)) - 1
    context = Prover(budget).context(mine(sequence).formulas())

    result = set()
    for atoms in _antecedent_sets(max_arity):
        joint = _joint_mask(masks, atoms, full)

        for characterised in PLAIN_ATOMS:
            # sufficiency and necessity together pin the truth profiles together
            if masks[characterised] != joint:
                continue

            invariant = ConjunctiveInvariant(frozenset(atoms), characterised)
            goal = iff(conjunction(invariant.sorted_antecedent()), characterised)
            if not context.derives(goal, [invariant.to_formula()]):
                LOGGER.warning("characterisation %s failed the prover check", invariant)
                continue

            result.add((characterised, frozenset(atoms)))

    return result


def distance(table: ImplicationTable, cell: Cell) -> int:
    return table.count(*cell)


def invariants_to_json(
    invariants: InvariantSet, sequence: ProfileSequence
) -> list[dict]:
    return [
        {
            "antecedent": {
                "factor": g.antecedent.factor.value,
                "signature": g.antecedent.signature.value,
            },
            "consequent": {
                "factor": g.consequent.factor.value,
                "signature": g.consequent.signature.value,
            },
            "count": 0,
            "class": classify(g, sequence).value,
        }
        for g in invariants
    ]


def invariants_from_json(document: list[dict], provenance: str = "") -> InvariantSet:
    def atom(entry):
        return Atom(Factor(entry["factor"]), Signature.parse(entry["signature"]))

    return InvariantSet(
        frozenset(
            GroundImplication(atom(item["antecedent"]), atom(item["consequent"]))
            for item in document
        ),
        provenance,
    )
