import dataclasses
import json
import logging
import typing
from enum import Enum
from pathlib import Path

from axiominspector.formula import Formula
from axiominspector.formula import FormulaSyntaxError
from axiominspector.formula import conjunction
from axiominspector.formula import parse_formula
from axiominspector.galois import Corpus
from axiominspector.galois import right_polarity
from axiominspector.galois import theory_leq
from axiominspector.galois import theory_of
from axiominspector.parser import SequenceSyntaxError
from axiominspector.parser import parse_sequence
from axiominspector.profile import FACTORS
from axiominspector.profile import Factor
from axiominspector.profile import Profile
from axiominspector.profile import ProfileSequence
from axiominspector.profile import Signature
from axiominspector.profile import suffixes
from axiominspector.prover import DEFAULT_BUDGET

LOGGER = logging.getLogger(Path(__file__).name)

DEFAULT_TEST_LIMIT = 16

SequenceSet = frozenset[ProfileSequence]


class TransformationSpecError(Exception):
    pass


class TransformationKind(Enum):
    IDENTITY = "identity"
    APPEND_PROFILE = "append-profile"
    DROP_OLDEST = "drop-oldest"
    FACTOR_PERMUTATION = "factor-permutation"
    SIGNATURE_MAP = "signature-map"
    UNION_CONSTANT = "union-constant"
    REPLACE_CONSTANT = "replace-constant"
    COMPOSITE = "composite"


@dataclasses.dataclass(frozen=True)
class Transformation:
    """
    A total map on sets of profile sequences. Only the fields used by `kind` are
    set. A composite applies its parts right to left, like function composition.
    """

    name: str
    kind: TransformationKind
    profile: typing.Optional[Profile] = None
    count: int = 0
    # position i of the image takes the signature of factor permutation[i]
    permutation: tuple[int, ...] = ()
    signature_map: tuple[tuple[Signature, Signature], ...] = ()
    constant: SequenceSet = frozenset()
    parts: tuple["Transformation", ...] = ()

    def __str__(self):
        return self.name


IDENTITY = Transformation("identity", TransformationKind.IDENTITY)


def append_profile(profile: Profile, name: typing.Optional[str] = None):
    return Transformation(
        name or f"append-profile({profile})",
        TransformationKind.APPEND_PROFILE,
        profile=profile,
    )


def drop_oldest(count: int, name: typing.Optional[str] = None):
    if count < 0:
        raise ValueError(f"cannot drop {count} profiles")
    return Transformation(
        name or f"drop-oldest({count})", TransformationKind.DROP_OLDEST, count=count
    )


def factor_permutation(
    permutation: typing.Sequence[int], name: typing.Optional[str] = None
):
    if sorted(permutation) != list(range(len(FACTORS))):
        raise ValueError(f"not a permutation of the factors: {list(permutation)}")
    return Transformation(
        name
        or "factor-permutation("
        + " ".join(Factor.from_index(i).value for i in permutation)
        + ")",
        TransformationKind.FACTOR_PERMUTATION,
        permutation=tuple(permutation),
    )


def signature_map(
    mapping: typing.Mapping[Signature, Signature], name: typing.Optional[str] = None
):
    pairs = tuple(sorted(mapping.items(), key=lambda pair: pair[0].value))
    return Transformation(
        name
        or "signature-map(" + ", ".join(f"{a}:{b}" for a, b in pairs) + ")",
        TransformationKind.SIGNATURE_MAP,
        signature_map=pairs,
    )


def union_constant(
    sequences: typing.Iterable[ProfileSequence], name: typing.Optional[str] = None
):
    constant = frozenset(sequences)
    return Transformation(
        name or f"union-constant({len(constant)})",
        TransformationKind.UNION_CONSTANT,
        constant=constant,
    )


def replace_constant(
    sequences: typing.Iterable[ProfileSequence], name: typing.Optional[str] = None
):
    constant = frozenset(sequences)
    return Transformation(
        name or f"replace-constant({len(constant)})",
        TransformationKind.REPLACE_CONSTANT,
        constant=constant,
    )


def compose(first: Transformation, second: Transformation) -> Transformation:
    """`compose(a, b)` applies `b` first, then `a`."""
    parts = []
    for t in (first, second):
        if t.kind == TransformationKind.COMPOSITE:
            parts.extend(t.parts)
        else:
            parts.append(t)
    return Transformation(
        f"({first} . {second})", TransformationKind.COMPOSITE, parts=tuple(parts)
    )


def _map_profiles(
    sequence: ProfileSequence, function: typing.Callable[[Profile], Profile]
) -> ProfileSequence:
    return ProfileSequence(tuple(function(p) for p in sequence))


def _apply_to_sequence(t: Transformation, sequence: ProfileSequence):
    if t.kind == TransformationKind.APPEND_PROFILE:
        return ProfileSequence((t.profile,) + sequence.profiles)

    if t.kind == TransformationKind.DROP_OLDEST:
        if len(sequence) > t.count:
            return ProfileSequence(sequence.profiles[t.count :])
        return sequence

    if t.kind == TransformationKind.FACTOR_PERMUTATION:
        return _map_profiles(
            sequence,
            lambda p: Profile(tuple(p.signatures[i] for i in t.permutation)),
        )

    if t.kind == TransformationKind.SIGNATURE_MAP:
        mapping = dict(t.signature_map)
        return _map_profiles(
            sequence,
            lambda p: Profile(tuple(mapping.get(s, s) for s in p.signatures)),
        )

    raise ValueError(f"{t.kind.value} does not act on single sequences")


def apply(
    t: Transformation, sequences: typing.Iterable[ProfileSequence]
) -> SequenceSet:
    sequences = frozenset(sequences)

    if t.kind == TransformationKind.IDENTITY:
        result = sequences
    elif t.kind == TransformationKind.UNION_CONSTANT:
        result = sequences | t.constant
    elif t.kind == TransformationKind.REPLACE_CONSTANT:
        result = t.constant
    elif t.kind == TransformationKind.COMPOSITE:
        result = sequences
        for part in reversed(t.parts):
            result = apply(part, result)
    else:
        result = frozenset(_apply_to_sequence(t, s) for s in sequences)

    LOGGER.debug("%s: %s sequences -> %s", t, len(sequences), len(result))
    return result


@dataclasses.dataclass(frozen=True)
class Witness:
    """A test input and the element that went missing from its image."""

    test: frozenset
    missing: typing.Union[Formula, str]

    def __str__(self):
        if all(isinstance(t, ProfileSequence) for t in self.test):
            test = f"{len(self.test)} sequences"
        else:
            test = "{" + ", ".join(sorted(str(t) for t in self.test)) + "}"
        return f"{self.missing} lost on {test}"


@dataclasses.dataclass(frozen=True)
class Verdict:
    witness: typing.Optional[Witness] = None

    @property
    def preserved(self) -> bool:
        return self.witness is None

    def __str__(self):
        if self.preserved:
            return "preserved-on-tests"
        return f"violated: {self.witness}"


PRESERVED = Verdict()


def preserves(
    t: Transformation,
    formulas: typing.Iterable[Formula],
    tests: typing.Iterable[typing.Iterable[ProfileSequence]],
    c: typing.Optional[Corpus] = None,
) -> Verdict:
    """
    Check on every test set that each formula of the given theory held by the
    test set is still held by its image. Passing is evidence on the tests only.
    """
    budget = c.budget if c is not None else DEFAULT_BUDGET
    formulas = list(formulas)

    for test in tests:
        test = frozenset(test)
        before = theory_of(test, budget)
        after = theory_of(apply(t, test), budget)

        for formula in formulas:
            if before.contains(formula) and not after.contains(formula):
                LOGGER.debug("%s violated by %s", t, formula)
                return Verdict(Witness(test, formula))

    return PRESERVED


def category_membership_report(
    formulas: typing.Iterable[Formula],
    candidates: typing.Iterable[Transformation],
    tests: typing.Iterable[typing.Iterable[ProfileSequence]],
    c: typing.Optional[Corpus] = None,
) -> list[tuple[Transformation, Verdict]]:
    formulas = list(formulas)
    tests = [frozenset(test) for test in tests]
    return [(t, preserves(t, formulas, tests, c)) for t in candidates]


def preservation_inclusion(
    t: Transformation,
    sequences: typing.Iterable[ProfileSequence],
    budget: int = DEFAULT_BUDGET,
) -> bool:
    sequences = frozenset(sequences)
    image = apply(t, sequences)
    return theory_leq(theory_of(sequences, budget), theory_of(image, budget))


def suffix_chain_tests(
    sequences: typing.Iterable[ProfileSequence], limit: int = DEFAULT_TEST_LIMIT
) -> list[SequenceSet]:
    tests = []
    for sequence in sequences:
        for suffix in suffixes(sequence):
            test = frozenset([suffix])
            if test not in tests:
                tests.append(test)
            if len(tests) == limit:
                return tests
    return tests


class FormulaTransformationKind(Enum):
    IDENTITY = "identity"
    UNION_CONSTANT = "union-constant"
    INTERSECT_CONSTANT = "intersect-constant"
    CONJOIN = "conjoin"
    WEAKEN = "weaken"
    COMPOSITE = "composite"


@dataclasses.dataclass(frozen=True)
class FormulaTransformation:
    name: str
    kind: FormulaTransformationKind
    constant: frozenset[Formula] = frozenset()
    formula: typing.Optional[Formula] = None
    parts: tuple["FormulaTransformation", ...] = ()

    def __str__(self):
        return self.name


FORMULA_IDENTITY = FormulaTransformation("identity", FormulaTransformationKind.IDENTITY)


def apply_formulas(
    t: FormulaTransformation, formulas: typing.Iterable[Formula]
) -> frozenset[Formula]:
    formulas = frozenset(formulas)

    if t.kind == FormulaTransformationKind.IDENTITY:
        return formulas
    if t.kind == FormulaTransformationKind.UNION_CONSTANT:
        return formulas | t.constant
    if t.kind == FormulaTransformationKind.INTERSECT_CONSTANT:
        return formulas & t.constant
    if t.kind == FormulaTransformationKind.CONJOIN:
        if not formulas:
            return formulas
        return frozenset([conjunction(sorted(formulas, key=str))])
    if t.kind == FormulaTransformationKind.WEAKEN:
        return frozenset(f | t.formula for f in formulas)

    for part in reversed(t.parts):
        formulas = apply_formulas(part, formulas)
    return formulas


def preserves_sequences(
    t: FormulaTransformation,
    names: typing.Iterable[str],
    tests: typing.Iterable[typing.Iterable[Formula]],
    c: Corpus,
) -> Verdict:
    """Every named sequence satisfying a test set also satisfies its image."""
    names = frozenset(names)

    for test in tests:
        test = frozenset(test)
        before = right_polarity(test, c) & names
        after = right_polarity(apply_formulas(t, test), c)

        for name in sorted(before - after):
            return Verdict(Witness(test, name))

    return PRESERVED


def _parse_sequence_rows(rows, name: str) -> ProfileSequence:
    if not isinstance(rows, list):
        raise TransformationSpecError(f"{name}: a sequence must be a list of rows")

    lines = [row if isinstance(row, str) else " ".join(row) for row in rows]
    try:
        return parse_sequence("\n".join(lines), f"<{name}>")
    except SequenceSyntaxError as ex:
        raise TransformationSpecError(f"{name}: {ex}") from ex


def _parse_factor(value) -> int:
    if isinstance(value, int):
        return Factor.from_index(value).index
    return Factor(value).index


def _require(document: dict, key: str, name: str):
    try:
        return document[key]
    except KeyError:
        raise TransformationSpecError(f"{name}: missing {key!r}") from None


def load_transformation(document: typing.Union[dict, list]) -> Transformation:
    """
    Build a transformation from its JSON form: an object with "kind" and the
    kind's parameters, or a list, which composes its entries left to right as
    written (the last entry applies first).
    """
    if isinstance(document, list):
        document = {"kind": "composite", "parts": document}

    if not isinstance(document, dict):
        raise TransformationSpecError(f"not a transformation: {document!r}")

    try:
        kind = TransformationKind(document.get("kind"))
    except ValueError:
        raise TransformationSpecError(
            f"unknown kind {document.get('kind')!r}"
        ) from None

    name = document.get("name")
    label = name or kind.value

    try:
        if kind == TransformationKind.IDENTITY:
            return dataclasses.replace(IDENTITY, name=name or IDENTITY.name)

        if kind == TransformationKind.APPEND_PROFILE:
            profile = _require(document, "profile", label)
            if isinstance(profile, str):
                profile = profile.split()
            return append_profile(Profile.from_tokens(profile), name)

        if kind == TransformationKind.DROP_OLDEST:
            return drop_oldest(int(document.get("count", 1)), name)

        if kind == TransformationKind.FACTOR_PERMUTATION:
            permutation = _require(document, "permutation", label)
            return factor_permutation([_parse_factor(v) for v in permutation], name)

        if kind == TransformationKind.SIGNATURE_MAP:
            mapping = _require(document, "map", label)
            return signature_map(
                {Signature.parse(a): Signature.parse(b) for a, b in mapping.items()},
                name,
            )

        if kind in (
            TransformationKind.UNION_CONSTANT,
            TransformationKind.REPLACE_CONSTANT,
        ):
            sequences = [
                _parse_sequence_rows(rows, f"{label}[{index}]")
                for index, rows in enumerate(_require(document, "sequences", label))
            ]
            if kind == TransformationKind.UNION_CONSTANT:
                return union_constant(sequences, name)
            return replace_constant(sequences, name)

        parts = [
            load_transformation(part) for part in _require(document, "parts", label)
        ]
    except (ValueError, TypeError, AttributeError) as ex:
        raise TransformationSpecError(f"{label}: {ex}") from ex

    if not parts:
        return dataclasses.replace(IDENTITY, name=name or IDENTITY.name)

    result = parts[-1]
    for part in reversed(parts[:-1]):
        result = compose(part, result)
    return dataclasses.replace(result, name=name) if name else result


def load_transformation_file(path: typing.Union[str, Path]) -> Transformation:
    with open(path, encoding="utf-8") as f:
        try:
            document = json.load(f)
        except json.JSONDecodeError as ex:
            raise TransformationSpecError(f"{path}: invalid JSON: {ex}") from ex

    transformation = load_transformation(document)
    LOGGER.debug("loaded %s from %s", transformation, path)
    return transformation


def load_formula_transformation(
    document: typing.Union[dict, list]
) -> FormulaTransformation:
    if isinstance(document, list):
        document = {"kind": "composite", "parts": document}

    try:
        kind = FormulaTransformationKind(document.get("kind"))
    except (ValueError, AttributeError):
        raise TransformationSpecError(
            f"not a formula transformation: {document!r}"
        ) from None

    name = document.get("name") or kind.value

    try:
        constant = frozenset(parse_formula(f) for f in document.get("formulas", []))
        formula = (
            parse_formula(document["formula"]) if "formula" in document else None
        )
    except FormulaSyntaxError as ex:
        raise TransformationSpecError(f"{name}: {ex}") from ex

    parts = tuple(load_formula_transformation(p) for p in document.get("parts", []))

    if kind == FormulaTransformationKind.WEAKEN and formula is None:
        raise TransformationSpecError(f"{name}: missing 'formula'")

    return FormulaTransformation(name, kind, constant, formula, parts)
