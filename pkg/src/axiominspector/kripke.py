import dataclasses
import itertools
import logging
import typing
from pathlib import Path

from axiominspector.formula import And
from axiominspector.formula import Atom
from axiominspector.formula import Formula
from axiominspector.formula import Implies
from axiominspector.formula import Not
from axiominspector.formula import Or

LOGGER = logging.getLogger(Path(__file__).name)

DEFAULT_MAX_WORLDS = 4


@dataclasses.dataclass(frozen=True)
class Frame:
    """
    A finite rooted poset. World 0 is the root and worlds are numbered so that
    w ≤ v implies w ≤ v numerically. `above[w]` is the bitmask of all v ≥ w.
    """

    size: int
    above: tuple[int, ...]

    def up_sets(self) -> list[int]:
        return [
            mask
            for mask in range(1 << self.size)
            if all(
                self.above[w] & ~mask == 0 for w in range(self.size) if mask >> w & 1
            )
        ]


@dataclasses.dataclass(frozen=True)
class Model:
    frame: Frame
    valuation: tuple[tuple[Atom, int], ...]

    def __str__(self):
        order = [
            f"{w}<={v}"
            for w in range(self.frame.size)
            for v in range(self.frame.size)
            if w != v and self.frame.above[w] >> v & 1
        ]
        forced = []
        for atom, mask in self.valuation:
            worlds = ",".join(str(w) for w in range(self.frame.size) if mask >> w & 1)
            forced.append(f"{atom}@{{{worlds}}}")
        return f"worlds={self.frame.size} order=[{' '.join(order)}] {' '.join(forced)}"


def _is_transitive(relation: set[tuple[int, int]]) -> bool:
    return all(
        (a, c) in relation for a, b in relation for b2, c in relation if b == b2
    )


def rooted_frames(max_worlds: int = DEFAULT_MAX_WORLDS) -> list[Frame]:
    frames = []

    for size in range(1, max_worlds + 1):
        optional = [(i, j) for i in range(1, size) for j in range(i + 1, size)]

        for chosen in itertools.product((False, True), repeat=len(optional)):
            relation = {(w, w) for w in range(size)}
            relation |= {(0, w) for w in range(size)}
            relation |= {pair for pair, keep in zip(optional, chosen) if keep}

            if not _is_transitive(relation):
                continue

            above = tuple(
                sum(1 << v for v in range(size) if (w, v) in relation)
                for w in range(size)
            )
            frames.append(Frame(size, above))

    return frames


def _implication_mask(frame: Frame, antecedent: int, consequent: int) -> int:
    # worlds all of whose successors forcing the antecedent also force the consequent
    return sum(
        1 << w
        for w in range(frame.size)
        if frame.above[w] & antecedent & ~consequent == 0
    )


def forces(model: Model, world: int, formula: Formula) -> bool:
    above = model.frame.above[world]
    successors = [v for v in range(model.frame.size) if above >> v & 1]

    if isinstance(formula, Atom):
        return bool(dict(model.valuation).get(formula, 0) >> world & 1)
    if isinstance(formula, Not):
        return not any(forces(model, v, formula.operand) for v in successors)
    if isinstance(formula, And):
        return forces(model, world, formula.left) and forces(
            model, world, formula.right
        )
    if isinstance(formula, Or):
        return forces(model, world, formula.left) or forces(
            model, world, formula.right
        )
    if isinstance(formula, Implies):
        return all(
            forces(model, v, formula.right)
            for v in successors
            if forces(model, v, formula.left)
        )
    raise TypeError(f"unsupported formula {formula!r}")


class KripkeOracle:
    """
    Brute-force intuitionistic validity over every rooted model with at most
    `max_worlds` worlds for a fixed set of atoms. Truth sets of subformulas are
    memoized across queries, so checking many related formulas stays cheap.
    """

    def __init__(
        self, atoms: typing.Iterable[Atom], max_worlds: int = DEFAULT_MAX_WORLDS
    ):
        self.atoms = tuple(sorted(set(atoms), key=str))
        self.models: list[Model] = []

        for frame in rooted_frames(max_worlds):
            up_sets = frame.up_sets()
            for masks in itertools.product(up_sets, repeat=len(self.atoms)):
                self.models.append(Model(frame, tuple(zip(self.atoms, masks))))

        self._truth: dict[Formula, tuple[int, ...]] = {}
        LOGGER.debug(
            "%s models over %s", len(self.models), ", ".join(map(str, self.atoms))
        )

    def truth(self, formula: Formula) -> tuple[int, ...]:
        if formula in self._truth:
            return self._truth[formula]

        if isinstance(formula, Atom):
            if formula not in self.atoms:
                raise ValueError(f"atom {formula} is not covered by this oracle")
            index = self.atoms.index(formula)
            result = tuple(m.valuation[index][1] for m in self.models)
        elif isinstance(formula, Not):
            operand = self.truth(formula.operand)
            result = tuple(
                _implication_mask(m.frame, a, 0) for m, a in zip(self.models, operand)
            )
        elif isinstance(formula, And):
            result = tuple(
                a & b
                for a, b in zip(self.truth(formula.left), self.truth(formula.right))
            )
        elif isinstance(formula, Or):
            result = tuple(
                a | b
                for a, b in zip(self.truth(formula.left), self.truth(formula.right))
            )
        elif isinstance(formula, Implies):
            result = tuple(
                _implication_mask(m.frame, a, b)
                for m, a, b in zip(
                    self.models, self.truth(formula.left), self.truth(formula.right)
                )
            )
        else:
            raise TypeError(f"unsupported formula {formula!r}")

        self._truth[formula] = result
        return result

    def countermodel(self, formula: Formula) -> typing.Optional[Model]:
        for model, mask in zip(self.models, self.truth(formula)):
            # truth sets are up-sets, so the root decides
            if not mask & 1:
                return model
        return None

    def is_valid(self, formula: Formula) -> bool:
        return self.countermodel(formula) is None


def find_countermodel(
    formula: Formula, max_worlds: int = DEFAULT_MAX_WORLDS
) -> typing.Optional[Model]:
    return KripkeOracle(formula.atoms(), max_worlds).countermodel(formula)


def kripke_valid(formula: Formula, max_worlds: int = DEFAULT_MAX_WORLDS) -> bool:
    return find_countermodel(formula, max_worlds) is None
