import dataclasses
import functools
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

DEFAULT_BUDGET = 10**6


class BudgetExceeded(Exception):
    def __init__(self, steps: int):
        self.steps = steps
        super().__init__(f"proof search gave up after {steps} steps")


@dataclasses.dataclass(frozen=True)
class _Falsum(Formula):
    def atoms(self):
        return frozenset()

    def __str__(self):
        return "⊥"


FALSUM = _Falsum()

# saturated antecedent: atoms, plus implications waiting for their premise
Branch = tuple[frozenset, frozenset]


@functools.lru_cache(maxsize=65536)
def _desugar(formula: Formula) -> Formula:
    if isinstance(formula, Atom):
        return formula
    if isinstance(formula, Not):
        return Implies(_desugar(formula.operand), FALSUM)
    return type(formula)(_desugar(formula.left), _desugar(formula.right))


class _Search:
    """
    Backward proof search in Dyckhoff's contraction-free calculus for
    intuitionistic propositional logic. All invertible left rules are applied
    eagerly by `saturate`; the only choice points are the right disjunction rule
    and the left rule for implications with an implication as premise.
    """

    def __init__(self, budget: int):
        self.budget = budget
        self.steps = 0
        self.cache: dict[tuple, bool] = {}

    def tick(self):
        self.steps += 1
        if self.steps > self.budget:
            raise BudgetExceeded(self.steps)

    def saturate(
        self, atoms: typing.AbstractSet, stuck: typing.AbstractSet, todo: list
    ) -> list[Branch]:
        atoms = set(atoms)
        stuck = set(stuck)
        todo = list(todo)

        while todo:
            self.tick()
            formula = todo.pop()

            if isinstance(formula, _Falsum):
                return []

            if isinstance(formula, Atom):
                if formula not in atoms:
                    atoms.add(formula)
                    released = [s for s in stuck if s.left == formula]
                    for implication in released:
                        stuck.discard(implication)
                        todo.append(implication.right)
            elif isinstance(formula, And):
                todo.append(formula.left)
                todo.append(formula.right)
            elif isinstance(formula, Or):
                branches = []
                for side in (formula.left, formula.right):
                    branches.extend(self.saturate(atoms, stuck, todo + [side]))
                return branches
            else:
                premise, conclusion = formula.left, formula.right

                if isinstance(premise, _Falsum):
                    continue
                elif isinstance(premise, Atom):
                    if premise in atoms:
                        todo.append(conclusion)
                    else:
                        stuck.add(formula)
                elif isinstance(premise, And):
                    todo.append(
                        Implies(premise.left, Implies(premise.right, conclusion))
                    )
                elif isinstance(premise, Or):
                    todo.append(Implies(premise.left, conclusion))
                    todo.append(Implies(premise.right, conclusion))
                else:
                    stuck.add(formula)

        return [(frozenset(atoms), frozenset(stuck))]

    def prove_all(self, branches: list[Branch], goal: Formula) -> bool:
        return all(self.prove(atoms, stuck, goal) for atoms, stuck in branches)

    def prove(self, atoms: frozenset, stuck: frozenset, goal: Formula) -> bool:
        self.tick()

        if isinstance(goal, And):
            return self.prove(atoms, stuck, goal.left) and self.prove(
                atoms, stuck, goal.right
            )
        if isinstance(goal, Implies):
            return self.prove_all(self.saturate(atoms, stuck, [goal.left]), goal.right)
        if isinstance(goal, Atom) and goal in atoms:
            return True

        key = (atoms, stuck, goal)
        if key not in self.cache:
            self.cache[key] = self.search(atoms, stuck, goal)
        return self.cache[key]

    def search(self, atoms: frozenset, stuck: frozenset, goal: Formula) -> bool:
        if isinstance(goal, Or):
            if self.prove(atoms, stuck, goal.left):
                return True
            if self.prove(atoms, stuck, goal.right):
                return True

        for implication in stuck:
            if not isinstance(implication.left, Implies):
                continue

            rest = stuck - {implication}
            inner, outer = implication.left, implication.right

            # Γ, D→B ⊢ C→D  and  Γ, B ⊢ G
            first = self.saturate(
                atoms, rest, [Implies(inner.right, outer), inner.left]
            )
            if not self.prove_all(first, inner.right):
                continue
            if self.prove_all(self.saturate(atoms, rest, [outer]), goal):
                return True

        return False


class ProofContext:
    """
    An axiom base saturated once, against which many goals can be decided.
    `derives(goal, assumptions)` answers derivability from base ∪ assumptions.
    """

    def __init__(self, base: typing.Iterable[Formula], budget: int = DEFAULT_BUDGET):
        self.budget = budget
        self.base = tuple(base)
        search = _Search(budget)
        self.branches = search.saturate(set(), set(), [_desugar(f) for f in self.base])
        LOGGER.debug(
            "saturated %s axioms into %s branches after %s steps",
            len(self.base),
            len(self.branches),
            search.steps,
        )

    def derives(
        self, goal: Formula, assumptions: typing.Iterable[Formula] = ()
    ) -> bool:
        search = _Search(self.budget)
        extra = [_desugar(f) for f in assumptions]

        branches = self.branches
        if extra:
            branches = [
                branch
                for atoms, stuck in self.branches
                for branch in search.saturate(atoms, stuck, extra)
            ]

        result = search.prove_all(branches, _desugar(goal))
        LOGGER.debug("%s: %s after %s steps", goal, result, search.steps)
        return result


class Prover:
    """
    Decides derivability from a finite axiom base. Instances hold only the step
    budget, so one prover can be shared freely.
    """

    def __init__(self, budget: int = DEFAULT_BUDGET):
        self.budget = budget

    def context(self, base: typing.Iterable[Formula]) -> ProofContext:
        return ProofContext(base, self.budget)

    def derives(self, base: typing.Iterable[Formula], goal: Formula) -> bool:
        return self.context(base).derives(goal)

    def derives_all(
        self, base: typing.Iterable[Formula], goals: typing.Sequence[Formula]
    ) -> list[bool]:
        if not goals:
            return []

        context = self.context(base)
        return [context.derives(goal) for goal in goals]


def derives(
    base: typing.Iterable[Formula], goal: Formula, budget: int = DEFAULT_BUDGET
) -> bool:
    return Prover(budget).derives(base, goal)


def derives_all(
    base: typing.Iterable[Formula],
    goals: typing.Sequence[Formula],
    budget: int = DEFAULT_BUDGET,
) -> list[bool]:
    return Prover(budget).derives_all(base, goals)
