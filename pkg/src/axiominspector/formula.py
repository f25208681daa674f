import dataclasses
import functools
import logging
import re
import typing
from enum import Enum
from pathlib import Path

from axiominspector.profile import FACTORS
from axiominspector.profile import Factor
from axiominspector.profile import PlainSignature
from axiominspector.profile import Profile
from axiominspector.profile import Signature
from axiominspector.profile import modulo_quanta

LOGGER = logging.getLogger(Path(__file__).name)


class TruthMode(Enum):
    PLAIN = "plain"
    FULL = "full"


class FormulaSyntaxError(Exception):
    def __init__(self, message: str, position: int):
        self.message = message
        self.position = position
        super().__init__(f"{message} at position {position}")


# binding strength, loosest first
PREC_IMPLIES = 1
PREC_OR = 2
PREC_AND = 3
PREC_NOT = 4
PREC_ATOM = 5


class Formula:
    precedence = PREC_ATOM

    def __and__(self, other: "Formula") -> "Formula":
        return And(self, other)

    def __or__(self, other: "Formula") -> "Formula":
        return Or(self, other)

    def __invert__(self) -> "Formula":
        return Not(self)

    def __rshift__(self, other: "Formula") -> "Formula":
        return Implies(self, other)

    def __str__(self):
        return format_formula(self)

    def atoms(self) -> frozenset["Atom"]:
        raise NotImplementedError()


@dataclasses.dataclass(frozen=True)
class Atom(Formula):
    factor: Factor
    signature: Signature

    precedence = PREC_ATOM

    @classmethod
    def plain(cls, factor: Factor, signature: PlainSignature) -> "Atom":
        return cls(factor, signature.signature)

    @property
    def plain_signature(self) -> PlainSignature:
        return modulo_quanta(self.signature)

    @property
    def is_plain(self) -> bool:
        return self.signature == self.plain_signature.signature

    def atoms(self):
        return frozenset([self])

    def __str__(self):
        return f"{self.factor.value}{self.signature.value}"


@dataclasses.dataclass(frozen=True)
class Not(Formula):
    operand: Formula

    precedence = PREC_NOT

    def atoms(self):
        return self.operand.atoms()


@dataclasses.dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula

    precedence = PREC_AND

    def atoms(self):
        return self.left.atoms() | self.right.atoms()


@dataclasses.dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula

    precedence = PREC_OR

    def atoms(self):
        return self.left.atoms() | self.right.atoms()


@dataclasses.dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula

    precedence = PREC_IMPLIES

    def atoms(self):
        return self.left.atoms() | self.right.atoms()


# ⊥ and ⊤ are macros over this atom
DESIGNATED_ATOM = Atom(Factor.H, Signature.ZERO)
BOTTOM = And(DESIGNATED_ATOM, Not(DESIGNATED_ATOM))
TOP = Not(BOTTOM)


def iff(left: Formula, right: Formula) -> Formula:
    return And(Implies(left, right), Implies(right, left))


def conjunction(formulas: typing.Iterable[Formula]) -> Formula:
    formulas = list(formulas)
    if not formulas:
        return TOP
    return functools.reduce(And, formulas)


def disjunction(formulas: typing.Iterable[Formula]) -> Formula:
    formulas = list(formulas)
    if not formulas:
        return BOTTOM
    return functools.reduce(Or, formulas)


def depth(formula: Formula) -> int:
    if isinstance(formula, Atom):
        return 0
    if isinstance(formula, Not):
        return 1 + depth(formula.operand)
    return 1 + max(depth(formula.left), depth(formula.right))


def substitute(formula: Formula, mapping: typing.Mapping[Atom, Formula]) -> Formula:
    if isinstance(formula, Atom):
        return mapping.get(formula, formula)
    if isinstance(formula, Not):
        return Not(substitute(formula.operand, mapping))
    return type(formula)(
        substitute(formula.left, mapping), substitute(formula.right, mapping)
    )


def format_formula(formula: Formula) -> str:
    """
    Render with the minimum of parentheses the grammar needs: `&` and `|` group to
    the left, `->` to the right.
    """
    if formula == BOTTOM:
        return "F"
    if formula == TOP:
        return "T"
    if isinstance(formula, Atom):
        return str(formula)
    if isinstance(formula, Not):
        operand = format_formula(formula.operand)
        if formula.operand.precedence < PREC_NOT and formula.operand not in (
            BOTTOM,
            TOP,
        ):
            operand = f"({operand})"
        return f"~{operand}"

    symbol = {And: "&", Or: "|", Implies: "->"}[type(formula)]
    left = format_formula(formula.left)
    right = format_formula(formula.right)

    if _needs_parens(formula.left, formula, is_right=False):
        left = f"({left})"
    if _needs_parens(formula.right, formula, is_right=True):
        right = f"({right})"

    return f"{left} {symbol} {right}"


def _needs_parens(child: Formula, parent: Formula, is_right: bool) -> bool:
    if child in (BOTTOM, TOP):
        return False
    if child.precedence != parent.precedence:
        return child.precedence < parent.precedence
    if isinstance(parent, Implies):
        return not is_right
    return is_right


RE_TOKEN = re.compile(
    r"(?P<arrow>->)"
    r"|(?P<op>[~&|()])"
    r"|(?P<const>[TF])"
    r"|(?P<factor>hy|h|s|e|k|p|d|m)"
    r"(?P<signature>"
    r"pm\+|pm-(?!>)|pm"
    r"|\+!!!|\+!!|\+!|\+"
    r"|-!!!|-!!|-!|-(?!>)"
    r"|0"
    r"|±_!|±\^!|±"
    r"|−!!!|−!!|−!|−"
    r")"
)

Token = tuple[str, typing.Any, int]


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0

    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue

        match = RE_TOKEN.match(text, pos)
        if not match:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos)

        if match["arrow"]:
            tokens.append(("->", None, pos))
        elif match["op"]:
            tokens.append((match["op"], None, pos))
        elif match["const"]:
            tokens.append(("const", TOP if match["const"] == "T" else BOTTOM, pos))
        else:
            atom = Atom(Factor(match["factor"]), Signature.parse(match["signature"]))
            tokens.append(("atom", atom, pos))

        pos = match.end()

    tokens.append(("end", None, len(text)))

    return tokens


class _FormulaParser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.index = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def accept(self, kind: str) -> bool:
        if self.current[0] == kind:
            self.index += 1
            return True
        return False

    def expect(self, kind: str) -> None:
        if not self.accept(kind):
            self.fail(f"expected {kind!r}")

    def fail(self, message: str) -> typing.NoReturn:
        kind, _, pos = self.current
        found = "end of input" if kind == "end" else repr(kind)
        raise FormulaSyntaxError(f"{message}, found {found}", pos)

    def parse(self) -> Formula:
        formula = self.implication()
        if self.current[0] != "end":
            self.fail("unexpected trailing input")
        return formula

    def implication(self) -> Formula:
        left = self.disjunction()
        if self.accept("->"):
            return Implies(left, self.implication())
        return left

    def disjunction(self) -> Formula:
        formula = self.conjunction()
        while self.accept("|"):
            formula = Or(formula, self.conjunction())
        return formula

    def conjunction(self) -> Formula:
        formula = self.unary()
        while self.accept("&"):
            formula = And(formula, self.unary())
        return formula

    def unary(self) -> Formula:
        if self.accept("~"):
            return Not(self.unary())
        return self.primary()

    def primary(self) -> Formula:
        kind, value, _ = self.current
        if kind in ("atom", "const"):
            self.index += 1
            return value
        if self.accept("("):
            formula = self.implication()
            self.expect(")")
            return formula
        self.fail("expected an atom, a constant or '('")


def parse_formula(text: str) -> Formula:
    formula = _FormulaParser(text).parse()
    LOGGER.debug("parsed formula %r as %s", text, formula)
    return formula


def profile_atoms(p: Profile, mode: TruthMode = TruthMode.PLAIN) -> list[Atom]:
    if mode == TruthMode.PLAIN:
        return [Atom.plain(f, modulo_quanta(s)) for f, s in zip(FACTORS, p.signatures)]
    return [Atom(f, s) for f, s in zip(FACTORS, p.signatures)]


def profile_formula(p: Profile, mode: TruthMode = TruthMode.PLAIN) -> Formula:
    return conjunction(profile_atoms(p, mode))


def atom_true_at(p: Profile, a: Atom, mode: TruthMode = TruthMode.PLAIN) -> bool:
    if mode == TruthMode.PLAIN:
        return modulo_quanta(p[a.factor]) == modulo_quanta(a.signature)
    return p[a.factor] == a.signature
