import dataclasses
import logging
import typing
from enum import Enum
from pathlib import Path

LOGGER = logging.getLogger(Path(__file__).name)


class Signature(Enum):
    MINUS_3 = "-!!!"
    MINUS_2 = "-!!"
    MINUS_1 = "-!"
    MINUS = "-"
    ZERO = "0"
    PLUS = "+"
    PLUS_1 = "+!"
    PLUS_2 = "+!!"
    PLUS_3 = "+!!!"
    PM_LOW = "pm-"
    PM = "pm"
    PM_HIGH = "pm+"

    @classmethod
    def parse(cls, token: str) -> "Signature":
        token = SIGNATURE_ALIASES.get(token, token)
        try:
            return cls(token)
        except ValueError:
            raise ValueError(f"unknown signature token {token!r}") from None

    @property
    def plain(self) -> "PlainSignature":
        return modulo_quanta(self)

    def __str__(self):
        return self.value


# typeset glyphs accepted on input, mapped onto the ASCII tokens
SIGNATURE_ALIASES = {
    "−": "-",
    "−!": "-!",
    "−!!": "-!!",
    "−!!!": "-!!!",
    "±": "pm",
    "±_!": "pm-",
    "±^!": "pm+",
}

LINEAR_CHAIN = (
    Signature.MINUS_3,
    Signature.MINUS_2,
    Signature.MINUS_1,
    Signature.MINUS,
    Signature.ZERO,
    Signature.PLUS,
    Signature.PLUS_1,
    Signature.PLUS_2,
    Signature.PLUS_3,
)
AMBIVALENT_CHAIN = (
    Signature.PM_LOW,
    Signature.PM,
    Signature.PM_HIGH,
)


class PlainSignature(Enum):
    ZERO = "0"
    PLUS = "+"
    MINUS = "-"
    PM = "pm"

    @property
    def code(self) -> int:
        return code(self)

    @property
    def signature(self) -> Signature:
        return Signature(self.value)

    @property
    def glyph(self) -> str:
        return {"-": "−", "pm": "±"}.get(self.value, self.value)

    @classmethod
    def from_code(cls, index: int) -> "PlainSignature":
        return PLAIN_SIGNATURES[index]

    def __str__(self):
        return self.value


# row/column order of the diagram subtables
PLAIN_SIGNATURES = (
    PlainSignature.ZERO,
    PlainSignature.PLUS,
    PlainSignature.MINUS,
    PlainSignature.PM,
)


class Vector(Enum):
    S = "S"
    P = "P"
    SCH = "Sch"
    C = "C"


class Factor(Enum):
    H = "h"
    S = "s"
    E = "e"
    HY = "hy"
    K = "k"
    P = "p"
    D = "d"
    M = "m"

    @property
    def index(self) -> int:
        return FACTORS.index(self)

    @property
    def vector(self) -> Vector:
        return (Vector.S, Vector.P, Vector.SCH, Vector.C)[self.index // 2]

    @classmethod
    def from_index(cls, index: int) -> "Factor":
        return FACTORS[index]

    def __str__(self):
        return self.value


FACTORS = tuple(Factor)


def poset_leq(a: Signature, b: Signature) -> bool:
    for chain in (LINEAR_CHAIN, AMBIVALENT_CHAIN):
        if a in chain and b in chain:
            return chain.index(a) <= chain.index(b)

    return False


def modulo_quanta(s: Signature) -> PlainSignature:
    if s in AMBIVALENT_CHAIN:
        return PlainSignature.PM
    if s == Signature.ZERO:
        return PlainSignature.ZERO
    if poset_leq(s, Signature.MINUS):
        return PlainSignature.MINUS
    return PlainSignature.PLUS


def co_set(p: PlainSignature) -> frozenset[PlainSignature]:
    return frozenset(q for q in PLAIN_SIGNATURES if q != p)


def code(p: PlainSignature) -> int:
    return PLAIN_SIGNATURES.index(p)


@dataclasses.dataclass(frozen=True)
class Profile:
    signatures: tuple[Signature, ...]

    def __post_init__(self):
        if len(self.signatures) != len(FACTORS):
            raise ValueError(
                f"a profile needs {len(FACTORS)} signatures, got {len(self.signatures)}"
            )
        object.__setattr__(self, "signatures", tuple(self.signatures))

    @classmethod
    def from_tokens(cls, tokens: typing.Iterable[str]) -> "Profile":
        return cls(tuple(Signature.parse(t) for t in tokens))

    def __getitem__(self, factor: Factor) -> Signature:
        return self.signatures[factor.index]

    def plain(self) -> tuple[PlainSignature, ...]:
        return tuple(modulo_quanta(s) for s in self.signatures)

    def codes(self) -> tuple[int, ...]:
        return tuple(code(p) for p in self.plain())

    def tokens(self) -> list[str]:
        return [s.value for s in self.signatures]

    def __str__(self):
        return " ".join(self.tokens())


NORM_PROFILE = Profile.from_tokens(["+", "+", "-", "-", "-", "-", "+", "+"])


@dataclasses.dataclass(frozen=True)
class ProfileSequence:
    """
    A nonempty sequence of profiles, oldest first. `is_extension_of(P, Q)` holds
    when Q is a suffix of P, i.e. P extends Q backwards in time.
    """

    profiles: tuple[Profile, ...]

    def __post_init__(self):
        object.__setattr__(self, "profiles", tuple(self.profiles))
        if not self.profiles:
            raise ValueError("a profile sequence needs at least one profile")

    def __len__(self):
        return len(self.profiles)

    def __iter__(self):
        return iter(self.profiles)

    def __getitem__(self, index):
        return self.profiles[index]

    @property
    def head(self) -> Profile:
        return self.profiles[0]

    def reversed(self) -> "ProfileSequence":
        return ProfileSequence(tuple(reversed(self.profiles)))

    def __str__(self):
        return "\n".join(str(p) for p in self.profiles)


def concat(prefix: ProfileSequence, suffix: ProfileSequence) -> ProfileSequence:
    return ProfileSequence(prefix.profiles + suffix.profiles)


def is_extension_of(p: ProfileSequence, q: ProfileSequence) -> bool:
    return len(q) <= len(p) and p.profiles[len(p) - len(q) :] == q.profiles


def suffixes(p: ProfileSequence) -> list[ProfileSequence]:
    return [ProfileSequence(p.profiles[i:]) for i in range(len(p))]


def head(p: ProfileSequence) -> Profile:
    return p.head
