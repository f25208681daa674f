import logging
import random
import typing
from pathlib import Path

from axiominspector.parser import serialize_sequence
from axiominspector.profile import FACTORS
from axiominspector.profile import Profile
from axiominspector.profile import ProfileSequence
from axiominspector.profile import Signature

LOGGER = logging.getLogger(Path(__file__).name)

SIGNATURES = tuple(Signature)


def random_profile(rng: random.Random) -> Profile:
    return Profile(tuple(rng.choice(SIGNATURES) for _ in FACTORS))


def random_sequence(rng: random.Random, length: int) -> ProfileSequence:
    return ProfileSequence(tuple(random_profile(rng) for _ in range(length)))


def generate(count: int, length: int, seed: int = 0) -> list[ProfileSequence]:
    """`count` sequences of `length` profiles each, the same ones for the same seed."""
    if count < 1 or length < 1:
        raise ValueError(f"count and length must be positive, got {count}, {length}")

    rng = random.Random(seed)
    return [random_sequence(rng, length) for _ in range(count)]


def generate_mixed(
    count: int, max_length: int, seed: int = 0
) -> typing.Iterator[ProfileSequence]:
    rng = random.Random(seed)
    for _ in range(count):
        yield random_sequence(rng, rng.randint(1, max_length))


def write_sequences(
    sequences: typing.Iterable[ProfileSequence], out_dir: typing.Union[str, Path]
) -> list[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    paths = []
    for index, sequence in enumerate(sequences, 1):
        path = out_dir / f"seq-{index:04d}.txt"
        path.write_text(serialize_sequence(sequence), encoding="utf-8")
        LOGGER.debug("wrote %s", path)
        paths.append(path)

    return paths
