import dataclasses
import json
import logging
import typing
from contextlib import suppress
from io import StringIO
from pathlib import Path

import yaml

from axiominspector.formula import TruthMode
from axiominspector.profile import FACTORS
from axiominspector.profile import Profile
from axiominspector.profile import ProfileSequence

LOGGER = logging.getLogger(Path(__file__).name)

CONFIG_FILE_NAME = "axiominspector.yaml"


@dataclasses.dataclass
class Error:
    source_file: Path
    source_line_no: int
    source_line: str
    message: str

    def __str__(self):
        return f"{self.source_file.name}:{self.source_line_no}: {self.message}"


class SequenceSyntaxError(Exception):
    def __init__(self, errors: list[Error]):
        self.errors = errors
        super().__init__("; ".join(str(e) for e in errors))


@dataclasses.dataclass
class Settings:
    format: str
    mode: TruthMode
    budget: int
    seed: int
    arity: int

    def __init__(
        self, format="ansi", mode=TruthMode.PLAIN, budget=10**6, seed=0, arity=2
    ):
        self.format = format
        self.mode = TruthMode(mode)
        self.budget = budget
        self.seed = seed
        self.arity = arity


@dataclasses.dataclass
class SequenceFile:
    path: Path
    profiles: list[Profile]
    errors: list[Error]

    def __init__(self, path, profiles=None, errors=None):
        self.path = Path(path)
        self.profiles = profiles or []
        self.errors = errors or []

    @property
    def sequence(self) -> ProfileSequence:
        if self.errors:
            raise SequenceSyntaxError(self.errors)
        return ProfileSequence(tuple(self.profiles))


def parse_profile_line(
    sequencefile: SequenceFile, line_no: int, line: str, tokens: list[str]
) -> typing.Optional[Profile]:
    if len(tokens) != len(FACTORS):
        sequencefile.errors.append(
            Error(
                sequencefile.path,
                line_no,
                line,
                f"arity error: expected {len(FACTORS)} signatures "
                f"(h s e hy k p d m), got {len(tokens)}",
            )
        )
        return None

    try:
        return Profile.from_tokens(tokens)
    except ValueError as ex:
        sequencefile.errors.append(
            Error(sequencefile.path, line_no, line, f"malformed token: {ex}")
        )
        return None


def parse_text_lines(sequencefile: SequenceFile, text: str) -> None:
    for line_no, line in enumerate(text.splitlines(), 1):
        content, _, _ = line.partition("#")
        tokens = content.split()

        # blank or comment-only line
        if not tokens:
            continue

        profile = parse_profile_line(sequencefile, line_no, line, tokens)
        if profile is not None:
            sequencefile.profiles.append(profile)


def parse_json_rows(sequencefile: SequenceFile, text: str) -> None:
    try:
        rows = json.loads(text)
    except json.JSONDecodeError as ex:
        sequencefile.errors.append(
            Error(sequencefile.path, ex.lineno, "", f"invalid JSON: {ex.msg}")
        )
        return

    if not isinstance(rows, list):
        sequencefile.errors.append(
            Error(sequencefile.path, 1, "", "JSON sequence must be an array of rows")
        )
        return

    for row_no, row in enumerate(rows, 1):
        if not isinstance(row, list) or not all(isinstance(t, str) for t in row):
            sequencefile.errors.append(
                Error(
                    sequencefile.path,
                    row_no,
                    json.dumps(row),
                    "JSON row must be an array of signature strings",
                )
            )
            continue

        profile = parse_profile_line(sequencefile, row_no, json.dumps(row), row)
        if profile is not None:
            sequencefile.profiles.append(profile)


def parse(path: typing.Union[str, Path], stream: typing.IO) -> SequenceFile:
    """
    Parse a profile-sequence file. Problems are collected in `.errors` (with line
    numbers; row numbers for the JSON form) instead of being raised, so that all of
    them can be reported at once.
    """
    sequencefile = SequenceFile(path)
    text = stream.read()

    if text.lstrip().startswith("["):
        parse_json_rows(sequencefile, text)
    else:
        parse_text_lines(sequencefile, text)

    if not sequencefile.profiles and not sequencefile.errors:
        sequencefile.errors.append(Error(sequencefile.path, 0, "", "empty input"))

    LOGGER.debug(
        "parsed %s: %s profiles, %s errors",
        sequencefile.path,
        len(sequencefile.profiles),
        len(sequencefile.errors),
    )

    return sequencefile


def parse_sequence(
    text: str, path: typing.Union[str, Path] = "<string>"
) -> ProfileSequence:
    return parse(path, StringIO(text)).sequence


def read_sequence_file(path: typing.Union[str, Path]) -> ProfileSequence:
    with open(path, encoding="utf-8") as f:
        return parse(path, f).sequence


def serialize_sequence(sequence: ProfileSequence) -> str:
    return "".join(f"{profile}\n" for profile in sequence)


def serialize_sequence_json(sequence: ProfileSequence) -> str:
    return json.dumps([profile.tokens() for profile in sequence])


def parse_global_config(
    input_path: typing.Union[str, Path]
) -> tuple[dict, typing.Optional[Path]]:
    search_path = Path(input_path)

    while str(search_path) != search_path.root:
        search_path = Path(search_path).parent

        try:
            with open(search_path / CONFIG_FILE_NAME) as f:
                return yaml.safe_load(f) or {}, search_path / CONFIG_FILE_NAME
        except FileNotFoundError:
            pass

        if (search_path / ".git").exists():
            break

    return {}, None


def load_settings(input_path: typing.Union[str, Path], **overrides) -> Settings:
    """
    Defaults, then the `settings` of the nearest axiominspector.yaml, then every
    override that is not None (usually the command line flags).
    """
    settings = Settings()
    config, config_path = parse_global_config(Path(input_path).resolve())
    global_settings = config.get("settings", {}) or {}

    if config_path:
        LOGGER.debug("using config %s: %s", config_path, global_settings)

    for key in dataclasses.fields(settings):
        value = None

        with suppress(LookupError):
            value = global_settings[key.name]

        if overrides.get(key.name) is not None:
            value = overrides[key.name]

        if value is None:
            continue

        if key.name == "mode":
            value = TruthMode(value)

        setattr(settings, key.name, value)

    return settings
