import argparse
import json
import logging
import sys
from pathlib import Path

from axiominspector.categories import TransformationSpecError
from axiominspector.categories import load_transformation_file
from axiominspector.categories import suffix_chain_tests
from axiominspector.checker import CategoryChecker
from axiominspector.diagram import SuperposeOp
from axiominspector.diagram import UnknownFormatError
from axiominspector.diagram import render
from axiominspector.diagram import superpose
from axiominspector.diagram import to_json_document
from axiominspector.formula import FormulaSyntaxError
from axiominspector.formula import TruthMode
from axiominspector.formula import parse_formula
from axiominspector.formula import profile_atoms
from axiominspector.galois import Corpus
from axiominspector.galois import CorpusError
from axiominspector.galois import kernel_equiv_formulas
from axiominspector.galois import kernel_equiv_sequences
from axiominspector.galois import left_polarity
from axiominspector.galois import right_polarity
from axiominspector.generator import generate
from axiominspector.generator import write_sequences
from axiominspector.kripke import find_countermodel
from axiominspector.miner import causal_factors
from axiominspector.miner import invariants_from_json
from axiominspector.miner import invariants_to_json
from axiominspector.miner import mine
from axiominspector.miner import mine_conjunctive
from axiominspector.miner import non_vacuous_invariants
from axiominspector.miner import oracle_mine
from axiominspector.miner import update
from axiominspector.parser import SequenceSyntaxError
from axiominspector.parser import load_settings
from axiominspector.parser import read_sequence_file
from axiominspector.prover import BudgetExceeded
from axiominspector.prover import ProofContext
from axiominspector.reporter import ConsoleReporter

LOGGER = logging.getLogger(Path(__file__).name)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_SYNTAX = 2
EXIT_IO = 3
EXIT_BUDGET = 4

# countermodel search enumerates every valuation, keep it small
COUNTERMODEL_MAX_ATOMS = 3


def dump_json(document) -> None:
    print(json.dumps(document, indent=2, sort_keys=True))


def read_sequence(path):
    LOGGER.debug("reading %s", path)
    return read_sequence_file(Path(path))


def cmd_mine(args, settings):
    sequence = read_sequence(args.input)
    table = update(sequence)
    invariants = mine(sequence)
    non_vacuous = sorted(non_vacuous_invariants(sequence), key=lambda g: g.cell)

    if settings.format == "json":
        document = to_json_document(table)
        document["non_vacuous"] = [str(g) for g in non_vacuous]
        if args.invariants:
            document["invariants"] = invariants_to_json(invariants, sequence)
        if args.causal:
            document["causal"] = [
                {"atom": str(a), "count": n} for a, n in causal_factors(sequence)
            ]
        if args.conjunctive:
            document["conjunctive"] = sorted(
                str(c)
                for c in mine_conjunctive(sequence, settings.arity, non_vacuous=True)
            )
        dump_json(document)
        return EXIT_OK

    sys.stdout.write(render(table, settings.format))

    if args.invariants:
        dump_json(invariants_to_json(invariants, sequence))
    if args.causal:
        for atom, count in causal_factors(sequence):
            print(f"{atom} {count}")
    if args.conjunctive:
        for invariant in sorted(
            str(c) for c in mine_conjunctive(sequence, settings.arity, non_vacuous=True)
        ):
            print(invariant)

    return EXIT_OK


def _load_axioms(args, settings):
    axioms = []

    if args.axioms:
        path = Path(args.axioms)
        if path.suffix == ".json":
            with open(path, encoding="utf-8") as f:
                axioms.extend(invariants_from_json(json.load(f), path.name).formulas())
        else:
            axioms.extend(mine(read_sequence(path)).formulas())

    if args.profile:
        path, _, index = args.profile.rpartition(":")
        if not path or not index.isdigit():
            path, index = args.profile, "1"
        sequence = read_sequence(path)
        position = int(index)
        if not 1 <= position <= len(sequence):
            raise IndexError(f"{path} has no profile {position}")
        axioms.extend(profile_atoms(sequence[position - 1], settings.mode))

    return axioms


def cmd_derive(args, settings):
    goal = parse_formula(args.formula)
    axioms = _load_axioms(args, settings)

    if ProofContext(axioms, settings.budget).derives(goal):
        print(f"derivable: {goal}")
        return EXIT_OK

    print(f"not derivable: {goal}")

    if not axioms and len(goal.atoms()) <= COUNTERMODEL_MAX_ATOMS:
        model = find_countermodel(goal)
        if model is not None:
            print(f"countermodel: {model}")

    return EXIT_NEGATIVE


def cmd_couple(args, settings):
    first = update(read_sequence(args.first))
    second = update(read_sequence(args.second))
    table = superpose(first, second, SuperposeOp(args.op))
    sys.stdout.write(render(table, settings.format))
    return EXIT_OK


def cmd_polarity(args, settings):
    corpus = Corpus.load(args.manifest, settings.budget)

    if args.direction == "right":
        formulas = [parse_formula(f) for f in args.arguments]
        dump_json(sorted(right_polarity(formulas, corpus)))
    else:
        theory = left_polarity(args.arguments, corpus)
        dump_json(
            {
                "top": theory.is_top,
                "ground_base": [str(g) for g in theory.ground_base],
            }
        )

    return EXIT_OK


def cmd_kernel(args, settings):
    corpus = Corpus.load(args.manifest, settings.budget)

    if args.side == "formulas":
        equivalent = kernel_equiv_formulas(
            [parse_formula(f) for f in args.left],
            [parse_formula(f) for f in args.right],
            corpus,
        )
    else:
        equivalent = kernel_equiv_sequences(args.left, args.right, corpus)

    dump_json({"equivalent": equivalent})
    return EXIT_OK if equivalent else EXIT_NEGATIVE


def cmd_category_check(args, settings):
    corpus = Corpus.load(args.manifest, settings.budget)
    candidates = [load_transformation_file(path) for path in args.specs]

    if args.theory:
        sequence = corpus.sequence(args.theory)
        formulas = mine(sequence).formulas()
        tests = suffix_chain_tests([sequence])
    else:
        formulas = [parse_formula(f) for f in args.formula or []]
        tests = suffix_chain_tests(corpus.entries[n] for n in sorted(corpus.entries))

    checker = CategoryChecker(formulas, tests, corpus)
    checker.add_reporter(ConsoleReporter())
    return EXIT_OK if checker.run(candidates) else EXIT_NEGATIVE


def cmd_oracle(args, settings):
    if args.inputs:
        named = [(path, read_sequence(path)) for path in args.inputs]
    else:
        sequences = generate(args.count, args.length, settings.seed)
        named = [(f"#{i}", s) for i, s in enumerate(sequences, 1)]

    disagreements = 0
    for name, sequence in named:
        if mine(sequence) != oracle_mine(sequence):
            disagreements += 1
            print(f"DISAGREE {name}")

    print(f"{len(named) - disagreements}/{len(named)} sequences agree")
    return EXIT_OK if disagreements == 0 else EXIT_NEGATIVE


def cmd_gen(args, settings):
    sequences = generate(args.count, args.length, settings.seed)
    for path in write_sequences(sequences, args.out):
        print(path)
    return EXIT_OK


def _settings_anchor(args) -> Path:
    for name in ("input", "first", "manifest"):
        if getattr(args, name, None):
            return Path(getattr(args, name))
    return Path.cwd() / "-"


def run(args):
    settings = load_settings(
        _settings_anchor(args).resolve(),
        format=args.format,
        mode=args.mode,
        budget=args.budget,
        seed=args.seed,
        arity=args.arity,
    )
    LOGGER.debug("settings: %s", settings)

    try:
        return args.command(args, settings)
    except SequenceSyntaxError as ex:
        for error in ex.errors:
            LOGGER.error(
                "%s:%s: %s, %s",
                error.source_file.name,
                error.source_line_no,
                error.source_line,
                error.message,
            )
        return EXIT_SYNTAX
    except FormulaSyntaxError as ex:
        LOGGER.error("syntax error: %s", ex)
        return EXIT_SYNTAX
    except (
        CorpusError,
        TransformationSpecError,
        UnknownFormatError,
        IndexError,
        ValueError,
    ) as ex:
        LOGGER.error("%s", ex)
        return EXIT_SYNTAX
    except OSError as ex:
        LOGGER.error("%s", ex)
        return EXIT_IO
    except BudgetExceeded as ex:
        LOGGER.error("%s", ex)
        return EXIT_BUDGET


def add_global_options(parser, default=None):
    """
    The options are accepted before and after the subcommand. Subcommand parsers
    pass `argparse.SUPPRESS` so that an omitted flag keeps the value given earlier.
    """
    parser.add_argument(
        "--format",
        choices=["ansi", "html", "svg", "json"],
        default=default,
        help="diagram output format (default: ansi)",
    )
    parser.add_argument(
        "--mode",
        choices=[m.value for m in TruthMode],
        default=default,
        help="truth of profile atoms, modulo quanta (plain) or exact (full)",
    )
    parser.add_argument(
        "--budget", type=int, default=default, help="prover step budget"
    )
    parser.add_argument(
        "--seed", type=int, default=default, help="seed for generated sequences"
    )
    parser.add_argument(
        "--arity",
        type=int,
        default=default,
        help="maximum antecedent size of conjunctive invariants",
    )
    parser.add_argument(
        "--verbose",
        "-v",
        action="store_true",
        default=False if default is None else default,
    )


def parse_args(argv=None):
    common = argparse.ArgumentParser(add_help=False)
    add_global_options(common, argparse.SUPPRESS)

    parser = argparse.ArgumentParser(prog="axiominspector")
    add_global_options(parser)
    subparsers = parser.add_subparsers(required=True, metavar="command")

    mine_parser = subparsers.add_parser(
        "mine", parents=[common], help="render the implication diagram of a sequence"
    )
    mine_parser.add_argument("input")
    mine_parser.add_argument(
        "--invariants", action="store_true", help="also emit the invariant set as JSON"
    )
    mine_parser.add_argument(
        "--conjunctive", action="store_true", help="list conjunctive invariants"
    )
    mine_parser.add_argument(
        "--causal", action="store_true", help="list causal factors"
    )
    mine_parser.set_defaults(command=cmd_mine)

    derive_parser = subparsers.add_parser(
        "derive", parents=[common], help="decide derivability of a formula"
    )
    derive_parser.add_argument("formula")
    derive_parser.add_argument(
        "--axioms",
        help="sequence file whose invariants are the axioms, or a JSON invariant file",
    )
    derive_parser.add_argument(
        "--profile",
        metavar="FILE[:N]",
        help="use the atoms of profile N (1-based, default 1) of FILE as axioms",
    )
    derive_parser.set_defaults(command=cmd_derive)

    couple_parser = subparsers.add_parser(
        "couple", parents=[common], help="superpose the diagrams of two sequences"
    )
    couple_parser.add_argument("first")
    couple_parser.add_argument("second")
    couple_parser.add_argument(
        "--op", choices=[o.value for o in SuperposeOp], default=SuperposeOp.JOIN.value
    )
    couple_parser.set_defaults(command=cmd_couple)

    polarity_parser = subparsers.add_parser(
        "polarity", parents=[common], help="polarities relative to a corpus"
    )
    polarity_parser.add_argument("manifest")
    polarity_parser.add_argument("direction", choices=["right", "left"])
    polarity_parser.add_argument(
        "arguments", nargs="*", help="formulas (right) or corpus names (left)"
    )
    polarity_parser.set_defaults(command=cmd_polarity)

    kernel_parser = subparsers.add_parser(
        "kernel", parents=[common], help="kernel equivalence relative to a corpus"
    )
    kernel_parser.add_argument("manifest")
    kernel_parser.add_argument("side", choices=["formulas", "sequences"])
    kernel_parser.add_argument("--left", nargs="*", default=[])
    kernel_parser.add_argument("--right", nargs="*", default=[])
    kernel_parser.set_defaults(command=cmd_kernel)

    category_parser = subparsers.add_parser(
        "category-check",
        parents=[common],
        help="check transformations for theory preservation on suffix chains",
    )
    category_parser.add_argument("manifest")
    category_parser.add_argument("specs", nargs="+", metavar="SPEC.json")
    theory_group = category_parser.add_mutually_exclusive_group(required=True)
    theory_group.add_argument(
        "--theory", metavar="NAME", help="the invariants of this corpus entry"
    )
    theory_group.add_argument("--formula", nargs="+", metavar="F")
    category_parser.set_defaults(command=cmd_category_check)

    oracle_parser = subparsers.add_parser(
        "oracle", parents=[common], help="compare the miner against the naive oracle"
    )
    oracle_parser.add_argument("inputs", nargs="*")
    oracle_parser.add_argument("--count", type=int, default=100)
    oracle_parser.add_argument("--length", type=int, default=10)
    oracle_parser.set_defaults(command=cmd_oracle)

    gen_parser = subparsers.add_parser(
        "gen", parents=[common], help="write random profile sequences"
    )
    gen_parser.add_argument("--count", type=int, default=1)
    gen_parser.add_argument("--length", type=int, default=10)
    gen_parser.add_argument("--out", default=".")
    gen_parser.set_defaults(command=cmd_gen)

    args = parser.parse_args(argv)

    return args


def main(argv=None):
    args = parse_args(argv)

    if args.verbose:
        logging.basicConfig(level=logging.DEBUG)

    logging.debug("parsed args %s", args)

    return run(args)


if __name__ == "__main__":
    sys.exit(main())
