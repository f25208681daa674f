import hypothesis.strategies as st
import pytest
from hypothesis import given
from hypothesis import settings

from axiominspector.categories import FORMULA_IDENTITY
from axiominspector.categories import IDENTITY
from axiominspector.categories import FormulaTransformation
from axiominspector.categories import FormulaTransformationKind
from axiominspector.categories import TransformationKind
from axiominspector.categories import TransformationSpecError
from axiominspector.categories import Verdict
from axiominspector.categories import Witness
from axiominspector.categories import append_profile
from axiominspector.categories import apply
from axiominspector.categories import apply_formulas
from axiominspector.categories import category_membership_report
from axiominspector.categories import compose
from axiominspector.categories import drop_oldest
from axiominspector.categories import factor_permutation
from axiominspector.categories import load_formula_transformation
from axiominspector.categories import load_transformation
from axiominspector.categories import load_transformation_file
from axiominspector.categories import preservation_inclusion
from axiominspector.categories import preserves
from axiominspector.categories import preserves_sequences
from axiominspector.categories import replace_constant
from axiominspector.categories import signature_map
from axiominspector.categories import suffix_chain_tests
from axiominspector.categories import union_constant
from axiominspector.formula import parse_formula
from axiominspector.miner import mine
from axiominspector.profile import NORM_PROFILE
from axiominspector.profile import Profile
from axiominspector.profile import ProfileSequence
from axiominspector.profile import Signature
from axiominspector.profile import concat
from axiominspector.profile import suffixes
from tests.strategies import ground_implications
from tests.strategies import sequences

SWAP_H_S = [1, 0, 2, 3, 4, 5, 6, 7]

ground_formula_sets = st.frozensets(
    ground_implications.map(lambda g: g.to_formula()), max_size=6
)


def candidates(norm):
    return [
        IDENTITY,
        drop_oldest(1),
        drop_oldest(3),
        append_profile(NORM_PROFILE),
        factor_permutation(SWAP_H_S),
        signature_map({Signature.PLUS_3: Signature.PLUS}),
        union_constant([norm]),
        replace_constant([norm]),
    ]


@given(sequences(max_size=5), sequences(max_size=5))
def test_identity_and_associativity(p, q):
    tests = frozenset([p, q])
    f, g, h = drop_oldest(1), factor_permutation(SWAP_H_S), append_profile(p.head)

    assert apply(IDENTITY, tests) == tests
    assert apply(compose(IDENTITY, g), tests) == apply(g, tests)
    assert apply(compose(g, IDENTITY), tests) == apply(g, tests)
    assert apply(compose(compose(f, g), h), tests) == apply(
        compose(f, compose(g, h)), tests
    )


def test_compose_order(subject):
    first = append_profile(NORM_PROFILE)
    then = drop_oldest(1)
    composite = compose(then, first)

    # appending then dropping the oldest gives back the original
    assert apply(composite, [subject]) == {subject}
    assert apply(compose(first, then), [subject]) != {subject}
    assert str(composite) == f"(drop-oldest(1) . append-profile({NORM_PROFILE}))"
    assert composite.kind == TransformationKind.COMPOSITE


def test_compose_flattens():
    composite = compose(compose(drop_oldest(1), drop_oldest(2)), drop_oldest(3))

    assert [p.count for p in composite.parts] == [1, 2, 3]


def test_drop_oldest_composition(subject):
    twice = compose(drop_oldest(1), drop_oldest(1))

    assert apply(twice, [subject]) == apply(drop_oldest(2), [subject])
    assert apply(drop_oldest(0), [subject]) == {subject}


def test_drop_oldest_keeps_short_sequences(norm, subject):
    assert apply(drop_oldest(1), [norm]) == {norm}
    assert apply(drop_oldest(20), [subject]) == {subject}
    assert len(next(iter(apply(drop_oldest(9), [subject])))) == 1

    with pytest.raises(ValueError):
        drop_oldest(-1)


def test_append_profile(subject):
    (image,) = apply(append_profile(NORM_PROFILE), [subject])

    assert image.head == NORM_PROFILE
    assert image.profiles[1:] == subject.profiles
    assert subject in suffixes(image)


def test_factor_permutation(subject):
    (image,) = apply(factor_permutation(SWAP_H_S), [subject])

    assert str(image.head) == "0 - pm pm pm pm 0 +"
    name = factor_permutation(SWAP_H_S).name
    assert name == "factor-permutation(s h e hy k p d m)"

    with pytest.raises(ValueError):
        factor_permutation([0, 0, 2, 3, 4, 5, 6, 7])


def test_signature_map():
    quanta = ProfileSequence(
        (Profile.from_tokens("-!! 0 +! pm- pm+ +!!! 0 -!".split()),)
    )
    t = signature_map(
        {Signature.PLUS_3: Signature.PLUS, Signature.PM_LOW: Signature.PM}
    )
    (image,) = apply(t, [quanta])

    assert str(image) == "-!! 0 +! pm pm+ + 0 -!"
    assert t.name == "signature-map(+!!!:+, pm-:pm)"


def test_constants(subject, norm):
    assert apply(union_constant([norm]), [subject]) == {subject, norm}
    assert apply(replace_constant([norm]), [subject]) == {norm}
    assert apply(replace_constant([norm]), []) == {norm}


def test_preserves(subject):
    formulas = mine(subject).formulas()
    tests = suffix_chain_tests([subject], 4)

    assert preserves(IDENTITY, formulas, tests).preserved
    assert preserves(drop_oldest(1), formulas, tests).preserved
    assert preserves(union_constant([subject]), formulas, tests).preserved


def test_preserves_violation(subject, norm):
    formulas = mine(subject).formulas()
    verdict = preserves(replace_constant([norm]), formulas, [[subject]])

    assert not verdict.preserved
    assert verdict.witness.test == frozenset([subject])
    assert verdict.witness.missing in formulas
    assert str(verdict).startswith("violated: ")
    assert str(verdict).endswith(" lost on 1 sequences")


def test_verdict_strings():
    witness = Witness(frozenset(["b", "a"]), "s0 -> kpm")

    assert str(Verdict()) == "preserved-on-tests"
    assert str(witness) == "s0 -> kpm lost on {a, b}"
    assert str(Verdict(witness)) == "violated: s0 -> kpm lost on {a, b}"


def test_category_membership_report(subject, norm):
    report = category_membership_report(
        mine(subject).formulas(), candidates(norm), suffix_chain_tests([subject], 4)
    )
    verdicts = {str(t): v.preserved for t, v in report}

    assert [t for t, _ in report] == candidates(norm)
    assert verdicts["identity"]
    assert verdicts["drop-oldest(1)"]
    assert verdicts["drop-oldest(3)"]
    assert not verdicts["replace-constant(1)"]
    assert not verdicts["union-constant(1)"]
    assert not verdicts[str(append_profile(NORM_PROFILE))]


@given(sequences(max_size=6))
def test_suffix_preservation(sequence):
    # dropping profiles can only add invariants
    assert preservation_inclusion(drop_oldest(1), [sequence])
    assert preservation_inclusion(IDENTITY, [sequence])


@settings(max_examples=50)
@given(
    sequences(max_size=4),
    sequences(max_size=4),
    ground_formula_sets,
    ground_formula_sets,
    st.integers(min_value=0, max_value=7),
)
def test_preservation_antitone(sequence, other, formulas, extra, index):
    transformation = candidates(other)[index]
    tests = suffix_chain_tests([sequence]) + [frozenset([sequence, other])]

    def preserved(formula_set):
        return preserves(transformation, formula_set, tests).preserved

    if preserved(formulas | extra):
        assert preserved(formulas)
    assert preserved(formulas | extra) == (preserved(formulas) and preserved(extra))
    if preserved(formulas) or preserved(extra):
        assert preserved(formulas & extra)


@settings(max_examples=20)
@given(sequences(max_size=3), sequences(max_size=3), st.integers(0, 7))
def test_preservation_of_extension_theory(sequence, older, index):
    transformation = candidates(older)[index]
    tests = suffix_chain_tests([sequence])
    extended = mine(concat(older, sequence)).formulas()

    if preserves(transformation, mine(sequence).formulas(), tests).preserved:
        assert preserves(transformation, extended, tests).preserved


@settings(max_examples=50)
@given(
    sequences(max_size=4),
    sequences(max_size=4),
    ground_formula_sets,
    st.integers(min_value=0, max_value=7),
    st.sampled_from([IDENTITY, drop_oldest(1), drop_oldest(2)]),
)
def test_composition_preserved(sequence, other, formulas, index, first):
    # suffix chains are closed under dropping the oldest results
    then = candidates(other)[index]
    tests = suffix_chain_tests([sequence])

    if (
        preserves(first, formulas, tests).preserved
        and preserves(then, formulas, tests).preserved
    ):
        assert preserves(compose(then, first), formulas, tests).preserved



def test_preservation_inclusion(subject, norm):
    assert not preservation_inclusion(append_profile(NORM_PROFILE), [subject])
    assert not preservation_inclusion(replace_constant([norm]), [subject])
    assert preservation_inclusion(union_constant([subject]), [subject, norm])


def test_suffix_chain_tests(subject, norm):
    tests = suffix_chain_tests([subject, norm])

    assert len(tests) == 11
    assert tests[0] == frozenset([subject])
    assert tests[-1] == frozenset([norm])
    assert all(len(test) == 1 for test in tests)
    assert len(suffix_chain_tests([subject, norm], limit=3)) == 3
    assert len(suffix_chain_tests([subject, subject])) == 10


def test_apply_formulas():
    a, b = parse_formula("s0"), parse_formula("e+")
    c = parse_formula("d0")

    union = FormulaTransformation(
        "union", FormulaTransformationKind.UNION_CONSTANT, frozenset([c])
    )
    intersect = FormulaTransformation(
        "intersect", FormulaTransformationKind.INTERSECT_CONSTANT, frozenset([a])
    )
    conjoin = FormulaTransformation("conjoin", FormulaTransformationKind.CONJOIN)
    weaken = FormulaTransformation(
        "weaken", FormulaTransformationKind.WEAKEN, formula=c
    )

    assert apply_formulas(FORMULA_IDENTITY, [a, b]) == {a, b}
    assert apply_formulas(union, [a]) == {a, c}
    assert apply_formulas(intersect, [a, b]) == {a}
    assert apply_formulas(conjoin, [b, a]) == {parse_formula("e+ & s0")}
    assert apply_formulas(conjoin, []) == frozenset()
    assert apply_formulas(weaken, [a]) == {a | c}

    composite = FormulaTransformation(
        "weaken . union",
        FormulaTransformationKind.COMPOSITE,
        parts=(weaken, union),
    )
    assert apply_formulas(composite, [a]) == {a | c, c | c}


def test_preserves_sequences(corpus):
    d_plus = parse_formula("d+ -> mpm")
    h_minus = parse_formula("h- -> hypm")
    tests = [[d_plus], [h_minus], []]

    conjoin = load_formula_transformation({"kind": "conjoin"})
    assert preserves_sequences(conjoin, corpus.names, tests, corpus).preserved

    weaken = load_formula_transformation({"kind": "weaken", "formula": "s0"})
    assert preserves_sequences(weaken, corpus.names, tests, corpus).preserved

    union = load_formula_transformation(
        {"kind": "union-constant", "formulas": ["h- -> hypm"]}
    )
    verdict = preserves_sequences(union, corpus.names, tests, corpus)
    assert not verdict.preserved
    assert verdict.witness.test == frozenset([d_plus])
    assert verdict.witness.missing == "reversed"


def test_load_formula_transformation():
    composite = load_formula_transformation(
        [{"kind": "weaken", "formula": "s0"}, {"kind": "identity"}]
    )

    assert composite.kind == FormulaTransformationKind.COMPOSITE
    assert [p.kind for p in composite.parts] == [
        FormulaTransformationKind.WEAKEN,
        FormulaTransformationKind.IDENTITY,
    ]

    with pytest.raises(TransformationSpecError):
        load_formula_transformation({"kind": "weaken"})
    with pytest.raises(TransformationSpecError):
        load_formula_transformation({"kind": "negate"})


@pytest.mark.parametrize(
    "document",
    [
        {"kind": "weaken", "formula": "s0 |"},
        {"kind": "union-constant", "formulas": ["e+ -> kpm", "x+"]},
        [{"kind": "identity"}, {"kind": "weaken", "formula": "(s0"}],
    ],
)
def test_load_formula_transformation_syntax_error(document):
    with pytest.raises(TransformationSpecError) as excinfo:
        load_formula_transformation(document)

    assert "at position" in str(excinfo.value)


@pytest.mark.parametrize(
    "file_name,kind,name",
    [
        ("identity.json", TransformationKind.IDENTITY, "identity"),
        ("drop-oldest.json", TransformationKind.DROP_OLDEST, "drop-oldest"),
        (
            "replace-constant.json",
            TransformationKind.REPLACE_CONSTANT,
            "replace-by-norm",
        ),
        (
            "composite.json",
            TransformationKind.COMPOSITE,
            "(drop-oldest(1) . drop-oldest(1))",
        ),
    ],
)
def test_load_transformation_file(data_dir, file_name, kind, name):
    t = load_transformation_file(data_dir / "transformations" / file_name)

    assert t.kind == kind
    assert t.name == name


def test_loaded_replace_constant(data_dir, subject, norm):
    t = load_transformation_file(data_dir / "transformations/replace-constant.json")

    assert apply(t, [subject]) == {norm}


@pytest.mark.parametrize(
    "document",
    [
        {"kind": "append-profile", "profile": "+ + - - - - + +"},
        {"kind": "append-profile", "profile": "+ + - - - - + +".split()},
        {"kind": "factor-permutation", "permutation": ["s", "h", 2, 3, 4, 5, 6, 7]},
        {"kind": "signature-map", "map": {"+!!!": "+", "±_!": "pm"}},
        {"kind": "union-constant", "sequences": [["- 0 pm pm pm pm 0 +".split()]]},
        [{"kind": "drop-oldest", "count": 2}, {"kind": "identity"}],
        {"kind": "composite", "parts": []},
    ],
)
def test_load_transformation(document):
    t = load_transformation(document)

    assert isinstance(t.kind, TransformationKind)
    assert t.name


def test_load_transformation_order(subject):
    t = load_transformation(
        [
            {"kind": "drop-oldest", "count": 1},
            {"kind": "append-profile", "profile": "+ + - - - - + +"},
        ]
    )

    assert apply(t, [subject]) == {subject}


@pytest.mark.parametrize(
    "document,message",
    [
        ({"kind": "rotate"}, "unknown kind 'rotate'"),
        ({}, "unknown kind None"),
        ("identity", "not a transformation"),
        ({"kind": "append-profile"}, "missing 'profile'"),
        ({"kind": "append-profile", "profile": "+ +"}, "append-profile"),
        ({"kind": "factor-permutation", "permutation": [0, 1]}, "not a permutation"),
        ({"kind": "signature-map", "map": {"++": "+"}}, "unknown signature"),
        ({"kind": "drop-oldest", "count": -2}, "cannot drop -2"),
        ({"kind": "union-constant", "sequences": [["- 0"]]}, "union-constant[0]"),
        ({"kind": "union-constant", "sequences": ["- 0"]}, "list of rows"),
    ],
)
def test_load_transformation_error(document, message):
    with pytest.raises(TransformationSpecError) as excinfo:
        load_transformation(document)

    assert message in str(excinfo.value)


def test_load_transformation_file_errors(data_dir, tmp_path):
    with pytest.raises(TransformationSpecError):
        load_transformation_file(data_dir / "transformations/unknown-kind.json")

    broken = tmp_path / "broken.json"
    broken.write_text("{")
    with pytest.raises(TransformationSpecError) as excinfo:
        load_transformation_file(broken)
    assert "invalid JSON" in str(excinfo.value)
