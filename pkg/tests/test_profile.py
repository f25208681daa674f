import pytest
from hypothesis import given

from axiominspector.profile import AMBIVALENT_CHAIN
from axiominspector.profile import FACTORS
from axiominspector.profile import LINEAR_CHAIN
from axiominspector.profile import NORM_PROFILE
from axiominspector.profile import PLAIN_SIGNATURES
from axiominspector.profile import Factor
from axiominspector.profile import PlainSignature
from axiominspector.profile import Profile
from axiominspector.profile import ProfileSequence
from axiominspector.profile import Signature
from axiominspector.profile import Vector
from axiominspector.profile import co_set
from axiominspector.profile import code
from axiominspector.profile import concat
from axiominspector.profile import head
from axiominspector.profile import is_extension_of
from axiominspector.profile import modulo_quanta
from axiominspector.profile import poset_leq
from axiominspector.profile import suffixes
from tests.strategies import sequences
from tests.strategies import signatures

PS = PlainSignature


def make_profile(text):
    return Profile.from_tokens(text.split())


P1 = make_profile("- 0 pm pm pm pm 0 +")
P2 = make_profile("- 0 + pm pm + 0 +")
P3 = make_profile("- - pm pm pm + + pm")


def test_twelve_signatures():
    assert len(Signature) == 12
    assert len(LINEAR_CHAIN) + len(AMBIVALENT_CHAIN) == 12


@pytest.mark.parametrize(
    "token,expected",
    [
        ("+!!!", Signature.PLUS_3),
        ("-", Signature.MINUS),
        ("−", Signature.MINUS),
        ("±", Signature.PM),
        ("±^!", Signature.PM_HIGH),
        ("pm-", Signature.PM_LOW),
    ],
)
def test_signature_parse(token, expected):
    assert Signature.parse(token) == expected


@pytest.mark.parametrize("token", ["", "++", "pm!", "x"])
def test_signature_parse_unknown(token):
    with pytest.raises(ValueError):
        Signature.parse(token)


@pytest.mark.parametrize(
    "a,b,expected",
    [
        (Signature.MINUS, Signature.PLUS, True),
        (Signature.PM, Signature.PM, True),
        (Signature.PM_LOW, Signature.PLUS, False),
        (Signature.MINUS_3, Signature.PLUS_3, True),
        (Signature.PLUS, Signature.MINUS, False),
        (Signature.PM_LOW, Signature.PM_HIGH, True),
        (Signature.ZERO, Signature.PM, False),
    ],
)
def test_poset_leq(a, b, expected):
    assert poset_leq(a, b) == expected


@given(signatures, signatures, signatures)
def test_poset_leq_is_partial_order(a, b, c):
    assert poset_leq(a, a)
    if poset_leq(a, b) and poset_leq(b, a):
        assert a == b
    if poset_leq(a, b) and poset_leq(b, c):
        assert poset_leq(a, c)


@pytest.mark.parametrize(
    "signature,expected",
    [
        (Signature.PLUS_3, PlainSignature.PLUS),
        (Signature.ZERO, PlainSignature.ZERO),
        (Signature.PM_HIGH, PlainSignature.PM),
        (Signature.MINUS_1, PlainSignature.MINUS),
        (Signature.PM_LOW, PlainSignature.PM),
    ],
)
def test_modulo_quanta(signature, expected):
    assert modulo_quanta(signature) == expected
    assert signature.plain == expected


@pytest.mark.parametrize(
    "plain,expected",
    [
        (PS.PLUS, {PS.MINUS, PS.ZERO, PS.PM}),
        (PS.ZERO, {PS.PLUS, PS.MINUS, PS.PM}),
        (PS.PM, {PS.ZERO, PS.PLUS, PS.MINUS}),
    ],
)
def test_co_set(plain, expected):
    assert co_set(plain) == expected


def test_code():
    assert [code(p) for p in PLAIN_SIGNATURES] == [0, 1, 2, 3]
    assert code(PlainSignature.PLUS) == 1
    assert PlainSignature.from_code(3) == PlainSignature.PM


def test_factors_and_vectors():
    assert [f.value for f in FACTORS] == ["h", "s", "e", "hy", "k", "p", "d", "m"]
    assert [f.vector for f in FACTORS] == [
        Vector.S,
        Vector.S,
        Vector.P,
        Vector.P,
        Vector.SCH,
        Vector.SCH,
        Vector.C,
        Vector.C,
    ]
    assert Factor.from_index(3) == Factor.HY


def test_profile_arity():
    with pytest.raises(ValueError):
        Profile.from_tokens(["-", "0", "pm"])


def test_profile_access():
    assert P1[Factor.H] == Signature.MINUS
    assert P1[Factor.M] == Signature.PLUS
    assert str(P1) == "- 0 pm pm pm pm 0 +"
    assert NORM_PROFILE.tokens() == ["+", "+", "-", "-", "-", "-", "+", "+"]


def test_sequence_needs_profiles():
    with pytest.raises(ValueError):
        ProfileSequence(())


def test_concat():
    p = ProfileSequence((P1,))
    q = ProfileSequence((P2, P3))
    r = ProfileSequence((P3,))

    assert concat(p, q) == ProfileSequence((P1, P2, P3))
    assert concat(concat(p, q), r) == concat(p, concat(q, r))
    assert concat(p, q).head == P1
    assert head(concat(q, p)) == P2


@pytest.mark.parametrize(
    "p,q,expected",
    [
        ((P1, P2, P3), (P2, P3), True),
        ((P1, P2), (P1, P2), True),
        ((P1, P2), (P1,), False),
        ((P1,), (P1, P2), False),
    ],
)
def test_is_extension_of(p, q, expected):
    assert is_extension_of(ProfileSequence(p), ProfileSequence(q)) == expected


def test_suffixes():
    assert suffixes(ProfileSequence((P1, P2))) == [
        ProfileSequence((P1, P2)),
        ProfileSequence((P2,)),
    ]
    assert suffixes(ProfileSequence((P1,))) == [ProfileSequence((P1,))]


@given(sequences(max_size=6))
def test_suffixes_are_extended(p):
    result = suffixes(p)
    assert len(result) == len(p)
    assert result[0] == p
    assert all(is_extension_of(p, q) for q in result)


@given(sequences(max_size=5), sequences(max_size=5), sequences(max_size=5))
def test_prefix_closure(p, q, r):
    if is_extension_of(p, q):
        assert is_extension_of(concat(r, p), q)
    assert is_extension_of(concat(r, q), q)


@given(sequences(max_size=4), sequences(max_size=4), sequences(max_size=4))
def test_extension_is_partial_order(p, q, r):
    assert is_extension_of(p, p)
    if is_extension_of(p, q) and is_extension_of(q, p):
        assert p == q
    if is_extension_of(p, q) and is_extension_of(q, r):
        assert is_extension_of(p, r)


def test_head_of_fixture(subject):
    assert head(subject) == P1
    assert len(subject) == 10
