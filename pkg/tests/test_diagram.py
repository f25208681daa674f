import json

import pytest
from hypothesis import given

from axiominspector.diagram import DiagramFormat
from axiominspector.diagram import SuperposeOp
from axiominspector.diagram import UnknownFormatError
from axiominspector.diagram import color_of
from axiominspector.diagram import decode_json
from axiominspector.diagram import join_invariants
from axiominspector.diagram import meet_invariants
from axiominspector.diagram import render
from axiominspector.diagram import render_ansi
from axiominspector.diagram import render_html
from axiominspector.diagram import render_json
from axiominspector.diagram import render_svg
from axiominspector.diagram import superpose
from axiominspector.miner import mine
from axiominspector.miner import update
from tests.strategies import sequences


@pytest.fixture
def no_color(monkeypatch):
    monkeypatch.delenv("FORCE_COLOR", raising=False)
    monkeypatch.setenv("NO_COLOR", "1")


@pytest.fixture
def force_color(monkeypatch):
    monkeypatch.delenv("NO_COLOR", raising=False)
    monkeypatch.delenv("ANSI_COLORS_DISABLED", raising=False)
    monkeypatch.setenv("FORCE_COLOR", "1")


@pytest.mark.parametrize(
    "count,name",
    [(0, "black"), (1, "red"), (2, "orange"), (3, "yellow")],
)
def test_color_of(count, name):
    assert color_of(count).name == name


def test_color_of_uncoloured():
    assert color_of(4) is None
    assert color_of(10) is None


def test_render_ansi(no_color, subject):
    lines = render_ansi(update(subject)).splitlines()

    assert len(lines) == 2 + 32 + 2
    assert lines[0].split() == ["h", "s", "│", "e", "hy", "k", "p", "│", "d", "m"]
    assert lines[2].startswith("  h 0    0  0  0  0")
    assert "\x1b[" not in "\n".join(lines)


def test_render_ansi_colored(force_color, subject):
    text = render_ansi(update(subject))

    assert "\x1b[" in text
    assert " 10" in text


def test_render_html(subject):
    text = render_html(update(subject), title="<ten results>")

    assert text.startswith("<!DOCTYPE html>")
    assert "<title>&lt;ten results&gt;</title>" in text
    assert "td.count0 { background-color: #000000; }" in text
    assert text.count("<td") == 1024
    assert 'data-count="10" title="10">10</td>' in text
    assert 'data-count="0" title="0"></td>' in text


def test_render_svg(subject):
    text = render_svg(update(subject))

    assert text.startswith("<svg")
    assert text.endswith("</svg>\n")
    assert text.count("<rect ") == 1 + 1024
    assert 'fill="#FF0000"' in text


def test_render_json(subject):
    table = update(subject)
    document = json.loads(render_json(table))

    assert document["factors"] == ["h", "s", "e", "hy", "k", "p", "d", "m"]
    assert document["signatures"] == ["0", "+", "-", "pm"]
    assert document["sequence_length"] == 10
    assert document["palette"]["1"] == {"color": "red", "hex": "#FF0000"}
    assert document["counts"][1][2][0][0] == 5
    assert decode_json(document) == table
    assert decode_json(render_json(table)) == table


@pytest.mark.parametrize("format", list(DiagramFormat))
def test_render(no_color, subject, format):
    table = update(subject)

    assert render(table, format) == render(table, format.value)


def test_render_unknown_format(subject):
    with pytest.raises(UnknownFormatError) as excinfo:
        render(update(subject), "pdf")

    assert excinfo.value.format == "pdf"
    assert "ansi, html, svg, json" in str(excinfo.value)


def test_superpose(subject, tail):
    joined = superpose(update(subject), update(tail), SuperposeOp.JOIN)
    met = superpose(update(subject), update(tail), "meet")

    assert joined.sequence_length == 10
    assert joined.zeros() == join_invariants(mine(subject), mine(tail))
    assert met.zeros() == meet_invariants(mine(subject), mine(tail))
    assert mine(tail) >= mine(subject)
    assert joined.zeros() == mine(tail)
    assert met.zeros() == mine(subject)


def test_superpose_provenance(subject, norm):
    joined = join_invariants(mine(subject), mine(norm))

    assert joined.provenance.startswith("(seq-10-")
    assert " | seq-1-" in joined.provenance
    assert mine(subject) <= joined
    assert meet_invariants(mine(subject), mine(norm)) <= mine(norm)


def test_superpose_unknown_op(subject):
    with pytest.raises(ValueError):
        superpose(update(subject), update(subject), "xor")


@given(sequences(max_size=6), sequences(max_size=6), sequences(max_size=6))
def test_invariant_lattice(first, second, third):
    a, b, c = mine(first), mine(second), mine(third)
    join, meet = join_invariants, meet_invariants

    assert join(a, b) == join(b, a)
    assert meet(a, b) == meet(b, a)
    assert join(join(a, b), c) == join(a, join(b, c))
    assert meet(meet(a, b), c) == meet(a, meet(b, c))
    assert join(a, a) == a
    assert meet(a, a) == a
    assert join(a, meet(a, b)) == a
    assert meet(a, join(a, b)) == a


@given(sequences(max_size=6), sequences(max_size=6))
def test_superpose_matches_set_operations(first, second):
    joined = superpose(update(first), update(second), SuperposeOp.JOIN)
    met = superpose(update(first), update(second), SuperposeOp.MEET)

    assert joined.zeros() == join_invariants(mine(first), mine(second))
    assert met.zeros() == meet_invariants(mine(first), mine(second))
