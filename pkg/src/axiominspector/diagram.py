import dataclasses
import html
import json
import logging
import typing
from enum import Enum
from pathlib import Path

import numpy as np
from termcolor import colored

from axiominspector.miner import ImplicationTable
from axiominspector.miner import InvariantSet
from axiominspector.profile import FACTORS
from axiominspector.profile import PLAIN_SIGNATURES

LOGGER = logging.getLogger(Path(__file__).name)


class DiagramFormat(Enum):
    ANSI = "ansi"
    HTML = "html"
    SVG = "svg"
    JSON = "json"


class SuperposeOp(Enum):
    JOIN = "join"
    MEET = "meet"


class UnknownFormatError(Exception):
    def __init__(self, format: str):
        self.format = format
        super().__init__(
            f"unknown format {format!r}, use one of: "
            + ", ".join(f.value for f in DiagramFormat)
        )


@dataclasses.dataclass(frozen=True)
class Color:
    name: str
    hex: str
    ansi_background: str
    ansi_text: str


PALETTE = {
    0: Color("black", "#000000", "on_black", "white"),
    1: Color("red", "#FF0000", "on_red", "white"),
    2: Color("orange", "#FFA500", "on_light_red", "black"),
    3: Color("yellow", "#FFFF00", "on_yellow", "black"),
}

# vector rules after s and p
GROUP_ENDS = (1, 5)


def color_of(count: int) -> typing.Optional[Color]:
    return PALETTE.get(count)


def _rows():
    for a, factor in enumerate(FACTORS):
        for va, signature in enumerate(PLAIN_SIGNATURES):
            yield a, va, factor, signature


def _columns():
    for c, factor in enumerate(FACTORS):
        for vc, signature in enumerate(PLAIN_SIGNATURES):
            yield c, vc, factor, signature


def _ansi_cell(count: int) -> str:
    text = f"{count:>3}"
    color = color_of(count)
    if color is None:
        return text
    return colored(text, color.ansi_text, color.ansi_background)


def render_ansi(table: ImplicationTable) -> str:
    header = " " * 7
    for c, factor in enumerate(FACTORS):
        header += f"{factor.value:^12}"
        if c in GROUP_ENDS:
            header += " │"
    signatures = " " * 7
    for c, vc, factor, signature in _columns():
        signatures += f"{signature.glyph:>3}"
        if c in GROUP_ENDS and vc == len(PLAIN_SIGNATURES) - 1:
            signatures += " │"

    lines = [header, signatures]
    for a, va, factor, signature in _rows():
        line = f"{factor.value:>3} {signature.glyph:<2} "
        for c, vc, _, _ in _columns():
            line += _ansi_cell(int(table.counts[a, c, va, vc]))
            if c in GROUP_ENDS and vc == len(PLAIN_SIGNATURES) - 1:
                line += " │"
        lines.append(line)

        if a in GROUP_ENDS and va == len(PLAIN_SIGNATURES) - 1:
            lines.append("")

    return "\n".join(lines) + "\n"


HTML_TEMPLATE = """<!DOCTYPE html>
<html>
<head>
<meta charset="utf-8">
<title>{title}</title>
<style>
table {{ border-collapse: collapse; font-family: monospace; }}
td, th {{ width: 1.6em; height: 1.6em; text-align: center; border: 1px solid #cccccc; }}
td.group, th.group {{ border-right: 3px solid #000000; }}
tr.group td, tr.group th {{ border-bottom: 3px solid #000000; }}
{palette}
</style>
</head>
<body>
<table>
{rows}
</table>
</body>
</html>
"""


def render_html(table: ImplicationTable, title: str = "implication diagram") -> str:
    palette = "\n".join(
        f"td.count{count} {{ background-color: {color.hex}; }}"
        for count, color in PALETTE.items()
    )

    rows = []
    header = '<tr><th colspan="2"></th>'
    for c, factor in enumerate(FACTORS):
        group = ' class="group"' if c in GROUP_ENDS else ""
        header += f'<th colspan="4"{group}>{factor.value}</th>'
    rows.append(header + "</tr>")

    signatures = '<tr><th colspan="2"></th>'
    for c, vc, _, signature in _columns():
        group = ""
        if c in GROUP_ENDS and vc == len(PLAIN_SIGNATURES) - 1:
            group = ' class="group"'
        signatures += f"<th{group}>{html.escape(signature.glyph)}</th>"
    rows.append(signatures + "</tr>")

    for a, va, factor, signature in _rows():
        row_group = a in GROUP_ENDS and va == len(PLAIN_SIGNATURES) - 1
        row = '<tr class="group">' if row_group else "<tr>"
        row += f"<th>{factor.value if va == 0 else ''}</th>"
        row += f"<th>{html.escape(signature.glyph)}</th>"

        for c, vc, _, _ in _columns():
            count = int(table.counts[a, c, va, vc])
            classes = []
            if color_of(count) is not None:
                classes.append(f"count{count}")
            if c in GROUP_ENDS and vc == len(PLAIN_SIGNATURES) - 1:
                classes.append("group")
            class_attr = f' class="{" ".join(classes)}"' if classes else ""
            # coloured cells carry their value in the title only
            text = "" if color_of(count) is not None else str(count)
            row += f'<td{class_attr} data-count="{count}" title="{count}">{text}</td>'

        rows.append(row + "</tr>")

    return HTML_TEMPLATE.format(
        title=html.escape(title), palette=palette, rows="\n".join(rows)
    )


SVG_SIZE = 1600
SVG_MARGIN = 128
SVG_BLOCK = (SVG_SIZE - SVG_MARGIN) // len(FACTORS)
SVG_CELL = SVG_BLOCK // len(PLAIN_SIGNATURES)


def render_svg(table: ImplicationTable) -> str:
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_SIZE}" '
        f'height="{SVG_SIZE}" viewBox="0 0 {SVG_SIZE} {SVG_SIZE}" '
        'font-family="monospace" font-size="20">',
        f'<rect x="0" y="0" width="{SVG_SIZE}" height="{SVG_SIZE}" fill="#FFFFFF"/>',
    ]

    for index, factor in enumerate(FACTORS):
        middle = SVG_MARGIN + index * SVG_BLOCK + SVG_BLOCK // 2
        parts.append(
            f'<text x="{middle}" y="40" text-anchor="middle">{factor.value}</text>'
        )
        parts.append(
            f'<text x="30" y="{middle}" text-anchor="middle">{factor.value}</text>'
        )

    for c, vc, _, signature in _columns():
        offset = SVG_MARGIN + c * SVG_BLOCK + vc * SVG_CELL + SVG_CELL // 2
        glyph = html.escape(signature.glyph)
        anchor = 'text-anchor="middle"'
        parts.append(f'<text x="{offset}" y="100" {anchor}>{glyph}</text>')
        parts.append(f'<text x="90" y="{offset + 7}" {anchor}>{glyph}</text>')

    for a, va, _, _ in _rows():
        y = SVG_MARGIN + a * SVG_BLOCK + va * SVG_CELL
        for c, vc, _, _ in _columns():
            x = SVG_MARGIN + c * SVG_BLOCK + vc * SVG_CELL
            count = int(table.counts[a, c, va, vc])
            color = color_of(count)
            fill = color.hex if color else "#FFFFFF"
            parts.append(
                f'<rect x="{x}" y="{y}" width="{SVG_CELL}" height="{SVG_CELL}" '
                f'fill="{fill}" stroke="#CCCCCC" data-count="{count}"/>'
            )
            if color is None:
                parts.append(
                    f'<text x="{x + SVG_CELL // 2}" y="{y + SVG_CELL // 2 + 7}" '
                    f'text-anchor="middle">{count}</text>'
                )

    end = SVG_MARGIN + len(FACTORS) * SVG_BLOCK
    for group_end in GROUP_ENDS:
        position = SVG_MARGIN + (group_end + 1) * SVG_BLOCK
        parts.append(
            f'<line x1="{position}" y1="{SVG_MARGIN}" x2="{position}" y2="{end}" '
            'stroke="#000000" stroke-width="4"/>'
        )
        parts.append(
            f'<line x1="{SVG_MARGIN}" y1="{position}" x2="{end}" y2="{position}" '
            'stroke="#000000" stroke-width="4"/>'
        )

    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def to_json_document(table: ImplicationTable) -> dict:
    return {
        "palette": {
            str(count): {"color": color.name, "hex": color.hex}
            for count, color in PALETTE.items()
        },
        "factors": [f.value for f in FACTORS],
        "signatures": [s.value for s in PLAIN_SIGNATURES],
        "sequence_length": table.sequence_length,
        "counts": table.counts.tolist(),
    }


def render_json(table: ImplicationTable) -> str:
    return json.dumps(to_json_document(table), sort_keys=True) + "\n"


def decode_json(document: typing.Union[str, dict]) -> ImplicationTable:
    if isinstance(document, str):
        document = json.loads(document)
    return ImplicationTable(
        np.array(document["counts"], dtype=np.int64), document["sequence_length"]
    )


RENDERERS = {
    DiagramFormat.ANSI: render_ansi,
    DiagramFormat.HTML: render_html,
    DiagramFormat.SVG: render_svg,
    DiagramFormat.JSON: render_json,
}


def render(table: ImplicationTable, format: typing.Union[str, DiagramFormat]) -> str:
    try:
        format = DiagramFormat(format)
    except ValueError:
        raise UnknownFormatError(format) from None

    LOGGER.debug("rendering %s diagram", format.value)
    return RENDERERS[format](table)


def join_invariants(a: InvariantSet, b: InvariantSet) -> InvariantSet:
    return InvariantSet(
        a.implications | b.implications, f"({a.provenance} | {b.provenance})"
    )


def meet_invariants(a: InvariantSet, b: InvariantSet) -> InvariantSet:
    return InvariantSet(
        a.implications & b.implications, f"({a.provenance} & {b.provenance})"
    )


def superpose(
    t1: ImplicationTable,
    t2: ImplicationTable,
    op: typing.Union[str, SuperposeOp],
) -> ImplicationTable:
    """
    Lay two diagrams on top of each other. A join cell is black when either
    operand's is (cellwise minimum), a meet cell only when both are (maximum).
    """
    op = SuperposeOp(op)
    combine = np.minimum if op == SuperposeOp.JOIN else np.maximum
    return ImplicationTable(
        combine(t1.counts, t2.counts), max(t1.sequence_length, t2.sequence_length)
    )
