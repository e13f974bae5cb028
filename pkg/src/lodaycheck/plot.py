"""Static SVG scenes: the regions R_n and where a word sends a grid of points."""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

from .geometry import Atom, MapWord, Space, clamp_region_polygon, eval_word, point

SIZE = 400
MARGIN = 20


def _xy(x, y) -> tuple[float, float]:
    return MARGIN + float(x) * SIZE, MARGIN + (1 - float(y)) * SIZE


def parse_word(text: str) -> tuple[Atom, ...]:
    atoms = []
    for tok in filter(None, (t.strip() for t in text.split(","))):
        kind, _, n = tok.partition(":")
        atoms.append(Atom(kind, int(n)))
    return tuple(atoms)


def render(max_index: int, word: MapWord | None = None, grid: int = 24) -> str:
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE + 2 * MARGIN}" height="{SIZE + 2 * MARGIN}">',
        f'<rect x="{MARGIN}" y="{MARGIN}" width="{SIZE}" height="{SIZE}" fill="white" stroke="black"/>',
    ]
    for n in range(1, max_index + 1):
        pts = " ".join("%.2f,%.2f" % _xy(x, y) for x, y in clamp_region_polygon(n))
        parts.append(f'<polygon points="{pts}" fill="gray" fill-opacity="0.15" stroke="gray"/>')
    if word is not None:
        for i in range(grid):
            for j in range(grid + 1):
                p = point(word.source, Fraction(i, grid), Fraction(j, grid))
                img = eval_word(word, p)
                x0, y0 = _xy(p.x, p.y)
                x1, y1 = _xy(img.x, img.y)
                if (x0, y0) != (x1, y1):
                    parts.append(f'<line x1="{x0:.2f}" y1="{y0:.2f}" x2="{x1:.2f}" y2="{y1:.2f}" stroke="red" stroke-width="0.5"/>')
                parts.append(f'<circle cx="{x1:.2f}" cy="{y1:.2f}" r="1.5" fill="red"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def plot_main(args) -> int:
    from .cli import UsageError

    try:
        atoms = parse_word(args.word)
    except ValueError as exc:
        raise UsageError(f"bad word {args.word!r}: {exc}") from None
    word = MapWord(Space(args.source), Space(args.target), atoms) if atoms else None
    Path(args.out).write_text(render(args.max_index, word))
    print(f"wrote {args.out}")
    return 0
