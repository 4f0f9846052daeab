"""SVG and TikZ drawings of weighted configurations on the hexagonal triangle.

Cell ``(n, k)`` is a pointy-top hexagon of circumradius ``s`` centred at
``x = (k - n/2) * s * sqrt(3)``, ``y = n * 1.5 * s``; neighbouring cells touch.
Output is a pure function of its inputs, so equal inputs give equal bytes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping
from xml.sax.saxutils import escape

from .chase import (
    Drop,
    Lift,
    ProofScript,
    RuleStep,
    ShiftRight,
    SwapSym,
    WeightedConfig,
    _apply_in_place,
    check_script,
)
from .exact import ZERO, Weight, format_weight
from .triangle import binom

SQRT3 = math.sqrt(3.0)

DEFAULT_SHADES = {
    "empty": "none",
    "positive": "#e6e6e6",
    "symbolic": "#e6e6e6",
    "negative": "#c9c9c9",
    "highlight": "#b0b0b0",
}
LABEL_MODES = ("weights", "binomial", "both")
ARROW_STYLES = ("rule", "up", "down")


class RenderError(ValueError):
    pass


@dataclass(frozen=True)
class RenderOptions:
    cell_size: float = 40.0
    shades: Mapping[str, str] = field(default_factory=lambda: dict(DEFAULT_SHADES))
    label_mode: str = "weights"
    # "rule" draws each step in its own direction; "up"/"down" force one
    arrow_style: str = "rule"
    highlight: frozenset = frozenset()

    def __post_init__(self):
        if not self.cell_size > 0:
            raise RenderError(f"cell size must be positive, got {self.cell_size}")
        if self.label_mode not in LABEL_MODES:
            raise RenderError(f"label mode must be one of {', '.join(LABEL_MODES)}")
        if self.arrow_style not in ARROW_STYLES:
            raise RenderError(f"arrow style must be one of {', '.join(ARROW_STYLES)}")
        missing = set(DEFAULT_SHADES) - set(self.shades)
        if missing:
            raise RenderError(f"shade map lacks {', '.join(sorted(missing))}")
        object.__setattr__(self, "highlight", frozenset(tuple(c) for c in self.highlight))


def center(n: int, k: int, s: float) -> tuple[float, float]:
    return (k - n / 2) * s * SQRT3, n * 1.5 * s


def _hexagon(n: int, k: int, s: float) -> list[tuple[float, float]]:
    cx, cy = center(n, k, s)
    return [(cx + s * math.cos(math.radians(-90 + 60 * i)),
             cy + s * math.sin(math.radians(-90 + 60 * i))) for i in range(6)]


def _f(x: float) -> str:
    text = f"{x:.2f}"
    return "0.00" if text == "-0.00" else text


def shade_class(coord, w: Weight, o: RenderOptions) -> str:
    if tuple(coord) in o.highlight:
        return "highlight"
    if not w:
        return "empty"
    if not w.is_constant():
        return "symbolic"
    return "negative" if w.constant() < 0 else "positive"


def label_text(n: int, k: int, w: Weight, mode: str) -> str:
    if mode == "weights":
        return format_weight(w)
    if mode == "binomial":
        return str(binom(n, k))
    return f"{format_weight(w)} | {binom(n, k)}"


# -- arrows --------------------------------------------------------------------------------


def step_arrows(step: RuleStep, style: str = "rule") -> list[tuple[tuple, tuple, bool]]:
    """Segments ``(from, to, double_headed)`` for one step, phantom ends dropped."""
    n, k = step.n, step.k
    if isinstance(step, Lift):
        segs = [((n, k), (n - 1, k - 1)), ((n, k), (n - 1, k))]
    elif isinstance(step, Drop):
        segs = [((n, k), (n + 1, k + 1)), ((n, k + 1), (n + 1, k + 1))]
    elif isinstance(step, ShiftRight):
        segs = [((n, k), (n + 1, k + 1)), ((n, k), (n, k + 1))]
    elif isinstance(step, SwapSym):
        if k == n - k:
            return []
        return [((n, k), (n, n - k), True)]
    else:
        raise TypeError(f"not a rule step: {step!r}")
    out = []
    for a, b in segs:
        if not (0 <= a[1] <= a[0] and 0 <= b[1] <= b[0]):
            continue
        # "up" points every arrow at the smaller row, "down" at the larger one
        if style == "up" and a[0] < b[0] or style == "down" and a[0] > b[0]:
            a, b = b, a
        out.append((a, b, False))
    return out


def _arrow_svg(a, b, double: bool, s: float) -> str:
    (x1, y1), (x2, y2) = center(*a, s), center(*b, s)
    dx, dy = x2 - x1, y2 - y1
    length = math.hypot(dx, dy)
    trim = min(0.45 * s, length / 3)
    ux, uy = dx / length, dy / length
    x1, y1 = x1 + ux * trim, y1 + uy * trim
    x2, y2 = x2 - ux * trim, y2 - uy * trim
    start = ' marker-start="url(#arrow-back)"' if double else ""
    return (f'<line class="arrow" x1="{_f(x1)}" y1="{_f(y1)}" x2="{_f(x2)}" y2="{_f(y2)}" '
            f'stroke="#000000" stroke-width="1.2" marker-end="url(#arrow)"{start}/>')


# -- svg --------------------------------------------------------------------------------------


def _svg_document(cells: list[tuple[tuple[int, int], str, str]], arrows: Iterable,
                  o: RenderOptions, title: str | None) -> str:
    """``cells`` holds ``((n, k), fill, label)``; ``arrows`` holds arrow segments."""
    s = o.cell_size
    arrows = sorted(set(arrows))
    coords = [c for c, _, _ in cells] + [p for a, b, _ in arrows for p in (a, b)]
    if coords:
        xs = [center(n, k, s)[0] for n, k in coords]
        ys = [center(n, k, s)[1] for n, k in coords]
        x0, x1 = min(xs) - s * SQRT3 / 2 - s / 2, max(xs) + s * SQRT3 / 2 + s / 2
        y0, y1 = min(ys) - 1.5 * s, max(ys) + 1.5 * s
    else:
        x0, y0, x1, y1 = 0.0, 0.0, 2 * s, 2 * s
    width, height = x1 - x0, y1 - y0
    font = s * 0.42
    out = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_f(width)}" '
        f'height="{_f(height)}" viewBox="{_f(x0)} {_f(y0)} {_f(width)} {_f(height)}">',
    ]
    if title:
        out.append(f"<title>{escape(title)}</title>")
    out += [
        "<defs>",
        '<marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="6" '
        'markerHeight="6" orient="auto"><path d="M 0 0 L 10 5 L 0 10 z"/></marker>',
        '<marker id="arrow-back" viewBox="0 0 10 10" refX="1" refY="5" markerWidth="6" '
        'markerHeight="6" orient="auto"><path d="M 10 0 L 0 5 L 10 10 z"/></marker>',
        "</defs>",
        '<g class="cells">',
    ]
    for (n, k), fill, label in sorted(cells):
        pts = " ".join(f"{_f(x)},{_f(y)}" for x, y in _hexagon(n, k, s))
        cx, cy = center(n, k, s)
        out.append(f'<polygon class="cell" data-n="{n}" data-k="{k}" points="{pts}" '
                   f'fill="{fill}" stroke="#000000" stroke-width="1"/>')
        if label:
            out.append(f'<text x="{_f(cx)}" y="{_f(cy)}" font-family="sans-serif" '
                       f'font-size="{_f(font)}" text-anchor="middle" '
                       f'dominant-baseline="central">{escape(label)}</text>')
    out.append("</g>")
    out.append('<g class="arrows">')
    for a, b, double in arrows:
        out.append(_arrow_svg(a, b, double, s))
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _config_cells(c: WeightedConfig, o: RenderOptions):
    return [((n, k), o.shades[shade_class((n, k), w, o)], label_text(n, k, w, o.label_mode))
            for (n, k), w in c.items()]


def render_config_svg(c: WeightedConfig, o: RenderOptions | None = None,
                      title: str | None = None) -> str:
    """One hexagon per weighted cell, labelled with its weight."""
    o = o or RenderOptions()
    return _svg_document(_config_cells(c, o), (), o, title)


def _step_panel(c: WeightedConfig, step: RuleStep, o: RenderOptions, title) -> str:
    cells = _config_cells(c, o)
    present = {coord for coord, _, _ in cells}
    arrows = step_arrows(step, o.arrow_style)
    for a, b, _ in arrows:
        for coord in (a, b):
            if coord not in present:
                present.add(coord)
                cells.append((coord, o.shades["empty"], ""))
    return _svg_document(cells, arrows, o, title)


def render_script_svg(script: ProofScript, o: RenderOptions | None = None) -> list[str]:
    """Panel ``i`` shows the configuration before step ``i``; the last shows the result."""
    o = o or RenderOptions()
    report = check_script(script)
    if not report.valid:
        raise RenderError(f"cannot render an invalid script: {report.summary()}")
    configs = list(script.replay())
    panels = []
    for i, step in enumerate(script.steps):
        panels.append(_step_panel(configs[i], step, o, f"{script.theorem_id} step {i}"))
    panels.append(render_config_svg(configs[-1], o, f"{script.theorem_id} final"))
    return panels


# -- traces (figure style) -------------------------------------------------------------------


def _drawn_from(step: RuleStep):
    if isinstance(step, (Lift, ShiftRight)):
        return ((step.n, step.k),)
    if isinstance(step, Drop):
        return ((step.n, step.k), (step.n, step.k + 1))
    return ()


@dataclass(frozen=True)
class Trace:
    """A stretch of a script drawn as one picture.

    Each cell is labelled with the weight it held just before a step first drew
    from it; cells never drawn from show their weight at the end of the stretch.
    """

    labels: dict
    start: WeightedConfig
    end: WeightedConfig
    steps: tuple


def trace(script: ProofScript, start: int = 0, stop: int | None = None) -> Trace:
    cells = script.initial.as_dict()
    for step in script.steps[:start]:
        _apply_in_place(cells, step)
    first = WeightedConfig(cells)
    labels: dict = {}
    chosen = script.steps[start:stop]
    for step in chosen:
        for coord in _drawn_from(step):
            if coord not in labels and 0 <= coord[1] <= coord[0] and cells.get(coord, ZERO):
                labels[coord] = cells[coord]
        _apply_in_place(cells, step)
    for coord, w in cells.items():
        labels.setdefault(coord, w)
    return Trace(labels, first, WeightedConfig(cells), tuple(chosen))


def render_trace_svg(t: Trace, o: RenderOptions | None = None, title: str | None = None) -> str:
    o = o or RenderOptions()
    if not o.highlight:
        o = RenderOptions(o.cell_size, o.shades, o.label_mode, o.arrow_style,
                          frozenset(t.end.coords()) - frozenset(t.start.coords()))
    cells = [((n, k), o.shades[shade_class((n, k), w, o)], label_text(n, k, w, o.label_mode))
             for (n, k), w in sorted(t.labels.items())]
    arrows = [a for step in t.steps for a in step_arrows(step, o.arrow_style)]
    return _svg_document(cells, arrows, o, title)


# -- tikz ---------------------------------------------------------------------------------------


def _tikz_label(w_text: str) -> str:
    body = []
    i = 0
    while i < len(w_text):
        ch = w_text[i]
        if ch == "^":
            j = i + 1
            while j < len(w_text) and w_text[j].isdigit():
                j += 1
            body.append("^{" + w_text[i + 1:j] + "}")
            i = j
            continue
        body.append(r"\," if ch == "*" else ch)
        i += 1
    return "$" + "".join(body) + "$"


def _tikz_color(fill: str) -> str:
    if fill == "none":
        return ""
    r, g, b = (int(fill[i:i + 2], 16) for i in (1, 3, 5))
    return f", fill={{rgb,255:red,{r};green,{g};blue,{b}}}"


def render_tikz(c: WeightedConfig, o: RenderOptions | None = None) -> str:
    """A ``tikzpicture`` with one hexagon node per weighted cell.

    Needs ``\\usetikzlibrary{shapes.geometric}`` in the preamble.
    """
    o = o or RenderOptions()
    s = o.cell_size
    lines = [
        r"\begin{tikzpicture}[x=1pt, y=1pt, hexcell/.style={draw, regular polygon, "
        rf"regular polygon sides=6, shape border rotate=30, minimum size={_f(2 * s)}pt, "
        r"inner sep=0pt}]",
    ]
    for (n, k), w in c.items():
        x, y = center(n, k, s)
        fill = _tikz_color(o.shades[shade_class((n, k), w, o)])
        if o.label_mode == "weights":
            text = _tikz_label(format_weight(w))
        elif o.label_mode == "binomial":
            text = str(binom(n, k))
        else:
            text = _tikz_label(format_weight(w)) + r" \textbar{} " + str(binom(n, k))
        lines.append(rf"\node[hexcell{fill}] at ({_f(x)}, {_f(-y)}) {{{text}}};")
    lines.append(r"\end{tikzpicture}")
    return "\n".join(lines) + "\n"


# -- the figures ---------------------------------------------------------------------------------


def _first_round(script: ProofScript) -> tuple[int, int]:
    top = max(script.initial.rows())
    stop = 0
    while stop < len(script.steps) and isinstance(script.steps[stop], Lift) \
            and script.steps[stop].n == top:
        stop += 1
    return 0, stop


def _after_last_swap(script: ProofScript) -> tuple[int, None]:
    steps = script.steps
    last = max(i for i, s in enumerate(steps) if isinstance(s, SwapSym))
    # a swap that transfers part of a cell is wrapped in lifts before it and
    # matching drops after it; the stretch starts once those drops are done
    parked = 0
    while last - parked - 1 >= 0 and isinstance(steps[last - parked - 1], Lift) \
            and steps[last - parked - 1].n == steps[last].n:
        parked += 1
    return last + 1 + parked, None


def _whole(script: ProofScript) -> tuple[int, None]:
    return 0, None


@dataclass(frozen=True)
class FigureSpec:
    name: str
    theorem_id: str
    params: dict
    window: Callable[[ProofScript], tuple]
    caption: str


FIGURES = {
    f.name: f for f in (
        FigureSpec("fig3", "row_sum", {"n": 6}, _first_round, "row sum, first lift round"),
        FigureSpec("fig5", "hockey_stick", {"n": 5, "m": 2}, _whole, "hockey stick"),
        FigureSpec("fig7", "weighted_row", {"n": 6}, _first_round, "weighted row, first round"),
        FigureSpec("fig9", "lagrange", {"n": 4}, _whole, "Lagrange"),
        FigureSpec("fig12", "alt_binom", {"n": 8, "m": 3}, _whole, "alternating column"),
        FigureSpec("fig16", "boscarol", {"m": 3, "n": 7}, _after_last_swap, "Boscarol"),
        FigureSpec("fig18_left", "hor", {"n": 4}, _whole, "column form"),
        FigureSpec("fig18_right", "hor_row_form", {"n": 4}, _whole, "row form"),
    )
}


def figure_trace(name: str) -> Trace:
    from .scripts import generate_script

    if name not in FIGURES:
        raise RenderError(f"unknown figure {name!r}; choose from {', '.join(FIGURES)}")
    spec = FIGURES[name]
    script = generate_script(spec.theorem_id, spec.params)
    start, stop = spec.window(script)
    return trace(script, start, stop)


def render_figure(name: str, o: RenderOptions | None = None) -> str:
    t = figure_trace(name)
    spec = FIGURES[name]
    return render_trace_svg(t, o, f"{spec.theorem_id}: {spec.caption}")
