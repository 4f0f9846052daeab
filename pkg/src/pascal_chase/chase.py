"""Weighted configurations on Pascal's triangle and value-preserving rewrites.

A configuration assigns exact weights to cells; its value is the sum of
``weight * C(n, k)``. Four rules change a configuration without changing its
value:

``Lift(n, k, w)``
    move ``w`` from ``(n,k)`` to both ``(n-1,k-1)`` and ``(n-1,k)``
    (the weight rule, read cell by cell).
``Drop(n, k, w)``
    take ``w`` from both ``(n,k)`` and ``(n,k+1)`` and put it on ``(n+1,k+1)``
    (Pascal's rule; the inverse of ``Lift(n+1, k+1, w)``).
``ShiftRight(n, k, w)``
    move ``w`` from ``(n,k)`` to ``(n+1,k+1)`` and ``-w`` to ``(n,k+1)``
    (``C(n,k) = C(n+1,k+1) - C(n,k+1)``).
``SwapSym(n, k)``
    exchange the weights of ``(n,k)`` and ``(n,n-k)``.

Cells outside the triangle (``k < 0`` or ``k > n``) have binomial value 0, so
any weight landing there is discarded.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import ClassVar, Iterable, Iterator, Mapping, Union

from .exact import ZERO, Weight, contains
from .triangle import Coord, binom


class StepError(ValueError):
    pass


def _phantom(n: int, k: int) -> bool:
    return k < 0 or k > n


class WeightedConfig:
    """Immutable map from cells to nonzero weights, phantom cells removed."""

    __slots__ = ("_cells", "_hash")

    def __init__(self, cells: Mapping | Iterable = ()):
        items = cells.items() if isinstance(cells, Mapping) else cells
        out: dict[tuple[int, int], Weight] = {}
        for coord, w in items:
            n, k = coord
            Coord(n, k)  # validates the row
            if _phantom(n, k):
                continue
            total = out.get((n, k), ZERO) + Weight.coerce(w)
            if total:
                out[(n, k)] = total
            else:
                out.pop((n, k), None)
        self._cells = out
        self._hash = None

    @classmethod
    def _trusted(cls, cells: dict) -> WeightedConfig:
        c = object.__new__(cls)
        c._cells = cells
        c._hash = None
        return c

    @classmethod
    def from_row(cls, n: int, weights: Iterable, start: int = 0) -> WeightedConfig:
        """Row ``n`` with ``weights[j]`` placed at index ``start + j``."""
        return cls(((n, start + j), w) for j, w in enumerate(weights))

    @classmethod
    def from_column(cls, k: int, weights: Iterable, start_row: int) -> WeightedConfig:
        """Column ``k`` with ``weights[j]`` placed at row ``start_row + j``."""
        return cls(((start_row + j, k), w) for j, w in enumerate(weights))

    def get(self, n: int, k: int) -> Weight:
        return self._cells.get((n, k), ZERO)

    def items(self) -> list[tuple[Coord, Weight]]:
        return [(Coord(n, k), self._cells[(n, k)]) for n, k in sorted(self._cells)]

    def coords(self) -> list[Coord]:
        return [Coord(n, k) for n, k in sorted(self._cells)]

    def rows(self) -> list[int]:
        return sorted({n for n, _ in self._cells})

    def row(self, n: int) -> list[Weight]:
        """Weights of row ``n`` at indices ``0..n`` (zeros included)."""
        return [self.get(n, k) for k in range(n + 1)]

    def as_dict(self) -> dict[tuple[int, int], Weight]:
        return dict(self._cells)

    def __len__(self) -> int:
        return len(self._cells)

    def __iter__(self) -> Iterator[Coord]:
        return iter(self.coords())

    def __contains__(self, coord) -> bool:
        return tuple(coord) in self._cells

    def __eq__(self, other) -> bool:
        if not isinstance(other, WeightedConfig):
            return NotImplemented
        return self._cells == other._cells

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._cells.items()))
        return self._hash

    def __str__(self) -> str:
        body = ", ".join(f"({n},{k}): {w}" for (n, k), w in self.items())
        return "{" + body + "}"

    def __repr__(self) -> str:
        return f"WeightedConfig({self})"


# -- steps ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Lift:
    n: int
    k: int
    w: Weight
    rule: ClassVar[str] = "lift"

    def __post_init__(self):
        object.__setattr__(self, "w", Weight.coerce(self.w))

    def sources(self):
        return ((self.n, self.k),)

    def targets(self):
        return ((self.n - 1, self.k - 1), (self.n - 1, self.k))


@dataclass(frozen=True)
class Drop:
    n: int
    k: int
    w: Weight
    rule: ClassVar[str] = "drop"

    def __post_init__(self):
        object.__setattr__(self, "w", Weight.coerce(self.w))

    def sources(self):
        return ((self.n, self.k), (self.n, self.k + 1))

    def targets(self):
        return ((self.n + 1, self.k + 1),)


@dataclass(frozen=True)
class ShiftRight:
    n: int
    k: int
    w: Weight
    rule: ClassVar[str] = "shift_right"

    def __post_init__(self):
        object.__setattr__(self, "w", Weight.coerce(self.w))

    def sources(self):
        return ((self.n, self.k),)

    def targets(self):
        # (n, k+1) receives -w
        return ((self.n + 1, self.k + 1), (self.n, self.k + 1))


@dataclass(frozen=True)
class SwapSym:
    n: int
    k: int
    rule: ClassVar[str] = "swap_sym"

    def sources(self):
        return ()

    def targets(self):
        return ((self.n, self.k), (self.n, self.n - self.k))


RuleStep = Union[Lift, Drop, ShiftRight, SwapSym]
STEP_TYPES = {cls.rule: cls for cls in (Lift, Drop, ShiftRight, SwapSym)}


def _bump(cells: dict, n: int, k: int, delta: Weight) -> None:
    if k < 0 or k > n:
        return
    total = cells.get((n, k), ZERO) + delta
    if total:
        cells[(n, k)] = total
    else:
        cells.pop((n, k), None)


def _validate(step: RuleStep) -> None:
    if step.n < 0:
        raise StepError(f"{step}: row must be nonnegative")
    if isinstance(step, Lift) and step.n < 1:
        raise StepError(f"{step}: cannot lift above apex")
    if isinstance(step, SwapSym) and _phantom(step.n, step.k):
        raise StepError(f"{step}: cannot swap a phantom cell")


def _apply_in_place(cells: dict, step: RuleStep) -> tuple:
    """Rewrite ``cells`` by ``step``; returns the coordinates touched."""
    _validate(step)
    n, k = step.n, step.k
    if isinstance(step, Lift):
        w = step.w
        _bump(cells, n, k, -w)
        _bump(cells, n - 1, k - 1, w)
        _bump(cells, n - 1, k, w)
        return ((n, k), (n - 1, k - 1), (n - 1, k))
    if isinstance(step, Drop):
        w = step.w
        _bump(cells, n, k, -w)
        _bump(cells, n, k + 1, -w)
        _bump(cells, n + 1, k + 1, w)
        return ((n, k), (n, k + 1), (n + 1, k + 1))
    if isinstance(step, ShiftRight):
        w = step.w
        _bump(cells, n, k, -w)
        _bump(cells, n + 1, k + 1, w)
        _bump(cells, n, k + 1, -w)
        return ((n, k), (n + 1, k + 1), (n, k + 1))
    if isinstance(step, SwapSym):
        a, b = (n, k), (n, n - k)
        wa, wb = cells.pop(a, None), cells.pop(b, None)
        if wb is not None:
            cells[a] = wb
        if wa is not None:
            cells[b] = wa
        return (a, b)
    raise TypeError(f"not a rule step: {step!r}")


def overdrawn_source(cells: Mapping, step: RuleStep):
    """The first source cell from which ``step`` takes weight it does not hold.

    Phantom sources are exempt: their binomial value is 0, so any weight may be
    drawn from them. Returns ``None`` when the step is supported.
    """
    if isinstance(step, SwapSym):
        return None
    for n, k in step.sources():
        if _phantom(n, k):
            continue
        if not contains(cells.get((n, k), ZERO), step.w):
            return (n, k)
    return None


def eval_config(c: WeightedConfig) -> Weight:
    """Exact value ``sum(weight * C(n, k))``."""
    total = ZERO
    for (n, k), w in c._cells.items():
        total = total + w * binom(n, k)
    return total


def apply_step(c: WeightedConfig, s: RuleStep) -> WeightedConfig:
    cells = dict(c._cells)
    _apply_in_place(cells, s)
    return WeightedConfig._trusted(cells)


def apply_steps(c: WeightedConfig, steps: Iterable[RuleStep]) -> WeightedConfig:
    cells = dict(c._cells)
    for s in steps:
        _apply_in_place(cells, s)
    return WeightedConfig._trusted(cells)


def lift_row_steps(c: WeightedConfig, n: int) -> list[Lift]:
    """One ``Lift`` per weighted cell of row ``n``, left to right."""
    if n < 1:
        raise StepError(f"cannot lift row {n}: nothing above the apex")
    return [Lift(n, k, w) for (r, k), w in sorted(c._cells.items()) if r == n]


def lift_row(c: WeightedConfig, n: int) -> WeightedConfig:
    """Apply the weight rule to the whole of row ``n``."""
    return apply_steps(c, lift_row_steps(c, n))


# -- proof scripts -----------------------------------------------------------------------


@dataclass(frozen=True)
class ProofScript:
    theorem_id: str
    params: Mapping[str, int]
    initial: WeightedConfig
    steps: tuple
    expected_final: WeightedConfig
    lhs_text: str
    rhs_text: str
    identity_text: str = ""

    def replay(self) -> Iterator[WeightedConfig]:
        """Yield the configuration before each step, then the final one."""
        cells = dict(self.initial._cells)
        yield self.initial
        for s in self.steps:
            _apply_in_place(cells, s)
            yield WeightedConfig._trusted(dict(cells))


@dataclass(frozen=True)
class CheckFailure:
    step: int | None  # index into steps; len(steps) for the final comparison
    reason: str
    expected: str
    actual: str


@dataclass(frozen=True)
class CheckReport:
    theorem_id: str
    valid: bool
    value: Weight | None
    step_values: tuple = ()
    final: WeightedConfig | None = None
    lhs_value: Weight | None = None
    rhs_value: Weight | None = None
    failure: CheckFailure | None = None

    def summary(self) -> str:
        if self.valid:
            return f"VALID, value {self.value}"
        f = self.failure
        where = "" if f.step is None else f" at step {f.step}"
        return f"INVALID{where}: {f.reason} (expected {f.expected}, got {f.actual})"


def _first_difference(expected: WeightedConfig, actual: WeightedConfig) -> str:
    for coord in sorted(set(expected._cells) | set(actual._cells)):
        a, b = expected._cells.get(coord, ZERO), actual._cells.get(coord, ZERO)
        if a != b:
            return f"cell ({coord[0]},{coord[1]}) holds {b}, expected {a}"
    return "configurations differ"


def check_script(s: ProofScript) -> CheckReport:
    """Replay ``s`` and certify it.

    VALID requires: every step draws only weight present at its sources, the
    value is the same after every step, the replay ends at ``expected_final``,
    and both identity sides evaluate to that common value.
    """
    from .lang import EvalError, ParseError, eval_expr, free_vars, parse_expr

    tid = s.theorem_id
    start = eval_config(s.initial)
    values = [start]
    cells = dict(s.initial._cells)
    value = start

    def fail(step, reason, expected, actual):
        return CheckReport(tid, False, None, tuple(values), WeightedConfig._trusted(cells),
                           failure=CheckFailure(step, reason, str(expected), str(actual)))

    for i, step in enumerate(s.steps):
        bad = overdrawn_source(cells, step)
        if bad is not None:
            have = cells.get(bad, ZERO)
            return fail(i, f"{_describe(step)} draws more than cell ({bad[0]},{bad[1]}) holds",
                        have, step.w)
        before = {c: cells.get(c, ZERO) for c in set(step.sources()) | set(step.targets())}
        try:
            touched = _apply_in_place(cells, step)
        except StepError as exc:
            return fail(i, str(exc), "applicable step", _describe(step))
        delta = ZERO
        for n, k in set(touched) | set(before):
            if _phantom(n, k):
                continue
            diff = cells.get((n, k), ZERO) - before.get((n, k), ZERO)
            if diff:
                delta = delta + diff * binom(n, k)
        value = value + delta
        values.append(value)
        if value != start:
            return fail(i, f"{_describe(step)} changes the value", start, value)

    final = WeightedConfig._trusted(dict(cells))
    if eval_config(final) != start:
        return fail(len(s.steps), "replayed configuration value drifted", start,
                    eval_config(final))
    if final != s.expected_final:
        return fail(len(s.steps), "replay does not reach the expected final configuration: "
                    + _first_difference(s.expected_final, final), s.expected_final, final)

    sides = []
    for label, text in (("left", s.lhs_text), ("right", s.rhs_text)):
        try:
            expr = parse_expr(text)
            indets = sorted(free_vars(expr) - set(s.params))
            side = eval_expr(expr, dict(s.params), indets)
        except (ParseError, EvalError) as exc:
            return fail(None, f"{label} side cannot be evaluated: {exc}", text, "error")
        if side != start:
            return fail(None, f"{label} side of the identity differs from the configuration value",
                        start, side)
        sides.append(side)
    return CheckReport(tid, True, start, tuple(values), final, sides[0], sides[1])


def _describe(step: RuleStep) -> str:
    if isinstance(step, SwapSym):
        return f"swap_sym({step.n},{step.k})"
    return f"{step.rule}({step.n},{step.k},{step.w})"
