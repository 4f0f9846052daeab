"""Theorem catalog and proof-script generators.

Each generator builds the configuration for one side of an identity, emits the
rewrite steps of the corresponding arrow-chasing argument, and builds the
expected final configuration independently from the other side's closed form.
Nothing here asserts correctness: :func:`pascal_chase.chase.check_script` does.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Mapping

from .chase import (
    Drop,
    Lift,
    ProofScript,
    RuleStep,
    ShiftRight,
    SwapSym,
    WeightedConfig,
    _apply_in_place,
)
from .exact import ZERO, Weight
from .lang import (
    IdentityAst,
    format_condition,
    format_expr,
    parse_identity,
    violated_constraints,
)
from .triangle import binom


class ScriptError(ValueError):
    pass


@dataclass(frozen=True)
class TheoremCatalogEntry:
    id: str
    identity_text: str
    figure_ref: str
    ranges: tuple[str, ...]
    generator: Callable[[Mapping[str, int]], ProofScript] | None = field(
        default=None, compare=False, repr=False)

    @property
    def identity(self) -> IdentityAst:
        return _parsed(self.identity_text)

    @property
    def params(self) -> tuple[str, ...]:
        return self.identity.params

    @property
    def constraints(self) -> tuple[str, ...]:
        return tuple(format_condition(c) for c in self.identity.constraints)

    @property
    def has_script(self) -> bool:
        return self.generator is not None

    def sweep_ranges(self, bound: int) -> list[str]:
        """Range strings for a sweep with every parameter at most ``bound``."""
        return [r.replace("B", str(bound)) for r in self.ranges]

    def summary(self) -> dict:
        return {
            "id": self.id,
            "identity": self.identity_text,
            "params": list(self.params),
            "constraints": list(self.constraints),
            "figure": self.figure_ref,
            "script": self.has_script,
        }


@lru_cache(maxsize=None)
def _parsed(text: str) -> IdentityAst:
    return parse_identity(text)


# -- chase helpers ------------------------------------------------------------------------


def _by_row(cells) -> dict[int, set[int]]:
    rows: dict[int, set[int]] = {}
    for n, k in cells:
        rows.setdefault(n, set()).add(k)
    return rows


def chase_steps(start: WeightedConfig, target: WeightedConfig) -> list[Lift]:
    """Greedy upward chase from ``start`` toward ``target``.

    Rows are processed from the bottom up; every cell's surplus over its target
    weight is lifted to the row above. Rows that have been processed never
    change again, so the result matches ``target`` in every row but the apex,
    and at the apex too exactly when both configurations have equal value.
    """
    cells = start.as_dict()
    goal = target.as_dict()
    pending = _by_row(cells)
    for n, ks in _by_row(goal).items():
        pending.setdefault(n, set()).update(ks)
    steps: list[Lift] = []
    top = max(pending, default=0)
    for n in range(top, 0, -1):
        for k in sorted(pending.get(n, ())):
            surplus = cells.get((n, k), ZERO) - goal.get((n, k), ZERO)
            if not surplus:
                continue
            step = Lift(n, k, surplus)
            _apply_in_place(cells, step)
            steps.append(step)
            below = pending.setdefault(n - 1, set())
            below.update(k2 for k2 in (k - 1, k) if 0 <= k2 <= n - 1)
    return steps


def reverse_lifts(steps) -> list[Drop]:
    """The exact inverse of a sequence of lifts, as drops."""
    return [Drop(s.n - 1, s.k - 1, s.w) for s in reversed(steps)]


def mirror_transfer(cells: dict, r: int, j: int, t: Weight) -> list[RuleStep]:
    """Move weight ``t`` from ``(r, j)`` to its mirror ``(r, r-j)``.

    The other weights of both cells are parked in row ``r-1`` with lifts,
    the two cells are swapped, and the parked weights are dropped back.
    ``cells`` is updated in place.
    """
    w_src = cells.get((r, j), ZERO)
    w_mir = cells.get((r, r - j), ZERO)
    keep = w_src - t
    steps: list[RuleStep] = []
    if w_mir:
        steps.append(Lift(r, r - j, w_mir))
    if keep:
        steps.append(Lift(r, j, keep))
    steps.append(SwapSym(r, j))
    if keep:
        steps.append(Drop(r - 1, j - 1, keep))
    if w_mir:
        steps.append(Drop(r - 1, r - j - 1, w_mir))
    for s in steps:
        _apply_in_place(cells, s)
    return steps


def _script(tid: str, params: Mapping[str, int], initial: WeightedConfig,
            steps, final: WeightedConfig) -> ProofScript:
    ast = _parsed(CATALOG_TEXT[tid])
    return ProofScript(tid, dict(params), initial, tuple(steps), final,
                       format_expr(ast.lhs), format_expr(ast.rhs), CATALOG_TEXT[tid])


def _chased(tid, params, initial, target):
    return _script(tid, params, initial, chase_steps(initial, target), target)


def _apex(value) -> WeightedConfig:
    return WeightedConfig({(0, 0): value})


def _sign(e: int) -> int:
    return -1 if e % 2 else 1


# -- generators -------------------------------------------------------------------------


def _row_sum(p):
    n = p["n"]
    return _chased("row_sum", p, WeightedConfig.from_row(n, [1] * (n + 1)), _apex(2 ** n))


def _half_row(parity):
    tid = "half_row_even" if parity == 0 else "half_row_odd"

    def gen(p):
        n = p["n"]
        initial = WeightedConfig({(n, k): 1 for k in range(parity, n + 1, 2)})
        return _chased(tid, p, initial, _apex(2 ** (n - 1)))
    return gen


def _hockey_stick(p):
    n, m = p["n"], p["m"]
    column = WeightedConfig.from_column(m, [1] * (n - m + 1), m)
    apex_form = WeightedConfig({(n + 1, m + 1): 1})
    drops = reverse_lifts(chase_steps(apex_form, column))
    return _script("hockey_stick", p, column, drops, apex_form)


def _weighted_row(p):
    n = p["n"]
    initial = WeightedConfig.from_row(n, range(n + 1))
    steps: list[RuleStep] = [Lift(n, k, k) for k in range(1, n + 1)]
    cells = initial.as_dict()
    for s in steps:
        _apply_in_place(cells, s)
    r = n - 1
    # row r now holds 2j+1 at (r, j); hand the surplus of the heavier half to
    # its mirror so that every cell ends with weight n
    for j in range(r, r - (r + 1) // 2, -1):
        if j <= r - j:
            break
        t = cells[(r, j)] - n
        steps += mirror_transfer(cells, r, j, t)
    target = _apex(n * 2 ** (n - 1))
    steps += chase_steps(WeightedConfig(cells), target)
    return _script("weighted_row", p, initial, steps, target)


def _weighted_half(parity):
    tid = "weighted_half_even" if parity == 0 else "weighted_half_odd"

    def gen(p):
        n = p["n"]
        initial = WeightedConfig({(n, 2 * k + parity): k for k in range(n + 1)})
        rhs = (n if parity == 0 else n - 2) * 2 ** (n - 3)
        return _chased(tid, p, initial, _apex(rhs))
    return gen


def _lagrange(p):
    n = p["n"]
    initial = WeightedConfig({(2 * n, n): 1})
    target = WeightedConfig.from_row(n, [binom(n, k) for k in range(n + 1)])
    return _chased("lagrange", p, initial, target)


def _chu_vandermonde(p):
    l, m, n = p["l"], p["m"], p["n"]
    initial = WeightedConfig({(m + n, l): 1})
    target = WeightedConfig.from_row(n, [binom(m, l - k) if k <= l else 0
                                         for k in range(n + 1)])
    return _chased("chu_vandermonde", p, initial, target)


def _alternating(p):
    n = p["n"]
    initial = WeightedConfig.from_row(n, [_sign(k) for k in range(n + 1)])
    return _chased("alternating", p, initial, WeightedConfig())


def _alternating_k(p):
    n = p["n"]
    initial = WeightedConfig.from_row(n, [_sign(k) * k for k in range(n + 1)])
    return _chased("alternating_k", p, initial, WeightedConfig())


def _alt_binom(p):
    n, m = p["n"], p["m"]
    # (-1)^(k-m) rather than (-1)^k: the same identity up to an overall sign,
    # laid out with a positive first weight as drawn in the figure
    initial = WeightedConfig({(n, k): _sign(k - m) * binom(k, m) for k in range(m, n + 1)})
    return _chased("alt_binom", p, initial, WeightedConfig())


def _binomial_theorem(p):
    n = p["n"]
    a, b = Weight.var("a"), Weight.var("b")
    initial = WeightedConfig.from_row(n, [a ** (n - k) * b ** k for k in range(n + 1)])
    return _chased("binomial_theorem", p, initial, _apex((a + b) ** n))


def _hockey_variant(p):
    n, m = p["n"], p["m"]
    initial = WeightedConfig({(n + 1, m + 1): n, (n + 1, m + 2): -1})
    target = WeightedConfig({(k, m): k for k in range(m, n + 1)})
    return _chased("hockey_variant", p, initial, target)


def _hockey_gen(p):
    n, m, l = p["n"], p["m"], p["l"]
    initial = WeightedConfig({(n + 1, m + k + 1): _sign(k) * binom(n - k, l - k)
                              for k in range(l + 1)})
    target = WeightedConfig({(k, m): binom(k, l) for k in range(n + 1)})
    return _chased("hockey_gen", p, initial, target)


def _upside_down_cv(p):
    n, m, l = p["n"], p["m"], p["l"]
    initial = WeightedConfig({(n + 1, l + m + 1): 1})
    target = WeightedConfig({(k, m): binom(n - k, l) for k in range(m, n - l + 1)})
    return _chased("upside_down_cv", p, initial, target)


def _boscarol(p):
    m, n = p["m"], p["n"]
    initial = WeightedConfig(
        [((k, m), 2 ** (n - k)) for k in range(m, n + 1)]
        + [((k, n - m), 2 ** (n - k)) for k in range(n - m, n + 1)])
    cells = initial.as_dict()
    c = n - m
    steps: list[RuleStep] = []
    # reflect the second column (k, n-m) onto (k, k-n+m); where it meets the
    # first column, only the second column's share moves
    for k in range(n, c - 1, -1):
        mirror = k - c
        if mirror == c:
            continue
        share = Weight.coerce(2 ** (n - k))
        if cells.get((k, c), ZERO) != share or (k, mirror) in cells:
            steps += mirror_transfer(cells, k, c, share)
        else:
            s = SwapSym(k, c)
            _apply_in_place(cells, s)
            steps.append(s)
    reflected = WeightedConfig(cells)
    final = WeightedConfig.from_row(n, [2] * (n + 1))
    steps += reverse_lifts(chase_steps(final, reflected))
    return _script("boscarol", p, initial, steps, final)


def _shift_columns(p_row: int, column: int, count: int) -> list[ShiftRight]:
    """Subtractive chase of a unit weight at ``(p_row, column)`` across ``count`` columns.

    Before column ``column + t`` is shifted, its cell in row ``p_row + i`` holds
    ``(-1)^(t-i) C(t, i)``; each shift moves that weight to the diagonal below
    and its negative to the right neighbor.
    """
    steps = []
    for t in range(count):
        for i in range(t + 1):
            steps.append(ShiftRight(p_row + i, column + t, _sign(t - i) * binom(t, i)))
    return steps


def _knuth_like(tid, p, p_row, m, n):
    initial = WeightedConfig({(p_row, m - n): 1})
    steps = _shift_columns(p_row, m - n, n)
    final = WeightedConfig({(p_row + i, m): _sign(n - i) * binom(n, i) for i in range(n + 1)})
    return _script(tid, p, initial, steps, final)


def _hor(p):
    n = p["n"]
    return _knuth_like("hor", p, n, n, n)


def _knuth(p):
    return _knuth_like("knuth", p, p["p"], p["m"], p["n"])


def _hor_row_form(p):
    n = p["n"]
    initial = WeightedConfig.from_row(n, [_sign(k) * binom(2 * n - k, n) for k in range(n + 1)])
    return _chased("hor_row_form", p, initial, _apex(1))


# -- catalog ----------------------------------------------------------------------------

_ENTRIES = [
    ("row_sum", "sum(k=0..n, C(n,k)) == 2^n for n",
     "Fig. 3", ("n=0..B",), _row_sum),
    ("half_row_even", "sum(k=0..n, C(n,2*k)) == 2^(n-1) for n where n >= 1",
     "Fig. 4", ("n=1..B",), _half_row(0)),
    ("half_row_odd", "sum(k=0..n, C(n,2*k+1)) == 2^(n-1) for n where n >= 1",
     "Fig. 4", ("n=1..B",), _half_row(1)),
    ("hockey_stick", "sum(k=m..n, C(k,m)) == C(n+1,m+1) for n, m where m <= n",
     "Fig. 5", ("n=0..B", "m=0..n"), _hockey_stick),
    ("weighted_row", "sum(k=0..n, k*C(n,k)) == n*2^(n-1) for n where n >= 1",
     "Fig. 7", ("n=1..B",), _weighted_row),
    ("weighted_half_even", "sum(k=0..n, k*C(n,2*k)) == n*2^(n-3) for n where n >= 3",
     "Fig. 8", ("n=3..B",), _weighted_half(0)),
    ("weighted_half_odd", "sum(k=0..n, k*C(n,2*k+1)) == (n-2)*2^(n-3) for n where n >= 3",
     "Fig. 8", ("n=3..B",), _weighted_half(1)),
    ("lagrange", "sum(k=0..n, C(n,k)^2) == C(2*n,n) for n",
     "Fig. 9", ("n=0..B",), _lagrange),
    ("chu_vandermonde",
     "sum(k=0..l, C(n,k)*C(m,l-k)) == C(m+n,l) for l, m, n where l <= m, l <= n",
     "no figure", ("m=0..B", "n=0..B", "l=0..m"), _chu_vandermonde),
    ("alternating", "sum(k=0..n, (-1)^k*C(n,k)) == 0 for n where n >= 1",
     "Fig. 10", ("n=1..B",), _alternating),
    ("alternating_k", "sum(k=0..n, (-1)^k*k*C(n,k)) == 0 for n where n >= 2",
     "Fig. 11", ("n=2..B",), _alternating_k),
    ("alt_binom", "sum(k=m..n, (-1)^k*C(n,k)*C(k,m)) == 0 for n, m where m < n",
     "Fig. 12", ("n=1..B", "m=0..n-1"), _alt_binom),
    ("binomial_theorem", "(a+b)^n == sum(k=0..n, C(n,k)*a^(n-k)*b^k) for n indet a, b",
     "Fig. 13", ("n=0..B",), _binomial_theorem),
    ("hockey_variant",
     "sum(k=m..n, k*C(k,m)) == n*C(n+1,m+1) - C(n+1,m+2) for n, m where m < n",
     "Fig. 14 left", ("n=1..B", "m=0..n-1"), _hockey_variant),
    ("hockey_gen",
     "sum(k=0..n, C(k,l)*C(k,m)) == sum(k=0..l, (-1)^k*C(n+1,m+k+1)*C(n-k,l-k))"
     " for n, m, l where l <= n, m <= n",
     "Fig. 14 right", ("n=0..B", "m=0..n", "l=0..n"), _hockey_gen),
    ("upside_down_cv",
     "sum(k=m..n-l, C(k,m)*C(n-k,l)) == C(n+1,l+m+1) for n, m, l where l+m <= n",
     "Fig. 15", ("n=0..B", "m=0..n", "l=0..n-m"), _upside_down_cv),
    ("boscarol",
     "sum(k=m..n, C(k,m)*2^(n-k)) + sum(k=n-m..n, C(k,n-m)*2^(n-k)) == 2^(n+1)"
     " for m, n where m <= n",
     "Fig. 16", ("n=0..B", "m=0..n"), _boscarol),
    ("hor", "sum(k=n..2*n, (-1)^k*C(k,n)*C(n,k-n)) == 1 for n",
     "Fig. 18 left", ("n=0..B",), _hor),
    ("hor_row_form", "sum(k=0..n, (-1)^k*C(n,k)*C(2*n-k,n)) == 1 for n",
     "Fig. 18 right", ("n=0..B",), _hor_row_form),
    ("knuth", "sum(k=p..p+n, (-1)^(p+n-k)*C(k,m)*C(n,k-p)) == C(p,m-n) for p, m, n",
     "generalization of Fig. 18 left", ("p=0..B", "m=0..B", "n=0..B"), _knuth),
    ("fib_row", "sum(k=0..n, C(n,k)*fib(k)) == fib(2*n) for n",
     "Fibonacci weights", ("n=0..B",), None),
    ("fib_quarterly",
     "sum(k=0..n, C(m,k)*(-1)^(n+k)*fib(m-2*k)) == sum(k=n..m-1, C(k,n)*fib(k-2*n-1))"
     " for n, m where n < m",
     "Fibonacci Quarterly problem", ("m=1..B", "n=0..m-1"), None),
]

CATALOG: dict[str, TheoremCatalogEntry] = {
    tid: TheoremCatalogEntry(tid, text, fig, ranges, gen)
    for tid, text, fig, ranges, gen in _ENTRIES
}

# Lagrange's sum started at k=1 instead of k=0. It falls short by exactly 1; it is
# kept out of the catalog but available to the verifier so the gap can be shown.
EXTRA_IDENTITIES = {
    "lagrange_as_printed": ("sum(k=1..n, C(n,k)^2) == C(2*n,n) for n", ("n=1..B",)),
}

CATALOG_TEXT = {tid: e.identity_text for tid, e in CATALOG.items()}
CATALOG_TEXT.update({tid: text for tid, (text, _) in EXTRA_IDENTITIES.items()})


def catalog_list() -> list[TheoremCatalogEntry]:
    """Catalog entries in their fixed, documented order (``row_sum`` first)."""
    return list(CATALOG.values())


def builtin_identity(tid: str) -> IdentityAst:
    try:
        return _parsed(CATALOG_TEXT[tid])
    except KeyError:
        raise ScriptError(f"unknown identity id {tid!r}") from None


def builtin_ranges(tid: str, bound: int) -> list[str]:
    if tid in CATALOG:
        return CATALOG[tid].sweep_ranges(bound)
    if tid in EXTRA_IDENTITIES:
        return [r.replace("B", str(bound)) for r in EXTRA_IDENTITIES[tid][1]]
    raise ScriptError(f"unknown identity id {tid!r}")


def generate_script(tid: str, params: Mapping[str, int] | None = None, /,
                    **kwargs: int) -> ProofScript:
    """Build the proof script for ``tid``; parameters by mapping or keyword."""
    params = {**(params or {}), **kwargs}
    entry = CATALOG.get(tid)
    if entry is None:
        raise ScriptError(f"unknown theorem id {tid!r}")
    if entry.generator is None:
        raise ScriptError(f"{tid}: no script available — verify via sweep")
    ast = entry.identity
    missing = [p for p in ast.params if p not in params]
    extra = [p for p in params if p not in ast.params]
    if missing or extra:
        raise ScriptError(f"{tid} takes parameters {', '.join(ast.params)}")
    for name in ast.params:
        value = params[name]
        if isinstance(value, bool) or not isinstance(value, int) or value < 0:
            raise ScriptError(f"{tid}: parameter {name} must be a nonnegative integer")
    bad = violated_constraints(ast, params)
    if bad:
        raise ScriptError(f"{tid} requires {format_condition(bad[0])}")
    return entry.generator({name: params[name] for name in ast.params})
