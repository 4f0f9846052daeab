"""Binomial coefficients on Pascal's triangle, Fibonacci numbers, coordinates.

Binomials come from the additive recurrence only (a memoized triangle that
grows on demand); factorial formulas are kept out of this module so that the
oracle in :mod:`pascal_chase.harness` stays independent.
"""

from __future__ import annotations

import os
import threading
from collections import namedtuple
from functools import lru_cache

DEFAULT_MAX_ROW = 512
MAX_ROW_ENV = "PASCAL_CHASE_MAX_ROW"


class Coord(namedtuple("Coord", "n k")):
    """A cell of the triangle: row ``n``, index ``k``.

    ``k`` may lie outside ``0..n``; such a cell is *phantom* and its binomial
    value is 0. Coords compare and hash like plain ``(n, k)`` tuples.
    """

    __slots__ = ()

    def __new__(cls, n: int, k: int):
        if n < 0:
            raise ValueError(f"row must be nonnegative, got {n}")
        return super().__new__(cls, n, k)

    @property
    def phantom(self) -> bool:
        return self.k < 0 or self.k > self.n

    def mirror(self) -> Coord:
        return Coord(self.n, self.n - self.k)

    def __str__(self) -> str:
        return f"({self.n},{self.k})"


def _env_max_row() -> int:
    raw = os.environ.get(MAX_ROW_ENV)
    if not raw:
        return DEFAULT_MAX_ROW
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{MAX_ROW_ENV} must be an integer, got {raw!r}") from None
    if value < 1:
        raise ValueError(f"{MAX_ROW_ENV} must be positive, got {value}")
    return value


class PascalTable:
    """Rows of Pascal's triangle built by ``C(n,k) = C(n-1,k-1) + C(n-1,k)``."""

    def __init__(self, max_row: int | None = None):
        self.max_row = _env_max_row() if max_row is None else max_row
        self._rows: list[list[int]] = [[1]]
        self._lock = threading.Lock()

    def _grow(self, n: int) -> None:
        if n > self.max_row:
            raise ValueError(
                f"row {n} exceeds the triangle cap of {self.max_row} "
                f"(set {MAX_ROW_ENV} to raise it)"
            )
        with self._lock:
            rows = self._rows
            while len(rows) <= n:
                prev = rows[-1]
                row = [1]
                for j in range(1, len(prev)):
                    row.append(prev[j - 1] + prev[j])
                row.append(1)
                rows.append(row)

    def row(self, n: int) -> list[int]:
        if n < 0:
            raise ValueError(f"row must be nonnegative, got {n}")
        if n >= len(self._rows):
            self._grow(n)
        return self._rows[n]

    def binom(self, n: int, k: int) -> int:
        if n < 0:
            raise ValueError(f"binom needs a nonnegative upper index, got n={n}")
        if k < 0 or k > n:
            return 0
        return self.row(n)[k]


_table = PascalTable()


def default_table() -> PascalTable:
    return _table


def set_max_row(max_row: int) -> None:
    if max_row < 1:
        raise ValueError("max_row must be positive")
    _table.max_row = max_row


def binom(n: int, k: int) -> int:
    """``C(n,k)`` for ``0 <= k <= n`` and 0 for any other ``k``."""
    return _table.binom(n, k)


def binom_row(n: int) -> list[int]:
    return list(_table.row(n))


@lru_cache(maxsize=4096)
def _fib_nonneg(i: int) -> int:
    a, b = 0, 1
    for _ in range(i):
        a, b = b, a + b
    return a


def fib(i: int) -> int:
    """Fibonacci numbers with ``F_0 = 0``, ``F_1 = 1`` and ``F_{-i} = (-1)^(i+1) F_i``."""
    if i >= 0:
        return _fib_nonneg(i)
    j = -i
    return _fib_nonneg(j) if j % 2 else -_fib_nonneg(j)


def fib_zero_extended(i: int) -> int:
    return _fib_nonneg(i) if i >= 0 else 0


def fib_mirrored(i: int) -> int:
    return _fib_nonneg(abs(i))


FIB_CONVENTIONS = {
    "signed": fib,
    "zero": fib_zero_extended,
    "mirror": fib_mirrored,
}
