"""Frieze patterns in the two-index notation (r, s).

A pattern of order n is fixed by one diagonal f_s = (-1, s), s = 0..n-2, which
starts and ends with 1.  The neighbouring diagonal g_s = (0, s) follows from
the unimodular rule, g_s = (g_{s-1} f_s + 1) / f_{s-1}, and every entry is the
bilinear form

    (r, s) = f_r g_s - g_r f_s,

extended to all integers by f_{s+n} = -f_s and g_{s+n} = -g_s.  All arithmetic
is exact (Fractions).

Grids
-----
A staggered table is held as a rectangular list of rows in which every other
cell is ``None``; row k lists the entries (r, r + k), so row 0 is the top
border of zeros and row 1 the border of ones.  Horizontally adjacent entries of
a row sit two columns apart and consecutive rows are offset by one column,
exactly as in the usual printed layout.
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import NamedTuple, Sequence

from .errors import FriezeError, RelationError

Grid = list[list["int | Fraction | None"]]


def _frac(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return Fraction(value.strip())
    return Fraction(value)


@dataclass(frozen=True)
class FriezePattern:
    order: int
    f_seed: tuple[Fraction, ...]  # f_0 .. f_{n-2}
    g_seed: tuple[Fraction, ...]  # g_0 .. g_n

    def f(self, s: int) -> Fraction:
        """(-1, s) for any integer s."""
        n = self.order
        k, i = divmod(s + 1, n)  # i indexes f_{-1} .. f_{n-2}
        base = Fraction(0) if i == 0 else self.f_seed[i - 1]
        return -base if k % 2 else base

    def g(self, s: int) -> Fraction:
        """(0, s) for any integer s."""
        k, i = divmod(s, self.order)
        base = self.g_seed[i]
        return -base if k % 2 else base

    def __call__(self, r: int, s: int) -> Fraction:
        return self.f(r) * self.g(s) - self.g(r) * self.f(s)

    @property
    def is_integral(self) -> bool:
        return all(v.denominator == 1 for v in self.f_seed + self.g_seed)

    def diagonal(self) -> tuple[Fraction, ...]:
        return tuple(self.f(s) for s in range(self.order - 1))

    def rows(self, r_start: int, count: int) -> list[list[Fraction]]:
        """Rows k = 0..n, each holding (r, r + k) for r_start <= r < r_start + count."""
        return [[self(r, r + k) for r in range(r_start, r_start + count)] for k in range(self.order + 1)]


def build_from_diagonal(
    f_seed: Sequence, order: int | None = None, *, integer: bool = False
) -> FriezePattern:
    """Pattern whose diagonal (-1, 0), ..., (-1, n-2) is ``f_seed``.

    Raises FriezeError when the seed has the wrong shape, when some derived
    entry is not positive, or (with ``integer=True``) when an entry is not an
    integer.
    """
    f = tuple(_frac(v) for v in f_seed)
    n = len(f) + 1
    if order is not None and order != n:
        raise FriezeError(f"a pattern of order {order} needs {order - 1} diagonal values, got {len(f)}")
    if n < 4:
        raise FriezeError(f"order must be at least 4, got {n}")
    if f[0] != 1 or f[-1] != 1:
        raise FriezeError("the diagonal must start and end with 1")
    if any(v <= 0 for v in f):
        raise FriezeError("diagonal entries must be positive")
    g = [Fraction(0), Fraction(1)]
    for s in range(2, n - 1):
        g.append((g[s - 1] * f[s] + 1) / f[s - 1])
    g += [Fraction(1), Fraction(0)]
    pattern = FriezePattern(n, f, tuple(g))
    for r in range(n):
        for s in range(r + 1, r + n):
            if pattern(r, s) <= 0:
                raise FriezeError(f"entry ({r}, {s}) = {pattern(r, s)} is not positive; seed is not realizable")
    if integer and not pattern.is_integral:
        bad = next(s for s, v in enumerate(g) if v.denominator != 1)
        raise FriezeError(f"g_{bad} = {g[bad]} is not an integer")
    return pattern


def entry(pattern: FriezePattern, r: int, s: int) -> Fraction:
    return pattern(r, s)


def quiddity_row(pattern: FriezePattern) -> tuple[Fraction, ...]:
    """a_r = (r - 1, r + 1) for r = 0..n-1; the row repeats with period n."""
    return tuple(pattern(r - 1, r + 1) for r in range(pattern.order))


def continuant(diagonal: Sequence) -> Fraction:
    """Determinant of the tridiagonal matrix with the given diagonal and 1 off the diagonal.

    Three-term recursion K_m = a_m K_{m-1} - K_{m-2}; the empty matrix gives 1.
    """
    prev, cur = Fraction(0), Fraction(1)
    for a in diagonal:
        prev, cur = cur, _frac(a) * cur - prev
    return cur


class CriterionResult(NamedTuple):
    holds: bool
    first_violation: int | None  # index s with f_s not dividing f_{s-1} + f_{s+1}


def check_integer_criterion(f_seed: Sequence[int]) -> CriterionResult:
    """Does every interior f_s divide f_{s-1} + f_{s+1}?

    That is necessary and sufficient for the pattern built from ``f_seed`` to
    consist of integers.
    """
    f = [int(v) for v in f_seed]
    if len(f) < 2 or f[0] != 1 or f[-1] != 1:
        raise FriezeError("the diagonal must start and end with 1")
    for s in range(1, len(f) - 1):
        if f[s] <= 0 or (f[s - 1] + f[s + 1]) % f[s]:
            return CriterionResult(False, s)
    return CriterionResult(True, None)


def is_integer_pattern(pattern: FriezePattern) -> bool:
    n = pattern.order
    return all(pattern(r, s).denominator == 1 for r in range(n) for s in range(r, r + n + 1))


# --------------------------------------------------------------------------
# staggered grids

def pattern_grid(pattern: FriezePattern, columns: int, offset: int = 0) -> Grid:
    """Staggered grid of ``columns`` cells; cell (k, c) holds (r, r+k) when c = 2r + k + offset."""
    rows: Grid = []
    for k in range(pattern.order + 1):
        row: list = []
        for c in range(columns):
            t = c - k - offset
            row.append(pattern(t // 2, t // 2 + k) if t % 2 == 0 else None)
        rows.append(row)
    return rows


def _fmt(v) -> str:
    if isinstance(v, Fraction) and v.denominator == 1:
        return str(v.numerator)
    return str(v)


def render_grid(grid: Grid) -> str:
    """Right-aligned fixed-width text; blank cells become spaces."""
    width = max((len(_fmt(v)) for row in grid for v in row if v is not None), default=1) + 1
    lines = []
    for row in grid:
        line = "".join(" " * width if v is None else _fmt(v).rjust(width) for v in row)
        lines.append(line.rstrip())
    return "\n".join(lines) + "\n"


def render_staggered(pattern: FriezePattern, periods: int = 2) -> str:
    """Text table showing ``periods`` full periods of the pattern."""
    return render_grid(pattern_grid(pattern, 2 * pattern.order * periods + pattern.order))


_NUMBER = re.compile(r"-?\d+(?:/\d+)?")


def parse_staggered(text: str) -> Grid:
    """Read a whitespace-separated staggered table back into a grid.

    Cell positions come from the character column where each number ends
    (right alignment), so any consistent cell width works.  Tokens that are not
    numbers (for example ``...``) are ignored; blank lines are skipped.
    """
    rows = []
    for line in text.splitlines():
        toks = [(m.end(), _frac(m.group())) for m in _NUMBER.finditer(line)]
        if toks:
            rows.append(toks)
    if not rows:
        raise FriezeError("no rows found")
    gaps = [b[0] - a[0] for row in rows for a, b in zip(row, row[1:])]
    if not gaps or min(gaps) < 2:
        raise FriezeError("cannot infer the cell width: rows need at least two entries")
    half = min(gaps) / 2.0
    placed = [[(round(end / half), val) for end, val in row] for row in rows]
    base = min(c for row in placed for c, _ in row)
    ncols = max(c for row in placed for c, _ in row) - base + 1
    grid: Grid = []
    for row in placed:
        out: list = [None] * ncols
        for c, val in row:
            if out[c - base] is not None:
                raise FriezeError("two entries map to the same cell")
            out[c - base] = int(val) if val.denominator == 1 else val
        grid.append(out)
    _check_staggering(grid)
    return grid


def _check_staggering(grid: Grid) -> None:
    if len(grid) < 4:
        raise FriezeError(f"a staggered table needs at least 4 rows, got {len(grid)}")
    width = len(grid[0])
    if any(len(row) != width for row in grid):
        raise FriezeError("grid rows have different lengths")
    parity = []
    for k, row in enumerate(grid):
        cols = {c % 2 for c, v in enumerate(row) if v is not None}
        if len(cols) > 1:
            raise FriezeError(f"row {k} mixes both cell parities")
        parity.append(cols.pop() if cols else None)
    for k in range(1, len(parity)):
        if parity[k] is not None and parity[k - 1] is not None and parity[k] == parity[k - 1]:
            raise FriezeError(f"rows {k - 1} and {k} are not staggered")


@dataclass(frozen=True)
class Violation:
    kind: str  # "border", "nonpositive" or "unimodular"
    row: int
    col: int
    detail: str


@dataclass(frozen=True)
class VerificationReport:
    violations: tuple[Violation, ...]
    rows: int
    columns: int

    @property
    def valid(self) -> bool:
        return not self.violations

    def of_kind(self, kind: str) -> list[Violation]:
        return [v for v in self.violations if v.kind == kind]


def verify_pattern(grid: Grid) -> VerificationReport:
    """Check borders, interior positivity and ad - bc = 1 on every complete diamond.

    A diamond centred at (k, c) has a = (k, c-1), d = (k, c+1), b = (k-1, c)
    above and c = (k+1, c) below.
    """
    _check_staggering(grid)
    K, W = len(grid), len(grid[0])
    found: list[Violation] = []
    for k, want in ((0, 0), (1, 1), (K - 2, 1), (K - 1, 0)):
        for c, v in enumerate(grid[k]):
            if v is not None and v != want:
                found.append(Violation("border", k, c, f"expected {want}, found {v}"))
    for k in range(1, K - 1):
        for c, v in enumerate(grid[k]):
            if v is not None and v <= 0:
                found.append(Violation("nonpositive", k, c, f"entry {v}"))
    for k in range(1, K - 1):
        for c in range(1, W - 1):
            a, d = grid[k][c - 1], grid[k][c + 1]
            b, e = grid[k - 1][c], grid[k + 1][c]
            if None in (a, d, b, e):
                continue
            det = a * d - b * e
            if det != 1:
                found.append(Violation("unimodular", k, c, f"{a}*{d} - {b}*{e} = {det}"))
    return VerificationReport(tuple(found), K, W)


def find_alignment(pattern: FriezePattern, grid: Grid) -> int | None:
    """Column offset under which every grid entry equals the pattern entry, or None.

    Only offsets within one period (2n columns) are tried, which covers every
    horizontal placement.
    """
    if len(grid) != pattern.order + 1:
        return None
    n = pattern.order
    for offset in range(2 * n):
        if all(
            v is None or ((c - k - offset) % 2 == 0 and pattern((c - k - offset) // 2, (c - k - offset) // 2 + k) == v)
            for k, row in enumerate(grid)
            for c, v in enumerate(row)
        ):
            return offset
    return None


# --------------------------------------------------------------------------
# order-5 relations and seed generation

def _equal(a, b, exact: bool) -> bool:
    if exact:
        return a == b
    return abs(a - b) <= 1e-12 * max(1.0, abs(a), abs(b))


def five_cycle_check(u: Sequence) -> bool:
    """Given u1..u5 with u1 u3 = 1 + u2, u2 u4 = 1 + u3, u3 u5 = 1 + u4, is the sequence 5-periodic?

    Extends by u_{r+2} = (1 + u_{r+1}) / u_r and checks u6 = u1 and u7 = u2.
    Also checks the two remaining cyclic relations u4 u1 = 1 + u5 and
    u5 u2 = 1 + u1, which any three of the five imply.  Fractions and ints are
    compared exactly, floats to 1e-12 relative.
    """
    vals = list(u)
    if len(vals) != 5:
        raise RelationError(f"need exactly five values, got {len(vals)}")
    exact = all(isinstance(v, (int, Fraction)) for v in vals)
    if exact:
        vals = [Fraction(v) for v in vals]
    if any(v <= 0 for v in vals):
        raise RelationError("values must be positive")
    u1, u2, u3, u4, u5 = vals
    for i, (lhs, rhs) in enumerate(((u1 * u3, 1 + u2), (u2 * u4, 1 + u3), (u3 * u5, 1 + u4)), start=1):
        if not _equal(lhs, rhs, exact):
            raise RelationError(f"relation {i} fails: {lhs} != {rhs}")
    u6 = (1 + u5) / u4
    u7 = (1 + u6) / u5
    return (
        _equal(u6, u1, exact)
        and _equal(u7, u2, exact)
        and _equal(u4 * u1, 1 + u5, exact)
        and _equal(u5 * u2, 1 + u1, exact)
    )


def _segment(rng: random.Random, max_start: int, max_climb: int, m_spread: int) -> list[int]:
    """1, k, ... built by f_{s+1} = m f_s - f_{s-1} with m > f_{s-1}/f_s, ending at 1.

    A few random climbing steps, then the smallest admissible m, which strictly
    decreases the terms until 1 is reached (consecutive terms are coprime).
    """
    seq = [1, rng.randint(1, max_start)]
    for _ in range(rng.randint(0, max_climb)):
        prev, cur = seq[-2], seq[-1]
        m = prev // cur + 1 + rng.randint(0, m_spread)
        seq.append(m * cur - prev)
    while seq[-1] != 1:
        prev, cur = seq[-2], seq[-1]
        seq.append((prev // cur + 1) * cur - prev)
    return seq


def random_integer_seed(
    rng: random.Random,
    *,
    max_segments: int = 3,
    max_len: int = 24,
    max_start: int = 6,
    max_climb: int = 3,
    m_spread: int = 2,
) -> list[int]:
    """Random diagonal satisfying the divisibility criterion, by juxtaposing segments.

    Retries until the result has between 3 and ``max_len`` terms.
    """
    while True:
        seq: list[int] = []
        for _ in range(rng.randint(1, max_segments)):
            seq += _segment(rng, max_start, max_climb, m_spread)
        if 3 <= len(seq) <= max_len:
            return seq


def neighbours_coprime(pattern: FriezePattern) -> bool:
    """Every interior entry is coprime with its four nearest neighbours (integer patterns)."""
    n = pattern.order
    for r in range(n):
        for s in range(r + 1, r + n):
            v = pattern(r, s)
            for w in (pattern(r - 1, s), pattern(r + 1, s), pattern(r, s - 1), pattern(r, s + 1)):
                if w != 0 and gcd(int(v), int(w)) != 1:
                    return False
    return True
