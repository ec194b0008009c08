import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lyness import FriezeError, RelationError
from lyness.frieze import (
    build_from_diagonal,
    check_integer_criterion,
    continuant,
    find_alignment,
    five_cycle_check,
    is_integer_pattern,
    neighbours_coprime,
    parse_staggered,
    pattern_grid,
    quiddity_row,
    random_integer_seed,
    render_staggered,
    verify_pattern,
)

FIRST_TABLE_DIAGONAL = [1, 1, 1, 1, 2, 1]
SECOND_TABLE_DIAGONAL = [1, 2, 5, 3, 1, 2, 3, 4, 1]


def test_reference_tables_are_valid(frieze_tables):
    for grid in frieze_tables:
        assert verify_pattern(grid).valid


def test_first_table_from_its_diagonal(frieze_tables):
    pattern = build_from_diagonal(FIRST_TABLE_DIAGONAL, order=7, integer=True)
    assert find_alignment(pattern, frieze_tables[0]) is not None
    assert quiddity_row(pattern) == (1, 2, 2, 3, 1, 2, 4)


def test_second_table_from_its_diagonal(frieze_tables):
    pattern = build_from_diagonal(SECOND_TABLE_DIAGONAL, order=10, integer=True)
    assert find_alignment(pattern, frieze_tables[1]) is not None


@pytest.mark.parametrize("diag", [FIRST_TABLE_DIAGONAL, SECOND_TABLE_DIAGONAL, [1, 1, 2, 3, 1, 1]])
def test_symmetries(diag):
    p = build_from_diagonal(diag)
    n = p.order
    for r in range(-n, 2 * n):
        for s in range(-n, 2 * n):
            assert p(r, s) == -p(s, r)
            assert p(r + n, s + n) == p(r, s)
            assert p(r, s) == p(s, r + n)  # glide reflection
        assert p(r, r) == 0 and p(r, r + 1) == 1 and p(r, r + n - 1) == 1 and p(r, r + n) == 0


@pytest.mark.parametrize("diag", [FIRST_TABLE_DIAGONAL, SECOND_TABLE_DIAGONAL, [1, 3, 2, 1]])
def test_entries_are_continuants_of_the_quiddity_row(diag):
    p = build_from_diagonal(diag)
    n = p.order
    a = quiddity_row(p)
    for r in range(n):
        for s in range(r + 2, r + n):
            sub = [a[(m) % n] for m in range(r + 1, s)]
            assert p(r, s) == continuant(sub)
            # independent oracle: determinant of the tridiagonal matrix
            m = len(sub)
            M = np.diag([float(x) for x in sub]) + np.diag([1.0] * (m - 1), 1) + np.diag([1.0] * (m - 1), -1)
            assert round(np.linalg.det(M)) == p(r, s)


def test_continuant_recursion_small_cases():
    assert continuant([]) == 1
    assert continuant([5]) == 5
    assert continuant([2, 3]) == 5
    assert continuant([Fraction(1, 2), 4]) == 1


def test_unimodular_rule_everywhere():
    p = build_from_diagonal(SECOND_TABLE_DIAGONAL)
    for r in range(-5, 15):
        for s in range(-5, 15):
            assert p(r, s) * p(r + 1, s + 1) - p(r + 1, s) * p(r, s + 1) == 1


def test_integer_criterion_examples():
    assert check_integer_criterion(SECOND_TABLE_DIAGONAL).holds
    res = check_integer_criterion([1, 3, 1])
    assert not res.holds and res.first_violation == 1
    pattern = build_from_diagonal([1, 3, 1])
    assert not pattern.is_integral and not is_integer_pattern(pattern)
    with pytest.raises(FriezeError):
        build_from_diagonal([1, 3, 1], integer=True)


def test_generated_seeds_give_integer_patterns():
    rng = random.Random(20240101)
    for _ in range(50):
        seed = random_integer_seed(rng)
        assert check_integer_criterion(seed).holds
        p = build_from_diagonal(seed, integer=True)
        assert is_integer_pattern(p)
        assert neighbours_coprime(p)


@given(st.lists(st.integers(1, 9), min_size=1, max_size=8))
@settings(max_examples=200)
def test_criterion_decides_integrality(inner):
    seed = [1, *inner, 1]
    try:
        p = build_from_diagonal(seed)
    except FriezeError:
        return  # some entry is not positive: no pattern at all
    assert is_integer_pattern(p) == check_integer_criterion(seed).holds


def test_all_ones_diagonal_is_always_valid():
    for length in range(3, 12):
        p = build_from_diagonal([1] * length, integer=True)
        assert [p.g(s) for s in range(length + 2)] == list(range(length)) + [1, 0]


@pytest.mark.parametrize("bad", [[1, 2], [2, 1, 1], [1, 0, 1], [1, -2, 1]])
def test_build_rejects(bad):
    with pytest.raises(FriezeError):
        build_from_diagonal(bad)


def test_order_mismatch():
    with pytest.raises(FriezeError):
        build_from_diagonal([1, 1, 2, 3, 1, 1], order=8)


def test_render_parse_roundtrip():
    p = build_from_diagonal(SECOND_TABLE_DIAGONAL)
    text = render_staggered(p, periods=2)
    grid = parse_staggered(text)
    assert verify_pattern(grid).valid
    assert find_alignment(p, grid) is not None
    # a different spacing parses the same way
    wide = "\n".join("".join(" " * 6 if v is None else str(v).rjust(6) for v in row) for row in pattern_grid(p, 30))
    assert find_alignment(p, parse_staggered(wide)) is not None


def test_verify_flags_a_broken_entry(frieze_tables):
    grid = [row[:] for row in frieze_tables[0]]
    k = 3
    c = next(i for i, v in enumerate(grid[k]) if v is not None and 2 < i < len(grid[k]) - 3)
    grid[k][c] += 1
    report = verify_pattern(grid)
    assert not report.valid
    assert report.of_kind("unimodular")
    grid = [row[:] for row in frieze_tables[0]]
    grid[0][0] = 5
    assert verify_pattern(grid).of_kind("border")


def test_parse_rejects_garbage():
    with pytest.raises(FriezeError):
        parse_staggered("hello\n")
    with pytest.raises(FriezeError):
        parse_staggered("0 0 0\n1 1 1\n")


@given(st.fractions(min_value=Fraction(1, 20), max_value=20, max_denominator=20).filter(lambda q: q > 0),
       st.fractions(min_value=Fraction(1, 20), max_value=20, max_denominator=20).filter(lambda q: q > 0))
def test_five_term_relations_close_up(x, y):
    u = [x, y]
    for _ in range(3):
        u.append((1 + u[-1]) / u[-2])
    assert five_cycle_check(u)


def test_order_five_zigzag():
    # the two interior rows of an order-5 pattern, read in zigzag, satisfy the relations
    p = build_from_diagonal([1, Fraction(3, 2), Fraction(7, 3), 1])
    zig = []
    for j in range(3):
        zig += [p(j, j + 2), p(j, j + 3)]
    assert five_cycle_check(zig[:5])
    assert five_cycle_check([float(v) for v in zig[1:6]])


def test_relation_errors():
    with pytest.raises(RelationError):
        five_cycle_check([1, 2, 3])
    with pytest.raises(RelationError):
        five_cycle_check([1, 1, 1, 1, 1])


def test_negative_borders_and_plucker():
    p = build_from_diagonal(SECOND_TABLE_DIAGONAL)
    n = p.order
    for r in range(-n, 2 * n):
        assert p(r, r - 1) == -1
        assert p(r - 1, r + n) == -1
    rng = random.Random(5)
    for _ in range(1000):
        r, s, t, u = (rng.randint(-20, 20) for _ in range(4))
        assert p(r, s) * p(t, u) + p(r, t) * p(u, s) + p(r, u) * p(s, t) == 0


def test_quiddity_properties(frieze_tables):
    p = build_from_diagonal(FIRST_TABLE_DIAGONAL)
    a = quiddity_row(p)
    n = p.order
    # third table row (k = 2), read left to right, is a cyclic shift of a
    row = [v for v in frieze_tables[0][2] if v is not None][:n]
    assert any(tuple(row) == a[i:] + a[:i] for i in range(n))
    for r in range(n):
        assert p(r - 1 + n, r + 1 + n) == p(r - 1, r + 1)
        window = [a[(r + i) % n] for i in range(n - 2)]
        assert continuant(window) == 1
    assert continuant([2, 2, 2]) == 4


def test_diagonal_round_trip():
    for diag in (FIRST_TABLE_DIAGONAL, SECOND_TABLE_DIAGONAL, [1, Fraction(5, 2), Fraction(7, 3), 1]):
        assert list(build_from_diagonal(diag).diagonal()) == [Fraction(v) for v in diag]


def test_divisibility_examples():
    assert check_integer_criterion([1, 2, 5, 3, 1]).holds
    assert check_integer_criterion([1, 2, 3, 4, 1]).holds
    assert not check_integer_criterion([1, 3, 1]).holds


def test_incremented_entry_flags_exactly_its_diamonds(frieze_tables):
    grid = [row[:] for row in frieze_tables[0]]
    k, c = 3, 9
    assert grid[k][c] is not None
    grid[k][c] += 1
    flagged = {(v.row, v.col) for v in verify_pattern(grid).of_kind("unimodular")}
    assert flagged == {(k, c - 1), (k, c + 1), (k - 1, c), (k + 1, c)}


def test_five_cycle_examples():
    assert five_cycle_check([1, 1, 2, 3, 2])
    x, y = Fraction(2, 3), Fraction(9, 4)
    assert five_cycle_check([x, y, (1 + y) / x, (1 + x + y) / (x * y), (1 + x) / y])
    u = [Fraction(3), Fraction(3)]
    for _ in range(3):
        u.append((1 + u[-1]) / u[-2])
    assert five_cycle_check(u)
