import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import invariant_factors

from braidsplit.linalg import (
    DimensionMismatch,
    Insolvable,
    IntegerMatrix,
    ModulusMismatch,
    Residue,
    ResidueMatrix,
    ResidueVector,
    Solution,
    in_row_space,
    smith_normal_form,
    solve_mod,
    verify_outcome,
)


def rm(rows, q):
    return ResidueMatrix(tuple(map(tuple, rows)), q)


def rv(xs, q):
    return ResidueVector(tuple(xs), q)


# -- residues ---------------------------------------------------------------


def test_residue_canonical():
    r = Residue(-3, 5)
    assert r.value == 2
    assert (r + Residue(4, 5)).value == 1
    assert (r * 3).value == 1
    assert (-r).value == 3


def test_residue_modulus_mismatch():
    with pytest.raises(ModulusMismatch):
        Residue(1, 4) + Residue(1, 6)


def test_vector_and_matrix_mismatches():
    with pytest.raises(ModulusMismatch):
        rv([1, 2], 4) + rv([1, 2], 5)
    with pytest.raises(DimensionMismatch):
        rv([1, 2], 4) + rv([1, 2, 3], 4)
    with pytest.raises(DimensionMismatch):
        rm([[1, 2]], 4) @ rv([1], 4)
    with pytest.raises(DimensionMismatch):
        ResidueMatrix(((1, 2), (3,)), 4)


# -- Smith normal form --------------------------------------------------------


def test_snf_zero():
    d = smith_normal_form(IntegerMatrix(((0,),)))
    assert d.U.tolist() == [[1]] and d.D.tolist() == [[0]] and d.V.tolist() == [[1]]


def test_snf_identity():
    M = IntegerMatrix.identity(3)
    assert smith_normal_form(M).D == M


def test_snf_two_by_two():
    M = IntegerMatrix(((2, 4), (6, 8)))
    d = smith_normal_form(M)
    # d1 = gcd of entries = 2 and d1 * d2 = |det| = 8
    assert d.diagonal == [2, 4]
    assert (d.U @ M @ d.V) == d.D
    assert d.check(M)


def test_snf_rectangular_and_empty_rows():
    M = IntegerMatrix(((0, 0, 0), (0, 6, 4)))
    d = smith_normal_form(M)
    assert d.diagonal == [2, 0]
    assert d.check(M)


def test_det_matches_sympy():
    rows = [[3, -1, 4], [1, 5, -9], [2, 6, 5]]
    assert IntegerMatrix(rows).det() == Matrix(rows).det()


small_matrices = st.integers(1, 5).flatmap(
    lambda r: st.integers(1, 5).flatmap(
        lambda c: st.lists(
            st.lists(st.integers(-10, 10), min_size=c, max_size=c), min_size=r, max_size=r
        )
    )
)


@settings(max_examples=300, deadline=None)
@given(small_matrices)
def test_snf_invariants(rows):
    M = IntegerMatrix(rows)
    d = smith_normal_form(M)
    assert d.U @ M @ d.V == d.D
    assert abs(Matrix(d.U.tolist()).det()) == 1
    assert abs(Matrix(d.V.tolist()).det()) == 1
    assert d.check(M)


@settings(max_examples=150, deadline=None)
@given(small_matrices)
def test_snf_matches_sympy_invariant_factors(rows):
    d = smith_normal_form(IntegerMatrix(rows))
    expected = [abs(int(x)) for x in invariant_factors(Matrix(rows), domain=ZZ)]
    expected += [0] * (min(len(rows), len(rows[0])) - len(expected))
    got = d.diagonal
    assert sorted(x for x in got if x) == sorted(x for x in expected if x)
    assert got.count(0) == expected.count(0)


def test_snf_is_deterministic():
    M = IntegerMatrix(((4, 6, 2), (2, 2, 8), (6, 4, 2)))
    assert smith_normal_form(M) == smith_normal_form(M)


# -- solving mod q -------------------------------------------------------------


def test_solve_example_solvable():
    out = solve_mod(rm([[2]], 4), rv([2], 4))
    assert isinstance(out, Solution)
    assert out.particular == rv([1], 4)
    assert out.kernel_basis == (rv([2], 4),)


def test_solve_example_insolvable():
    M, b = rm([[2]], 4), rv([1], 4)
    # exhaustive: 2x in {0, 2} never equals 1
    assert not any((2 * x - 1) % 4 == 0 for x in range(4))
    out = solve_mod(M, b)
    assert isinstance(out, Insolvable)
    assert out.certificate == rv([2], 4)
    assert verify_outcome(M, b, out)


def test_solve_q1_trivial():
    out = solve_mod(rm([[3, 5], [7, 1]], 1), rv([4, 9], 1))
    assert isinstance(out, Solution)
    assert out.particular == rv([0, 0], 1)


def test_solve_mismatch_errors():
    with pytest.raises(DimensionMismatch):
        solve_mod(rm([[1, 2]], 5), rv([1, 2], 5))
    with pytest.raises(ModulusMismatch):
        solve_mod(rm([[1]], 5), rv([1], 6))


def test_verify_outcome_examples():
    M2 = rm([[2]], 4)
    assert verify_outcome(M2, rv([2], 4), Solution(rv([1], 4), (rv([2], 4),)))
    assert verify_outcome(M2, rv([1], 4), Insolvable(rv([2], 4)))
    assert not verify_outcome(M2, rv([1], 4), Solution(rv([1], 4), ()))
    assert not verify_outcome(M2, rv([2], 4), Solution(rv([1], 4), (rv([1], 4),)))
    assert not verify_outcome(M2, rv([2], 4), Insolvable(rv([1], 4)))


def span(vectors, q, length):
    out = {rv([0] * length, q)}
    for v in vectors:
        frontier = set(out)
        while frontier:
            new = {w + v for w in frontier} - out
            out |= new
            frontier = new
    return out


def exhaustive_solutions(M, b):
    q = M.modulus
    return {
        rv(x, q)
        for x in itertools.product(range(q), repeat=M.cols)
        if M @ rv(x, q) == b
    }


systems = st.integers(1, 8).flatmap(
    lambda q: st.integers(1, 3).flatmap(
        lambda c: st.integers(1, 3).flatmap(
            lambda r: st.tuples(
                st.just(q),
                st.lists(st.lists(st.integers(0, q - 1), min_size=c, max_size=c), min_size=r, max_size=r),
                st.lists(st.integers(0, q - 1), min_size=r, max_size=r),
            )
        )
    )
)


@settings(max_examples=600, deadline=None)
@given(systems)
def test_solve_matches_exhaustive_search(case):
    q, rows, rhs = case
    M, b = rm(rows, q), rv(rhs, q)
    out = solve_mod(M, b)
    brute = exhaustive_solutions(M, b)
    assert verify_outcome(M, b, out)
    assert out.solvable == bool(brute)
    if isinstance(out, Solution):
        found = {out.particular + k for k in span(out.kernel_basis, q, M.cols)}
        assert found == brute


@settings(max_examples=200, deadline=None)
@given(systems)
def test_solvability_is_local(case):
    from braidsplit.crt import crt_split

    q, rows, rhs = case
    M, b = rm(rows, q), rv(rhs, q)
    whole = solve_mod(M, b).solvable
    if q == 1:
        assert whole
        return
    parts = [solve_mod(M.reduce(pe), b.reduce(pe)).solvable for _, _, pe in crt_split(q)]
    assert whole == all(parts)


def test_row_space_membership():
    gens = rm([[1, 1, 0], [0, 1, 1], [0, 0, 2]], 4)
    assert in_row_space(gens, rv([1, 0, 1], 4))
    assert not in_row_space(gens, rv([1, 0, 0], 4))


def test_matrix_products_match_integer_reduction():
    A = [[3, 7], [5, 2], [1, 1]]
    B = [[4, 9, 2], [6, 1, 3]]
    q = 10
    got = rm(A, q) @ rm(B, q)
    want = (IntegerMatrix(A) @ IntegerMatrix(B)).tolist()
    assert got.tolist() == [[x % q for x in row] for row in want]
    assert math.prod([2, 5]) == q
