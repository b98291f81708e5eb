from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from oracles import lp_vertices_min
from puebounds.simplex import LpProblem, solve_lp, to_lp_format


def test_single_bound():
    sol = solve_lp(LpProblem(c=[1], A_ge=[[1]], b_ge=[3]))
    assert sol.status == "optimal" and sol.certified
    assert sol.exact_value == 3 and sol.exact_dual_ge == [1]


def test_infeasible():
    assert solve_lp(LpProblem(c=[1], A_eq=[[1]], b_eq=[-1])).status == "infeasible"
    assert solve_lp(LpProblem(c=[1, 1], A_ge=[[1, 1], [-1, -1]], b_ge=[2, -1])).status == "infeasible"


def test_unbounded():
    assert solve_lp(LpProblem(c=[-1], A_ge=[[1]], b_ge=[3])).status == "unbounded"


def test_mixed_rows():
    sol = solve_lp(LpProblem(c=[1, 2], A_eq=[[1, 1]], b_eq=[4], A_ge=[[1, -1]], b_ge=[-2]))
    assert sol.exact_value == 4 and sol.exact_point == [4, 0]


def test_redundant_equalities():
    prob = LpProblem(c=[1, 1, 0], A_eq=[[1, 1, 1], [2, 2, 2]], b_eq=[3, 6], A_ge=[[1, 0, 0]], b_ge=[1])
    sol = solve_lp(prob)
    assert sol.status == "optimal" and sol.exact_value == 1


def test_degenerate_cycling_example():
    # Beale's example, which cycles under naive Dantzig pricing
    c = [Fraction(-3, 4), 150, Fraction(-1, 50), 6]
    A = [[Fraction(1, 4), -60, Fraction(-1, 25), 9], [Fraction(1, 2), -90, Fraction(-1, 50), 3], [0, 0, 1, 0]]
    b = [0, 0, 1]
    prob = LpProblem(c=c, A_ge=[[-v for v in r] for r in A], b_ge=[-v for v in b])
    sol = solve_lp(prob)
    assert sol.status == "optimal"
    assert sol.value == pytest.approx(-0.05)


def test_duals_certify_optimum():
    prob = LpProblem(c=[2, 3, 1], A_eq=[[1, 1, 1]], b_eq=[5], A_ge=[[1, 2, 0], [0, 1, 3]], b_ge=[2, 4])
    sol = solve_lp(prob)
    dual_obj = sum(y * b for y, b in zip(sol.exact_dual_eq, prob.b_eq)) + sum(
        y * b for y, b in zip(sol.exact_dual_ge, prob.b_ge))
    assert dual_obj == sol.exact_value
    assert all(y >= 0 for y in sol.exact_dual_ge)


small = st.integers(-4, 4)


@given(
    st.lists(small, min_size=3, max_size=3),
    st.lists(st.lists(small, min_size=3, max_size=3), min_size=1, max_size=3),
    st.lists(small, min_size=3, max_size=3),
    st.booleans(),
)
@settings(max_examples=120, deadline=None)
def test_matches_vertex_enumeration(c, rows, rhs, with_eq):
    rhs = rhs[: len(rows)]
    assume(len(rhs) == len(rows))
    # box keeps every instance bounded
    A_ge = rows + [[-1, 0, 0], [0, -1, 0], [0, 0, -1]]
    b_ge = rhs + [-6, -6, -6]
    A_eq, b_eq = ([[1, 1, 1]], [3]) if with_eq else ([], [])
    want = lp_vertices_min(c, A_eq, b_eq, A_ge, b_ge)
    sol = solve_lp(LpProblem(c=c, A_eq=A_eq, b_eq=b_eq, A_ge=A_ge, b_ge=b_ge))
    if want is None:
        assert sol.status == "infeasible"
    else:
        assert sol.status == "optimal"
        assert sol.value == pytest.approx(float(want), abs=1e-9)
        if sol.certified:
            assert sol.exact_value == want


def test_max_violation():
    prob = LpProblem(c=[1], A_ge=[[1]], b_ge=[3])
    assert prob.max_violation([3.0]) == 0.0
    assert prob.max_violation([2.0]) > 0


def test_shape_errors():
    with pytest.raises(ValueError):
        LpProblem(c=[1, 2], A_ge=[[1]], b_ge=[1])
    with pytest.raises(ValueError):
        LpProblem(c=[1], A_ge=[[1]], b_ge=[])


def test_lp_format():
    prob = LpProblem(c=[1, -2], A_eq=[[1, 1]], b_eq=[4], A_ge=[[1, -1]], b_ge=[-2],
                     col_names=["a", "b"], row_names=["sum", "diff"])
    text = to_lp_format(prob, "toy")
    lines = text.splitlines()
    assert lines[1] == "Minimize" and lines[-1] == "End"
    assert " obj: 1.0 a - 2.0 b" in lines
    assert " sum: 1.0 a + 1.0 b = 4.0" in lines
    assert " diff: 1.0 a - 1.0 b >= -2.0" in lines
    assert " a >= 0" in lines
