from fractions import Fraction
from random import Random

import pytest

from atlp.simplex import (
    EQ,
    GE,
    LE,
    LinearProgram,
    UnboundedObjectiveError,
    solve,
)

from lp_oracle import random_program, vertex_optimum


def lp(variables):
    return LinearProgram(variables=list(variables))


def test_bounded_minimum():
    p = lp(["x"])
    p.add({"x": Fraction(1)}, GE, Fraction(1))
    p.add({"x": Fraction(1)}, LE, Fraction(2))
    p.objective = {"x": Fraction(1)}
    s = solve(p)
    assert s.feasible
    assert s.assignment["x"] == 1
    assert s.objective_value == 1


def test_infeasible():
    p = lp(["x"])
    p.add({"x": Fraction(1)}, GE, Fraction(2))
    p.add({"x": Fraction(1)}, LE, Fraction(1))
    p.objective = {"x": Fraction(1)}
    assert not solve(p).feasible


def test_unbounded_objective_raises():
    p = lp(["x"])
    p.objective = {"x": Fraction(-1)}
    with pytest.raises(UnboundedObjectiveError):
        solve(p)


def test_equality_chains_are_presolved():
    p = lp(["a", "b", "c", "d"])
    p.add({"a": Fraction(1)}, EQ, Fraction(3))
    p.add({"b": Fraction(1), "a": Fraction(-1)}, EQ, Fraction(0))
    p.add({"c": Fraction(2), "b": Fraction(-1)}, EQ, Fraction(1))
    p.add({"d": Fraction(1), "c": Fraction(1)}, GE, Fraction(5))
    p.objective = {v: Fraction(1) for v in p.variables}
    s = solve(p)
    assert s.feasible
    assert s.assignment == {
        "a": Fraction(3),
        "b": Fraction(3),
        "c": Fraction(2),
        "d": Fraction(3),
    }


def test_negative_fixed_variable_is_infeasible():
    p = lp(["x", "y"])
    p.add({"x": Fraction(1)}, EQ, Fraction(-1))
    p.add({"y": Fraction(1)}, GE, Fraction(0))
    p.objective = {"x": Fraction(1)}
    assert not solve(p).feasible


def test_two_variable_equality_respects_nonnegativity():
    # y = x - 2 forces x >= 2 even after y is eliminated
    p = lp(["x", "y"])
    p.add({"x": Fraction(1), "y": Fraction(-1)}, EQ, Fraction(2))
    p.objective = {"x": Fraction(1)}
    s = solve(p)
    assert s.feasible
    assert s.assignment == {"x": Fraction(2), "y": Fraction(0)}


def test_feasibility_only_point_satisfies_constraints():
    p = lp(["x", "y"])
    p.add({"x": Fraction(1), "y": Fraction(1)}, GE, Fraction(4))
    p.add({"x": Fraction(1), "y": Fraction(-1)}, LE, Fraction(1))
    p.objective = {"x": Fraction(1), "y": Fraction(1)}
    s = solve(p, optimize=False)
    assert s.feasible
    x, y = s.assignment["x"], s.assignment["y"]
    assert x >= 0 and y >= 0 and x + y >= 4 and x - y <= 1


def test_validate_rejects_undeclared_variables():
    p = lp(["x"])
    p.add({"zz": Fraction(1)}, GE, Fraction(0))
    with pytest.raises(ValueError):
        solve(p)


def test_dump_lists_one_constraint_per_line():
    p = lp(["x", "y"])
    p.add({"x": Fraction(3, 2), "y": Fraction(-1)}, LE, Fraction(5, 4))
    p.objective = {"x": Fraction(1)}
    text = p.dump()
    assert "3/2*x - y <= 5/4" in text
    assert text.startswith("min ")


def test_matches_vertex_enumeration_oracle_on_random_programs():
    rng = Random(20260811)
    agree = 0
    for _ in range(150):
        program = random_program(rng)
        expected_status, expected_value = vertex_optimum(program)
        got = solve(program)
        assert got.status == expected_status, program.dump()
        if got.feasible:
            assert got.objective_value == expected_value, program.dump()
            agree += 1
    assert agree > 20  # the generator produces a healthy feasible mix
