from fractions import Fraction
from random import Random

import pytest

from atlp.annotation import enumerate_annotations
from atlp.lp import build_lp, extract_certificate
from atlp.simplex import GE, LE, satisfies, solve
from atlp.verifier import verify

from conftest import C85

EPS = Fraction(1, 1000)


def test_dsd_program_has_the_twelve_schema_variables():
    program = build_lp("DSD", C85, EPS)
    assert program.variables == [
        "a0",
        "d1",
        "d2",
        "g2_1",
        "f2_1",
        "g2_2",
        "f2_2",
        "x2",
        "d3",
        "g3_1",
        "f3_1",
        "nu",
    ]


@pytest.mark.parametrize("tags", ["DSD", "DSSDD", "DSSDDSD", "DSDDSD"])
@pytest.mark.parametrize("c", [Fraction(1), Fraction(7, 5), Fraction(2)])
def test_schema_always_contains_anchor_and_contradiction(tags, c):
    program = build_lp(tags, c, EPS)
    rows = [(con.coeffs, con.relation, con.rhs) for con in program.constraints]
    assert ({"d1": Fraction(1), "a0": -c}, GE, Fraction(0)) in rows
    assert ({"nu": Fraction(1), "a0": Fraction(-1)}, LE, -EPS) in rows


def test_objective_is_the_sum_of_all_variables():
    program = build_lp("DSSDDSD", C85, EPS)
    assert program.objective == {v: Fraction(1) for v in program.variables}


def test_build_lp_rejects_bad_parameters():
    with pytest.raises(ValueError):
        build_lp("DSD", Fraction(1, 2), EPS)
    with pytest.raises(ValueError):
        build_lp("DSD", C85, Fraction(0))


def test_sqrt2_threshold_bracketed_for_dsd():
    assert solve(build_lp("DSD", Fraction(141, 100), EPS)).feasible
    assert not solve(build_lp("DSD", Fraction(142, 100), EPS)).feasible


def test_seven_line_program_feasible_at_8_5_with_the_known_closing_exponent():
    solution = solve(build_lp("DSSDDSD", C85, EPS))
    assert solution.feasible
    asg = solution.assignment
    assert asg["nu"] == Fraction(256, 125)
    assert asg["a0"] == Fraction(256, 125) + EPS
    assert asg["d1"] == C85 * asg["a0"]
    cert = extract_certificate("DSSDDSD", C85, EPS, solution)
    assert cert.final_ntime_exp == Fraction(256, 125)
    assert verify(cert).accepted


def test_extract_certificate_requires_feasible_solution():
    infeasible = solve(build_lp("DSD", Fraction(142, 100), EPS))
    with pytest.raises(ValueError):
        extract_certificate("DSD", Fraction(142, 100), EPS, infeasible)


def test_certificate_at_c_one_is_trivially_valid():
    solution = solve(build_lp("DSD", Fraction(1), EPS))
    assert solution.feasible
    cert = extract_certificate("DSD", Fraction(1), EPS, solution)
    assert verify(cert).accepted


@pytest.mark.parametrize("length", [3, 4, 5, 6, 7])
def test_round_trip_extract_then_verify(length):
    for annotation in enumerate_annotations(length):
        solution = solve(build_lp(annotation, Fraction(6, 5), EPS))
        if not solution.feasible:
            continue
        cert = extract_certificate(annotation, Fraction(6, 5), EPS, solution)
        assert verify(cert).accepted, annotation


def test_downward_closure_in_c():
    rng = Random(88)
    checked = 0
    annotations = [a for L in range(3, 8) for a in enumerate_annotations(L)]
    while checked < 25:
        annotation = rng.choice(annotations)
        c = Fraction(1) + Fraction(rng.randint(5, 40), 100)
        program = build_lp(annotation, c, EPS)
        solution = solve(program)
        if not solution.feasible:
            continue
        # feasible points satisfy their own program exactly, no slop
        assert satisfies(program, solution.assignment)
        weaker = build_lp(annotation, c - Fraction(1, 20), EPS)
        assert satisfies(weaker, solution.assignment), (annotation, c)
        checked += 1


def test_kernel_dominance_of_feasible_assignments():
    # replaying the annotation with the assignment's x values never
    # exceeds the assignment's recorded exponents
    from atlp import kernel

    for tags, c in [("DSSDDSD", C85), ("DSDSD", Fraction(3, 2)), ("DSD", Fraction(7, 5))]:
        solution = solve(build_lp(tags, c, EPS))
        assert solution.feasible
        cert = extract_certificate(tags, c, EPS, solution)
        line = kernel.anchor_slowdown(cert.a0, c)
        assert line.dts_exp <= cert.steps[0].result.dts_exp
        for step in cert.steps[1:]:
            if step.rule == kernel.SPEEDUP:
                line = kernel.apply_speedup(line, step.x)
            else:
                line = kernel.apply_slowdown(line, c)
            recorded = step.result
            assert line.dts_exp <= recorded.dts_exp
            assert len(line.blocks) == len(recorded.blocks)
            for mine, theirs in zip(line.blocks, recorded.blocks):
                assert mine.guess_exp <= theirs.guess_exp
                assert mine.feed_exp <= theirs.feed_exp
