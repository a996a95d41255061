from fractions import Fraction

import pytest

from atlp.annotation import AnnotationError, validate, neighbors
from atlp.prover import (
    AnchorInfeasibleError,
    CONJECTURE_CEILING,
    best_exponent,
    bisect_exponent,
    exhaustive_search,
    heuristic_search,
)
from atlp.verifier import verify

TOL = Fraction(1, 10**4)


def test_sqrt2_for_the_three_line_proof():
    c, cert = best_exponent("DSD", TOL)
    assert Fraction(14141, 10000) <= c <= Fraction(14143, 10000)
    assert verify(cert).accepted
    assert cert.c == c


def test_seven_line_optimum_matches_the_algebraic_threshold():
    c, cert = best_exponent("DSSDDSD", TOL)
    # threshold is sqrt((1 + sqrt(17)) / 2) = 1.6004852...
    assert Fraction(16003, 10000) <= c <= Fraction(16005, 10000)
    assert verify(cert).accepted


def test_bracket_width_and_orientation():
    lo, hi, cert = bisect_exponent("DSDD", TOL, Fraction(1, 1000))
    assert 1 <= lo < hi <= 2
    assert hi - lo <= TOL
    assert verify(cert).accepted
    assert cert.c == lo


def test_invalid_annotation_propagates():
    with pytest.raises(AnnotationError):
        best_exponent("DD", TOL)


def test_tolerance_bounds_are_enforced():
    with pytest.raises(ValueError):
        best_exponent("DSD", Fraction(1, 10))
    with pytest.raises(ValueError):
        best_exponent("DSD", Fraction(0))


def test_bare_anchor_has_no_provable_bound():
    with pytest.raises(AnchorInfeasibleError):
        best_exponent("D", TOL)


def test_eps_invariance_of_best_exponent():
    values = [
        best_exponent("DSSDDSD", TOL, eps=eps)[0]
        for eps in (Fraction(1, 10), Fraction(1, 1000), Fraction(1, 10**6))
    ]
    assert max(values) - min(values) <= TOL


def test_exhaustive_table_best_per_length():
    table = exhaustive_search(7, TOL)
    by_lines = {r.lines: r for r in table}
    assert sorted(by_lines) == [3, 4, 5, 6, 7]
    assert by_lines[3].annotation.tags == "DSD"
    assert by_lines[7].annotation.tags == "DSSDDSD"
    assert Fraction(16003, 10000) <= by_lines[7].best_c <= Fraction(16005, 10000)
    # chart monotonicity holds cumulatively, not pointwise (length 4 dips)
    running = Fraction(0)
    for lines in sorted(by_lines):
        running = max(running, by_lines[lines].best_c)
        assert running >= by_lines[lines].best_c
    assert by_lines[4].best_c < by_lines[3].best_c
    for record in table:
        assert record.lines == len(record.annotation)
        assert verify(record.certificate).accepted
        assert record.best_c < CONJECTURE_CEILING


def test_exhaustive_rejects_tiny_max_lines():
    with pytest.raises(ValueError):
        exhaustive_search(2, TOL)


def test_parallel_and_serial_tables_agree():
    serial = exhaustive_search(6, TOL, workers=1)
    parallel = exhaustive_search(6, TOL, workers=2)
    assert serial == parallel


def test_heuristic_budget_one_runs_a_single_batch():
    seeds = exhaustive_search(5, TOL)
    top = max(seeds, key=lambda r: r.best_c)
    result = heuristic_search(seeds, 1, TOL)
    allowed = {r.annotation.tags for r in seeds} | {
        a.tags for a in neighbors(top.annotation)
    }
    assert {r.annotation.tags for r in result} <= allowed


def test_heuristic_improves_on_seeds_and_never_loses_them():
    seeds = exhaustive_search(5, TOL)
    result = heuristic_search(seeds, 40, TOL, workers=2)
    seed_best = max(r.best_c for r in seeds)
    assert max(r.best_c for r in result) >= seed_best
    by_lines = {r.lines: r for r in result}
    for seed in seeds:
        assert by_lines[seed.lines].best_c >= seed.best_c
    for record in result:
        assert verify(record.certificate).accepted
        assert record.best_c < CONJECTURE_CEILING


def test_heuristic_validates_arguments():
    seeds = exhaustive_search(4, TOL)
    with pytest.raises(ValueError):
        heuristic_search(seeds, 0, TOL)
    with pytest.raises(ValueError):
        heuristic_search([], 5, TOL)


def test_heuristic_is_deterministic():
    seeds = exhaustive_search(5, TOL)
    a = heuristic_search(seeds, 25, TOL, workers=1)
    b = heuristic_search(seeds, 25, TOL, workers=2)
    assert a == b
