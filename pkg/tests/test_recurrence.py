from fractions import Fraction
from random import Random

import pytest

from atlp.recurrence import (
    BranchRecurrence,
    DegenerateBoxError,
    ZeroDecrementError,
    combine_weights,
    growth_root,
    growth_root_bracket,
    optimize_weights,
    parse_branches,
    tree_size,
)

TOL = Fraction(1, 10**6)


def float_root_oracle(decrements, precision=1e-12):
    """Independent floating-point bisection on 1 - sum x^-d."""
    lo, hi = 1.0, 2.0
    while sum(hi ** -float(d) for d in decrements) > 1.0:
        hi *= 2
    while hi - lo > precision:
        mid = (lo + hi) / 2
        if sum(mid ** -float(d) for d in decrements) > 1.0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


@pytest.mark.parametrize(
    "decrements,expected",
    [
        ([1, 4], 1.380278),
        ([3, 5], 1.193859),
        # both readings of the weighted toy recurrence: the stated
        # decrements give 5a1+4a2, the displayed root equation 5a1+3a2
        ([Fraction(5, 2), Fraction(13, 2)], 1.180658),
        ([Fraction(5, 2), Fraction(11, 2)], 1.200266),
    ],
)
def test_growth_root_frozen_values(decrements, expected):
    decs = [Fraction(d) for d in decrements]
    root = growth_root(decs, TOL)
    assert abs(float(root) - expected) < 2e-6
    assert abs(float(root) - float_root_oracle(decs)) < 2e-6


def test_growth_root_bracket_is_tight_and_ordered():
    lo, hi = growth_root_bracket([Fraction(1), Fraction(4)], TOL)
    assert lo <= hi
    assert hi - lo <= TOL


def test_two_unit_branches_give_two():
    assert abs(growth_root([Fraction(1), Fraction(1)], TOL) - 2) <= TOL


def test_single_branch_root_is_exactly_one():
    assert growth_root([Fraction(7, 3)], TOL) == 1


def test_growth_root_input_validation():
    with pytest.raises(ValueError):
        growth_root([], TOL)
    with pytest.raises(ValueError):
        growth_root([Fraction(0), Fraction(3)], TOL)
    with pytest.raises(ValueError):
        growth_root([Fraction(1)], Fraction(0))


def test_growth_root_monotonicity():
    base = growth_root([Fraction(1), Fraction(4)], TOL)
    deeper = growth_root([Fraction(2), Fraction(4)], TOL)
    assert deeper < base
    wider = growth_root([Fraction(1), Fraction(4), Fraction(4)], TOL)
    assert wider > base


def test_growth_root_scaling_law():
    base = growth_root([Fraction(1), Fraction(4)], Fraction(1, 10**8))
    scaled = growth_root([Fraction(2), Fraction(8)], TOL)
    # multiplying decrements by 2 maps the root to its square root
    assert abs(float(scaled) - float(base) ** 0.5) < 1e-5


def test_combine_weights_half_weight_example():
    system = parse_branches("3,1;5,4")
    assert combine_weights(system, (Fraction(1, 2), Fraction(1))) == [
        Fraction(5, 2),
        Fraction(13, 2),
    ]


def test_combine_weights_projection_and_zero():
    system = BranchRecurrence(("m", "n"), ((Fraction(1), Fraction(0)), (Fraction(4), Fraction(0))))
    assert combine_weights(system, (Fraction(1), Fraction(0))) == [Fraction(1), Fraction(4)]
    with pytest.raises(ZeroDecrementError):
        combine_weights(system, (Fraction(0), Fraction(1)))
    with pytest.raises(ZeroDecrementError):
        combine_weights(system, (Fraction(0), Fraction(0)))


def test_branch_recurrence_validation():
    with pytest.raises(ValueError):
        BranchRecurrence(("m",), ())
    with pytest.raises(ValueError):
        BranchRecurrence(("m", "n"), ((Fraction(0), Fraction(0)),))
    with pytest.raises(ValueError):
        BranchRecurrence(("m",), ((Fraction(-1),),))
    with pytest.raises(ValueError):
        BranchRecurrence(("m", "n"), ((Fraction(1),),))


def test_optimize_weights_monotone_case_hits_the_box_corner():
    system = parse_branches("3,1;5,4")
    result = optimize_weights(
        [system], [(Fraction(0), Fraction(1)), (Fraction(1), Fraction(1))], Fraction(1, 1000)
    )
    assert result.weights[1] == 1
    assert result.weights[0] == 1  # larger decrements always shrink the root
    expected = growth_root(combine_weights(system, result.weights), Fraction(1, 8000))
    assert abs(result.objective - expected) <= Fraction(1, 1000)
    assert result.converged


def test_optimize_weights_symmetric_pair_balances():
    systems = [parse_branches("1,0;0,3"), parse_branches("0,1;3,0")]
    box = [(Fraction(0), Fraction(1)), (Fraction(0), Fraction(1))]
    result = optimize_weights(systems, box, Fraction(1, 1000), fixed_sum=Fraction(1))
    assert result.weights == (Fraction(1, 2), Fraction(1, 2))
    assert sum(result.weights) == 1


def test_optimize_weights_objective_matches_recomputation():
    systems = [parse_branches("2,1;1,3"), parse_branches("1,1;4,2")]
    box = [(Fraction(1, 4), Fraction(2)), (Fraction(1, 4), Fraction(2))]
    result = optimize_weights(systems, box, Fraction(1, 100))
    recomputed = max(
        growth_root(combine_weights(s, result.weights), Fraction(1, 800)) for s in systems
    )
    assert abs(result.objective - recomputed) <= Fraction(1, 100)
    for w, (lo, hi) in zip(result.weights, box):
        assert lo <= w <= hi


def test_optimize_weights_invariant_under_system_permutation():
    systems = [parse_branches("2,1;1,3"), parse_branches("1,1;4,2")]
    box = [(Fraction(1, 4), Fraction(2)), (Fraction(1, 4), Fraction(2))]
    forward = optimize_weights(systems, box, Fraction(1, 100))
    backward = optimize_weights(list(reversed(systems)), box, Fraction(1, 100))
    assert forward.objective == backward.objective
    assert forward.weights == backward.weights


def test_optimize_weights_degenerate_box():
    system = parse_branches("1,0;0,3")
    with pytest.raises(DegenerateBoxError):
        optimize_weights([system], [(Fraction(0), Fraction(0)), (Fraction(0), Fraction(0))], Fraction(1, 100))


def test_tree_size_examples():
    assert tree_size([1, 4], 10) == 71
    assert tree_size([1], 5) == 6
    assert tree_size([1, 1], 3) == 15
    assert tree_size([1, 4], 0) == 1


def test_tree_size_validation():
    with pytest.raises(ValueError):
        tree_size([], 3)
    with pytest.raises(ValueError):
        tree_size([0, 2], 3)
    with pytest.raises(ValueError):
        tree_size([1], -1)


def test_tree_size_growth_tracks_the_root():
    # the envelope constant is pinned at budget 10, so the tolerance
    # padding must absorb the slow drift of tree_size / root^k
    tol = Fraction(1, 1000)
    decrements = [1, 4]
    root = growth_root([Fraction(d) for d in decrements], tol)
    anchor = 10
    constant = Fraction(tree_size(decrements, anchor)) / (root - tol) ** anchor
    for budget in range(11, 31):
        assert tree_size(decrements, budget) <= constant * (root + tol) ** budget


def test_tree_size_growth_rate_per_level_approaches_the_root():
    root = growth_root([Fraction(1), Fraction(4)], Fraction(1, 1000))
    nodes = tree_size([1, 4], 30)
    # tree_size(30)^(1/30) within 5% of the root, compared exactly
    five_percent = Fraction(5, 100)
    assert nodes <= ((1 + five_percent) * root) ** 30
    assert nodes >= ((1 - five_percent) * root) ** 30


def test_parse_branches_roundtrip():
    system = parse_branches("3,1;5,4")
    assert system.measures == ("m1", "m2")
    assert system.branches == ((Fraction(3), Fraction(1)), (Fraction(5), Fraction(4)))


def test_growth_root_matches_float_oracle_on_random_decrements():
    rng = Random(4)
    for _ in range(30):
        decs = [
            Fraction(rng.randint(1, 12), rng.choice([1, 1, 2, 4]))
            for _ in range(rng.randint(2, 4))
        ]
        root = growth_root(decs, TOL)
        assert abs(float(root) - float_root_oracle(decs)) < 1e-5
