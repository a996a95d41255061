"""Growth-root analysis of branching recurrences and weight optimization.

A backtracking algorithm whose recursion removes d_1, ..., d_k units of
some measure per branch obeys T(k) <= sum_i T(k - d_i) + poly, so
T(k) = O(x*^k) where x* >= 1 is the unique root of sum_i x^(-d_i) = 1.
Multivariate recurrences are reduced to this case by combining measures
with nonnegative weights, k = <alpha, measures>, and the weights are
tuned by coordinate descent with a one-dimensional ternary search per
coordinate (the objective is assumed quasiconvex in each coordinate; a
convergence flag and a final perturbation check guard against false
convergence).

No floating point anywhere: roots are rational bisection brackets of
width <= tol, found by bisection on [1, 1 + k] with k doubled until the
sign changes.  The sign of sum_i x^(-d_i) - 1 at rational x is decided
exactly: integer decrements by plain rational powering, fractional ones
by enclosing each q-th root between scaled integer roots and refining
the precision until the enclosure decides the comparison.  Weight-search
probes are kept on denominator-bounded grids so these root extractions
stay cheap.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

try:  # pragma: no cover - exercised implicitly on hosts with gmpy2
    from gmpy2 import iroot as _giroot

    def _iroot(n: int, k: int) -> tuple[int, bool]:
        root, exact = _giroot(n, k)
        return int(root), bool(exact)

except ImportError:  # pragma: no cover

    def _iroot(n: int, k: int) -> tuple[int, bool]:
        if n < 0 or k < 1:
            raise ValueError("iroot needs n >= 0, k >= 1")
        if n < 2 or k == 1:
            return n, True
        r = 1 << -(-n.bit_length() // k)
        while True:
            candidate = ((k - 1) * r + n // r ** (k - 1)) // k
            if candidate >= r:
                break
            r = candidate
        return r, r**k == n


ZERO = Fraction(0)
ONE = Fraction(1)


class ZeroDecrementError(ValueError):
    """A branch loses nothing under the given weights; the bound degenerates."""


class DegenerateBoxError(ValueError):
    """The search box contains no usable weight vector."""


@dataclass(frozen=True)
class BranchRecurrence:
    """Decrement vectors of a branching recursion over named measures."""

    measures: tuple[str, ...]
    branches: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if not self.branches:
            raise ValueError("recurrence needs at least one branch")
        for branch in self.branches:
            if len(branch) != len(self.measures):
                raise ValueError("branch dimension does not match the measures")
            if any(d < 0 for d in branch):
                raise ValueError(f"negative decrement in branch {branch}")
            if all(d == 0 for d in branch):
                raise ValueError("zero branch vector")


def parse_branches(text: str, measures: tuple[str, ...] | None = None) -> BranchRecurrence:
    """Parse the text form "3,1;5,4": branches split by ';', coords by ','."""
    branches = []
    for part in text.split(";"):
        coords = tuple(Fraction(c.strip()) for c in part.split(","))
        branches.append(coords)
    dim = len(branches[0])
    if measures is None:
        measures = tuple(f"m{i + 1}" for i in range(dim))
    return BranchRecurrence(measures=measures, branches=tuple(branches))


def _sum_sign(x: Fraction, decrements: list[Fraction]) -> int:
    """Exact sign of sum_i x^(-d_i) - 1 for rational x > 1.

    Writes each term as t^n * (t^c)^(1/q) with t = 1/x, integer part n
    and remainder exponent c/q in lowest terms, then encloses the q-th
    roots between consecutive scaled integer roots.  The enclosure is
    refined until it decides the sign; terms whose root happens to be
    rational are folded in exactly, so comparisons like 2/x = 1 at x = 2
    terminate immediately.
    """
    t = ONE / x
    exact_total = -ONE  # running exact part of (sum - 1)
    rooted: list[tuple[Fraction, int, int, int]] = []  # (multiplier, B, A, q)
    for d in decrements:
        n, rem = divmod(d, 1)
        multiplier = t ** int(n)
        if rem == 0:
            exact_total += multiplier
            continue
        q = rem.denominator
        c = rem.numerator
        g = gcd(c, q)
        c, q = c // g, q // g
        radicand = t**c
        broot, bexact = _iroot(radicand.numerator, q)
        aroot, aexact = _iroot(radicand.denominator, q)
        if bexact and aexact:
            exact_total += multiplier * Fraction(broot, aroot)
            continue
        rooted.append((multiplier, radicand.numerator, radicand.denominator, q))

    if not rooted:
        return -1 if exact_total < 0 else (1 if exact_total > 0 else 0)

    prec = 64
    while True:
        scale = 1 << prec
        low = exact_total
        high = exact_total
        for multiplier, b, a, q in rooted:
            # (b/a)^(1/q) in [r/scale, (r+1)/scale]
            r, _ = _iroot((b * scale**q) // a, q)
            low += multiplier * Fraction(r, scale)
            high += multiplier * Fraction(r + 1, scale)
        if high < 0:
            return -1
        if low > 0:
            return 1
        prec *= 2
        if prec > 1 << 14:
            raise RuntimeError(
                f"sum of radicals is numerically indistinguishable from 1 at x = {x}"
            )


def growth_root_bracket(
    decrements: list[Fraction] | tuple[Fraction, ...],
    tol: Fraction,
) -> tuple[Fraction, Fraction]:
    """Rational bracket [lo, hi] of width <= tol around the growth root.

    The root is the unique x >= 1 with sum_i x^(-d_i) = 1; it equals 1
    exactly for a single branch and exceeds 1 otherwise.
    """
    decrements = [Fraction(d) for d in decrements]
    if not decrements:
        raise ValueError("need at least one decrement")
    if any(d <= 0 for d in decrements):
        raise ValueError(f"decrements must be positive, got {decrements}")
    if tol <= 0:
        raise ValueError(f"tol must be > 0, got {tol}")
    if len(decrements) == 1:
        return ONE, ONE

    lo = ONE
    span = 1
    hi = Fraction(2)
    while _sum_sign(hi, decrements) > 0:
        lo = hi
        span *= 2
        hi = ONE + span
    while hi - lo > tol:
        mid = (lo + hi) / 2
        sign = _sum_sign(mid, decrements)
        if sign > 0:
            lo = mid
        elif sign < 0:
            hi = mid
        else:
            return mid, mid
    return lo, hi


def growth_root(
    decrements: list[Fraction] | tuple[Fraction, ...],
    tol: Fraction,
) -> Fraction:
    """Rational approximation of the growth root with error <= tol."""
    lo, hi = growth_root_bracket(decrements, tol)
    return (lo + hi) / 2


def combine_weights(
    r: BranchRecurrence,
    weights: tuple[Fraction, ...] | list[Fraction],
) -> list[Fraction]:
    """Single-measure decrements <weights, branch> of the combined recurrence."""
    weights = tuple(Fraction(w) for w in weights)
    if len(weights) != len(r.measures):
        raise ValueError(f"got {len(weights)} weights for {len(r.measures)} measures")
    if any(w < 0 for w in weights):
        raise ValueError(f"weights must be >= 0, got {weights}")
    combined = []
    for branch in r.branches:
        value = sum((w * d for w, d in zip(weights, branch)), ZERO)
        if value <= 0:
            raise ZeroDecrementError(
                f"branch {branch} has zero weighted decrement under {weights}"
            )
        combined.append(value)
    return combined


@dataclass(frozen=True)
class WeightOptimum:
    weights: tuple[Fraction, ...]
    objective: Fraction
    converged: bool


def ternary_min_index(f, lo: int, hi: int) -> tuple[int, object]:
    """Minimize a quasiconvex f over the integers lo..hi with lo <= 0 <= hi.

    f may return None to mean +infinity; the None region is assumed to
    lie outside an interval of finite values containing index 0 (the
    search is always centered on a known-feasible point).  Ties resolve
    toward the lower index, so the search is deterministic.
    """

    def less(a, b):
        if a is None:
            return False
        if b is None:
            return True
        return a < b

    while hi - lo > 2:
        m1 = lo + (hi - lo) // 3
        m2 = hi - (hi - lo) // 3
        f1, f2 = f(m1), f(m2)
        if f1 is None and f2 is None:
            # the finite interval contains 0, so narrow toward it
            if m1 > 0:
                hi = m1 - 1
            elif m2 < 0:
                lo = m2 + 1
            else:
                lo, hi = m1 + 1, m2 - 1
        elif less(f2, f1):
            lo = m1 + 1
        else:
            hi = m2 - 1
    best_k, best_v = lo, f(lo)
    for k in range(lo + 1, hi + 1):
        v = f(k)
        if less(v, best_v):
            best_k, best_v = k, v
    return best_k, best_v


_SWEEP_CAP = 30
_COARSE_CELLS = 16
_REFINE_FACTOR = 4
_GRID_CAP = 4096


def optimize_weights(
    systems: list[BranchRecurrence],
    box: list[tuple[Fraction, Fraction]],
    tol: Fraction,
    *,
    fixed_sum: Fraction | None = None,
) -> WeightOptimum:
    """Weights in the box minimizing the worst growth root over the systems.

    Nested one-dimensional searches: coordinate descent sweeps the
    coordinates in order, running an exact ternary search over a shared
    grid of the box (the grid keeps probe denominators small, so every
    root evaluation stays an exact rational bracket).  The grid is
    refined around the best point until its cells are below tol or the
    refinement cap is reached.  With ``fixed_sum`` the weights are
    constrained to that total and descent moves mass between coordinate
    pairs instead.  Probes that zero out some branch count as +infinity;
    a box whose starting point does is degenerate.  Deterministic for
    fixed inputs.
    """
    if not systems:
        raise ValueError("need at least one recurrence system")
    dim = len(systems[0].measures)
    if any(len(s.measures) != dim for s in systems):
        raise ValueError("all systems must share the measure dimension")
    if len(box) != dim:
        raise ValueError(f"box has {len(box)} intervals for dimension {dim}")
    box = [(Fraction(lo), Fraction(hi)) for lo, hi in box]
    for lo, hi in box:
        if lo > hi or lo < 0:
            raise ValueError(f"bad box interval [{lo}, {hi}]")
    if tol <= 0:
        raise ValueError(f"tol must be > 0, got {tol}")
    if fixed_sum is not None and dim < 2:
        raise ValueError("fixed_sum needs at least two coordinates")

    root_tol = tol / 8
    cache: dict[tuple[Fraction, ...], Fraction | None] = {}

    def objective(weights: tuple[Fraction, ...]) -> Fraction | None:
        if weights in cache:
            return cache[weights]
        worst = ZERO
        for system in systems:
            try:
                combined = combine_weights(system, weights)
            except ZeroDecrementError:
                cache[weights] = None
                return None
            worst = max(worst, growth_root(combined, root_tol))
        cache[weights] = worst
        return worst

    span = max((hi - lo for lo, hi in box), default=ZERO)
    current = tuple((lo + hi) / 2 for lo, hi in box)
    if fixed_sum is not None:
        current = _project_to_sum(current, box, fixed_sum)
    value = objective(current)
    if value is None:
        raise DegenerateBoxError(f"starting weights {current} zero out a branch decrement")

    cells = _COARSE_CELLS
    window = None  # first stage scans whole slices, refined stages stay local
    converged = False
    while True:
        step = span / cells if span > 0 else ZERO
        current, value, settled = _sweep_stage(
            objective, current, value, box, step, fixed_sum, tol, window
        )
        if step <= tol or step == 0 or cells >= _GRID_CAP:
            converged = settled
            break
        cells *= _REFINE_FACTOR
        window = 2 * _REFINE_FACTOR

    if converged and _perturbation_improves(objective, current, box, fixed_sum, step, value, tol):
        converged = False
    return WeightOptimum(weights=current, objective=value, converged=converged)


def _sweep_stage(objective, current, value, box, step, fixed_sum, tol, window):
    """Coordinate-descent sweeps on the grid current + k*step; True if settled."""
    dim = len(current)
    if step == 0:
        return current, value, True

    def clip(lo_idx: int, hi_idx: int) -> tuple[int, int]:
        if window is None:
            return lo_idx, hi_idx
        return max(lo_idx, -window), min(hi_idx, window)

    for _ in range(_SWEEP_CAP):
        previous = value
        if fixed_sum is None:
            for k in range(dim):
                lo, hi = box[k]
                if lo == hi:
                    continue
                lo_idx, hi_idx = clip(
                    -_ceil_div(current[k] - lo, step), _ceil_div(hi - current[k], step)
                )

                def slice_obj(idx, k=k):
                    w = _clamp(current[k] + idx * step, box[k])
                    return objective(current[:k] + (w,) + current[k + 1 :])

                best_idx, best_v = ternary_min_index(slice_obj, lo_idx, hi_idx)
                if best_v is not None and best_v < value:
                    w = _clamp(current[k] + best_idx * step, box[k])
                    current = current[:k] + (w,) + current[k + 1 :]
                    value = best_v
        else:
            for i, j in itertools.combinations(range(dim), 2):
                lo_t, hi_t = _transfer_range(current, box, i, j)
                if lo_t >= hi_t:
                    continue
                lo_idx, hi_idx = clip(
                    -_ceil_div(-lo_t, step) if lo_t < 0 else 0,
                    _ceil_div(hi_t, step) if hi_t > 0 else 0,
                )

                def slice_obj(idx, i=i, j=j):
                    t = min(max(idx * step, lo_t), hi_t)
                    moved = list(current)
                    moved[i] += t
                    moved[j] -= t
                    return objective(tuple(moved))

                best_idx, best_v = ternary_min_index(slice_obj, lo_idx, hi_idx)
                if best_v is not None and best_v < value:
                    t = min(max(best_idx * step, lo_t), hi_t)
                    moved = list(current)
                    moved[i] += t
                    moved[j] -= t
                    current, value = tuple(moved), best_v
        if previous - value < tol:
            return current, value, True
    return current, value, False


def _ceil_div(a: Fraction, b: Fraction) -> int:
    return -int((-a) // b)


def _clamp(w: Fraction, interval: tuple[Fraction, Fraction]) -> Fraction:
    lo, hi = interval
    return min(max(w, lo), hi)


def _project_to_sum(weights, box, total):
    weights = list(weights)
    excess = total - sum(weights)
    for k in range(len(weights)):
        lo, hi = box[k]
        move = min(max(weights[k] + excess, lo), hi) - weights[k]
        weights[k] += move
        excess -= move
        if excess == 0:
            break
    if excess != 0:
        raise ValueError(f"box cannot realize weight sum {total}")
    return tuple(weights)


def _transfer_range(current, box, i, j):
    # t moves mass from j to i while both stay inside their intervals
    lo = max(box[i][0] - current[i], current[j] - box[j][1])
    hi = min(box[i][1] - current[i], current[j] - box[j][0])
    return lo, hi


def _perturbation_improves(objective, current, box, fixed_sum, step, value, tol):
    if step == 0:
        return False
    dim = len(current)
    candidates = []
    if fixed_sum is None:
        for k in range(dim):
            for sign in (1, -1):
                w = current[k] + sign * step
                lo, hi = box[k]
                if lo <= w <= hi:
                    candidates.append(current[:k] + (w,) + current[k + 1 :])
    else:
        for i, j in itertools.permutations(range(dim), 2):
            moved = list(current)
            moved[i] += step
            moved[j] -= step
            if all(box[k][0] <= moved[k] <= box[k][1] for k in range(dim)):
                candidates.append(tuple(moved))
    for candidate in candidates:
        candidate_value = objective(candidate)
        if candidate_value is not None and candidate_value < value - tol:
            return True
    return False


def tree_size(decrements: list[int], budget: int) -> int:
    """Exact node count of the recursion tree T(k) = 1 + sum_i T(k - d_i).

    T(k) = 1 for k <= 0; integer decrements >= 1; serves as the
    brute-force oracle that validates growth_root.
    """
    if not decrements:
        raise ValueError("need at least one decrement")
    if any(not isinstance(d, int) or d < 1 for d in decrements):
        raise ValueError(f"decrements must be integers >= 1, got {decrements}")
    if budget < 0:
        raise ValueError(f"budget must be >= 0, got {budget}")
    table = [1] * (budget + 1)  # index 0 stands for every k <= 0
    for k in range(1, budget + 1):
        table[k] = 1 + sum(table[max(k - d, 0)] for d in decrements)
    return table[budget]
