"""Bisection over the SAT exponent c and search over rule sequences.

For a fixed annotation, feasibility of the proof LP is downward closed
in c, so the best provable exponent is found by bisecting [1, 2]: c = 1
is feasible for every annotation that contains a speedup, and c = 2 is
checked infeasible rather than assumed (no proof of a quadratic bound
exists in this system).  Bisection midpoints are exact dyadic rationals,
so every feasibility test is an exact LP solve.

Searches evaluate annotations independently and merge results with fixed
tie-breaks, so parallel and serial runs return identical tables.
"""

from __future__ import annotations

import heapq
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .annotation import Annotation, enumerate_annotations, neighbors, validate
from .lp import build_lp, extract_certificate
from .simplex import solve
from .verifier import ProofCertificate

EPS_DEFAULT = Fraction(1, 1000)

# guard thresholds for the searches (checked by the test suite):
# no proof can reach n^2, and none is expected past the 2cos(pi/7) bound
N_SQUARED_CEILING = Fraction(2) - Fraction(1, 10**6)
CONJECTURE_CEILING = Fraction(18019, 10000) + Fraction(1, 10**4)


class AnchorInfeasibleError(RuntimeError):
    """The LP is infeasible even at c = 1; indicates a schema bug."""


class CeilingFeasibleError(RuntimeError):
    """The LP is feasible at c = 2, which is provably impossible."""


@dataclass(frozen=True)
class SearchRecord:
    annotation: Annotation
    best_c: Fraction
    bracket_high: Fraction
    lines: int
    certificate: ProofCertificate

    @property
    def midpoint(self) -> Fraction:
        return (self.best_c + self.bracket_high) / 2


def bisect_exponent(
    tags: str,
    tol: Fraction,
    eps: Fraction,
) -> tuple[Fraction, Fraction, ProofCertificate]:
    """Bracket the feasibility threshold to width <= tol; returns (lo, hi, cert at lo)."""
    lo, hi = Fraction(1), Fraction(2)
    if not solve(build_lp(tags, lo, eps), optimize=False).feasible:
        raise AnchorInfeasibleError(
            f"annotation {tags} admits no contradiction even at c = 1"
        )
    if solve(build_lp(tags, hi, eps), optimize=False).feasible:
        raise CeilingFeasibleError(
            f"annotation {tags} appears to prove a quadratic bound; schema bug"
        )
    # probes only test feasibility; the final optimizing solve at lo
    # produces the tight exponents that go into the certificate
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if solve(build_lp(tags, mid, eps), optimize=False).feasible:
            lo = mid
        else:
            hi = mid
    solution = solve(build_lp(tags, lo, eps))
    return lo, hi, extract_certificate(tags, lo, eps, solution)


def best_exponent(
    a: Annotation | str,
    tol: Fraction,
    *,
    eps: Fraction = EPS_DEFAULT,
) -> tuple[Fraction, ProofCertificate]:
    """Largest c (within tol) at which the annotation proves a lower bound.

    Returns the feasible bracket end and its certificate, so the reported
    exponent is always actually proven.
    """
    a = a if isinstance(a, Annotation) else validate(a)
    if not 0 < tol <= Fraction(1, 100):
        raise ValueError(f"tol must be in (0, 1/100], got {tol}")
    lo, _, cert = bisect_exponent(a.tags, tol, eps)
    return lo, cert


def _evaluate(args: tuple[str, Fraction, Fraction]) -> tuple[str, Fraction, Fraction, ProofCertificate]:
    tags, tol, eps = args
    lo, hi, cert = bisect_exponent(tags, tol, eps)
    return tags, lo, hi, cert


def _evaluate_many(
    tag_list: list[str],
    tol: Fraction,
    eps: Fraction,
    workers: int,
) -> list[SearchRecord]:
    jobs = [(tags, tol, eps) for tags in tag_list]
    if workers <= 1 or len(jobs) <= 1:
        results = [_evaluate(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_evaluate, jobs))
    return [
        SearchRecord(Annotation(tags), lo, hi, len(tags), cert)
        for tags, lo, hi, cert in results
    ]


def exhaustive_search(
    max_lines: int,
    tol: Fraction,
    *,
    eps: Fraction = EPS_DEFAULT,
    workers: int = 1,
) -> list[SearchRecord]:
    """Best record per proof length for every length up to max_lines.

    Lengths start at 3: length 1 is the bare anchor, which proves
    nothing, and length 2 has no valid annotation.  Ties within a length
    go to the lexicographically least annotation.
    """
    if max_lines < 3:
        raise ValueError(f"max_lines must be >= 3, got {max_lines}")
    table: list[SearchRecord] = []
    for length in range(3, max_lines + 1):
        candidates = [a.tags for a in enumerate_annotations(length)]
        if not candidates:
            continue
        records = _evaluate_many(candidates, tol, eps, workers)
        best = max(records, key=lambda r: (r.best_c, _reversed_lex(r.annotation.tags)))
        table.append(best)
    return table


def _reversed_lex(tags: str):
    # max() picks the greatest key, so invert characters to prefer lex-least
    return tuple(-ord(ch) for ch in tags)


def heuristic_search(
    seeds: list[SearchRecord],
    budget: int,
    tol: Fraction,
    *,
    eps: Fraction = EPS_DEFAULT,
    workers: int = 1,
) -> list[SearchRecord]:
    """Local-improvement search over annotation neighborhoods.

    Keeps a frontier of the best record per length, seeded from the
    input.  Repeatedly pops the most promising record (largest best_c,
    then fewer lines, then lexicographic), evaluates all not yet seen
    neighbors as one batch, and pushes those that improve their length's
    frontier entry.  ``budget`` caps the number of best_exponent
    evaluations and is checked between batches, so the final batch may
    run slightly over.  Frontier entries are only ever replaced by
    strictly better ones, hence seeds are never evicted below their own
    score.  Returns the frontier sorted by length.
    """
    if not seeds:
        raise ValueError("heuristic search needs at least one seed")
    if budget < 1:
        raise ValueError(f"budget must be >= 1, got {budget}")

    frontier: dict[int, SearchRecord] = {}
    heap: list[tuple] = []
    evaluated: set[str] = set()
    for record in seeds:
        if record.annotation.tags in evaluated:
            continue
        evaluated.add(record.annotation.tags)
        current = frontier.get(record.lines)
        if current is None or record.best_c > current.best_c:
            frontier[record.lines] = record
        heapq.heappush(heap, (-record.best_c, record.lines, record.annotation.tags, record))

    spent = 0
    while heap and spent < budget:
        _, _, _, record = heapq.heappop(heap)
        batch = [
            nb.tags
            for nb in neighbors(record.annotation)
            if nb.tags not in evaluated
        ]
        if not batch:
            continue
        evaluated.update(batch)
        spent += len(batch)
        for result in _evaluate_many(batch, tol, eps, workers):
            current = frontier.get(result.lines)
            if current is None or result.best_c > current.best_c:
                frontier[result.lines] = result
                heapq.heappush(
                    heap,
                    (-result.best_c, result.lines, result.annotation.tags, result),
                )
    return [frontier[length] for length in sorted(frontier)]
