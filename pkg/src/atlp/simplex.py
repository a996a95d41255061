"""Exact rational linear programs and a two-phase simplex solver.

Programs are stated over named variables that are implicitly >= 0:
minimize a linear objective subject to <=, >= and = constraints, all
coefficients exact rationals.  The solver never rounds: tableau entries
are exact rationals throughout (gmpy2.mpq when available, otherwise
fractions.Fraction), so a feasible answer satisfies every constraint
exactly and infeasible means no rational point exists.

Pivoting uses Dantzig's rule for speed and permanently switches to
Bland's rule after a run of degenerate pivots, which guarantees
termination.  A presolve pass substitutes away single-variable and
two-variable equality constraints; the proof LPs built by :mod:`atlp.lp`
consist mostly of such rows, and eliminating them shrinks the tableau by
roughly half.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

try:  # pragma: no cover - exercised implicitly on hosts with gmpy2
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover
    _Q = Fraction

LE = "<="
GE = ">="
EQ = "="

FEASIBLE = "feasible"
INFEASIBLE = "infeasible"

# consecutive degenerate pivots tolerated before switching to Bland's rule
_STALL_LIMIT = 40


class UnboundedObjectiveError(RuntimeError):
    """The objective decreases without bound over the feasible region."""


@dataclass
class Constraint:
    coeffs: dict[str, Fraction]
    relation: str
    rhs: Fraction

    def render(self) -> str:
        terms = []
        for name, coeff in self.coeffs.items():
            if coeff == 1:
                terms.append(name)
            elif coeff == -1:
                terms.append(f"-{name}")
            else:
                terms.append(f"{coeff}*{name}")
        lhs = " + ".join(terms).replace("+ -", "- ") if terms else "0"
        return f"{lhs} {self.relation} {self.rhs}"


@dataclass
class LinearProgram:
    """min objective over x >= 0 subject to the constraints."""

    variables: list[str]
    constraints: list[Constraint] = field(default_factory=list)
    objective: dict[str, Fraction] = field(default_factory=dict)

    def add(self, coeffs: dict[str, Fraction], relation: str, rhs: Fraction) -> None:
        self.constraints.append(Constraint(dict(coeffs), relation, rhs))

    def validate(self) -> None:
        declared = set(self.variables)
        if len(declared) != len(self.variables):
            raise ValueError("duplicate variable names")
        for con in self.constraints:
            if con.relation not in (LE, GE, EQ):
                raise ValueError(f"unknown relation {con.relation!r}")
            undeclared = set(con.coeffs) - declared
            if undeclared:
                raise ValueError(f"constraint uses undeclared variables {sorted(undeclared)}")
        undeclared = set(self.objective) - declared
        if undeclared:
            raise ValueError(f"objective uses undeclared variables {sorted(undeclared)}")

    def dump(self) -> str:
        """Human-readable inequality listing, one constraint per line."""
        obj_terms = " + ".join(f"{c}*{v}" for v, c in self.objective.items()) or "0"
        lines = [f"min {obj_terms}", "subject to (all variables >= 0):"]
        lines.extend(f"  {con.render()}" for con in self.constraints)
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class LPSolution:
    status: str
    assignment: dict[str, Fraction] | None = None
    objective_value: Fraction | None = None

    @property
    def feasible(self) -> bool:
        return self.status == FEASIBLE


def satisfies(program: LinearProgram, assignment: dict[str, Fraction]) -> bool:
    """Exact check that the assignment meets every constraint and x >= 0."""
    if any(assignment.get(v, Fraction(0)) < 0 for v in program.variables):
        return False
    for con in program.constraints:
        value = sum(
            (c * assignment.get(v, Fraction(0)) for v, c in con.coeffs.items()),
            Fraction(0),
        )
        if con.relation == LE and value > con.rhs:
            return False
        if con.relation == GE and value < con.rhs:
            return False
        if con.relation == EQ and value != con.rhs:
            return False
    return True


def solve(program: LinearProgram, *, optimize: bool = True) -> LPSolution:
    """Exact optimum of ``program`` or infeasibility.

    Raises UnboundedObjectiveError when the minimum does not exist; the
    proof LPs cannot trigger this (their objective is a sum of
    nonnegative variables), so callers treat it as a schema bug.

    With ``optimize=False`` the solve stops as soon as feasibility is
    decided; the returned point is exact and feasible but not optimal,
    which is all a bisection probe needs.
    """
    program.validate()
    rows = [
        ({v: Fraction(c) for v, c in con.coeffs.items() if c != 0}, con.relation, Fraction(con.rhs))
        for con in program.constraints
    ]
    objective = {v: Fraction(c) for v, c in program.objective.items() if c != 0}

    eliminated, shifts, rows, live = _presolve(rows, list(program.variables))
    if rows is None:
        return LPSolution(status=INFEASIBLE)
    for name, (offset, coeff, other) in eliminated:
        objective_coeff = objective.pop(name, None)
        if objective_coeff:
            if other is not None:
                objective[other] = objective.get(other, Fraction(0)) + objective_coeff * coeff
        # constant objective offsets are reconstructed from the assignment below

    status, core_assignment = _simplex(live, rows, objective, optimize)
    if status == INFEASIBLE:
        return LPSolution(status=INFEASIBLE)

    assignment = dict(core_assignment)
    for name, shift in shifts.items():
        assignment[name] = assignment.get(name, Fraction(0)) + shift
    for name, (offset, coeff, other) in reversed(eliminated):
        value = offset
        if other is not None:
            value += coeff * assignment[other]
        assignment[name] = value
    full = {v: assignment.get(v, Fraction(0)) for v in program.variables}
    value = sum((c * full[v] for v, c in program.objective.items()), Fraction(0))
    return LPSolution(status=FEASIBLE, assignment=full, objective_value=value)


def _presolve(rows, variables):
    """Substitute away 1- and 2-variable equality rows and shift bounds.

    Returns (eliminated, shifts, rows, live_variables).  eliminated is a
    list of (name, (offset, coeff, other)) meaning name = offset +
    coeff*other (other None for constants), in elimination order; shifts
    maps names to lower bounds that were moved into the variable, so the
    reported value is the core value plus the shift.  rows is None when
    presolve already proves infeasibility.  Both reductions remove the
    rows entirely, which also removes their phase-1 artificials.
    """
    order = {v: i for i, v in enumerate(variables)}
    eliminated: list[tuple[str, tuple[Fraction, Fraction, str | None]]] = []
    live = set(variables)

    def substitute(name, offset, coeff, other):
        nonlocal rows
        new_rows = []
        for coeffs, rel, rhs in rows:
            a = coeffs.pop(name, None)
            if a:
                rhs = rhs - a * offset
                if other is not None:
                    coeffs[other] = coeffs.get(other, Fraction(0)) + a * coeff
                    if coeffs[other] == 0:
                        del coeffs[other]
            new_rows.append((coeffs, rel, rhs))
        rows = new_rows

    changed = True
    while changed:
        changed = False
        for idx, (coeffs, rel, rhs) in enumerate(rows):
            if not coeffs:
                ok = (rhs == 0) if rel == EQ else (rhs >= 0 if rel == LE else rhs <= 0)
                if not ok:
                    return eliminated, {}, None, []
                del rows[idx]
                changed = True
                break
            if rel != EQ or len(coeffs) > 2:
                continue
            if len(coeffs) == 1:
                (name, a), = coeffs.items()
                value = rhs / a
                if value < 0:
                    return eliminated, {}, None, []
                del rows[idx]
                substitute(name, value, Fraction(0), None)
                eliminated.append((name, (value, Fraction(0), None)))
                live.discard(name)
                changed = True
                break
            # a*x + b*y = rhs; eliminate the later-declared variable
            (v1, a1), (v2, a2) = sorted(coeffs.items(), key=lambda kv: order[kv[0]])
            name, a, other, b = v2, a2, v1, a1
            offset = rhs / a
            coeff = -b / a
            del rows[idx]
            substitute(name, offset, coeff, other)
            # keep name >= 0 unless implied by other >= 0
            if not (offset >= 0 and coeff >= 0):
                rows.append(({other: -coeff}, LE, offset))
            eliminated.append((name, (offset, coeff, other)))
            live.discard(name)
            changed = True
            break

    # single-variable >= rows become lower bounds shifted into the variable
    lower: dict[str, Fraction] = {}
    kept = []
    for coeffs, rel, rhs in rows:
        if len(coeffs) == 1 and rel != EQ:
            (name, a), = coeffs.items()
            bound = rhs / a
            is_lower = (rel == GE) == (a > 0)
            if is_lower:
                if bound > lower.get(name, Fraction(0)):
                    lower[name] = bound
                continue
            if bound < 0:
                return eliminated, {}, None, []
        kept.append((coeffs, rel, rhs))
    rows = kept
    shifts = {name: bound for name, bound in lower.items() if bound > 0}
    if shifts:
        shifted_rows = []
        for coeffs, rel, rhs in rows:
            for name, a in coeffs.items():
                bound = shifts.get(name)
                if bound is not None:
                    rhs = rhs - a * bound
            shifted_rows.append((coeffs, rel, rhs))
        rows = shifted_rows

    ordered_live = [v for v in variables if v in live]
    return eliminated, shifts, rows, ordered_live


def _simplex(variables, rows, objective, optimize=True):
    """Two-phase tableau simplex; returns (status, assignment)."""
    n = len(variables)
    col_of = {v: i for i, v in enumerate(variables)}

    mat: list[list] = []
    rhs: list = []
    basis: list[int] = []
    total = n + sum(1 for _, rel, _ in rows if rel != EQ)

    col = n
    for coeffs, rel, b in rows:
        row = [_Q(0)] * total
        for v, a in coeffs.items():
            row[col_of[v]] = _Q(a)
        slack_col = None
        if rel != EQ:
            row[col] = _Q(1) if rel == LE else _Q(-1)
            slack_col = col
            col += 1
        bq = _Q(b)
        if bq < 0:
            row = [-a for a in row]
            bq = -bq
        mat.append(row)
        rhs.append(bq)
        basis.append(slack_col if slack_col is not None and row[slack_col] == 1 else -1)

    banned: set[int] = set()
    artificial: list[int] = []
    for i, b in enumerate(basis):
        if b == -1:
            for r in range(len(mat)):
                mat[r].append(_Q(1) if r == i else _Q(0))
            basis[i] = total
            artificial.append(total)
            total += 1

    if artificial:
        phase1_cost = [_Q(0)] * total
        for j in artificial:
            phase1_cost[j] = _Q(1)
        value = _run_phase(mat, rhs, basis, phase1_cost, banned, floor=_Q(0))
        if value is None or value > 0:
            return INFEASIBLE, None
        # pivot leftover artificials out of the basis or drop redundant rows
        for i in range(len(mat) - 1, -1, -1):
            if basis[i] not in artificial:
                continue
            pivot_col = next(
                (j for j in range(total) if j not in artificial and mat[i][j] != 0),
                None,
            )
            if pivot_col is None:
                del mat[i], rhs[i], basis[i]
            else:
                _pivot(mat, rhs, i, pivot_col)
                basis[i] = pivot_col
        banned.update(artificial)

    if optimize:
        cost = [_Q(0)] * total
        for v, a in objective.items():
            cost[col_of[v]] = _Q(a)
        value = _run_phase(mat, rhs, basis, cost, banned)
        if value is None:
            raise UnboundedObjectiveError("objective is unbounded below")

    assignment = {v: Fraction(0) for v in variables}
    for i, b in enumerate(basis):
        if b < n:
            assignment[variables[b]] = Fraction(rhs[i])
    return FEASIBLE, assignment


def _run_phase(mat, rhs, basis, cost, banned, floor=None):
    """Minimize cost over the current basis; returns value or None if unbounded.

    ``floor`` is an a-priori lower bound on the objective: once reached,
    no further pivoting can help (used to cut phase 1 short at zero).
    """
    m = len(mat)
    total = len(cost)
    reduced = list(cost)
    for i in range(m):
        cb = cost[basis[i]]
        if cb != 0:
            row = mat[i]
            for j in range(total):
                if row[j] != 0:
                    reduced[j] -= cb * row[j]

    bland = False
    stall = 0
    last_value = _objective_value(rhs, basis, cost)
    guard = 2000 + 50 * (m + total)
    for _ in range(guard):
        if floor is not None and last_value <= floor:
            return last_value
        enter = _choose_entering(reduced, banned, bland)
        if enter is None:
            return last_value
        leave = _choose_leaving(mat, rhs, basis, enter)
        if leave is None:
            return None
        _pivot(mat, rhs, leave, enter)
        f = reduced[enter]
        if f != 0:
            row = mat[leave]
            for j in range(total):
                if row[j] != 0:
                    reduced[j] -= f * row[j]
        basis[leave] = enter
        value = _objective_value(rhs, basis, cost)
        if not bland:
            stall = stall + 1 if value == last_value else 0
            if stall > _STALL_LIMIT:
                bland = True
        last_value = value
    raise AssertionError("simplex failed to terminate within the iteration guard")


def _objective_value(rhs, basis, cost):
    total = _Q(0)
    for i, b in enumerate(basis):
        if cost[b] != 0:
            total += cost[b] * rhs[i]
    return total


def _choose_entering(reduced, banned, bland):
    best = None
    best_value = 0
    for j, r in enumerate(reduced):
        if j in banned or r >= 0:
            continue
        if bland:
            return j
        if r < best_value:
            best, best_value = j, r
    return best


def _choose_leaving(mat, rhs, basis, enter):
    best = None
    best_ratio = None
    for i in range(len(mat)):
        a = mat[i][enter]
        if a <= 0:
            continue
        ratio = rhs[i] / a
        if best_ratio is None or ratio < best_ratio or (
            ratio == best_ratio and basis[i] < basis[best]
        ):
            best, best_ratio = i, ratio
    return best


def _pivot(mat, rhs, i, j):
    row = mat[i]
    p = row[j]
    if p != 1:
        inv = _Q(1) / p
        mat[i] = row = [a * inv for a in row]
        rhs[i] = rhs[i] * inv
    for r in range(len(mat)):
        if r == i:
            continue
        f = mat[r][j]
        if f != 0:
            other = mat[r]
            mat[r] = [a - f * b for a, b in zip(other, row)]
            rhs[r] = rhs[r] - f * rhs[i]
