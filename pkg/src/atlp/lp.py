"""Feasibility LP for a fixed rule sequence and assumed SAT exponent c.

For an annotation of L tags the program has one dts variable d_i per
line, guess/feed variables g_i_t, f_i_t per quantifier block (t = 1 is
innermost), a parameter x_i per speedup line, the anchor exponent a0 and
the closing exponent nu; all variables are >= 0.  Each rule application
contributes inequalities that relax the kernel's exact max semantics to
">=", and minimizing the sum of all variables drives every line back
down to the max, so optima read off as tight proof lines.  c is a
constant of the program, never a variable (products c*d would be
nonlinear); optimizing over c is done by bisection one level up.

Feasibility at c implies feasibility at any c' in [1, c] with the very
same assignment, because c only occurs in constraints of the form
d >= c * (nonnegative); this downward closure is what licenses the
bisection.
"""

from __future__ import annotations

from fractions import Fraction

from . import kernel
from .annotation import Annotation, validate
from .kernel import ClassLine, QuantifierBlock, RuleStep
from .simplex import GE, LE, EQ, LinearProgram, LPSolution
from .verifier import ProofCertificate

ZERO = Fraction(0)
ONE = Fraction(1)


def _as_annotation(a: Annotation | str) -> Annotation:
    return a if isinstance(a, Annotation) else validate(a)


def build_lp(a: Annotation | str, c: Fraction, eps: Fraction) -> LinearProgram:
    """The feasibility program for proving SAT not in DTS[n^(c-eps')].

    Variables appear in a fixed order (a0, then per line d_i, block
    exponents by depth, x_i, then nu) so identical inputs build
    byte-identical programs.
    """
    a = _as_annotation(a)
    if c < 1:
        raise ValueError(f"c must be >= 1, got {c}")
    if eps <= 0:
        raise ValueError(f"eps must be > 0, got {eps}")

    tags = a.tags
    trace = a.block_trace()
    program = LinearProgram(variables=["a0"])

    def d(i: int) -> str:
        return f"d{i}"

    def g(i: int, t: int) -> str:
        return f"g{i}_{t}"

    def f(i: int, t: int) -> str:
        return f"f{i}_{t}"

    program.variables.append(d(1))
    program.add({d(1): ONE, "a0": -c}, GE, ZERO)
    program.add({d(1): ONE}, GE, ONE)
    program.add({"a0": ONE}, GE, ONE)

    for i in range(2, len(tags) + 1):
        tag = tags[i - 1]
        prev_m, m = trace[i - 2], trace[i - 1]
        program.variables.append(d(i))
        if tag == "S":
            for t in range(1, m + 1):
                program.variables.extend([g(i, t), f(i, t)])
            program.variables.append(f"x{i}")
            x = f"x{i}"
            program.add({d(i): ONE}, GE, ONE)
            program.add({d(i): ONE, d(i - 1): -ONE, x: ONE}, GE, ZERO)
            program.add({g(i, 1): ONE}, EQ, ONE)
            if prev_m == 0:
                program.add({f(i, 1): ONE}, EQ, ONE)
                program.add({g(i, 2): ONE, x: -ONE}, GE, ZERO)
                program.add({f(i, 2): ONE, x: -ONE}, GE, ZERO)
            else:
                program.add({f(i, 1): ONE, f(i - 1, 1): -ONE}, EQ, ZERO)
                program.add({g(i, 2): ONE, g(i - 1, 1): -ONE}, GE, ZERO)
                program.add({g(i, 2): ONE, x: -ONE}, GE, ZERO)
                program.add({f(i, 2): ONE, x: -ONE}, GE, ZERO)
                program.add({f(i, 2): ONE, f(i - 1, 1): -ONE}, GE, ZERO)
                for t in range(3, m + 1):
                    program.add({g(i, t): ONE, g(i - 1, t - 1): -ONE}, EQ, ZERO)
                    program.add({f(i, t): ONE, f(i - 1, t - 1): -ONE}, EQ, ZERO)
        else:
            for t in range(1, m + 1):
                program.variables.extend([g(i, t), f(i, t)])
            program.add({d(i): ONE, d(i - 1): -c}, GE, ZERO)
            program.add({d(i): ONE, g(i - 1, 1): -c}, GE, ZERO)
            if prev_m >= 2:
                program.add({d(i): ONE, f(i - 1, 2): -c}, GE, ZERO)
                for t in range(1, m + 1):
                    program.add({g(i, t): ONE, g(i - 1, t + 1): -ONE}, EQ, ZERO)
                    program.add({f(i, t): ONE, f(i - 1, t + 1): -ONE}, EQ, ZERO)
            else:
                # the original input feeds in with exponent 1
                program.add({d(i): ONE}, GE, c)

    program.variables.append("nu")
    last = len(tags)
    program.add({"nu": ONE, d(last): -ONE}, GE, ZERO)
    if trace[-1] == 1:
        program.add({"nu": ONE, g(last, 1): -ONE}, GE, ZERO)
    program.add({"nu": ONE, "a0": -ONE}, LE, -eps)

    program.objective = {v: ONE for v in program.variables}
    return program


def extract_certificate(
    a: Annotation | str,
    c: Fraction,
    eps: Fraction,
    solution: LPSolution,
) -> ProofCertificate:
    """Read a feasible assignment back into a checkable proof certificate.

    Quantifiers are reconstructed from the block counts: the outermost
    block of every line is existential and adjacent blocks alternate.
    """
    a = _as_annotation(a)
    if not solution.feasible or solution.assignment is None:
        raise ValueError("cannot extract a certificate from an infeasible solution")
    asg = solution.assignment
    trace = a.block_trace()

    steps: list[RuleStep] = [
        RuleStep(kernel.SLOWDOWN, None, ClassLine((), asg["d1"]))
    ]
    for i in range(2, len(a.tags) + 1):
        tag = a.tags[i - 1]
        m = trace[i - 1]
        blocks = tuple(
            QuantifierBlock(
                kernel.EXISTS if (m - t) % 2 == 0 else kernel.FORALL,
                asg[f"g{i}_{t}"],
                asg[f"f{i}_{t}"],
            )
            for t in range(m, 0, -1)
        )
        line = ClassLine(blocks, asg[f"d{i}"])
        if tag == "S":
            steps.append(RuleStep(kernel.SPEEDUP, asg[f"x{i}"], line))
        else:
            steps.append(RuleStep(kernel.SLOWDOWN, None, line))

    return ProofCertificate(
        c=c,
        eps=eps,
        a0=asg["a0"],
        steps=tuple(steps),
        final_ntime_exp=asg["nu"],
    )
