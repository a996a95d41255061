"""Independent certificate checker: no LP code, only the kernel rules.

A proof certificate records the assumed SAT exponent c, the contradiction
margin eps, the anchor exponent a0, every derived line together with the
rule (and speedup parameter x) that produced it, and the closing NTIME
exponent nu.  Checking replays each rule exactly and accepts recorded
exponents that dominate (>=) the recomputed ones componentwise: larger
exponents only enlarge the classes, so dominance is the sound direction
and tolerates LP optima that are not pointwise tight.  The chain proves
NTIME[n^a0] inside NTIME[n^nu]; nu <= a0 - eps contradicts the
nondeterministic time hierarchy.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import kernel
from .kernel import ClassLine, RuleStep

ACCEPTED = "accepted"
MALFORMED_CERTIFICATE = "MalformedCertificate"
DOMINANCE_VIOLATION = "DominanceViolation"
NO_CONTRADICTION = "NoContradiction"


@dataclass(frozen=True)
class ProofCertificate:
    c: Fraction
    eps: Fraction
    a0: Fraction
    steps: tuple[RuleStep, ...]
    final_ntime_exp: Fraction


@dataclass(frozen=True)
class VerifyResult:
    accepted: bool
    step: int | None = None
    reason: str | None = None
    detail: str = ""

    def __str__(self) -> str:
        if self.accepted:
            return "ACCEPTED"
        where = f" at step {self.step}" if self.step is not None else ""
        return f"REJECTED{where}: {self.reason} ({self.detail})"


def _reject(step: int | None, reason: str, detail: str) -> VerifyResult:
    return VerifyResult(accepted=False, step=step, reason=reason, detail=detail)


def _dominates(recorded: ClassLine, required: ClassLine, step: int) -> VerifyResult | None:
    """None when recorded >= required componentwise with matching shape."""
    if len(recorded.blocks) != len(required.blocks):
        return _reject(
            step,
            MALFORMED_CERTIFICATE,
            f"expected {len(required.blocks)} blocks, recorded {len(recorded.blocks)}",
        )
    for t, (rec, req) in enumerate(zip(recorded.blocks, required.blocks)):
        if rec.quantifier != req.quantifier:
            return _reject(step, MALFORMED_CERTIFICATE, f"block {t} quantifier mismatch")
        if rec.guess_exp < req.guess_exp:
            return _reject(
                step,
                DOMINANCE_VIOLATION,
                f"block {t} guess exponent {rec.guess_exp} < required {req.guess_exp}",
            )
        if rec.feed_exp < req.feed_exp:
            return _reject(
                step,
                DOMINANCE_VIOLATION,
                f"block {t} feed exponent {rec.feed_exp} < required {req.feed_exp}",
            )
    if recorded.dts_exp < required.dts_exp:
        return _reject(
            step,
            DOMINANCE_VIOLATION,
            f"dts exponent {recorded.dts_exp} < required {required.dts_exp}",
        )
    return None


def verify(cert: ProofCertificate) -> VerifyResult:
    """Accept iff the certificate is a sound lower-bound derivation.

    Checks, in order: parameter sanity, the anchor containment, per-step
    dominance over the exact kernel rules, the closing containment
    close(last) <= nu, and the contradiction nu <= a0 - eps.  Rejection
    pinpoints the first failing step and field.
    """
    if cert.a0 < 1 or cert.c < 1 or cert.eps <= 0:
        return _reject(None, MALFORMED_CERTIFICATE, "need a0 >= 1, c >= 1, eps > 0")
    if not cert.steps:
        return _reject(None, MALFORMED_CERTIFICATE, "certificate has no steps")

    anchor = cert.steps[0]
    if anchor.rule != kernel.SLOWDOWN or anchor.x is not None:
        return _reject(0, MALFORMED_CERTIFICATE, "first step must be a plain slowdown anchor")
    if anchor.result.blocks:
        return _reject(0, MALFORMED_CERTIFICATE, "anchor line must have no quantifier blocks")
    if not anchor.result.well_formed():
        return _reject(0, MALFORMED_CERTIFICATE, "anchor line violates class invariants")
    if anchor.result.dts_exp < cert.c * cert.a0:
        return _reject(
            0,
            DOMINANCE_VIOLATION,
            f"anchor dts {anchor.result.dts_exp} < c*a0 = {cert.c * cert.a0}",
        )

    previous = anchor.result
    for index, step in enumerate(cert.steps[1:], start=1):
        if step.rule == kernel.SPEEDUP:
            if step.x is None or step.x < 0:
                return _reject(index, MALFORMED_CERTIFICATE, "speedup needs a parameter x >= 0")
            required = kernel.apply_speedup(previous, step.x)
        elif step.rule == kernel.SLOWDOWN:
            if step.x is not None:
                return _reject(index, MALFORMED_CERTIFICATE, "slowdown carries no parameter x")
            if not previous.blocks:
                return _reject(index, MALFORMED_CERTIFICATE, "slowdown on an empty prefix")
            required = kernel.apply_slowdown(previous, cert.c)
        else:
            return _reject(index, MALFORMED_CERTIFICATE, f"unknown rule {step.rule!r}")
        if not step.result.well_formed():
            return _reject(index, MALFORMED_CERTIFICATE, "line violates class invariants")
        failure = _dominates(step.result, required, index)
        if failure is not None:
            return failure
        previous = step.result

    if len(previous.blocks) > 1 or (
        previous.blocks and previous.blocks[0].quantifier != kernel.EXISTS
    ):
        return _reject(len(cert.steps) - 1, MALFORMED_CERTIFICATE, "final line is not closable")
    closing = kernel.close_line(previous)
    if cert.final_ntime_exp < closing:
        return _reject(
            len(cert.steps),
            DOMINANCE_VIOLATION,
            f"nu = {cert.final_ntime_exp} < closing exponent {closing}",
        )
    if cert.final_ntime_exp > cert.a0 - cert.eps:
        return _reject(
            None,
            NO_CONTRADICTION,
            f"nu = {cert.final_ntime_exp} exceeds a0 - eps = {cert.a0 - cert.eps}",
        )
    return VerifyResult(accepted=True)
