"""Exact semantics of quantified small-space classes and the rewrite rules.

A proof line is a class of the form

    (Q1 n^a1)^b1 (Q2 n^a2)^b2 ... (Qk n^ak)^bk DTS[n^d]

where each quantifier block guesses n^a bits and feeds O(n^b) selected
bits inward, and DTS[n^d] is deterministic time n^d with n^o(1) workspace.
Every exponent is an exact `fractions.Fraction`; the o(1) terms are
dropped throughout, so a derived bound reads "no n^(c-eps) algorithm for
every eps > 0".

The four operations below rewrite lines:

* ``anchor_slowdown`` -- NTIME[n^a0] into DTS[n^(c*a0)], the proof anchor.
* ``apply_speedup``   -- trade DTS time for one more alternation.
* ``apply_slowdown``  -- remove the innermost block at cost factor c.
* ``close_line``      -- read off the final NTIME exponent.

All functions are pure; inputs are never mutated.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

EXISTS = "E"
FORALL = "A"

ONE = Fraction(1)


def opposite(quantifier: str) -> str:
    return FORALL if quantifier == EXISTS else EXISTS


@dataclass(frozen=True)
class QuantifierBlock:
    """One stage (Q n^guess)^feed: guess n^guess bits, feed n^feed inward."""

    quantifier: str  # EXISTS or FORALL
    guess_exp: Fraction
    feed_exp: Fraction


@dataclass(frozen=True)
class ClassLine:
    """A quantified class; ``blocks`` is ordered outermost first."""

    blocks: tuple[QuantifierBlock, ...]
    dts_exp: Fraction

    @property
    def innermost(self) -> QuantifierBlock:
        return self.blocks[-1]

    def well_formed(self) -> bool:
        """Check the line invariants (used by the certificate checker).

        dts_exp >= 1, all block exponents >= 0, adjacent blocks alternate,
        and a nonempty prefix starts with an existential block.
        """
        if self.dts_exp < 1:
            return False
        for blk in self.blocks:
            if blk.quantifier not in (EXISTS, FORALL):
                return False
            if blk.guess_exp < 0 or blk.feed_exp < 0:
                return False
        if self.blocks:
            if self.blocks[0].quantifier != EXISTS:
                return False
            for outer, inner in zip(self.blocks, self.blocks[1:]):
                if inner.quantifier == outer.quantifier:
                    return False
        return True


@dataclass(frozen=True)
class RuleStep:
    """One applied rule and the line it produced; ``x`` only for speedups."""

    rule: str  # "slowdown" or "speedup"
    x: Fraction | None
    result: ClassLine


SLOWDOWN = "slowdown"
SPEEDUP = "speedup"


def anchor_slowdown(a0: Fraction, c: Fraction) -> ClassLine:
    """Open a proof: NTIME[n^a0] is contained in DTS[n^(c*a0)].

    Requires a0 >= 1 and c >= 1; the returned line has no quantifier
    blocks and dts exponent max(c*a0, 1).
    """
    if a0 < 1:
        raise ValueError(f"anchor exponent a0 must be >= 1, got {a0}")
    if c < 1:
        raise ValueError(f"assumed SAT exponent c must be >= 1, got {c}")
    return ClassLine(blocks=(), dts_exp=max(c * a0, ONE))


def apply_speedup(line: ClassLine, x: Fraction) -> ClassLine:
    """Trade n^x of DTS time for one extra alternation.

    From an empty prefix the new outer quantifier is fixed to Exists;
    otherwise the introduced outer quantifier matches the current
    innermost block and merges with it, so the innermost block (q, a, b)
    becomes (q, max(a, x), max(x, b)) and a fresh opposite block with
    guess 1 and feed b is appended innermost.  The log-sized index block
    is encoded with guess exponent 1.  dts drops to max(dts - x, 1).
    """
    if x < 0:
        raise ValueError(f"speedup parameter x must be >= 0, got {x}")
    new_dts = max(line.dts_exp - x, ONE)
    if not line.blocks:
        blocks = (
            QuantifierBlock(EXISTS, x, x),
            QuantifierBlock(FORALL, ONE, ONE),
        )
        return ClassLine(blocks=blocks, dts_exp=new_dts)
    inner = line.innermost
    merged = QuantifierBlock(
        inner.quantifier,
        max(inner.guess_exp, x),
        max(x, inner.feed_exp),
    )
    fresh = QuantifierBlock(opposite(inner.quantifier), ONE, inner.feed_exp)
    return ClassLine(blocks=line.blocks[:-1] + (merged, fresh), dts_exp=new_dts)


def apply_slowdown(line: ClassLine, c: Fraction) -> ClassLine:
    """Remove the innermost block using the assumption SAT in DTS[n^c].

    The new dts exponent is c * max(dts, a, feed_in) where a is the
    removed block's guess exponent and feed_in is the feed exponent of
    the block that becomes innermost (1 when the prefix empties: the
    original input has exponent 1).  The removed block's own feed
    exponent does not enter the max.
    """
    if not line.blocks:
        raise ValueError("slowdown needs a quantifier block to remove")
    if c < 1:
        raise ValueError(f"assumed SAT exponent c must be >= 1, got {c}")
    removed = line.innermost
    rest = line.blocks[:-1]
    feed_in = rest[-1].feed_exp if rest else ONE
    new_dts = c * max(line.dts_exp, removed.guess_exp, feed_in)
    return ClassLine(blocks=rest, dts_exp=new_dts)


def close_line(line: ClassLine) -> Fraction:
    """Final NTIME exponent of a closable line.

    A line closes when at most one block remains and, if one does, it is
    existential (the whole class then sits inside NTIME of the max of
    guess and runtime exponents).
    """
    if len(line.blocks) > 1:
        raise ValueError(f"line with {len(line.blocks)} blocks is not closable")
    if line.blocks:
        block = line.blocks[0]
        if block.quantifier != EXISTS:
            raise ValueError("cannot close a universally quantified line into NTIME")
        return max(line.dts_exp, block.guess_exp)
    return line.dts_exp


def format_class_line(line: ClassLine) -> str:
    """Render a line like ``(∃ n^{32/25})^{32/25}(∀ n^{1})^{1} DTS[n^{2}]``."""
    sym = {EXISTS: "∃", FORALL: "∀"}
    parts = [
        f"({sym[b.quantifier]} n^{{{b.guess_exp}}})^{{{b.feed_exp}}}" for b in line.blocks
    ]
    prefix = "".join(parts)
    sep = " " if prefix else ""
    return f"{prefix}{sep}DTS[n^{{{line.dts_exp}}}]"
