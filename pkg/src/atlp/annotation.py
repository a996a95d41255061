"""Rule-sequence grammar: validation, enumeration and local neighborhoods.

An annotation fixes a proof's shape as a string over {D, S}: D applies a
Slowdown, S a Speedup.  The first tag is always the anchor slowdown from
NTIME.  Walking the string keeps a running block count m (0 after the
anchor): S maps 0 -> 2 (the first speedup creates two blocks) and
otherwise m -> m+1, D after the anchor needs m >= 1 and maps m -> m-1.
A string is valid when every prefix respects this and the final m is 0
or 1, so the last line closes into NTIME.
"""

from __future__ import annotations

from dataclasses import dataclass

SLOWDOWN_TAG = "D"
SPEEDUP_TAG = "S"

# error kinds reported by validate()
STARTS_WITH_S = "StartsWithS"
SLOWDOWN_ON_EMPTY_PREFIX = "SlowdownOnEmptyPrefix"
UNCLOSABLE_END = "UnclosableEnd"
ENDS_WITH_SPEEDUP = "EndsWithSpeedup"
EMPTY = "Empty"
BAD_TAG = "BadTag"


class AnnotationError(ValueError):
    """Invalid rule sequence; carries the kind and first offending position."""

    def __init__(self, kind: str, position: int | None = None, final_m: int | None = None):
        self.kind = kind
        self.position = position
        self.final_m = final_m
        detail = ""
        if position is not None:
            detail = f" at position {position}"
        if final_m is not None:
            detail = f" (final block count {final_m})"
        super().__init__(f"{kind}{detail}")


@dataclass(frozen=True)
class Annotation:
    """A validated D/S rule sequence; construct through :func:`validate`."""

    tags: str

    def __str__(self) -> str:
        return self.tags

    def __len__(self) -> int:
        return len(self.tags)

    def block_trace(self) -> list[int]:
        """Block count after each tag, e.g. DSSDDSD -> [0,2,3,2,1,2,1]."""
        trace = []
        m = 0
        for i, tag in enumerate(self.tags):
            if i == 0:
                trace.append(0)
                continue
            m = 2 if (tag == SPEEDUP_TAG and m == 0) else (m + 1 if tag == SPEEDUP_TAG else m - 1)
            trace.append(m)
        return trace


def validate(tags: str) -> Annotation:
    """Return the Annotation iff ``tags`` is a well-formed rule sequence.

    Raises AnnotationError naming the first violation: a sequence must
    start with D, never apply D on an empty prefix, and end closable
    (final block count 0 or 1, which forces a trailing D).
    """
    if not tags:
        raise AnnotationError(EMPTY)
    for i, tag in enumerate(tags):
        if tag not in (SLOWDOWN_TAG, SPEEDUP_TAG):
            raise AnnotationError(BAD_TAG, position=i)
    if tags[0] != SLOWDOWN_TAG:
        raise AnnotationError(STARTS_WITH_S, position=0)
    m = 0
    for i, tag in enumerate(tags[1:], start=1):
        if tag == SPEEDUP_TAG:
            m = 2 if m == 0 else m + 1
        else:
            if m == 0:
                raise AnnotationError(SLOWDOWN_ON_EMPTY_PREFIX, position=i)
            m -= 1
    if m > 1:
        raise AnnotationError(UNCLOSABLE_END, final_m=m)
    if tags[-1] == SPEEDUP_TAG:
        # unreachable given the trace algebra (a speedup leaves m >= 2)
        raise AnnotationError(ENDS_WITH_SPEEDUP, position=len(tags) - 1)
    return Annotation(tags)


def is_valid(tags: str) -> bool:
    try:
        validate(tags)
    except AnnotationError:
        return False
    return True


def enumerate_annotations(length: int) -> list[Annotation]:
    """All valid annotations of exactly ``length``, lexicographic (D < S)."""
    if length < 1:
        raise ValueError(f"length must be >= 1, got {length}")
    found: list[Annotation] = []

    def extend(prefix: list[str], m: int, remaining: int) -> None:
        if remaining == 0:
            if m <= 1:
                found.append(Annotation("".join(prefix)))
            return
        # even all-D suffixes cannot close from too high a block count
        if m - remaining > 1:
            return
        if m >= 1:
            prefix.append(SLOWDOWN_TAG)
            extend(prefix, m - 1, remaining - 1)
            prefix.pop()
        prefix.append(SPEEDUP_TAG)
        extend(prefix, 2 if m == 0 else m + 1, remaining - 1)
        prefix.pop()

    extend([SLOWDOWN_TAG], 0, length - 1)
    return found


def neighbors(a: Annotation) -> list[Annotation]:
    """Valid annotations one S/D insertion pair away, plus one deletion away.

    Insertion places an S and, at the same or a later position, a D
    (length + 2); deletion removes one S and one later D (length - 2).
    The result is deduplicated and ordered by (length, lexicographic).
    """
    tags = a.tags
    seen: set[str] = set()
    for i in range(len(tags) + 1):
        with_s = tags[:i] + SPEEDUP_TAG + tags[i:]
        for j in range(i + 1, len(with_s) + 1):
            candidate = with_s[:j] + SLOWDOWN_TAG + with_s[j:]
            if candidate not in seen and is_valid(candidate):
                seen.add(candidate)
    for i in range(len(tags)):
        if tags[i] != SPEEDUP_TAG:
            continue
        for j in range(i + 1, len(tags)):
            if tags[j] != SLOWDOWN_TAG:
                continue
            candidate = tags[:i] + tags[i + 1 : j] + tags[j + 1 :]
            if candidate and candidate not in seen and is_valid(candidate):
                seen.add(candidate)
    ordered = sorted(seen, key=lambda s: (len(s), s))
    return [Annotation(s) for s in ordered]
