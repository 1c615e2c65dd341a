"""Span-based text patching.

Transforms never rebuild source from an AST; they produce a list of byte-span
replacements against the original text and ``emit`` applies them in one pass.
"""

from .errors import OverlappingPatches


class Patch:
    """Replace the half-open span [start, end) with ``replacement``.

    A zero-width span (start == end) is an insertion before ``start``.
    """

    __slots__ = ("start", "end", "replacement")

    def __init__(self, start, end, replacement):
        self.start = start
        self.end = end
        self.replacement = replacement

    def __repr__(self):
        return f"Patch([{self.start},{self.end}) -> {self.replacement!r})"

    def __eq__(self, other):
        return (
            isinstance(other, Patch)
            and self.start == other.start
            and self.end == other.end
            and self.replacement == other.replacement
        )


def emit(source, patches):
    """Apply non-overlapping patches to ``source`` and return the new text.

    Patches may arrive in any order; they are sorted here. Overlap is an
    internal invariant violation and raises OverlappingPatches, which makes
    the caller abort the file rather than emit corrupt output.
    """
    if not patches:
        return source
    ordered = sorted(patches, key=lambda p: (p.start, p.end))
    parts = []
    cursor = 0
    for patch in ordered:
        if patch.start < cursor or patch.end < patch.start or patch.end > len(source):
            raise OverlappingPatches(
                f"patch [{patch.start},{patch.end}) overlaps text already "
                f"emitted up to {cursor}"
            )
        parts.append(source[cursor : patch.start])
        parts.append(patch.replacement)
        cursor = patch.end
    parts.append(source[cursor:])
    return "".join(parts)
