import random

import pytest

from scopeshield.errors import OverlappingPatches
from scopeshield.patches import Patch, emit


def naive_apply(source, patches):
    """Independent oracle: apply patches one at a time, end to start."""
    for patch in sorted(patches, key=lambda p: p.start, reverse=True):
        source = source[: patch.start] + patch.replacement + source[patch.end :]
    return source


def test_single_substitution():
    assert emit("var alpha;", [Patch(4, 9, "a")]) == "var a;"


def test_empty_patch_list_is_identity():
    src = "function f() { return 1; }"
    assert emit(src, []) == src


def test_adjacent_patches_match_sequential_oracle():
    src = "abcdef"
    patches = [Patch(0, 2, "X"), Patch(2, 4, "YY")]
    assert emit(src, patches) == naive_apply(src, patches) == "XYYef"


def test_random_patch_sets_match_naive_oracle():
    rng = random.Random(99)
    for _ in range(200):
        src = "".join(rng.choice("abcdefgh ;,()") for _ in range(rng.randrange(5, 60)))
        cuts = sorted(rng.sample(range(len(src) + 1), rng.randrange(2, min(8, len(src)))))
        patches = []
        for lo, hi in zip(cuts, cuts[1:]):
            if rng.random() < 0.5:
                span_hi = rng.randrange(lo, hi + 1)
                patches.append(Patch(lo, span_hi, rng.choice(["", "Z", "QQ"])))
        rng.shuffle(patches)
        assert emit(src, patches) == naive_apply(src, patches)


def test_insertion_patch():
    assert emit("ab", [Patch(1, 1, "X")]) == "aXb"


def test_insertion_before_replacement_at_same_offset():
    assert emit("ab", [Patch(1, 2, "Y"), Patch(1, 1, "X")]) == "aXY"


def test_overlapping_patches_rejected():
    with pytest.raises(OverlappingPatches):
        emit("abcdef", [Patch(0, 3, "x"), Patch(2, 4, "y")])


def test_out_of_range_patch_rejected():
    with pytest.raises(OverlappingPatches):
        emit("ab", [Patch(1, 5, "x")])
