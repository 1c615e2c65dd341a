import random
from itertools import product

import pytest

from scopeshield.errors import MarkerConflict, OrderViolation
from scopeshield.depgraph import BoundaryMarker
from scopeshield.lexer import tokenize
from scopeshield.parser import parse_ast
from scopeshield.patches import emit
from scopeshield.renamer import (
    RenameMap,
    ancestor_reference_map,
    check_safety,
    cost,
    forbidden_set,
    merge_maps,
    name_sequence,
    pool_name,
    rename_patches,
    rename_tree,
)
from scopeshield.scopes import Binding, build_scope_tree, global_binding
from scopeshield.tokens import RESERVED_WORDS

from conftest import run_node
from treegen import random_scope_tree, uniform_usage


def tree_of(src, file_id="t.js"):
    root, _ = parse_ast(tokenize(src, file_id), file_id)
    return build_scope_tree(root, file_id)


# ---- name pool ----

def test_pool_first_name():
    assert pool_name(0) == "a"


def test_pool_rolls_to_two_letters():
    assert pool_name(25) == "z"
    assert pool_name(26) == "aa"


def test_pool_skips_reserved_words():
    seq = name_sequence()
    first_1000 = [next(seq) for _ in range(1000)]
    assert not set(first_1000) & {"do", "if", "in", "for", "new", "var", "let", "try"}
    assert not set(first_1000) & RESERVED_WORDS
    assert len(set(first_1000)) == 1000


def test_pool_lengths_non_decreasing():
    seq = name_sequence()
    lengths = [len(next(seq)) for _ in range(800)]
    assert lengths == sorted(lengths)


def test_pool_respects_excluded():
    assert pool_name(0, excluded={"a", "b"}) == "c"


# ---- forbidden sets ----

def test_forbidden_empty_for_root_without_markers():
    tree = tree_of("var a = 1;")
    assert forbidden_set(tree, tree.root, RenameMap()) == set()


def test_forbidden_contains_renamed_ancestor_referenced_inside():
    tree = tree_of("var outer = 1; function f(){ return outer; }")
    rmap = RenameMap()
    rmap.assign(Binding("t.js", 0, "outer"), "a")
    rmap.assign(Binding("t.js", 0, "f"), "b")
    fn_scope = 1
    assert "a" in forbidden_set(tree, fn_scope, rmap)


def test_unreferenced_ancestor_name_is_reusable():
    src = "var outer = 1; function f(){ var mine = 2; return mine; } outer = f();"
    tree = tree_of(src)
    rmap = rename_tree(tree)
    # neither module binding is referenced inside f, so f restarts at "a"
    # even though a module binding already took it
    assert rmap.get(Binding("t.js", 1, "mine")) == "a"
    assert "a" in {rmap.get(Binding("t.js", 0, "f")), rmap.get(Binding("t.js", 0, "outer"))}
    assert check_safety([tree], rmap) == []


def test_order_violation_when_ancestor_unrenamed():
    tree = tree_of("var outer = 1; function f(){ return outer; }")
    with pytest.raises(OrderViolation):
        forbidden_set(tree, 1, RenameMap())


# ---- renaming ----

def test_params_then_vars_get_shortest_names():
    tree = tree_of("function f(alpha){var beta=alpha; return beta}")
    rmap = rename_tree(tree)
    assert rmap.get(Binding("t.js", 1, "alpha")) == "a"
    assert rmap.get(Binding("t.js", 1, "beta")) == "b"
    assert rmap.get(Binding("t.js", 0, "f")) == "a"  # module level, not exported
    assert check_safety([tree], rmap) == []


def test_sibling_functions_reuse_the_same_short_name():
    tree = tree_of("function f(){ var one; } function g(){ var two; }")
    rmap = rename_tree(tree)
    assert rmap.get(Binding("t.js", 1, "one")) == "a"
    assert rmap.get(Binding("t.js", 2, "two")) == "a"


def test_dynamic_scope_keeps_names():
    tree = tree_of("function f(){ var secret = 1; return eval('secret'); }")
    rmap = rename_tree(tree)
    assert rmap.get(Binding("t.js", 1, "secret")) == "secret"
    assert rmap.get(Binding("t.js", 0, "f")) == "f"  # visible at the eval


def test_frozen_module_names_and_allowlist():
    tree = tree_of("var keep = 1; var ren = 2; console.log(keep + ren);")
    rmap = rename_tree(tree, frozen_module_names={"keep"}, allowlist={"console"})
    assert rmap.get(Binding("t.js", 0, "keep")) == "keep"
    assert rmap.get(Binding("t.js", 0, "ren")) == "a"
    assert check_safety([tree], rmap) == []


def test_deterministic():
    src = "function f(a1){var b1; function g(){let c1; return a1;} return g()+b1;}"
    tree1, tree2 = tree_of(src), tree_of(src)
    m1 = rename_tree(tree1)
    m2 = rename_tree(tree2)
    assert dict(m1.items()) == dict(m2.items())


# ---- merge ----

def test_merge_disjoint_maps_is_union():
    m1, m2 = RenameMap(), RenameMap()
    m1.assign(Binding("a.js", 0, "x"), "a", 2)
    m2.assign(Binding("b.js", 0, "y"), "a", 3)
    merged = merge_maps([m1, m2])
    assert len(merged) == 2
    assert merged.usage[Binding("a.js", 0, "x")] == 2


def test_merge_enforces_marker_freeze():
    m1 = RenameMap()
    binding = Binding("b.js", 0, "f")
    marker = BoundaryMarker("f", 0, [1], binding, "f")
    merged = merge_maps([m1], [marker])
    assert merged.get(binding) == "f"


def test_merge_detects_marker_conflict():
    m1 = RenameMap()
    binding = Binding("b.js", 0, "f")
    m1.assign(binding, "zz")
    marker = BoundaryMarker("f", 0, [1], binding, "f")
    with pytest.raises(MarkerConflict):
        merge_maps([m1], [marker])


def test_merge_detects_disagreeing_maps():
    binding = Binding("a.js", 0, "x")
    m1, m2 = RenameMap(), RenameMap()
    m1.assign(binding, "a")
    m2.assign(binding, "b")
    with pytest.raises(MarkerConflict):
        merge_maps([m1, m2])


# ---- safety oracle ----

def test_identity_map_is_safe():
    tree = tree_of("var a = 1; function f(b){ return a + b; }")
    assert check_safety([tree], RenameMap()) == []


def test_capture_is_flagged():
    # outer x renamed to "a" while the inner scope declares "a" and still
    # references x: the reference now resolves to the inner declaration
    tree = tree_of("var x = 1; function f(){ var y = 2; return x + y; }")
    bad = RenameMap()
    bad.assign(Binding("t.js", 0, "x"), "a")
    bad.assign(Binding("t.js", 0, "f"), "f")
    bad.assign(Binding("t.js", 1, "y"), "a")
    violations = check_safety([tree], bad)
    assert violations and any("captured" in v.reason for v in violations)


def test_non_injective_scope_is_flagged():
    tree = tree_of("var p = 1; var q = 2; console.log(p + q);")
    bad = RenameMap()
    bad.assign(Binding("t.js", 0, "p"), "a")
    bad.assign(Binding("t.js", 0, "q"), "a")
    violations = check_safety([tree], bad)
    assert any("two declarations" in v.reason for v in violations)


def test_naive_visibility_rule_creates_capture_caught_by_oracle():
    # the classic shadow-capture gap: f itself never references outer, only
    # the nested g does, so the naive rule lets f's local take outer's name
    src = (
        "var outer = 1;\n"
        "function f() { var local = 2; function g() { return outer; } return g() + local; }\n"
        "console.log(f());\n"
    )
    tree = tree_of(src)
    naive = rename_tree(tree, subtree_refs=False)
    violations = check_safety([tree], naive)
    assert violations, "oracle must flag the capture the naive rule produces"
    tight = rename_tree(tree, subtree_refs=True)
    assert check_safety([tree], tight) == []
    # and the damage is real: the naive output computes a different value
    out_naive = run_node(code=emit(src, rename_patches(tree, naive)))
    out_tight = run_node(code=emit(src, rename_patches(tree, tight)))
    original = run_node(code=src)
    assert out_tight == original
    assert out_naive != original


def test_renamer_output_safe_on_random_trees():
    rng = random.Random(4242)
    for _ in range(300):
        tree = random_scope_tree(rng)
        rmap = rename_tree(tree)
        assert check_safety([tree], rmap) == []


# ---- cost ----

def test_cost_single_binding():
    m = RenameMap()
    m.assign(Binding("a.js", 0, "x"), "a", 3)
    assert cost(m) == 3


def test_cost_weighted_lengths():
    m = RenameMap()
    m.assign(Binding("a.js", 0, "x"), "a", 2)
    m.assign(Binding("a.js", 0, "y"), "aa", 1)
    assert cost(m) == 2 * 1 + 1 * 2


def brute_force_min_cost(tree, alphabet="ab", pool_size=8, usage=1):
    """Enumerate every safe assignment from a finite pool; independent of the
    greedy path."""
    bindings = []
    for node in tree.nodes:
        for name in sorted(node.declarations):
            bindings.append(Binding(tree.file_id, node.id, name))
    pool = [pool_name(i, alphabet=alphabet) for i in range(pool_size)]
    best = None
    for combo in product(pool, repeat=len(bindings)):
        candidate = RenameMap()
        for binding, new_name in zip(bindings, combo):
            candidate.assign(binding, new_name, usage)
        if check_safety([tree], candidate):
            continue
        total = cost(candidate)
        if best is None or total < best:
            best = total
    return best


def test_partition_count_does_not_change_the_merged_map():
    # the same three files renamed as one partition and as three partitions
    # must merge to identical maps, and both must pass the safety oracle
    sources = {
        "a.js": "function alpha(n){ var acc = n * 2; return acc; } console.log(alpha(3));",
        "b.js": "function beta(){ let hidden = 5; return hidden; }",
        "c.js": "var shared = 1; function gamma(){ return shared + 1; }",
    }
    from scopeshield.renamer import rename_partition

    def trees():
        return [tree_of(src, file_id) for file_id, src in sorted(sources.items())]

    single = rename_partition(trees(), allowlist={"console"})
    per_file_maps = [
        rename_partition([tree], allowlist={"console"}) for tree in trees()
    ]
    split = merge_maps(per_file_maps)
    assert dict(single.items()) == dict(split.items())
    assert check_safety(trees(), single) == []
    assert check_safety(trees(), split) == []


def test_greedy_matches_brute_force_on_small_trees():
    rng = random.Random(99)
    checked = 0
    while checked < 60:
        tree = uniform_usage(random_scope_tree(rng, max_depth=3, max_bindings=4))
        n_bindings = sum(len(n.declarations) for n in tree.nodes)
        if not 1 <= n_bindings <= 4:
            continue
        greedy = rename_tree(tree, alphabet="ab")
        assert check_safety([tree], greedy) == []
        greedy_cost = cost(greedy)
        oracle = brute_force_min_cost(tree)
        assert oracle is not None
        assert greedy_cost == oracle, f"greedy {greedy_cost} != brute force {oracle}"
        checked += 1
