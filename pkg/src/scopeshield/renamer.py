"""Scope-aware shortest-identifier renaming.

Scopes are processed ancestor-first; each scope restarts assignment from the
shortest pool name against its own forbidden set, so sibling scopes reuse the
same short names. A scope's forbidden set contains the output name of every
outer binding that is referenced anywhere in the scope's subtree (the subtree
part closes the shadow-capture gap a naive "visible here" rule leaves open),
plus every frozen name visible there.

``check_safety`` is an independent oracle: it re-resolves every identifier
occurrence in the renamed scope structure and reports any occurrence whose
binding changed.
"""

from itertools import product

from .errors import MarkerConflict, OrderViolation
from .scopes import GLOBAL_SCOPE, Binding, global_binding
from .tokens import RESERVED_WORDS

ALPHABET = "abcdefghijklmnopqrstuvwxyz"


def name_sequence(excluded=frozenset(), alphabet=ALPHABET):
    """Yield candidate identifiers in non-decreasing length order (a..z, aa,
    ab, ...), skipping reserved words and ``excluded``."""
    length = 1
    while True:
        for letters in product(alphabet, repeat=length):
            name = "".join(letters)
            if name in RESERVED_WORDS or name in excluded:
                continue
            yield name
        length += 1


def pool_name(index, excluded=frozenset(), alphabet=ALPHABET):
    """The index-th name of the filtered pool."""
    seq = name_sequence(excluded, alphabet)
    for _ in range(index):
        next(seq)
    return next(seq)


class RenameMap:
    """Binding -> output name, with usage counts for the cost metric.

    Bindings absent from the map are implicitly frozen to their original
    name; ``name_or_original`` makes that total.
    """

    def __init__(self):
        self.names = {}
        self.usage = {}

    def assign(self, binding, name, usage=0):
        self.names[binding] = name
        self.usage[binding] = usage

    def get(self, binding):
        return self.names.get(binding)

    def name_or_original(self, binding):
        return self.names.get(binding, binding.name)

    def __len__(self):
        return len(self.names)

    def __contains__(self, binding):
        return binding in self.names

    def items(self):
        return self.names.items()

    def dump_lines(self):
        """`scopeId<TAB>original<TAB>renamed` lines, deterministic order."""
        rows = []
        for binding, name in self.names.items():
            scope = f"{binding.file_id}#{binding.scope_id}"
            rows.append(f"{scope}\t{binding.name}\t{name}")
        rows.sort()
        return rows


def ancestor_reference_map(tree, subtree_refs=True):
    """For each scope, the set of outer bindings its subtree references.

    With ``subtree_refs`` the binding is charged to every scope between the
    occurrence and the declaring scope; without it (the naive visibility
    reading) only to the occurrence's own scope.
    """
    refs = {sid: set() for sid in range(len(tree.nodes))}
    for occ in tree.occurrences:
        binding = tree.resolve(occ.name, occ.scope_id)
        if binding.scope_id == occ.scope_id and not binding.is_global():
            continue
        if not subtree_refs:
            refs[occ.scope_id].add(binding)
            continue
        sid = occ.scope_id
        while sid is not None and sid != binding.scope_id:
            refs[sid].add(binding)
            sid = tree.nodes[sid].parent
    return refs


def forbidden_set(tree, scope_id, rename_map, anc_refs=None, extra_frozen=(), subtree_refs=True):
    """Names scope ``scope_id`` may not hand out.

    Raises OrderViolation when an outer binding has not been renamed yet,
    which would mean scopes are being processed out of ancestor-first order.
    """
    if anc_refs is None:
        anc_refs = ancestor_reference_map(tree, subtree_refs)
    forbidden = set(extra_frozen)
    for binding in anc_refs[scope_id]:
        if binding.is_global():
            forbidden.add(binding.name)
            continue
        name = rename_map.get(binding)
        if name is None:
            raise OrderViolation(
                f"scope {binding.scope_id} must be renamed before scope {scope_id}"
            )
        forbidden.add(name)
    return forbidden


def frozen_bindings(tree, frozen_module_names=()):
    """Bindings that keep their original names.

    Frozen: every binding visible at a dynamic scope (the scope itself and
    all its ancestors, since evaluated code may reference anything in sight),
    import bindings, and module-level names pinned by the cross-file link
    (exports and shared implicit globals).
    """
    frozen = set()
    pinned = set(frozen_module_names)
    tainted = tree.scopes_with_dynamic_inside()
    for sid in tree.preorder():
        node = tree.nodes[sid]
        for name, decl in node.declarations.items():
            if sid in tainted or decl.category == "import":
                frozen.add(Binding(tree.file_id, sid, name))
            elif sid == tree.root and name in pinned:
                frozen.add(Binding(tree.file_id, sid, name))
    return frozen


def rename_tree(tree, frozen_module_names=(), allowlist=(), subtree_refs=True, alphabet=ALPHABET):
    """Rename one file's tree; returns a RenameMap covering every binding."""
    rename_map = RenameMap()
    frozen = frozen_bindings(tree, frozen_module_names)
    anc_refs = ancestor_reference_map(tree, subtree_refs)
    pool_excluded = frozenset(allowlist)
    for sid in tree.preorder():
        node = tree.nodes[sid]
        if not node.declarations:
            continue
        forbidden = forbidden_set(tree, sid, rename_map, anc_refs)
        for name, decl in node.declarations.items():
            if Binding(tree.file_id, sid, name) in frozen:
                forbidden.add(name)
        names = name_sequence(pool_excluded, alphabet)
        ordered = sorted(node.declarations.values(), key=lambda d: d.rank())
        for decl in ordered:
            binding = Binding(tree.file_id, sid, decl.name)
            if binding in frozen:
                rename_map.assign(binding, decl.name, decl.usage)
                continue
            candidate = next(names)
            while candidate in forbidden:
                candidate = next(names)
            forbidden.add(candidate)
            rename_map.assign(binding, candidate, decl.usage)
    return rename_map


def rename_partition(trees, markers=(), frozen_by_file=None, allowlist=(), subtree_refs=True):
    """Rename every file tree of one partition and merge the results.

    Files in a partition share no renameable bindings (cross-file names are
    frozen by the linking phase), so each tree is renamed independently
    against the shared frozen context.
    """
    frozen_by_file = frozen_by_file or {}
    maps = []
    for tree in trees:
        pinned = frozen_by_file.get(tree.file_id, ())
        maps.append(rename_tree(tree, pinned, allowlist, subtree_refs))
    return merge_maps(maps, markers)


def merge_maps(maps, markers=()):
    """Union of per-partition maps; marker bindings must agree everywhere."""
    merged = RenameMap()
    for rename_map in maps:
        for binding, name in rename_map.items():
            existing = merged.get(binding)
            if existing is not None and existing != name:
                raise MarkerConflict(
                    f"{binding} renamed to both {existing!r} and {name!r}"
                )
            merged.assign(binding, name, rename_map.usage.get(binding, 0))
    for marker in markers:
        existing = merged.get(marker.binding)
        if existing is not None and existing != marker.frozen_name:
            raise MarkerConflict(
                f"boundary name {marker.identifier!r} frozen as "
                f"{marker.frozen_name!r} but partition assigned {existing!r}"
            )
        merged.assign(
            marker.binding, marker.frozen_name, merged.usage.get(marker.binding, 0)
        )
    return merged


class SafetyViolation:
    __slots__ = ("file_id", "name", "span", "reason")

    def __init__(self, file_id, name, span, reason):
        self.file_id = file_id
        self.name = name
        self.span = span
        self.reason = reason

    def __repr__(self):
        return f"SafetyViolation({self.file_id}, {self.name!r} at {self.span}: {self.reason})"


def check_safety(trees, rename_map):
    """Re-resolve every occurrence under the renamed scope structure.

    Returns a list of violations; empty means the renaming preserves every
    resolution. Also flags non-injective renaming within one scope.
    """
    violations = []
    for tree in trees:
        renamed_decls = []
        for node in tree.nodes:
            mapping = {}
            for name in node.declarations:
                binding = Binding(tree.file_id, node.id, name)
                new_name = rename_map.name_or_original(binding)
                if new_name in mapping:
                    violations.append(
                        SafetyViolation(
                            tree.file_id,
                            name,
                            node.declarations[name].span,
                            f"scope {node.id} maps two declarations to {new_name!r}",
                        )
                    )
                mapping[new_name] = binding
            renamed_decls.append(mapping)
        for occ in tree.occurrences:
            binding = tree.resolve(occ.name, occ.scope_id)
            new_name = rename_map.name_or_original(binding)
            resolved = None
            sid = occ.scope_id
            while sid is not None:
                hit = renamed_decls[sid].get(new_name)
                if hit is not None:
                    resolved = hit
                    break
                sid = tree.nodes[sid].parent
            if resolved is None:
                if not binding.is_global():
                    violations.append(
                        SafetyViolation(
                            tree.file_id,
                            occ.name,
                            (occ.start, occ.end),
                            f"{new_name!r} no longer resolves to a declaration",
                        )
                    )
            elif resolved != binding:
                violations.append(
                    SafetyViolation(
                        tree.file_id,
                        occ.name,
                        (occ.start, occ.end),
                        f"{new_name!r} is captured by scope {resolved.scope_id}",
                    )
                )
    return violations


def cost(rename_map):
    """Total weighted length: sum of |output name| * usage per binding."""
    total = 0
    for binding, name in rename_map.items():
        total += len(name) * rename_map.usage.get(binding, 0)
    return total


def rename_patches(tree, rename_map):
    """Span patches rewriting every occurrence to its binding's output name.

    Shorthand object properties `{x}` become `{x: y}` so the property key
    keeps its public name.
    """
    from .patches import Patch

    patches = []
    for occ in tree.occurrences:
        binding = tree.resolve(occ.name, occ.scope_id)
        new_name = rename_map.name_or_original(binding)
        if new_name == occ.name:
            continue
        if occ.style == "shorthand":
            patches.append(Patch(occ.start, occ.end, f"{occ.name}: {new_name}"))
        else:
            patches.append(Patch(occ.start, occ.end, new_name))
    return patches
