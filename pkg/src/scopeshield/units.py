"""Independent unit planning.

A unit is a contiguous run of top-level statements that can be transformed
without looking at the rest of the program: every reference inside it either
resolves to a declaration inside the unit or to a name listed in the unit's
external dependency metadata (module-level names of the same file, cross-file
boundary names, globals). Small statement groups are coalesced so no unit is
below ``min_bytes``; together the units cover the whole file.
"""

from bisect import bisect_right

DEFAULT_MIN_UNIT_BYTES = 4096


class IndependentUnit:
    __slots__ = ("unit_id", "file_id", "start", "end", "insert_at", "external_names", "scope_ids")

    def __init__(self, unit_id, file_id, start, end, insert_at, external_names, scope_ids):
        self.unit_id = unit_id
        self.file_id = file_id
        self.start = start
        self.end = end
        self.insert_at = insert_at
        self.external_names = external_names
        self.scope_ids = scope_ids

    def contains(self, start, end):
        return self.start <= start and end <= self.end

    def __repr__(self):
        return f"IndependentUnit({self.file_id}#{self.unit_id} [{self.start},{self.end}))"


def plan_units(root, tree, file_length, min_bytes=DEFAULT_MIN_UNIT_BYTES):
    """Split one file into units along top-level statement boundaries.

    The first unit's insertion point skips any directive prologue so injected
    preambles cannot demote "use strict".
    """
    stmts = root.children
    if not stmts or file_length == 0:
        return []

    insert_first = 0
    for stmt in stmts:
        if (
            stmt.kind == "expr-stmt"
            and stmt.children
            and stmt.children[0].kind == "string-lit"
        ):
            insert_first = stmt.end
            continue
        insert_first = max(insert_first, stmt.start) if insert_first else stmt.start
        break

    groups = []
    group_start = 0
    group_first_stmt = stmts[0].start
    for idx, stmt in enumerate(stmts):
        last = idx == len(stmts) - 1
        end = file_length if last else stmt.end
        if last or end - group_start >= min_bytes:
            groups.append((group_start, end, group_first_stmt))
            if not last:
                group_start = end
                group_first_stmt = stmts[idx + 1].start
    units = []
    for unit_id, (start, end, first_stmt) in enumerate(groups):
        insert_at = insert_first if unit_id == 0 else first_stmt
        units.append(IndependentUnit(unit_id, tree.file_id, start, end, insert_at, (), ()))

    _fill_metadata(units, tree)
    return units


def _fill_metadata(units, tree):
    starts = [u.start for u in units]
    external = [set() for _ in units]
    covered = [set() for _ in units]

    module_decl_spans = {
        name: decl.span for name, decl in tree.nodes[tree.root].declarations.items()
    }

    for occ in tree.occurrences:
        idx = bisect_right(starts, occ.start) - 1
        if idx < 0 or occ.end > units[idx].end:
            continue
        binding = tree.resolve(occ.name, occ.scope_id)
        if binding.is_global():
            external[idx].add(occ.name)
            continue
        if binding.scope_id == tree.root:
            span = module_decl_spans[binding.name]
            if not units[idx].contains(span[0], span[1]):
                external[idx].add(occ.name)

    for node in tree.nodes:
        if node.id == tree.root:
            continue
        idx = bisect_right(starts, node.start) - 1
        if idx >= 0 and units[idx].contains(node.start, node.end):
            covered[idx].add(node.id)

    for idx, unit in enumerate(units):
        unit.external_names = tuple(sorted(external[idx]))
        unit.scope_ids = tuple(sorted(covered[idx]))


def check_self_containment(units, tree):
    """Oracle for the unit invariant: every reference inside a unit resolves
    inside the unit or to a listed external name. Returns violations."""
    problems = []
    module_decl_spans = {
        name: decl.span for name, decl in tree.nodes[tree.root].declarations.items()
    }
    for unit in units:
        listed = set(unit.external_names)
        for occ in tree.occurrences:
            if not unit.contains(occ.start, occ.end):
                continue
            binding = tree.resolve(occ.name, occ.scope_id)
            if binding.is_global():
                ok = occ.name in listed
            elif binding.scope_id == tree.root:
                span = module_decl_spans[binding.name]
                ok = unit.contains(span[0], span[1]) or occ.name in listed
            else:
                node = tree.nodes[binding.scope_id]
                ok = unit.contains(node.start, node.end)
            if not ok:
                problems.append((unit.unit_id, occ.name, (occ.start, occ.end)))
    return problems
