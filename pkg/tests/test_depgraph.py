from itertools import product

import pytest

from scopeshield.depgraph import (
    BoundaryMarker,
    build_dependency_graph,
    link_cross_file,
    partition_graph,
    resolve_import,
)
from scopeshield.errors import ConflictingExport
from scopeshield.parser import FileSummary


def make_summary(file_id, imports=(), exports=(), declared=(), free=(), size=100):
    s = FileSummary(file_id)
    s.imports = list(imports)
    s.exports = list(exports)
    s.export_pairs = [(n, n) for n in exports]
    s.declared_globals = list(declared)
    s.free_names = list(free)
    s.size = size
    return s


def test_import_edge():
    a = make_summary("a.js", imports=[("./b.js", ["f"])])
    b = make_summary("b.js", exports=["f"], declared=["f"])
    graph = build_dependency_graph([a, b])
    assert graph.edges == {("a.js", "b.js"): {"f"}}


def test_shared_implicit_global_edge():
    # pairwise-intersection oracle: the only name both files touch freely
    a = make_summary("a.js", free=["GameGlobal", "console"])
    b = make_summary("b.js", free=["GameGlobal"])
    graph = build_dependency_graph([a, b], allowlist={"console"})
    shared = set()
    for name in set(a.free_names) & set(b.free_names):
        if name != "console":
            shared.add(name)
    assert graph.edges == {("a.js", "b.js"): shared} and shared == {"GameGlobal"}


def test_self_contained_files_have_no_edges():
    graph = build_dependency_graph(
        [make_summary("a.js", declared=["x"]), make_summary("b.js", declared=["x"])]
    )
    assert graph.edges == {}


def test_unresolved_import_recorded():
    a = make_summary("a.js", imports=[("./missing.js", ["gone"])])
    graph = build_dependency_graph([a])
    assert graph.unresolved == [("a.js", "./missing.js")]


def test_resolve_import_paths():
    files = {"lib/util.js", "main.js"}
    assert resolve_import("main.js", "./lib/util.js", files) == "lib/util.js"
    assert resolve_import("lib/util.js", "../main.js", files) == "main.js"
    assert resolve_import("main.js", "./lib/util", files) == "lib/util.js"
    assert resolve_import("main.js", "left-pad", files) is None


def test_k1_single_partition_zero_cut():
    a = make_summary("a.js", imports=[("./b.js", ["f"])])
    b = make_summary("b.js", exports=["f"])
    graph = build_dependency_graph([a, b])
    imap = partition_graph(graph, 1)
    assert set(imap.partitions.values()) == {0}
    assert imap.cut_weight == 0


def test_disconnected_components_split_cleanly():
    a = make_summary("a.js", imports=[("./b.js", ["f"])])
    b = make_summary("b.js", exports=["f"])
    c = make_summary("c.js", imports=[("./d.js", ["g"])])
    d = make_summary("d.js", exports=["g"])
    graph = build_dependency_graph([a, b, c, d])
    imap = partition_graph(graph, 2)
    # exhaustive: no edge crosses partitions
    for (x, y), _names in graph.edges.items():
        assert imap.partition_of(x) == imap.partition_of(y)
    assert imap.cut_weight == 0
    assert len(set(imap.partitions.values())) == 2


def test_chain_cut_weight_matches_brute_force():
    a = make_summary("a.js", imports=[("./b.js", ["f"])])
    b = make_summary("b.js", exports=["f"], imports=[("./c.js", ["g"])])
    c = make_summary("c.js", exports=["g"])
    graph = build_dependency_graph([a, b, c])
    imap = partition_graph(graph, 2)

    def cut_of(assign):
        return sum(
            len(names)
            for (x, y), names in graph.edges.items()
            if assign[x] != assign[y]
        )

    # brute force over all 2-partitions that actually use both partitions
    best = min(
        cut_of(dict(zip(graph.files, combo)))
        for combo in product([0, 1], repeat=3)
        if len(set(combo)) == 2
    )
    assert best == 1
    assert imap.cut_weight == 1  # one edge crosses, never two


def test_partition_deterministic_under_input_order():
    files = [
        make_summary("a.js", imports=[("./b.js", ["f"])], size=300),
        make_summary("b.js", exports=["f"], size=200),
        make_summary("c.js", free=["Shared"], size=100),
        make_summary("d.js", free=["Shared"], size=400),
    ]
    graph1 = build_dependency_graph(files)
    imap1 = partition_graph(graph1, 2, {s.file_id: s.size for s in files})
    graph2 = build_dependency_graph(list(reversed(files)))
    imap2 = partition_graph(graph2, 2, {s.file_id: s.size for s in files})
    assert imap1.partitions == imap2.partitions
    assert imap1.cut_weight == imap2.cut_weight


def test_marker_for_consumed_export():
    a = make_summary("a.js", imports=[("./b.js", ["f"])])
    b = make_summary("b.js", exports=["f"])
    graph = build_dependency_graph([a, b])
    imap = partition_graph(graph, 2)
    markers, frozen = link_cross_file([a, b], graph, imap)
    consumed = [m for m in markers if m.identifier == "f"]
    assert len(consumed) == 1
    marker = consumed[0]
    assert marker.owner_partition == imap.partition_of("b.js")
    assert marker.consumer_partitions == (imap.partition_of("a.js"),)
    assert marker.frozen_name == "f"
    assert "f" in frozen["b.js"]


def test_marker_for_shared_undeclared_global_is_frozen_to_original():
    a = make_summary("a.js", free=["GameGlobal"])
    b = make_summary("b.js", free=["GameGlobal"])
    graph = build_dependency_graph([a, b])
    imap = partition_graph(graph, 2)
    markers, _ = link_cross_file([a, b], graph, imap)
    assert [m.frozen_name for m in markers] == ["GameGlobal"]
    assert markers[0].binding.is_global()


def test_no_cross_names_means_no_markers():
    a = make_summary("a.js", declared=["x"])
    b = make_summary("b.js", declared=["y"])
    graph = build_dependency_graph([a, b])
    imap = partition_graph(graph, 2)
    markers, frozen = link_cross_file([a, b], graph, imap)
    assert markers == []
    assert frozen == {"a.js": set(), "b.js": set()}


def test_module_declaration_read_as_implicit_global_gets_frozen():
    a = make_summary("a.js", declared=["Registry"])
    b = make_summary("b.js", free=["Registry"])
    graph = build_dependency_graph([a, b])
    imap = partition_graph(graph, 2)
    markers, frozen = link_cross_file([a, b], graph, imap)
    assert "Registry" in frozen["a.js"]
    assert any(m.identifier == "Registry" and not m.binding.is_global() for m in markers)


def test_conflicting_export_detected():
    a = make_summary("a.js", declared=["Dup"])
    b = make_summary("b.js", declared=["Dup"])
    c = make_summary("c.js", free=["Dup"])
    graph = build_dependency_graph([a, b, c])
    imap = partition_graph(graph, 2)
    with pytest.raises(ConflictingExport):
        link_cross_file([a, b, c], graph, imap)


def test_allowlist_names_never_create_edges_or_markers():
    a = make_summary("a.js", free=["console", "Math"])
    b = make_summary("b.js", free=["console"])
    graph = build_dependency_graph([a, b], allowlist={"console", "Math"})
    assert graph.edges == {}
    imap = partition_graph(graph, 2)
    markers, _ = link_cross_file([a, b], graph, imap, allowlist={"console", "Math"})
    assert markers == []
