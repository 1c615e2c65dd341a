"""Command-line front end: obfuscate, analyze, metrics, verify, bench.

Exit codes: 0 success, 2 file-level errors or failed verification,
3 fatal configuration/engine problems, 64 usage errors.
Worker count defaults to the SCOPESHIELD_THREADS environment variable.
"""

import argparse
import os
import sys
from pathlib import Path

from . import bench as bench_mod
from .depgraph import build_dependency_graph, format_graph_report, link_cross_file, partition_graph
from .equivalence import load_cases, run_differential, write_verdicts
from .errors import ConflictingExport, EngineNotFound, FatalConfigError, LexError, ParseError
from .externals import load_allowlist
from .lexer import tokenize
from .metrics import measure_tree_pair
from .minify import minify_tokens
from .parser import parse
from .pipeline import (
    ObfuscationConfig,
    discover_files,
    dump_dir_for,
    obfuscate_project,
    write_report,
)
from .scopes import build_scope_tree, format_scope_report

USAGE_EXIT = 64


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(USAGE_EXIT)


def _default_threads():
    env = os.environ.get("SCOPESHIELD_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def build_parser():
    parser = _ArgumentParser(prog="scopeshield", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    ob = sub.add_parser("obfuscate", help="transform a source tree")
    ob.add_argument("--in", dest="input_root", help="input root directory")
    ob.add_argument("--out", dest="output_root", help="output root directory")
    ob.add_argument("--threads", type=int, default=None, help="worker count")
    ob.add_argument("--config", help="JSON config file")
    ob.add_argument("--no-rename", action="store_true")
    ob.add_argument("--no-strings", action="store_true")
    ob.add_argument("--no-prop-access", action="store_true")
    ob.add_argument("--no-minify", action="store_true")
    ob.add_argument("--allowlist", help="external-name allowlist file")
    ob.add_argument("--dump-scopes", action="store_true")
    ob.add_argument("--dump-renames", action="store_true")

    an = sub.add_parser("analyze", help="scope/dependency diagnostics")
    an.add_argument("--in", dest="input_root", required=True)
    an.add_argument("--threads", type=int, default=None)
    an.add_argument("--allowlist")
    an.add_argument("--dump-scopes", action="store_true", help="print per-file scope trees")

    me = sub.add_parser("metrics", help="size/complexity/NID report")
    me.add_argument("--orig", required=True)
    me.add_argument("--obf", required=True)

    ve = sub.add_parser("verify", help="differential equivalence run")
    ve.add_argument("--orig", required=True)
    ve.add_argument("--obf", required=True)
    ve.add_argument("--cases", required=True, help="case manifest JSON")
    ve.add_argument("--engine", default="node {file}")
    ve.add_argument("--threads", type=int, default=None)

    be = sub.add_parser("bench", help="synthetic corpus scaling run")
    be.add_argument("--out", required=True, help="working directory")
    be.add_argument("--total-mb", type=float, default=10.0)
    be.add_argument("--worker-counts", default="1,2,4,8")
    return parser


def _config_from_args(args):
    if args.config:
        config = ObfuscationConfig.from_file(args.config)
    else:
        config = ObfuscationConfig()
    overrides = {
        "input_root": args.input_root,
        "output_root": args.output_root,
        "workers": args.threads if args.threads is not None else (config.workers or _default_threads()),
        "allowlist_path": args.allowlist,
        "rename": False if args.no_rename else None,
        "encode_strings": False if args.no_strings else None,
        "rewrite_properties": False if args.no_prop_access else None,
        "minify": False if args.no_minify else None,
        "dump_scopes": True if args.dump_scopes else None,
        "dump_renames": True if args.dump_renames else None,
    }
    return config.merged(overrides)


def cmd_obfuscate(args):
    try:
        config = _config_from_args(args)
        report = obfuscate_project(config)
    except (FatalConfigError, ConflictingExport) as exc:
        print(f"fatal: {exc}", file=sys.stderr)
        return 3
    path = write_report(report, config.output_root)
    print(f"transformed {report['files_transformed']} files, copied {report['files_copied']}")
    print(f"run report: {path}")
    return 2 if report["errors"] else 0


def cmd_analyze(args):
    allowlist = load_allowlist(args.allowlist)
    root = Path(args.input_root)
    if not root.is_dir():
        print(f"fatal: {root} is not a directory", file=sys.stderr)
        return 3
    js_files, _others = discover_files(args.input_root)
    summaries = []
    had_errors = False
    for rel in js_files:
        text = (root / rel).read_text(encoding="utf-8")
        try:
            tokens = tokenize(text, rel)
            ast, summary = parse(tokens, rel)
        except (LexError, ParseError) as exc:
            print(f"{rel}: {exc}")
            had_errors = True
            continue
        summaries.append(summary)
        if args.dump_scopes:
            tree = build_scope_tree(ast, rel)
            print(f"== {rel}")
            print(format_scope_report(tree))
    graph = build_dependency_graph(summaries, allowlist)
    imap = partition_graph(
        graph,
        args.threads or _default_threads(),
        {s.file_id: s.size for s in summaries},
    )
    try:
        markers, _frozen = link_cross_file(summaries, graph, imap, allowlist)
    except ConflictingExport as exc:
        print(f"fatal: {exc}", file=sys.stderr)
        return 3
    print(format_graph_report(graph, imap))
    print(f"boundary markers: {len(markers)}")
    for marker in markers:
        print(f"  {marker!r}")
    return 2 if had_errors else 0


def cmd_metrics(args):
    report = measure_tree_pair(args.orig, args.obf)
    print(report.to_table())
    json_path = Path(args.obf).parent / (Path(args.obf).name + ".metrics.json")
    json_path.write_text(report.to_json(), encoding="utf-8")
    print(f"metrics report: {json_path}")
    return 0


def cmd_verify(args):
    try:
        cases = load_cases(args.cases)
        verdicts, summary = run_differential(
            args.orig,
            args.obf,
            cases,
            engine=args.engine,
            workers=args.threads or _default_threads(),
            rename_dump_root=dump_dir_for(args.obf),
        )
    except EngineNotFound as exc:
        print(f"fatal: {exc}", file=sys.stderr)
        return 3
    path = Path(args.obf).parent / (Path(args.obf).name + ".verdicts.jsonl")
    write_verdicts(verdicts, path)
    print(
        f"equivalence rate: {summary['equivalence_rate'] * 100:.1f}% "
        f"({summary['equivalent']}/{summary['cases']}), verdicts: {path}"
    )
    for verdict in verdicts:
        if verdict["status"] != "equivalent":
            print(f"  {verdict['status']}: {verdict['entry']}: {verdict['detail']}")
    return 0 if summary["equivalent"] == summary["cases"] else 2


def cmd_bench(args):
    out = Path(args.out)
    corpus = out / "corpus"
    total_bytes = int(args.total_mb * 1024 * 1024)
    written = bench_mod.generate_scaling_corpus(corpus, total_bytes)
    print(f"corpus: {corpus} ({written} bytes)")
    counts = [int(c) for c in args.worker_counts.split(",") if c.strip()]
    rows = bench_mod.run_scaling(corpus, out / "runs", counts)
    print(bench_mod.scaling_table(rows))
    path = bench_mod.write_scaling_json(rows, out / "scaling.json")
    print(f"scaling data: {path}")
    return 0


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "obfuscate": cmd_obfuscate,
        "analyze": cmd_analyze,
        "metrics": cmd_metrics,
        "verify": cmd_verify,
        "bench": cmd_bench,
    }
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
