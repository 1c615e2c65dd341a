"""Synthetic scaling corpus and the worker-count benchmark.

The corpus is a set of independent modules (no imports, no shared globals)
generated deterministically from per-file seeds, so runs are reproducible and
every file can be processed without coordination.
"""

import json
import random
import time
from math import ceil
from pathlib import Path

from .pipeline import ObfuscationConfig, obfuscate_project

_NOUNS = (
    "order entry player score level bonus item cache packet frame sprite "
    "widget record bucket token vector matrix signal buffer segment handle "
    "market ticket wallet session avatar terrain physics"
).split()
_VERBS = (
    "process update compute merge filter collect resolve validate encode "
    "schedule dispatch animate simulate accumulate normalize"
).split()
_STRINGS = (
    "ready pending failed completed unknown critical northwest southeast "
    "crimson amber violet turquoise inventory leaderboard checkpoint"
).split()


def _camel(rng, words):
    head = rng.choice(words)
    tail = rng.choice(words).capitalize()
    return head + tail + str(rng.randrange(100))


def _synth_function(rng, index):
    fn = _camel(rng, _VERBS)
    items = _camel(rng, _NOUNS)
    rate = _camel(rng, _NOUNS)
    total = _camel(rng, _NOUNS)
    entry = _camel(rng, _NOUNS)
    limit = rng.randrange(3, 40)
    factor = rng.randrange(2, 9)
    label = rng.choice(_STRINGS)
    other = rng.choice(_STRINGS)
    return (
        f"function {fn}{index}({items},{rate}){{"
        f"var {total}=0;"
        f'var tag="{label}-{other}-{rng.randrange(1000)}";'
        f"for(var i=0;i<{items}.length;i++){{"
        f"var {entry}={items}[i];"
        f"if({entry}.amount>{limit}){{{total}+={entry}.amount*{rate};}}"
        f"else if({entry}.weight<{factor}){{{total}+={entry}.weight+{factor};}}"
        f"else{{{total}+=1;}}"
        f"}}"
        f"return {total}>0?{total}+tag.length:{entry}&&0;"
        f"}}\n"
    )


def synth_module(seed, target_bytes=65536):
    """Deterministic self-contained module of roughly ``target_bytes``."""
    rng = random.Random(seed)
    parts = [f'var moduleTag{seed & 0xFFFF}="synthetic-{seed}";\n']
    size = len(parts[0])
    index = 0
    while size < target_bytes:
        block = _synth_function(rng, index)
        parts.append(block)
        size += len(block)
        index += 1
    return "".join(parts)


def generate_scaling_corpus(root, total_bytes, file_bytes=65536, seed=1):
    """Write independent modules under ``root`` until ``total_bytes``."""
    root = Path(root)
    root.mkdir(parents=True, exist_ok=True)
    count = max(1, ceil(total_bytes / file_bytes))
    written = 0
    for i in range(count):
        text = synth_module(seed * 100003 + i, file_bytes)
        path = root / f"mod_{i:05d}.js"
        path.write_text(text, encoding="utf-8")
        written += len(text)
    return written


def run_scaling(corpus_root, out_base, worker_counts=(1, 2, 4, 8), config=None):
    """Obfuscate the corpus once per worker count; returns timing rows."""
    rows = []
    out_base = Path(out_base)
    for workers in worker_counts:
        cfg_kwargs = dict(config.__dict__) if config is not None else {}
        cfg_kwargs.update(
            input_root=str(corpus_root),
            output_root=str(out_base / f"workers_{workers}"),
            workers=workers,
        )
        cfg = ObfuscationConfig(**cfg_kwargs)
        started = time.perf_counter()
        report = obfuscate_project(cfg)
        elapsed = time.perf_counter() - started
        rows.append({"workers": workers, "seconds": round(elapsed, 3), "report": report})
    return rows


def scaling_table(rows):
    base = rows[0]["seconds"]
    lines = [f"{'workers':>8} {'seconds':>9} {'speedup':>8}"]
    for row in rows:
        speedup = base / row["seconds"] if row["seconds"] else float("inf")
        lines.append(f"{row['workers']:>8} {row['seconds']:>9.3f} {speedup:>7.2f}x")
    return "\n".join(lines)


def write_scaling_json(rows, path):
    slim = [
        {
            "workers": row["workers"],
            "seconds": row["seconds"],
            "files": row["report"]["files_total"],
            "input_bytes": row["report"]["input_bytes"],
            "output_bytes": row["report"]["output_bytes"],
            "peak_memory_bytes": row["report"]["peak_memory_bytes"],
        }
        for row in rows
    ]
    Path(path).write_text(json.dumps(slim, indent=2), encoding="utf-8")
    return path
