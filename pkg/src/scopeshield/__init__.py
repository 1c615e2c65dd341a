"""scopeshield: scope-aware parallel JavaScript obfuscator.

Pipeline: lossless lexing and span-faithful patching, per-file scope
analysis, cross-file dependency linking with frozen boundary names,
shortest-identifier renaming with an independent safety oracle, and
performance-preserving string/property transforms, plus metrics and a
differential equivalence harness.
"""

from .equivalence import TestCase, run_differential
from .errors import ScopeShieldError
from .lexer import tokenize
from .metrics import cyclomatic_complexity, nid, size_inflation
from .minify import minify
from .parser import parse
from .patches import Patch, emit
from .pipeline import ObfuscationConfig, obfuscate_project
from .renamer import RenameMap, check_safety, cost, pool_name, rename_tree
from .scopes import Binding, ScopeTree, build_scope_tree

__all__ = [
    "Binding",
    "ObfuscationConfig",
    "Patch",
    "RenameMap",
    "ScopeShieldError",
    "ScopeTree",
    "TestCase",
    "build_scope_tree",
    "check_safety",
    "cost",
    "cyclomatic_complexity",
    "emit",
    "minify",
    "nid",
    "obfuscate_project",
    "parse",
    "pool_name",
    "rename_tree",
    "run_differential",
    "size_inflation",
    "tokenize",
]

__version__ = "0.1.0"
