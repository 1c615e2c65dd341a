"""Performance-preserving obfuscation transforms, applied per unit as patches.

String literals are replaced by indexed calls into a per-unit decoder whose
table is decoded exactly once behind a guard variable; later calls read the
cache. Static property accesses ``obj.prop`` become ``obj[v]`` with ``v`` a
hoisted variable holding the property name, so the rewritten access stays a
direct variable lookup.

All preamble code is hoist-safe: the decoder and its state are function/var
declarations, so calls from anywhere in the module (including code that runs
before the preamble's position) behave correctly.
"""

import base64

from .nodes import walk
from .parser import _string_value
from .patches import Patch

INSTRUMENT_COUNTER = "__scopeshieldDecodes"


class StringTable:
    """Per-unit encoded string table and the names of its runtime pieces."""

    __slots__ = ("entries", "key", "table", "guard", "cache", "decoder", "xform")

    def __init__(self, key, table, guard, cache, decoder, xform):
        self.entries = []  # (original value, encoded payload)
        self.key = key
        self.table = table
        self.guard = guard
        self.cache = cache
        self.decoder = decoder
        self.xform = xform


class PropertySlot:
    __slots__ = ("property_name", "var_name", "hoist_at")

    def __init__(self, property_name, var_name, hoist_at):
        self.property_name = property_name
        self.var_name = var_name
        self.hoist_at = hoist_at


def encode_payload(value, key):
    """XOR the UTF-8 bytes with a rolling key, then base64."""
    data = value.encode("utf-8")
    xored = bytes(b ^ ((key + i) & 0xFF) for i, b in enumerate(data))
    return base64.b64encode(xored).decode("ascii")


def decode_payload(payload, key):
    """Python mirror of the JS decoder; the encode/decode round-trip oracle."""
    xored = base64.b64decode(payload)
    data = bytes(b ^ ((key + i) & 0xFF) for i, b in enumerate(xored))
    return data.decode("utf-8")


# Base64 + rolling-XOR + UTF-8 decoder written against bare ES5 so it runs on
# any engine; locals live in their own function scope.
_DECODER_JS = (
    "function {X}(s){{"
    "var A=\"ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/\","
    "b=[],v=0,q=0,i,c;"
    "for(i=0;i<s.length;i++){{c=A.indexOf(s.charAt(i));if(c<0)continue;"
    "v=v*64+c;q+=6;if(q>=8){{q-=8;b.push((v>>q)&255);v&=(1<<q)-1;}}}}"
    "for(i=0;i<b.length;i++)b[i]^=({K}+i)&255;"
    "var o=\"\",j=0,x,y,z,w,p;"
    "while(j<b.length){{x=b[j++];"
    "if(x<128)p=x;"
    "else if(x<224){{y=b[j++];p=((x&31)<<6)|(y&63);}}"
    "else if(x<240){{y=b[j++];z=b[j++];p=((x&15)<<12)|((y&63)<<6)|(z&63);}}"
    "else{{y=b[j++];z=b[j++];w=b[j++];p=((x&7)<<18)|((y&63)<<12)|((z&63)<<6)|(w&63);}}"
    "if(p>=65536){{p-=65536;o+=String.fromCharCode(55296+(p>>10),56320+(p&1023));}}"
    "else o+=String.fromCharCode(p);}}"
    "return o;}}"
)


def decoder_preamble(table, key, names, instrument=False):
    """Guard + cache + lazy table decode, all hoist-safe declarations.

    Locals inside the generated functions use $-suffixed names the rename
    pool can never produce, so they cannot shadow the injected table, guard,
    cache or transform names.
    """
    t, g, c, d, x = names
    payloads = ",".join('"' + payload + '"' for payload in table)
    instr = (
        f"globalThis.{INSTRUMENT_COUNTER}=(globalThis.{INSTRUMENT_COUNTER}||0)+1;"
        if instrument
        else ""
    )
    body = (
        f"var {t},{g},{c};"
        f"function {d}(n$){{if(!{g}){{{g}=1;{instr}{t}=[{payloads}];{c}=[];"
        f"for(var k$=0;k$<{t}.length;k$++){c}[k$]={x}({t}[k$]);}}return {c}[n$];}}"
    )
    return body + _DECODER_JS.format(X=x, K=key)


def collect_strings(root):
    """Encodable string-literal nodes (object keys, module paths and
    directive-position strings excluded by the parser's aux marks)."""
    return [n for n in walk(root) if n.kind == "string-lit" and n.aux is None]


def collect_property_accesses(root):
    """Dot member accesses eligible for slot rewriting: not a delete target,
    not on ``super``."""
    skip = set()
    out = []
    for node in walk(root):
        if node.kind == "unary" and node.name == "delete":
            target = node.children[0]
            while target.kind == "paren":
                target = target.children[0]
            if target.kind == "member-access":
                skip.add(id(target))
        elif node.kind == "member-access" and node.children[0].kind != "super":
            out.append(node)
    return [n for n in out if id(n) not in skip]


def _in_dynamic_region(tree, pos):
    return tree.dynamic_upward(tree.scope_at(pos))


def encode_strings(unit, key, fresh_names, tree, source, candidates=None, root=None, instrument=False):
    """Encode the unit's eligible string literals.

    Returns (patches, preamble text, StringTable or None). Literals shorter
    than 2 characters, literals with exotic escapes, non-UTF-8-encodable
    values and anything inside a dynamic region are skipped.
    """
    if candidates is None:
        candidates = collect_strings(root)
    table = []
    index_of = {}
    patches = []
    picked = []
    for node in candidates:
        if not unit.contains(node.start, node.end):
            continue
        raw = source[node.start : node.end]
        try:
            value = _string_value(raw)
        except (ValueError, IndexError):
            continue
        if len(value) < 2:
            continue
        try:
            value.encode("utf-8")
        except UnicodeEncodeError:
            continue
        if _in_dynamic_region(tree, node.start):
            continue
        picked.append((node, value))
    if not picked:
        return [], "", None

    names = (next(fresh_names), next(fresh_names), next(fresh_names), next(fresh_names), next(fresh_names))
    string_table = StringTable(key, *names)
    for node, value in picked:
        idx = index_of.get(value)
        if idx is None:
            idx = len(table)
            index_of[value] = idx
            payload = encode_payload(value, key)
            table.append(payload)
            string_table.entries.append((value, payload))
        call = f"{string_table.decoder}({idx})"
        # a quote needs no separator from a preceding keyword (return"x"),
        # but the decoder call does
        if node.start > 0 and (source[node.start - 1].isalnum() or source[node.start - 1] in "_$"):
            call = " " + call
        patches.append(Patch(node.start, node.end, call))
    preamble = decoder_preamble(table, key, names, instrument)
    return patches, preamble, string_table


def rewrite_property_access(unit, fresh_names, tree, candidates=None, root=None, hoist_at=None):
    """Rewrite the unit's ``obj.prop`` accesses to ``obj[v]``.

    Returns (patches, preamble text, PropertySlot list); one slot per
    distinct property name in the unit. ``hoist_at`` records where the
    caller will inject the slot declarations (the top of the enclosing
    function scope, i.e. the module top for top-level units).
    """
    if candidates is None:
        candidates = collect_property_accesses(root)
    if hoist_at is None:
        hoist_at = unit.insert_at
    slots = {}
    patches = []
    for node in candidates:
        span = node.value
        if not unit.contains(span[0], span[1]):
            continue
        if _in_dynamic_region(tree, node.start):
            continue
        slot = slots.get(node.name)
        if slot is None:
            slot = PropertySlot(node.name, next(fresh_names), hoist_at)
            slots[node.name] = slot
        patches.append(Patch(span[0], span[1], f"[{slot.var_name}]"))
    if not slots:
        return [], "", []
    ordered = sorted(slots.values(), key=lambda s: s.var_name)
    decls = ",".join(f'{s.var_name}="{s.property_name}"' for s in ordered)
    return patches, f"var {decls};", ordered
