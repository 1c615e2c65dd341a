"""Lossless tokenizer for the supported JavaScript subset.

Every byte of the input ends up in exactly one token, so concatenating
``token.text`` over the stream reproduces the file. Template literals with
interpolation are emitted as several ``template-literal`` chunks with the
interpolated expressions lexed normally in between.
"""

import re

from .errors import InvalidCharacter, UnterminatedString, UnterminatedTemplate
from .tokens import (
    COMMENT,
    IDENT,
    KEYWORD,
    KEYWORDS,
    NUMBER,
    PUNCT,
    REGEX,
    STRING,
    TEMPLATE,
    Token,
    WHITESPACE,
)

_WS_RE = re.compile(r"[ \t\v\f\r\n ﻿  ]+")
_IDENT_RE = re.compile(r"[A-Za-z_$][A-Za-z0-9_$]*")
_NUMBER_RE = re.compile(
    r"0[xX][0-9a-fA-F]+n?|0[bB][01]+n?|0[oO][0-7]+n?"
    r"|(?:[0-9]+\.?[0-9]*|\.[0-9]+)(?:[eE][+-]?[0-9]+)?n?"
)
_DQUOTE_RE = re.compile(r'"(?:[^"\\\n\r]|\\[\s\S])*"')
_SQUOTE_RE = re.compile(r"'(?:[^'\\\n\r]|\\[\s\S])*'")
_LINE_COMMENT_RE = re.compile(r"//[^\n\r  ]*")
_REGEX_RE = re.compile(
    r"/(?:[^/\\\[\n\r]|\\[^\n\r]|\[(?:[^\]\\\n\r]|\\[^\n\r])*\])+/[A-Za-z]*"
)

_PUNCT_4 = frozenset({">>>="})
_PUNCT_3 = frozenset({"===", "!==", "**=", "<<=", ">>=", ">>>", "...", "&&=", "||=", "??="})
_PUNCT_2 = frozenset(
    {
        "==", "!=", "<=", ">=", "&&", "||", "??", "?.", "=>", "**", "++", "--",
        "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<", ">>",
    }
)
_PUNCT_1 = frozenset("{}()[];,<>+-*/%&|^!~?:=.")

_WS_CHARS = frozenset(" \t\v\f\r\n ﻿  ")
_IDENT_START = frozenset("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_$")
_DIGITS = frozenset("0123456789")

# Tokens after which a `/` starts a regular expression rather than division.
_REGEX_AFTER_KEYWORD = frozenset(
    """
    return typeof instanceof in of new delete void throw case do else yield
    await
    """.split()
)
# `)` `]` end value expressions; `}` is treated as ending one too, which is
# right for object literals and harmless for blocks in practice.
_NO_REGEX_AFTER_PUNCT = frozenset({")", "]", "}", "++", "--"})


def tokenize(source, file_id="<input>"):
    """Split ``source`` into a lossless token list.

    Raises UnterminatedString / UnterminatedTemplate / InvalidCharacter with
    the file id and offset of the problem.
    """
    tokens = []
    append = tokens.append
    pos = 0
    n = len(source)
    # Each entry: [`{` nesting depth inside one interpolation, template start]
    template_stack = []
    prev_kind = None
    prev_text = None

    while pos < n:
        ch = source[pos]

        if ch in _IDENT_START:
            m = _IDENT_RE.match(source, pos)
            end = m.end()
            text = m.group()
            kind = KEYWORD if text in KEYWORDS else IDENT
            append(Token(kind, text, pos, end))
            prev_kind, prev_text = kind, text
            pos = end
            continue

        if ch in _WS_CHARS:
            m = _WS_RE.match(source, pos)
            end = m.end()
            append(Token(WHITESPACE, source[pos:end], pos, end))
            pos = end
            continue

        if ch in _DIGITS or (ch == "." and pos + 1 < n and source[pos + 1] in _DIGITS):
            m = _NUMBER_RE.match(source, pos)
            end = m.end()
            append(Token(NUMBER, source[pos:end], pos, end))
            prev_kind, prev_text = NUMBER, None
            pos = end
            continue

        if ch == '"' or ch == "'":
            m = (_DQUOTE_RE if ch == '"' else _SQUOTE_RE).match(source, pos)
            if m is None:
                raise UnterminatedString("unterminated string literal", file_id, pos)
            end = m.end()
            append(Token(STRING, source[pos:end], pos, end))
            prev_kind, prev_text = STRING, None
            pos = end
            continue

        if ch == "/":
            nxt = source[pos + 1] if pos + 1 < n else ""
            if nxt == "/":
                m = _LINE_COMMENT_RE.match(source, pos)
                end = m.end()
                append(Token(COMMENT, source[pos:end], pos, end))
                pos = end
                continue
            if nxt == "*":
                end = source.find("*/", pos + 2)
                if end < 0:
                    raise InvalidCharacter("unterminated block comment", file_id, pos)
                end += 2
                append(Token(COMMENT, source[pos:end], pos, end))
                pos = end
                continue
            if _regex_allowed(prev_kind, prev_text):
                m = _REGEX_RE.match(source, pos)
                if m is not None:
                    end = m.end()
                    append(Token(REGEX, source[pos:end], pos, end))
                    prev_kind, prev_text = REGEX, None
                    pos = end
                    continue
            # fall through to punctuator handling for / and /=

        if ch == "`":
            pos = _scan_template(source, pos, file_id, append, template_stack)
            prev_kind, prev_text = TEMPLATE, None
            continue

        if ch == "}" and template_stack and template_stack[-1][0] == 0:
            template_stack.pop()
            pos = _scan_template(source, pos, file_id, append, template_stack)
            prev_kind, prev_text = TEMPLATE, None
            continue

        chunk = source[pos : pos + 4]
        if chunk in _PUNCT_4:
            text = chunk
        elif chunk[:3] in _PUNCT_3:
            text = chunk[:3]
        elif chunk[:2] in _PUNCT_2:
            text = chunk[:2]
        elif ch in _PUNCT_1:
            text = ch
        else:
            raise InvalidCharacter(f"unexpected character {ch!r}", file_id, pos)
        if template_stack:
            if text == "{":
                template_stack[-1][0] += 1
            elif text == "}":
                template_stack[-1][0] -= 1
        end = pos + len(text)
        append(Token(PUNCT, text, pos, end))
        prev_kind, prev_text = PUNCT, text
        pos = end

    if template_stack:
        raise UnterminatedTemplate(
            "unterminated template literal", file_id, template_stack[-1][1]
        )
    return tokens


def _regex_allowed(prev_kind, prev_text):
    if prev_kind is None:
        return True
    if prev_kind == PUNCT:
        return prev_text not in _NO_REGEX_AFTER_PUNCT
    if prev_kind == KEYWORD:
        return prev_text in _REGEX_AFTER_KEYWORD
    return False


def _scan_template(source, start, file_id, append, template_stack):
    """Scan one template chunk starting at ``` ` ``` or at a resuming ``}``.

    Emits a single template-literal token covering the chunk. If the chunk
    ends in ``${``, an interpolation context is pushed so the main loop lexes
    the embedded expression normally.
    """
    i = start + 1
    n = len(source)
    while i < n:
        ch = source[i]
        if ch == "\\":
            i += 2
            continue
        if ch == "`":
            append(Token(TEMPLATE, source[start : i + 1], start, i + 1))
            return i + 1
        if ch == "$" and i + 1 < n and source[i + 1] == "{":
            append(Token(TEMPLATE, source[start : i + 2], start, i + 2))
            template_stack.append([0, start])
            return i + 2
        i += 1
    raise UnterminatedTemplate("unterminated template literal", file_id, start)
