"""Token type and the identifier/keyword tables used across the package."""


class Token:
    """One lexical token.

    ``text`` is the exact source slice, so concatenating the text of all
    tokens of a file reproduces the file. Spans are half-open offsets into
    the decoded source text.
    """

    __slots__ = ("kind", "text", "start", "end")

    def __init__(self, kind, text, start, end):
        self.kind = kind
        self.text = text
        self.start = start
        self.end = end

    def __repr__(self):
        return f"Token({self.kind}, {self.text!r}, {self.start}, {self.end})"

    def __eq__(self, other):
        return (
            isinstance(other, Token)
            and self.kind == other.kind
            and self.text == other.text
            and self.start == other.start
            and self.end == other.end
        )


# Token kinds
IDENT = "identifier"
KEYWORD = "keyword"
STRING = "string-literal"
NUMBER = "numeric-literal"
TEMPLATE = "template-literal"
PUNCT = "punctuator"
REGEX = "regex-literal"
COMMENT = "comment"
WHITESPACE = "whitespace"

KEYWORDS = frozenset(
    """
    break case catch class const continue debugger default delete do else
    enum export extends false finally for function if import in instanceof
    new null return super switch this throw true try typeof var void while
    with yield let static of async await
    """.split()
)

# Words that must never be emitted as fresh identifiers: every keyword above
# plus strict-mode reserved words and contextual keywords that would make the
# output ambiguous to downstream parsers.
RESERVED_WORDS = KEYWORDS | frozenset(
    "implements interface package private protected public get set as from".split()
)
