"""Line-oriented text formats for traces, systems, words, tiles and arithmetic.

``#`` starts a comment in every format.
"""

from __future__ import annotations

import re
from collections.abc import Iterator

from hyperlogic.constructions import (
    ArithAtom,
    ArithBin,
    ArithFormula,
    ArithNot,
    ArithQuant,
    Tile,
    TileSet,
)
from hyperlogic.models import KripkeStructure, LassoTrace, TraceSet, Word


class FormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


_NAME = r"[A-Za-z0-9_]+"
_LETTER = re.compile(r"\{([^{}]*)\}")


def _lines(text: str) -> Iterator[tuple[int, str]]:
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


def _letters(text: str, no: int) -> list[frozenset[str]]:
    out = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _LETTER.match(text, pos)
        if m is None:
            raise FormatError(f"expected a letter like {{a b}} at {text[pos:]!r}", no)
        props = m.group(1).split()
        for p in props:
            if not re.fullmatch(_NAME, p):
                raise FormatError(f"bad proposition {p!r}", no)
        out.append(frozenset(props))
        pos = m.end()
    return out


def show_letter(a: frozenset[str]) -> str:
    return "{" + " ".join(sorted(a)) + "}"


# --------------------------------------------------------------------------
# traces


def parse_traces(text: str) -> TraceSet:
    alphabet = None
    traces = []
    for no, line in _lines(text):
        if line.startswith("props:"):
            if alphabet is not None:
                raise FormatError("duplicate props header", no)
            alphabet = frozenset(line[len("props:"):].split())
            continue
        m = re.fullmatch(rf"trace\s+({_NAME})\s*=\s*([^()]*)\(([^()]*)\)", line)
        if m is None:
            raise FormatError(f"cannot parse {line!r}", no)
        if alphabet is None:
            raise FormatError("props header must come first", no)
        stem, loop = _letters(m.group(2), no), _letters(m.group(3), no)
        if not loop:
            raise FormatError("loop must contain at least one letter", no)
        traces.append((m.group(1), LassoTrace(tuple(stem), tuple(loop))))
    if alphabet is None:
        raise FormatError("missing props header")
    try:
        return TraceSet(tuple(traces), alphabet)
    except ValueError as e:
        raise FormatError(str(e)) from e


def format_traces(T: TraceSet) -> str:
    lines = ["props: " + " ".join(sorted(T.alphabet))]
    for name, t in T.traces:
        stem = "".join(map(show_letter, t.stem))
        loop = " ".join(map(show_letter, t.loop))
        lines.append(f"trace {name} = {stem} ( {loop} )".replace("=  (", "= ("))
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# Kripke structures


def parse_kripke(text: str) -> KripkeStructure:
    labels: dict[str, frozenset[str]] = {}
    edges: dict[str, list[str]] = {}
    initial = None
    for no, line in _lines(text):
        parts = line.split(None, 1)
        kind = parts[0]
        rest = parts[1] if len(parts) > 1 else ""
        if kind == "vertex":
            m = re.fullmatch(rf"({_NAME})\s*(\{{[^{{}}]*\}})?", rest)
            if m is None:
                raise FormatError(f"cannot parse vertex {rest!r}", no)
            name = m.group(1)
            if name in labels:
                raise FormatError(f"duplicate vertex {name}", no)
            labels[name] = _letters(m.group(2) or "{}", no)[0]
            edges[name] = []
        elif kind == "init":
            if initial is not None:
                raise FormatError("duplicate init", no)
            initial = rest.strip()
        elif kind == "edge":
            ends = rest.split()
            if len(ends) != 2:
                raise FormatError("edge needs two vertices", no)
            a, b = ends
            for v in (a, b):
                if v not in labels:
                    raise FormatError(f"unknown vertex {v}", no)
            edges[a].append(b)
        else:
            raise FormatError(f"unknown directive {kind!r}", no)
    if initial is None:
        raise FormatError("missing init")
    try:
        return KripkeStructure(labels, {v: tuple(s) for v, s in edges.items()}, initial, tuple(labels))
    except ValueError as e:
        raise FormatError(str(e)) from e


def format_kripke(K: KripkeStructure) -> str:
    lines = [f"vertex {v} {show_letter(K.labels[v])}" for v in K.vertices]
    lines.append(f"init {K.initial}")
    lines += [f"edge {v} {w}" for v in K.vertices for w in K.edges[v]]
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# words


def parse_word(text: str) -> Word:
    word = None
    for no, line in _lines(text):
        m = re.fullmatch(r"word\s*=\s*(.*)", line)
        if m is None or word is not None:
            raise FormatError(f"expected a single 'word = ...' line, got {line!r}", no)
        word = tuple(_letters(m.group(1), no))
    if word is None:
        raise FormatError("missing word line")
    return word


def format_word(w: Word) -> str:
    return "word = " + "".join(map(show_letter, w)) + "\n"


# --------------------------------------------------------------------------
# tiles


def parse_tiles(text: str) -> TileSet:
    colors = None
    tiles = []
    recurring = None
    for no, line in _lines(text):
        if line.startswith("colors:"):
            colors = tuple(line[len("colors:"):].split())
        elif line.startswith("recurring:"):
            recurring = line[len("recurring:"):].strip()
        elif line.startswith("tile "):
            fields = line.split()
            if len(fields) < 2:
                raise FormatError("tile needs a name", no)
            sides = {}
            for item in fields[2:]:
                key, _, value = item.partition("=")
                if key not in ("north", "south", "east", "west") or not value:
                    raise FormatError(f"bad side {item!r}", no)
                sides[key] = value
            if len(sides) != 4:
                raise FormatError(f"tile {fields[1]} must colour all four sides", no)
            tiles.append(Tile(fields[1], **sides))
        else:
            raise FormatError(f"cannot parse {line!r}", no)
    if colors is None or recurring is None:
        raise FormatError("tile file needs colors: and recurring: lines")
    try:
        return TileSet(colors, tuple(tiles), recurring)
    except ValueError as e:
        raise FormatError(str(e)) from e


def format_tiles(ts: TileSet) -> str:
    lines = ["colors: " + " ".join(ts.colors)]
    lines += [f"tile {t.name} north={t.north} south={t.south} east={t.east} west={t.west}"
              for t in ts.tiles]
    lines.append(f"recurring: {ts.recurring}")
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# arithmetic s-expressions
#
#   (exists3 (X1 X2) BODY)      third-order names, optional
#   (exists x nat BODY)  (forall y set BODY)
#   (in x y) (< x y) (+ x y z) (* x y z)
#   (not F) (and F G ...) (or F G ...) (implies F G)


def _sexpr(text: str):
    code = "\n".join(line.split("#", 1)[0] for line in text.splitlines())
    tokens = re.findall(r"\(|\)|[^\s()]+", code)
    pos = 0

    def read():
        nonlocal pos
        if pos >= len(tokens):
            raise FormatError("unexpected end of s-expression")
        tok = tokens[pos]
        pos += 1
        if tok == "(":
            items = []
            while pos < len(tokens) and tokens[pos] != ")":
                items.append(read())
            if pos >= len(tokens):
                raise FormatError("missing ')'")
            pos += 1
            return items
        if tok == ")":
            raise FormatError("unexpected ')'")
        return tok

    tree = read()
    if pos != len(tokens):
        raise FormatError("trailing input after s-expression")
    return tree


def _arith(node):
    if isinstance(node, str) or not node:
        raise FormatError(f"expected a formula, got {node!r}")
    head, args = node[0], node[1:]
    if head in ("in", "<", "+", "*"):
        if not all(isinstance(a, str) for a in args):
            raise FormatError(f"arguments of {head} must be variables")
        return ArithAtom(head, tuple(args))
    if head == "not":
        if len(args) != 1:
            raise FormatError("not takes one argument")
        return ArithNot(_arith(args[0]))
    if head in ("and", "or"):
        if len(args) < 2:
            raise FormatError(f"{head} takes at least two arguments")
        out = _arith(args[0])
        for a in args[1:]:
            out = ArithBin(head, out, _arith(a))
        return out
    if head == "implies":
        if len(args) != 2:
            raise FormatError("implies takes two arguments")
        return ArithBin("implies", _arith(args[0]), _arith(args[1]))
    if head in ("exists", "forall"):
        if len(args) != 3 or not isinstance(args[0], str) or args[1] not in ("nat", "set"):
            raise FormatError(f"expected ({head} VAR nat|set BODY)")
        return ArithQuant(head, args[0], args[1], _arith(args[2]))
    raise FormatError(f"unknown operator {head!r}")


def parse_arith(text: str) -> ArithFormula:
    tree = _sexpr(text)
    third: tuple[str, ...] = ()
    if isinstance(tree, list) and tree and tree[0] == "exists3":
        if len(tree) != 3 or not isinstance(tree[1], list):
            raise FormatError("expected (exists3 (NAMES...) BODY)")
        third = tuple(tree[1])
        tree = tree[2]
    try:
        return ArithFormula(third, _arith(tree))
    except FormatError:
        raise
    except ValueError as e:
        raise FormatError(str(e)) from e
