import pytest
from hypothesis import given
from hypothesis import strategies as st
from strategies import traces

from hyperlogic.constructions import Tile, TileSet
from hyperlogic.formats import (
    FormatError,
    format_kripke,
    format_tiles,
    format_traces,
    format_word,
    parse_arith,
    parse_kripke,
    parse_tiles,
    parse_traces,
    parse_word,
)
from hyperlogic.models import TraceSet, letter

TRACES = """\
# two traces
props: a b dollar
trace t1 = {a}{a b} ( {} {b} )
trace t2 = ( {dollar} )
"""


def test_parse_traces():
    T = parse_traces(TRACES)
    assert T.names == ("t1", "t2")
    t1 = T.get("t1")
    assert t1.stem == (letter("a"), letter("a", "b")) and t1.loop == (letter(), letter("b"))
    assert T.alphabet == {"a", "b", "dollar"}


@pytest.mark.parametrize("text, line", [
    ("trace t = ( {} )\n", 1),
    ("props: a\ntrace t = {a} ()\n", 2),
    ("props: a\ntrace t = {c} ( {} )\n", None),
    ("props: a\ntrace t = {a ( {} )\n", 2),
    ("props: a\nprops: b\n", 2),
    ("", None),
])
def test_trace_errors(text, line):
    with pytest.raises(FormatError) as e:
        parse_traces(text)
    assert e.value.line == line


@given(st.lists(traces(("a", "b")), min_size=1, max_size=3))
def test_trace_round_trip(ts):
    T = TraceSet.of(ts, ["a", "b"])
    assert parse_traces(format_traces(T)) == T


def test_kripke_round_trip_and_errors():
    text = "vertex u {a}\nvertex w\ninit u\nedge u w\nedge w w\nedge u u\n"
    K = parse_kripke(text)
    assert K.edges["u"] == ("w", "u") and K.labels["w"] == letter()
    assert parse_kripke(format_kripke(K)) == K
    for bad in ["vertex u {a}\nedge u u\n", "vertex u\ninit u\n", "vertex u\nvertex u\ninit u\nedge u u\n",
                "vertex u\ninit u\nedge u v\n", "node u\n"]:
        with pytest.raises(FormatError):
            parse_kripke(bad)


def test_word_round_trip():
    w = parse_word("word = {a}{}{a b}\n")
    assert w == (letter("a"), letter(), letter("a", "b"))
    assert parse_word(format_word(w)) == w
    with pytest.raises(FormatError):
        parse_word("word = {a}\nword = {}\n")
    with pytest.raises(FormatError):
        parse_word("")


def test_tiles_round_trip():
    ts = TileSet(("c", "d"), (Tile("A", "c", "c", "c", "d"), Tile("B", "d", "c", "c", "c")), "B")
    assert parse_tiles(format_tiles(ts)) == ts
    with pytest.raises(FormatError):
        parse_tiles("colors: c\ntile A north=c south=c east=c\nrecurring: A\n")
    with pytest.raises(FormatError):
        parse_tiles("colors: c\ntile A north=c south=c east=c west=d\nrecurring: A\n")
    with pytest.raises(FormatError):
        parse_tiles("colors: c\ntile x north=c south=c east=c west=c\nrecurring: x\n")


def test_parse_arith():
    phi = parse_arith("""
        # every number has a successor
        (exists3 (X1)
          (forall x nat (exists y set (and (in x y) (in y X1)))))""")
    assert phi.third == ("X1",)
    for bad in ["(exists x nat", "(foo x)", "(exists x real (< x x))", "(in x y)", "(and (< x x))",
                "(exists x nat (< x x)) extra"]:
        with pytest.raises((FormatError, ValueError)):
            parse_arith(bad)
