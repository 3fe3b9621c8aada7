import pytest
from hypothesis import given, settings, strategies as st

from conftest import golden_traces, run_trace
from lpproof.dk import DkSyntaxError, parse_dk, print_dk
from lpproof.drv import (TraceParseError, parse_indices, parse_partition, parse_path,
                         parse_trace, print_trace)
from lpproof.embedding import emit_prelude
from lpproof.fol import IOTA, SortApp, SortVar
from lpproof.gen import random_refutation
from lpproof.translate import translate_trace

import random


@pytest.mark.parametrize("path", golden_traces(), ids=lambda p: p.stem)
def test_trace_print_parse_roundtrip(path):
    doc = parse_trace(path.read_text())
    again = parse_trace(print_trace(doc))
    assert again.steps == doc.steps
    assert again.symbols == doc.symbols
    assert print_trace(again) == print_trace(doc)


@pytest.mark.parametrize("path", golden_traces(), ids=lambda p: p.stem)
def test_script_parse_print_roundtrip(path):
    items = translate_trace(parse_trace(path.read_text())).items()
    text = print_dk(items)
    back = parse_dk(text)
    assert back == items
    assert print_dk(back) == text


def test_prelude_text_roundtrip():
    text = print_dk(emit_prelude())
    assert parse_dk(text) == emit_prelude()
    assert text.endswith(".\n") and "\r" not in text


def test_printing_is_deterministic():
    trace = random_refutation(random.Random(3))
    a = print_dk(translate_trace(parse_trace(trace)).items())
    b = print_dk(translate_trace(parse_trace(trace)).items())
    assert a == b


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_random_trace_roundtrip(seed):
    doc = parse_trace(random_refutation(random.Random(seed)))
    assert parse_trace(print_trace(doc)).steps == doc.steps


def test_extras_helpers():
    assert parse_indices("2:1") == (2, 1)
    assert parse_path("0.2") == (0, 2)
    assert parse_path("") == ()
    assert parse_partition("1:0,2;2:1") == (("1", (0, 2)), ("2", (1,)))
    with pytest.raises(ValueError):
        parse_indices("a:b")


def test_polymorphic_sorts_are_read():
    doc = parse_trace("format 1 polymorphic.\nsort list 1.\n"
                      "fun nil [A] () list(A).\npred P [A] (list(A)).\n"
                      "step 1 input [] {} | P{iota}(nil{iota}) ; ~P{B}(X:list(B)) | .\n")
    sym = doc.symbol_table()["nil"]
    assert sym.result_sort == SortApp("list", (SortVar("A"),))
    clause = doc.steps[0].conclusion
    assert clause.sort_vars == ("B",)
    assert clause.term_vars == (("X", SortApp("list", (SortVar("B"),))),)
    assert clause.literals[0].atom.sort_args == (IOTA,)


def test_empty_trace_gives_prelude_only_script():
    _, dk, report = run_trace("format 1 cnf.\n")
    assert report.ok
    assert "step_" not in dk


BAD_TRACES = {
    "missing header": "step 1 input [] {} | $false | .\n",
    "unknown logic": "format 1 modal.\n",
    "undeclared function": "format 1 cnf.\nstep 1 input [] {} | = f(a) a | .\n",
    "undeclared predicate": "format 1 cnf.\nstep 1 input [] {} | P | .\n",
    "forward premise": "format 1 cnf.\npred p [] ().\nstep 1 resolution [2,3] {} | $false | lits=0:0.\n",
    "duplicate id": "format 1 cnf.\npred p [] ().\nstep 1 input [] {} | p | .\nstep 1 input [] {} | p | .\n",
    "no final dot": "format 1 cnf.\npred p [] ().\nstep 1 input [] {} | p |\n",
    "literal index out of range": "format 1 cnf.\npred p [] ().\nstep 1 input [] {} | p | .\n"
                                  "step 2 factoring [1] {} | p | lits=0:4.\n",
    "malformed extra": "format 1 cnf.\npred p [] ().\nstep 1 input [] {} | p | .\n"
                       "step 2 factoring [1] {} | p | lits.\n",
    "arity mismatch": "format 1 cnf.\nfun f [] (iota) iota.\npred p [] (iota).\n"
                      "step 1 input [] {} | p(f) | .\n",
    "sort mismatch": "format 1 many-sorted.\nsort s 0.\nfun a [] () s.\npred p [] (iota).\n"
                     "step 1 input [] {} | p(a) | .\n",
    "stray character": "format 1 cnf.\npred p [] ().\nstep 1 input [] {} | p & p | .\n",
}


@pytest.mark.parametrize("name", sorted(BAD_TRACES))
def test_malformed_traces_are_rejected(name):
    with pytest.raises(TraceParseError) as err:
        parse_trace(BAD_TRACES[name])
    assert err.value.line >= 1


@pytest.mark.parametrize("text", ["a : .", "def : A.", "[x] f x --> .", "a : (A.", "a : A"])
def test_malformed_scripts_are_rejected(text):
    with pytest.raises(DkSyntaxError):
        parse_dk(text)
