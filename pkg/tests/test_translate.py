import pytest

from conftest import GOLDEN, equation_flips, golden_traces, run_trace
from lpproof.drv import parse_trace
from lpproof.embedding import avatar_clause_type
from lpproof.fol import Equation, Fn, Literal, Var
from lpproof.kernel import Comment, Const, SignatureEntry, conv, infer
from lpproof.translate import (TranslationError, Translator, repair_orientation,
                               translate_trace)

HEADER = """format 1 cnf.
fun a [] () iota.
fun b [] () iota.
fun c [] () iota.
fun f [] (iota) iota.
pred P [] (iota).
pred Q [] (iota).
"""


def check(body: str):
    script, dk, report = run_trace(HEADER + body)
    assert report.ok, report.summary()
    return script, dk


def fails(body: str, match=None):
    with pytest.raises(TranslationError, match=match):
        translate_trace(parse_trace(HEADER + body))


@pytest.mark.parametrize("path", golden_traces(), ids=lambda p: p.stem)
def test_golden_traces_check(path):
    script, _, report = run_trace(path.read_text())
    assert report.ok, report.summary()


@pytest.mark.parametrize("path", golden_traces(), ids=lambda p: p.stem)
def test_conclusion_fidelity(path):
    """Each step constant has exactly the type of its trace line, rebuilt independently."""
    doc = parse_trace(path.read_text())
    script, _, report = run_trace(path.read_text())
    sig = report.signature
    known = set()
    for step in doc.steps:
        if step.rule == "avatar_definition":
            known.add(step.extras["split"])
            continue
        if step.rule == "avatar_split":
            continue
        expected = avatar_clause_type(step.conclusion, step.conditions, known)
        assert conv(sig, sig.type_of(f"step_{step.id}"), expected)
        assert conv(sig, infer(sig, {}, Const(f"step_{step.id}")), expected)


def test_resolution_either_premise_order():
    check("step 1 input [] {} | P(X) ; Q(X) | .\n"
          "step 2 input [] {} | ~P(a) | .\n"
          "step 3 resolution [2,1] {} | Q(a) | lits=0:0.\n"
          "step 4 resolution [1,2] {} | Q(a) | lits=0:0.\n")


def test_resolution_conclusion_in_any_literal_order():
    check("step 1 input [] {} | Q(X) ; P(X) ; ~Q(b) | .\n"
          "step 2 input [] {} | ~P(a) | .\n"
          "step 3 resolution [1,2] {} | ~Q(b) ; Q(a) | lits=1:0.\n")


def test_resolution_renamed_conclusion_variables():
    check("step 1 input [] {} | P(X) ; Q(Y) | .\n"
          "step 2 input [] {} | ~P(f(Z)) | .\n"
          "step 3 resolution [1,2] {} | Q(W) | lits=0:0.\n")


def test_resolution_on_mirrored_equations():
    check("step 1 input [] {} | = a f(X) ; P(X) | .\n"
          "step 2 input [] {} | != f(b) a | .\n"
          "step 3 resolution [1,2] {} | P(b) | lits=0:0.\n")


def test_eliminated_variables_are_inhabited():
    _, dk = check("step 1 input [] {} | P(X) | .\n"
                  "step 2 input [] {} | ~P(Y) | .\n"
                  "step 3 resolution [1,2] {} | $false | lits=0:0.\n")
    assert "star iota" in dk


def test_factoring_reuses_continuation():
    _, dk = check("step 1 input [] {} | P(X) ; P(a) ; Q(X) | .\n"
                  "step 2 factoring [1] {} | P(a) ; Q(a) | lits=0:1.\n")
    assert "step_1 u_a l1 l1 l2" in dk


def test_equality_resolution_uses_reflexivity():
    _, dk = check("step 1 input [] {} | != f(X) f(a) ; P(X) | .\n"
                  "step 2 equality_resolution [1] {} | P(a) | lits=0.\n")
    assert "refl iota (u_f u_a)" in dk


def test_superposition_right_to_left():
    check("step 1 input [] {} | = a f(b) | .\n"
          "step 2 input [] {} | P(a) | .\n"
          "step 3 superposition [1,2] {} | P(f(b)) | lits=0:0 pos=0 dir=lr.\n"
          "step 4 superposition [1,3] {} | P(a) | lits=0:0 pos=0 dir=rl.\n")


def test_superposition_position_is_searched_when_missing():
    check("step 1 input [] {} | = f(X) X | .\n"
          "step 2 input [] {} | ~P(f(f(a))) | .\n"
          "step 3 superposition [1,2] {} | ~P(f(a)) | lits=0:0.\n")


def test_superposition_into_negative_equation_side():
    check("step 1 input [] {} | = f(X) a | .\n"
          "step 2 input [] {} | != b f(c) | .\n"
          "step 3 superposition [1,2] {} | != b a | lits=0:0 pos=1.\n"
          "step 4 superposition [1,2] {} | != a b | lits=0:0 pos=1.\n")


def test_demodulation_does_not_instantiate_target():
    fails("step 1 input [] {} | = f(a) b | .\n"
          "step 2 input [] {} | P(f(X)) | .\n"
          "step 3 demodulation [1,2] {} | P(b) | lits=0:0 pos=0.\n", "corrupted")


def test_subsumption_resolution_alias():
    check("step 1 input [] {} | P(a) ; Q(b) | .\n"
          "step 2 input [] {} | ~P(X) | .\n"
          "step 3 subsumption_resolution [1,2] {} | Q(b) | lits=0:0.\n")


# -- corrupted traces ---------------------------------------------------------

def test_wrong_conclusion_rejected():
    fails("step 1 input [] {} | P(X) ; Q(X) | .\n"
          "step 2 input [] {} | ~P(a) | .\n"
          "step 3 resolution [1,2] {} | Q(b) | lits=0:0.\n", "corrupted")


def test_same_polarity_rejected():
    fails("step 1 input [] {} | P(X) | .\n"
          "step 2 input [] {} | P(a) | .\n"
          "step 3 resolution [1,2] {} | $false | lits=0:0.\n", "polarity")


def test_dropped_literal_rejected():
    fails("step 1 input [] {} | P(X) ; Q(X) | .\n"
          "step 2 input [] {} | ~P(a) | .\n"
          "step 3 resolution [1,2] {} | $false | lits=0:0.\n")


def test_bad_rewrite_rejected():
    fails("step 1 input [] {} | = f(X) a | .\n"
          "step 2 input [] {} | P(f(b)) | .\n"
          "step 3 superposition [1,2] {} | P(b) | lits=0:0 pos=0.\n")


def test_dropped_condition_rejected():
    fails("step 1 avatar_definition [] {} | P(X) | split=1.\n"
          "step 2 avatar_component [1] {+1} | P(X) | split=1.\n"
          "step 3 input [] {} | ~P(a) | .\n"
          "step 4 resolution [2,3] {} | $false | lits=0:0.\n", "missing from the conclusion")


def test_condition_weakening_is_noted():
    tr = Translator()
    tr.translate(parse_trace(HEADER + "step 1 avatar_definition [] {} | P(X) | split=1.\n"
                             "step 2 avatar_definition [] {} | Q(X) | split=2.\n"
                             "step 3 avatar_component [1] {+1} | P(X) | split=1.\n"
                             "step 4 input [] {} | ~P(a) | .\n"
                             "step 5 resolution [3,4] {+1,-2} | $false | lits=0:0.\n"))
    assert any("step 5" in n for n in tr.notes)


def test_split_must_partition():
    fails("step 1 input [] {} | P(X) ; Q(Y) | .\n"
          "step 2 avatar_definition [] {} | P(X) | split=1.\n"
          "step 3 avatar_split [1] {} | $false | split=1:0.\n", "partition")


def test_split_components_must_be_variable_disjoint():
    fails("step 1 input [] {} | P(X) ; Q(X) | .\n"
          "step 2 avatar_definition [] {} | P(X) | split=1.\n"
          "step 3 avatar_definition [] {} | Q(X) | split=2.\n"
          "step 4 avatar_split [1] {} | $false | split=1:0;2:1.\n", "share variables")


def test_split_block_must_be_renaming():
    fails("step 1 input [] {} | P(a) ; Q(Y) | .\n"
          "step 2 avatar_definition [] {} | P(X) | split=1.\n"
          "step 3 avatar_definition [] {} | Q(X) | split=2.\n"
          "step 4 avatar_split [1] {} | $false | split=1:0;2:1.\n", "split")


def test_split_redefinition_must_agree():
    fails("step 1 avatar_definition [] {} | P(X) | split=1.\n"
          "step 2 avatar_definition [] {} | Q(X) | split=1.\n", "redefined")


def test_split_reuse_modulo_renaming_and_order():
    tr = Translator()
    doc = parse_trace(HEADER + "step 1 avatar_definition [] {} | P(X) ; Q(Y) | split=1.\n"
                      "step 2 avatar_definition [] {} | Q(Z) ; P(W) | split=1.\n")
    assert tr.translate_step(doc.steps[0]).entries
    assert tr.translate_step(doc.steps[1]).entries == []


def test_unknown_split_rejected():
    fails("step 1 avatar_component [] {+4} | P(X) | split=4.\n", "unknown split")


def test_component_needs_its_condition():
    fails("step 1 avatar_definition [] {} | P(X) | split=1.\n"
          "step 2 avatar_component [1] {} | P(X) | split=1.\n", r"\+1")


def test_contradiction_requires_empty_premise():
    fails("step 1 avatar_definition [] {} | P(X) | split=1.\n"
          "step 2 avatar_component [1] {+1} | P(X) | split=1.\n"
          "step 3 avatar_contradiction [2] {+1} | $false | .\n", "empty")


def test_contradiction_with_mixed_conditions():
    _, dk = check("step 1 avatar_definition [] {} | P(X) | split=3.\n"
                  "step 2 avatar_definition [] {} | Q(X) | split=5.\n"
                  "step 3 avatar_component [1] {+3} | P(X) | split=3.\n"
                  "step 4 input [] {} | ~P(a) | .\n"
                  "step 5 resolution [3,4] {+3,-5} | $false | lits=0:0.\n"
                  "step 6 avatar_contradiction [5] {+3,-5} | $false | .\n")
    assert "def step_6 :\n  (prf (not sp_3) -> prf bot) -> (prf (not (not sp_5)) -> prf bot)" \
           " -> prf bot\n  :=\n  step_5." in dk


# -- sorry ----------------------------------------------------------------------

def test_sorry_fallback_shape():
    script, dk = check("step 1 input [] {} | P(a) | .\n"
                       "step 2 input [] {} | ~P(X) | .\n"
                       "step 3 magic [1,2] {} | $false | .\n")
    assert script.warnings == [("3", "magic")]
    assert dk.count("sorry_3 :") == 1
    assert "step_3 :\n  prf bot\n  :=\n  sorry_3 step_1 step_2." in dk


def test_sorry_without_premises_is_bare_axiom():
    tr = Translator()
    out = tr.translate_step(parse_trace(HEADER + "step 1 clausify [] {} | P(a) | .\n").steps[0])
    assert isinstance(out.entries[0], Comment)
    ax = out.entries[1]
    assert isinstance(ax, SignatureEntry) and ax.body is None
    assert out.warning


# -- orientation ---------------------------------------------------------------

def test_repair_orientation():
    x, y = Fn("c"), Fn("d")
    lit = Literal(False, Equation(x, y))
    proof = Const("l2")
    assert repair_orientation(lit, lit, proof) is proof
    fixed = repair_orientation(lit.flipped(), lit, proof)
    assert fixed.fun.fun.fun.fun == Const("comml_not")
    with pytest.raises(TranslationError):
        repair_orientation(Literal(True, Equation(x, y)), lit, proof)


@pytest.mark.parametrize("path", golden_traces(), ids=lambda p: p.stem)
def test_equation_flips_in_golden_traces(path):
    flips = list(equation_flips(path.read_text()))
    for label, text in flips:
        _, _, report = run_trace(text)
        assert report.ok, f"{path.stem}: {label}\n{report.summary()}"


def test_superposition_flip_uses_comml_not():
    text = (GOLDEN / "superposition.drv").read_text().replace(
        "P(d) ; != d c ;", "P(d) ; != c d ;")
    _, dk, report = run_trace(text)
    assert report.ok
    assert "(comml_not iota u_c u_d l2)" in dk
