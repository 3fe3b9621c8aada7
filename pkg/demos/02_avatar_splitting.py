"""Clause splitting: definitions, the split step, components and conditional steps.

Run with ``python demos/02_avatar_splitting.py``.
"""
from pathlib import Path

from lpproof import translate_and_check

TRACE = (Path(__file__).resolve().parents[1] / "tests" / "golden" / "avatar.drv").read_text()
print(TRACE)

script, text, report = translate_and_check(TRACE)
lines = text[text.index("(; 5."):].splitlines()
for i, line in enumerate(lines):
    # show declarations, rules and types; bodies are long
    if line != "  :=" and (i == 0 or lines[i - 1] != "  :="):
        print(line)
print("checked:", report.ok)

# A conditional step carries its split conditions as leading arguments; the
# final SAT-level refutation is not reconstructed and becomes a sorry axiom.
refutation = TRACE + "step 14 avatar_refutation [6,11] {} | $false | .\n"
script, text, report = translate_and_check(refutation)
print("with refutation step: checked =", report.ok, "| sorry steps =", script.sorry_ids)
