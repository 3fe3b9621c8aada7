"""Many-sorted and rank-1 polymorphic clauses.

Run with ``python demos/03_sorts_and_polymorphism.py``.
"""
from lpproof import translate_and_check
from lpproof.dk import print_term
from lpproof.drv import parse_trace
from lpproof.embedding import clause_type

TRACE = """\
format 1 polymorphic.
sort list 1.
fun c [] () iota.
fun nil [A] () list(A).
fun cons [A] (A list(A)) list(A).
pred P [] (iota).
pred Mem [A] (A list(A)).
step 1 input [] {} | P(c) ; != X:A X | .
step 2 equality_resolution [1] {} | P(c) | lits=1.
step 3 input [] {} | ~P(c) | .
step 4 resolution [2,3] {} | $false | lits=0:0.
step 5 input [] {} | Mem{B}(X:B, cons{B}(X, L:list(B))) | .
step 6 input [] {} | ~Mem{iota}(c, cons{iota}(c, nil{iota})) | .
step 7 resolution [5,6] {} | $false | lits=0:0.
"""

doc = parse_trace(TRACE)
for step in doc.steps[:1] + doc.steps[4:5]:
    print(f"clause {step.id}: {step.conclusion}")
    print("  as a type:", print_term(clause_type(step.conclusion)))

script, text, report = translate_and_check(TRACE)
print(text[text.index("(; 5."):])
print("checked:", report.ok)
