"""A single superposition step, from trace line to checked proof term.

Run with ``python demos/01_worked_superposition.py``.
"""
from lpproof import translate_and_check

TRACE = """\
format 1 cnf.
fun c [] () iota.
fun d [] () iota.
fun e [] () iota.
fun f [] (iota iota iota) iota.
fun g [] (iota) iota.
pred P [] (iota).
pred Q [] (iota).
pred R [] (iota).
step 1 input [] {} | P(X) ; = f(c,X,Z) g(X) ; != X c | .
step 2 input [] {} | Q(Y) ; != f(Y,d,W) e ; R(f(c,d,W)) | .
step 3 superposition [1,2] {} | P(d) ; != d c ; Q(c) ; != g(d) e ; R(f(c,d,W)) | lits=1:1 pos=0.
"""

# The trace only names the participating literals (lits=1:1) and the rewritten
# position; the unifier {X -> d, Y -> c, Z -> W} is recomputed.
script, text, report = translate_and_check(TRACE)
derivation = text[text.index("(; 5."):]
print(derivation)
print("checked:", report.ok, "| entries:", report.entries, "| reductions:", report.reductions)

# Swapping the orientation of a conclusion equation is repaired with comml_not.
flipped = TRACE.replace("P(d) ; != d c ;", "P(d) ; != c d ;")
_, text2, report2 = translate_and_check(flipped)
print("flipped conclusion checked:", report2.ok, "| uses comml_not:", "comml_not" in text2)

# The simultaneous variant also rewrites R(f(c,d,W)); W disappears and is
# instantiated with the inhabitant (star iota).
simultaneous = TRACE.replace("step 3 superposition", "step 3 simultaneous_superposition") \
    .replace("R(f(c,d,W)) | lits", "R(g(d)) | lits")
_, text3, report3 = translate_and_check(simultaneous)
print("simultaneous checked:", report3.ok, "| star used:", "star iota" in text3)
