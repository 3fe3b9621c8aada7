"""The embedded checker on its own: declarations, rewriting, and rejections.

Run with ``python demos/04_kernel.py``.
"""
from lpproof.dk import print_term
from lpproof.embedding import emit_prelude
from lpproof.kernel import (App, Const, Local, SignatureEntry, app, arrow, check_document,
                            conv, infer, normalize)

prelude = emit_prelude()
report = check_document(prelude)
print(report.summary())
sig = report.signature

prf, imp, bot = Const("prf"), Const("imp"), Const("bot")
# prf (imp a b) rewrites to prf a -> prf b
t = App(prf, app(imp, bot, bot))
print("normal form of prf (imp bot bot):", print_term(normalize(sig, t)))
print("conv with prf bot -> prf bot:", conv(sig, t, arrow(App(prf, bot), App(prf, bot))))

# Leibniz equality: a proof r of eq iota s t transports any predicate p.
iota, El, eq = Const("iota"), Const("El"), Const("eq")
ctx = {"s": App(El, iota), "t": App(El, iota), "p": arrow(App(El, iota), Const("Prop")),
       "r": App(prf, app(eq, iota, Local("s"), Local("t")))}
print("type of r p:", print_term(normalize(sig, infer(sig, ctx, App(Local("r"), Local("p"))))))

# An ill-typed definition is rejected with the entry name and a subterm path.
bad = [SignatureEntry("oops", App(prf, bot), App(Const("refl"), iota))]
print(check_document(prelude + bad).failures)

# A reduction budget bounds the work; running out is reported separately.
tight = check_document(prelude, budget=3)
print("budget exhausted:", tight.budget_exhausted)
