"""Random ground refutations from a brute-force oracle, and check-time scaling.

Run with ``python demos/05_random_refutations.py``.
"""
import random
import time

from lpproof import translate_and_check
from lpproof.gen import random_refutation, resolution_chain

rng = random.Random(0)
trace = random_refutation(rng)
print(trace)
script, text, report = translate_and_check(trace)
print("checked:", report.ok, "| sorry-free:", not script.warnings)

ok = sum(translate_and_check(random_refutation(rng))[2].ok for _ in range(100))
print(f"{ok}/100 further random refutations check")

for n in (100, 1000, 5000):
    t0 = time.perf_counter()
    _, _, report = translate_and_check(resolution_chain(n))
    print(f"chain of {n} resolutions: ok={report.ok}, check {report.seconds:.3f} s, "
          f"total {time.perf_counter() - t0:.2f} s")
