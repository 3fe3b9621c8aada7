"""Generators of ground resolution refutations, written as ``.drv`` text.

Refutations come from a brute-force propositional oracle: random clause
sets are drawn until truth tables show them unsatisfiable, then saturated by
binary resolution until the empty clause appears.
"""
from __future__ import annotations

import itertools
import random
from typing import Optional


def _lit_str(lit) -> str:
    atom, positive = lit
    return f"p{atom}" if positive else f"~p{atom}"


def _clause_str(c) -> str:
    return " ; ".join(_lit_str(l) for l in c) if c else "$false"


def satisfiable(clauses, n_atoms: int) -> bool:
    """Truth-table check over all ``2**n_atoms`` assignments."""
    for bits in itertools.product((False, True), repeat=n_atoms):
        if all(any(bits[a] == pos for a, pos in c) for c in clauses):
            return True
    return False


def random_clause_set(rng: random.Random, n_atoms: int, n_clauses: int, max_len: int = 3):
    out = []
    for _ in range(50 * n_clauses):
        if len(out) == n_clauses:
            break
        k = rng.randint(1, max_len)
        atoms = rng.sample(range(n_atoms), min(k, n_atoms))
        c = tuple(sorted((a, rng.random() < 0.5) for a in atoms))
        if c not in out:
            out.append(c)
    return out


def _resolve(c, d, atom):
    rest = {l for l in c if l != (atom, True)} | {l for l in d if l != (atom, False)}
    if any((a, not p) in rest for a, p in rest):
        return None
    return tuple(sorted(rest))


def saturate(clauses, max_clauses: int = 20000) -> Optional[dict]:
    """Breadth-first binary resolution; returns parent links or None.

    Each derived clause maps to ``(positive parent, negative parent, atom)``;
    inputs map to None.
    """
    parents = {c: None for c in clauses}
    order = list(clauses)
    i = 0
    while i < len(order):
        c = order[i]
        for d in order[: i + 1]:
            for x, y in ((c, d), (d, c)):
                for atom, pos in x:
                    if pos and (atom, False) in y:
                        r = _resolve(x, y, atom)
                        if r is None or r in parents:
                            continue
                        parents[r] = (x, y, atom)
                        order.append(r)
                        if not r:
                            return parents
                        if len(order) > max_clauses:
                            return None
        i += 1
    return None


def refutation_trace(clauses, n_atoms: int, rng: Optional[random.Random] = None) -> Optional[str]:
    """A ``.drv`` refutation of an unsatisfiable ground clause set, or None."""
    parents = saturate(clauses)
    if parents is None or () not in parents:
        return None
    ids: dict = {}
    lines = ["format 1 cnf."] + [f"pred p{a} [] ()." for a in range(n_atoms)]

    def emit(c):
        if c in ids:
            return ids[c]
        link = parents[c]
        if link is None:
            sid = str(len(ids) + 1)
            lines.append(f"step {sid} input [] {{}} | {_clause_str(c)} | .")
        else:
            x, y, atom = link
            a, b = emit(x), emit(y)
            i, j = x.index((atom, True)), y.index((atom, False))
            rule = "resolution"
            if rng is not None and rng.random() < 0.2:
                rule = "subsumption_resolution"
            sid = str(len(ids) + 1)
            if rng is not None and rng.random() < 0.5:
                lines.append(f"step {sid} {rule} [{b},{a}] {{}} | {_clause_str(c)} | lits={j}:{i}.")
            else:
                lines.append(f"step {sid} {rule} [{a},{b}] {{}} | {_clause_str(c)} | lits={i}:{j}.")
        ids[c] = sid
        return sid

    emit(())
    return "\n".join(lines) + "\n"


def random_refutation(rng: random.Random, max_atoms: int = 6, max_tries: int = 1000) -> str:
    """Draw clause sets until one is unsatisfiable and refute it."""
    for _ in range(max_tries):
        n = rng.randint(1, max_atoms)
        clauses = random_clause_set(rng, n, rng.randint(2, 3 * n + 2))
        if satisfiable(clauses, n):
            continue
        trace = refutation_trace(clauses, n, rng)
        if trace is not None:
            return trace
    raise RuntimeError("no unsatisfiable clause set found")


def resolution_chain(n: int) -> str:
    """``p0``, ``~p_i ; p_{i+1}`` and ``~p_n`` refuted by ``n + 1`` resolutions."""
    lines = ["format 1 cnf."] + [f"pred p{i} [] ()." for i in range(n + 1)]
    lines.append("step f input [] {} | p0 | .")
    lines.append(f"step g input [] {{}} | ~p{n} | .")
    last = "f"
    for i in range(n):
        lines.append(f"step a{i} input [] {{}} | ~p{i} ; p{i + 1} | .")
        lines.append(f"step r{i} resolution [{last},a{i}] {{}} | p{i + 1} | lits=0:0.")
        last = f"r{i}"
    lines.append(f"step end resolution [{last},g] {{}} | $false | lits=0:0.")
    return "\n".join(lines) + "\n"
