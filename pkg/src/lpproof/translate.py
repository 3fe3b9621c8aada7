"""Proof terms for derivation steps.

Each step becomes a definition ``step_<id>`` whose type is the embedded
conclusion and whose body is built from the premise constants.  The
substitution of every inference is recomputed from the participating
literals; the conclusion stated in the trace is then matched against the
recomputed one (modulo literal order, variable names and equation
orientation) so that the proof targets exactly the stated clause.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional

from . import fol
from .drv import (DerivationStep, TraceDocument, parse_indices, parse_partition, parse_path)
from .embedding import (BOT, COMML, COMML_NOT, PRF, REFL, SYM, avatar_clause_type,
                        bind_clause_vars, condition_type, declare_sort, declare_symbol, deep_atom,
                        deep_literal, deep_sort, deep_term, el, prelude_sections, prf,
                        shallow_literal, shallow_prop, split_definition, split_name)
from .fol import (EMPTY, IOTA, Clause, Equation, Literal, NameSupply, SortVar, Substitution,
                  Var)
from .kernel import (App, Comment, Const, Local, SignatureEntry, Term, app, arrow, lam,
                     locals_of)

log = logging.getLogger(__name__)


class TranslationError(Exception):
    """A step cannot be justified: the trace is corrupted or malformed."""

    def __init__(self, message, step=None):
        self.step = step
        super().__init__(f"step {step}: {message}" if step is not None else message)


@dataclass
class StepRecord:
    name: Optional[str]         # kernel constant, None for split definitions
    clause: Optional[Clause]
    conditions: tuple
    type: Optional[Term]
    kind: str                   # "clause" | "sat" | "definition"


@dataclass
class TranslationOutput:
    entries: list
    main: Optional[SignatureEntry] = None
    warning: Optional[str] = None


# -- orientation repair ------------------------------------------------------

def repair_orientation(expected: Literal, actual: Literal, proof: Term) -> Term:
    """Turn ``proof : |actual|`` into a proof of ``|expected|``.

    The literals must agree up to swapping the sides of an equation.
    """
    if expected == actual:
        return proof
    if actual.is_equation and expected == actual.flipped():
        a = actual.atom
        lemma = COMML if actual.positive else COMML_NOT
        return app(lemma, deep_sort(a.sort), deep_term(a.lhs), deep_term(a.rhs), proof)
    raise TranslationError(f"literals {expected} and {actual} differ beyond orientation")


def eta(t: Term, name: str) -> Term:
    """``x => f x`` becomes ``f`` when ``x`` is not free in ``f``."""
    if isinstance(t, App) and t.arg == Local(name) and name not in locals_of(t.fun):
        return t.fun
    return t


# -- literal assignment ------------------------------------------------------

def match_into(pattern_lits, target_lits, sub: Substitution = EMPTY, injective=False):
    """Map every pattern literal onto a target literal.

    Returns ``(sub, [(target index, flipped), ...])`` or None.  Unflipped and
    unused targets are preferred; with ``injective`` each target is used once.
    """
    n = len(pattern_lits)
    assign = [None] * n
    used = [0] * len(target_lits)

    def go(i, sub):
        if i == n:
            return sub
        cands = []
        for j, tl in enumerate(target_lits):
            if injective and used[j]:
                continue
            for s, flipped in fol.match_literal(pattern_lits[i], tl, sub):
                cands.append((used[j] > 0, flipped, j, s))
        cands.sort(key=lambda c: (c[0], c[1], c[2]))
        for _, flipped, j, s in cands:
            assign[i] = (j, flipped)
            used[j] += 1
            r = go(i + 1, s)
            if r is not None:
                return r
            used[j] -= 1
        return None

    res = go(0, sub)
    if res is None:
        return None
    return res, list(assign)


# -- per-step builder --------------------------------------------------------

class _StepBuilder:
    """Binders of the conclusion plus helpers shared by all rule schemas."""

    def __init__(self, tr: "Translator", step: DerivationStep):
        self.tr = tr
        self.step = step
        self.concl = step.conclusion
        self.conditions = step.conditions
        taken = fol.clause_names(self.concl)
        self.supply = NameSupply(taken)
        self.cond_names = [self.supply.fresh(f"h{i + 1}") for i in range(len(self.conditions))]
        self.lit_names = [self.supply.fresh(f"l{i + 1}") for i in range(len(self.concl.literals))]
        self.used_conditions = set()

    def error(self, msg):
        raise TranslationError(msg, self.step.id)

    def cond_args(self, rec: StepRecord):
        out = []
        for c in rec.conditions:
            try:
                k = self.conditions.index(c)
            except ValueError:
                self.error(f"premise condition {'+' if c[1] else '-'}{c[0]} missing from the conclusion")
            self.used_conditions.add(k)
            out.append(Local(self.cond_names[k]))
        return out

    def premise(self, i: int):
        pid = self.step.premises[i]
        rec = self.tr.records[pid]
        if rec.kind != "clause":
            self.error(f"premise {pid} is not a clause")
        return rec

    def rename(self, c: Clause) -> Clause:
        renamed, _ = fol.rename_clause(c, self.supply)
        return renamed

    def apply_premise(self, rec, renamed: Clause, tau: Substitution, lit_args) -> Term:
        args = self.cond_args(rec)
        args += [deep_sort(tau.sort(SortVar(a))) for a in renamed.sort_vars]
        args += [deep_term(tau.term(Var(n, s))) for n, s in renamed.term_vars]
        args += list(lit_args)
        return app(Const(rec.name), *args)

    def side(self, lit: Literal, tau: Substitution, target) -> Term:
        j, _ = target
        return repair_orientation(tau.literal(lit), self.concl.literals[j], Local(self.lit_names[j]))

    def finalize(self, sigma: Substitution, theta: Substitution, premises) -> Substitution:
        """Compose and send leftover variables to inhabitants (sorts to iota)."""
        tau0 = sigma.then(theta)
        cvars = {n for n, _ in self.concl.term_vars}
        csorts = set(self.concl.sort_vars)
        left_sorts: dict = {}
        left_terms: dict = {}
        for c in premises:
            for a in c.sort_vars:
                for v in fol.sort_vars_of(tau0.sort(SortVar(a))):
                    if v not in csorts:
                        left_sorts[v] = IOTA
            for n, s in c.term_vars:
                t = tau0.term(Var(n, s))
                for v, vs in fol.term_vars(t).items():
                    if v not in cvars:
                        left_terms[v] = vs
                    for sv in fol.sort_vars_of(vs):
                        if sv not in csorts:
                            left_sorts[sv] = IOTA
                for sv in fol.sort_vars_of(t.sort):
                    if sv not in csorts:
                        left_sorts[sv] = IOTA
        sfix = Substitution(left_sorts, {})
        fix = Substitution(left_sorts, {v: fol.star(sfix.sort(s)) for v, s in left_terms.items()})
        return tau0.then(fix)

    def close(self, body: Term) -> Term:
        for k in range(len(self.concl.literals) - 1, -1, -1):
            body = lam(self.lit_names[k], shallow_literal(self.concl.literals[k]), body)
        body = bind_clause_vars(self.concl, body, binder=lam)
        for k in range(len(self.conditions) - 1, -1, -1):
            sid, pos = self.conditions[k]
            body = lam(self.cond_names[k], condition_type(sid, pos), body)
        return body

    def match_conclusion(self, recomputed):
        return match_into(recomputed, self.concl.literals)

    def check_weakening(self, recs):
        union = set()
        for r in recs:
            union.update(r.conditions)
        if set(self.conditions) - union:
            self.tr.notes.append(f"step {self.step.id}: conclusion conditions strictly extend the premises'")


def _lits_extra(b: _StepBuilder, n: int):
    try:
        lits = parse_indices(b.step.extras["lits"])
    except (KeyError, ValueError):
        b.error("missing or malformed 'lits' extra")
    if len(lits) != n:
        b.error(f"'lits' needs {n} indices")
    return lits


def _literal_at(b, c: Clause, i: int) -> Literal:
    if not 0 <= i < len(c.literals):
        b.error(f"literal index {i} out of range")
    return c.literals[i]


def _atom_variants(atom):
    yield atom, False
    if isinstance(atom, Equation) and atom.lhs != atom.rhs:
        yield atom.flipped(), True


# -- rule schemas ------------------------------------------------------------

def build_resolution(b: _StepBuilder) -> Term:
    """Binary resolution; also used for subsumption resolution."""
    if len(b.step.premises) != 2:
        b.error("resolution needs two premises")
    ra, rb = b.premise(0), b.premise(1)
    i, j = _lits_extra(b, 2)
    A, B = b.rename(ra.clause), b.rename(rb.clause)
    la, lb = _literal_at(b, A, i), _literal_at(b, B, j)
    if la.positive == lb.positive:
        b.error("resolved literals must have opposite polarity")
    for atom_b, flipped in _atom_variants(lb.atom):
        sigma = fol.unify_atoms(la.atom, atom_b)
        if sigma is None:
            continue
        side = [(0, k, l) for k, l in enumerate(A.literals) if k != i]
        side += [(1, k, l) for k, l in enumerate(B.literals) if k != j]
        m = b.match_conclusion([sigma.literal(l) for _, _, l in side])
        if m is None:
            continue
        theta, assign = m
        tau = b.finalize(sigma, theta, [A, B])
        where = {(p, k): assign[n] for n, (p, k, _) in enumerate(side)}
        pos_is_a = la.positive
        P, N = (A, B) if pos_is_a else (B, A)
        rp, rn = (ra, rb) if pos_is_a else (rb, ra)
        pi_, ni_ = (i, j) if pos_is_a else (j, i)
        pk, nk = (0, 1) if pos_is_a else (1, 0)
        pos_atom = tau.atom(P.literals[pi_].atom)
        neg_atom = tau.atom(N.literals[ni_].atom)
        q, k = b.supply.fresh("q"), b.supply.fresh("k")
        proof = Local(q)
        if neg_atom != pos_atom:
            # equation resolved against its mirror image
            proof = app(SYM, deep_sort(pos_atom.sort), deep_term(pos_atom.lhs),
                        deep_term(pos_atom.rhs), proof)
        cancel = lam(k, shallow_literal(Literal(True, neg_atom)), App(Local(k), proof))
        n_args = [cancel if x == ni_ else b.side(l, tau, where[(nk, x)])
                  for x, l in enumerate(N.literals)]
        inner = b.apply_premise(rn, N, tau, n_args)
        p_args = [lam(q, prf(deep_atom(pos_atom)), inner) if x == pi_
                  else b.side(l, tau, where[(pk, x)]) for x, l in enumerate(P.literals)]
        b.check_weakening([ra, rb])
        return b.apply_premise(rp, P, tau, p_args)
    b.error("selected literals do not unify into the stated conclusion (corrupted trace)")


def build_factoring(b: _StepBuilder) -> Term:
    if len(b.step.premises) != 1:
        b.error("factoring needs one premise")
    ra = b.premise(0)
    i, j = _lits_extra(b, 2)
    A = b.rename(ra.clause)
    la, lb = _literal_at(b, A, i), _literal_at(b, A, j)
    if la.positive != lb.positive or i == j:
        b.error("factored literals must be distinct and of equal polarity")
    for atom_b, _ in _atom_variants(lb.atom):
        sigma = fol.unify_atoms(la.atom, atom_b)
        if sigma is None:
            continue
        m = b.match_conclusion([sigma.literal(l) for l in A.literals])
        if m is None:
            continue
        theta, assign = m
        tau = b.finalize(sigma, theta, [A])
        args = [b.side(l, tau, assign[x]) for x, l in enumerate(A.literals)]
        b.check_weakening([ra])
        return b.apply_premise(ra, A, tau, args)
    b.error("factored literals do not unify into the stated conclusion (corrupted trace)")


def build_equality_resolution(b: _StepBuilder) -> Term:
    if len(b.step.premises) != 1:
        b.error("equality resolution needs one premise")
    ra = b.premise(0)
    (i,) = _lits_extra(b, 1)
    A = b.rename(ra.clause)
    li = _literal_at(b, A, i)
    if li.positive or not li.is_equation:
        b.error("equality resolution needs a negative equation")
    sigma = fol.unify_atoms(Equation(li.atom.lhs, li.atom.lhs, li.atom.sort),
                            Equation(li.atom.lhs, li.atom.rhs, li.atom.sort))
    if sigma is None:
        b.error("sides of the equation do not unify (corrupted trace)")
    side = [(x, l) for x, l in enumerate(A.literals) if x != i]
    m = b.match_conclusion([sigma.literal(l) for _, l in side])
    if m is None:
        b.error("recomputed conclusion does not match the stated one (corrupted trace)")
    theta, assign = m
    tau = b.finalize(sigma, theta, [A])
    where = {x: assign[n] for n, (x, _) in enumerate(side)}
    atom = tau.atom(li.atom)
    k = b.supply.fresh("k")
    refl = app(REFL, deep_sort(atom.sort), deep_term(atom.lhs))
    cont = lam(k, shallow_literal(Literal(True, atom)), App(Local(k), refl))
    args = [cont if x == i else b.side(l, tau, where[x]) for x, l in enumerate(A.literals)]
    b.check_weakening([ra])
    return b.apply_premise(ra, A, tau, args)


def _mirror(path):
    return (1 - path[0],) + tuple(path[1:]) if path and path[0] in (0, 1) else None


def build_superposition(b: _StepBuilder, simultaneous=False, matching=False) -> Term:
    """Superposition and its simultaneous and demodulation variants.

    Premises are the rewriting clause and the target clause.  Every rewritten
    literal gets its own continuation that re-applies the rewriting premise
    and transports the literal proof along the equation.
    """
    if len(b.step.premises) != 2:
        b.error("superposition needs two premises")
    rw_rec, tg_rec = b.premise(0), b.premise(1)
    e, t = _lits_extra(b, 2)
    W, T = b.rename(rw_rec.clause), b.rename(tg_rec.clause)
    eqlit = _literal_at(b, W, e)
    tlit = _literal_at(b, T, t)
    if not (eqlit.positive and eqlit.is_equation):
        b.error("rewriting literal must be a positive equation")
    extras = b.step.extras
    if "dir" in extras and extras["dir"] not in ("lr", "rl"):
        b.error("'dir' must be lr or rl")
    dirs = [extras["dir"]] if "dir" in extras else ["lr", "rl"]
    if "pos" in extras:
        try:
            p = parse_path(extras["pos"])
        except ValueError:
            b.error("malformed 'pos' extra")
        paths = [p] + ([_mirror(p)] if tlit.is_equation and _mirror(p) else [])
        explicit = True
    else:
        paths = list(fol.literal_positions(tlit))
        explicit = False
    for path in paths:
        try:
            s = fol.literal_subterm(tlit, path)
        except IndexError:
            continue
        if isinstance(s, Var) and not explicit:
            continue
        for d in dirs:
            res = _try_superposition(b, rw_rec, tg_rec, W, T, e, t, path, s, d,
                                     simultaneous, matching)
            if res is not None:
                b.check_weakening([rw_rec, tg_rec])
                return res
    b.error("no rewrite of the target yields the stated conclusion (corrupted trace)")


def _try_superposition(b, rw_rec, tg_rec, W, T, e, t, path, s, d, simultaneous, matching):
    eq = W.literals[e].atom
    l, r = (eq.lhs, eq.rhs) if d == "lr" else (eq.rhs, eq.lhs)
    sigma = fol.match_term(l, s) if matching else fol.unify(l, s)
    if sigma is None:
        return None
    sl, sr = sigma.term(l), sigma.term(r)
    z = Var(b.supply.fresh("z"), sl.sort)
    recomputed = []            # (premise 0/1, literal index, recomputed literal)
    contexts = {}              # target literal index -> literal with hole z
    for x, lit in enumerate(W.literals):
        if x != e:
            recomputed.append((0, x, sigma.literal(lit)))
    for x, lit in enumerate(T.literals):
        slit = sigma.literal(lit)
        if x == t and not simultaneous:
            contexts[x] = fol.literal_replace_at(slit, path, z)
            recomputed.append((1, x, fol.literal_replace_at(slit, path, sr)))
        elif simultaneous and fol.literal_contains(slit, sl):
            contexts[x] = fol.literal_replace_all(slit, sl, z)
            recomputed.append((1, x, fol.literal_replace_all(slit, sl, sr)))
        else:
            recomputed.append((1, x, slit))
    m = b.match_conclusion([lit for _, _, lit in recomputed])
    if m is None:
        return None
    theta, assign = m
    tau = b.finalize(sigma, theta, [W, T])
    where = {(p, x): assign[n] for n, (p, x, _) in enumerate(recomputed)}
    rewritten = {x: lit for p, x, lit in recomputed if p == 1 and x in contexts}
    eq_tau = tau.atom(eq)
    alpha = deep_sort(eq_tau.sort)

    def rewrite_cont(x):
        q, rv = b.supply.fresh("q"), b.supply.fresh("r")
        rproof = Local(rv)
        if d == "rl":
            rproof = app(SYM, alpha, deep_term(eq_tau.lhs), deep_term(eq_tau.rhs), rproof)
        ctx_lit = tau.literal(contexts[x])
        zs = tau.sort(z.sort)
        body = deep_literal(ctx_lit)
        ctx = eta(body, z.name)
        if ctx is body:
            ctx = lam(z.name, el(deep_sort(zs)), body)
        target_j = where[(1, x)]
        lproof = repair_orientation(tau.literal(rewritten[x]),
                                    b.concl.literals[target_j[0]],
                                    Local(b.lit_names[target_j[0]]))
        cont_r = lam(rv, prf(deep_atom(eq_tau)), App(lproof, app(rproof, ctx, Local(q))))
        w_args = [cont_r if y == e else b.side(lit, tau, where[(0, y)])
                  for y, lit in enumerate(W.literals)]
        w_app = b.apply_premise(rw_rec, W, tau, w_args)
        return lam(q, prf(deep_literal(tau.literal(T.literals[x]))), w_app)

    t_args = [rewrite_cont(x) if x in contexts else b.side(lit, tau, where[(1, x)])
              for x, lit in enumerate(T.literals)]
    return b.apply_premise(tg_rec, T, tau, t_args)


def _split_component_match(b, comp: Clause, lits, what):
    """Rename a split component freshly and map it bijectively onto ``lits``."""
    comp2 = b.rename(comp)
    if len(comp2.literals) != len(lits):
        b.error(f"{what} does not match its split definition")
    m = match_into(comp2.literals, lits, injective=True)
    if m is None:
        b.error(f"{what} does not match its split definition")
    return comp2, m[0], m[1]


def build_avatar_split(b: _StepBuilder) -> Term:
    clauses = [i for i, p in enumerate(b.step.premises)
               if b.tr.records[p].kind != "definition"]
    if len(clauses) != 1:
        b.error("a split has exactly one clause premise")
    rec = b.premise(clauses[0])
    try:
        partition = parse_partition(b.step.extras["split"])
    except (KeyError, ValueError):
        b.error("missing or malformed 'split' extra")
    P = rec.clause
    covered = sorted(i for _, idx in partition for i in idx)
    if covered != list(range(len(P.literals))):
        b.error("split blocks do not partition the premise literals")
    block_vars = []
    for _, idx in partition:
        tv: dict = {}
        for i in idx:
            fol.literal_vars(P.literals[i], tv)
        block_vars.append(set(tv))
    for x in range(len(block_vars)):
        for y in range(x + 1, len(block_vars)):
            if block_vars[x] & block_vars[y]:
                b.error("split components share variables")
    b.supply.taken.update(fol.clause_names(P))
    s_names = [b.supply.fresh(f"s{k + 1}") for k in range(len(partition))]
    sigma_s: dict = {}
    sigma_t: dict = {}
    lit_proofs = {}
    unpack = []
    for blk, ((sid, idx), sname) in enumerate(zip(partition, s_names), 1):
        comp = b.tr.splits.get(sid)
        if comp is None:
            b.error(f"unknown split id {sid}")
        block = [P.literals[i] for i in idx]
        comp2, rho, assign = _split_component_match(b, comp, block, f"block for split {sid}")
        # rho sends component variables to premise variables; invert it
        for y, val in rho.term_map.items():
            if not isinstance(val, Var) or val.name in sigma_t:
                b.error(f"block for split {sid} is not a renaming of its definition")
            sigma_t[val.name] = y
        for a, val in rho.sort_map.items():
            if not isinstance(val, SortVar) or val.name in sigma_s:
                b.error(f"block for split {sid} is not a renaming of its definition")
            sigma_s[val.name] = SortVar(a)
        ells = [b.supply.fresh(f"l{blk}_{m + 1}") for m in range(len(comp2.literals))]
        for m, (j, _) in enumerate(assign):
            lit_proofs[idx[j]] = (comp2.literals[m], Local(ells[m]))
        unpack.append((sname, comp2, ells))
    for a in P.sort_vars:
        sigma_s.setdefault(a, IOTA)
    sorts = Substitution(sigma_s, {})
    psorts = dict(P.term_vars)
    sub = Substitution(sigma_s, {x: Var(y, sorts.sort(psorts[x])) for x, y in sigma_t.items()})
    args = []
    for i, lit in enumerate(P.literals):
        actual, proof = lit_proofs[i]
        args.append(repair_orientation(sub.literal(lit), actual, proof))
    body = b.apply_premise(rec, P, sub, args)
    for sname, comp2, ells in reversed(unpack):
        inner = body
        for m in range(len(ells) - 1, -1, -1):
            inner = lam(ells[m], shallow_literal(comp2.literals[m]), inner)
        inner = bind_clause_vars(comp2, inner, binder=lam)
        body = App(Local(sname), inner)
    for (sid, _), sname in reversed(list(zip(partition, s_names))):
        body = lam(sname, shallow_prop(Const(split_name(sid))), body)
    for k in range(len(b.conditions) - 1, -1, -1):
        sid, pos = b.conditions[k]
        body = lam(b.cond_names[k], condition_type(sid, pos), body)
    b.check_weakening([rec])
    return body


def split_clause_type(conditions, split_ids) -> Term:
    return arrow(*(condition_type(s, p) for s, p in conditions),
                 *(shallow_prop(Const(split_name(s))) for s in split_ids), prf(BOT))


def build_avatar_component(b: _StepBuilder) -> Term:
    sid = b.step.extras.get("split")
    if sid is None:
        b.error("missing 'split' extra")
    comp = b.tr.splits.get(sid)
    if comp is None:
        b.error(f"unknown split id {sid}")
    if (sid, True) not in b.conditions:
        b.error(f"component clause must be conditional on +{sid}")
    comp2, rho, assign = _split_component_match(b, comp, b.concl.literals, "component clause")
    nsp = Local(b.cond_names[b.conditions.index((sid, True))])
    psp = b.supply.fresh("psp")
    args = [deep_sort(rho.sort(SortVar(a))) for a in comp2.sort_vars]
    args += [deep_term(rho.term(Var(n, s))) for n, s in comp2.term_vars]
    for m, lit in enumerate(comp2.literals):
        j, _ = assign[m]
        args.append(repair_orientation(rho.literal(lit), b.concl.literals[j],
                                       Local(b.lit_names[j])))
    inner = app(Local(psp), *args)
    return App(nsp, lam(psp, prf(Const(split_name(sid))), inner))


def build_avatar_contradiction(b: _StepBuilder) -> Term:
    if len(b.step.premises) != 1:
        b.error("contradiction needs one premise")
    rec = b.premise(0)
    if rec.clause.literals:
        b.error("contradiction premise must be an empty clause")
    if b.concl.literals:
        b.error("contradiction conclusion must be empty")
    if tuple(rec.conditions) == tuple(b.conditions):
        return Const(rec.name)
    return b.apply_premise(rec, rec.clause, EMPTY, [])


_BUILDERS = {
    "resolution": build_resolution,
    "subsumption_resolution": build_resolution,
    "factoring": build_factoring,
    "superposition": build_superposition,
    "simultaneous_superposition": lambda b: build_superposition(b, simultaneous=True),
    "demodulation": lambda b: build_superposition(b, matching=True),
    "equality_resolution": build_equality_resolution,
    "avatar_component": build_avatar_component,
    "avatar_contradiction": build_avatar_contradiction,
}


# -- script ------------------------------------------------------------------

SECTION_TITLES = (
    "1. Encoding of first-order logic",
    "2. Shorthands",
    "3. Signature",
    "4. Input clauses",
    "5. Derivation",
)


@dataclass
class Script:
    sections: list = field(default_factory=lambda: [[] for _ in SECTION_TITLES])
    warnings: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    steps_translated: int = 0

    def items(self, banners: bool = True) -> list:
        out = []
        for title, items in zip(SECTION_TITLES, self.sections):
            if banners:
                out.append(Comment(title))
            out.extend(items)
        return out

    @property
    def sorry_ids(self):
        return [w[0] for w in self.warnings]


class Translator:
    """Translates a trace step by step, keeping the table of earlier steps."""

    def __init__(self):
        self.records: dict = {}
        self.splits: dict = {}
        self.warnings: list = []
        self.notes: list = []

    def record_type(self, step: DerivationStep) -> Term:
        return avatar_clause_type(step.conclusion, step.conditions, self.splits)

    def translate_step(self, step: DerivationStep) -> TranslationOutput:
        for p in step.premises:
            if p not in self.records:
                raise TranslationError(f"premise {p} has not been translated", step.id)
        if step.rule == "avatar_definition":
            return self._definition(step)
        if not step.supported:
            return self.sorry_fallback(step)
        name = f"step_{step.id}"
        if step.rule == "input":
            ty = self._concl_type(step)
            entry = SignatureEntry(name, ty)
            self.records[step.id] = StepRecord(name, step.conclusion, step.conditions, ty, "clause")
            return TranslationOutput([entry], entry)
        b = _StepBuilder(self, step)
        if step.rule == "avatar_split":
            try:
                ids = [sid for sid, _ in parse_partition(step.extras["split"])]
            except (KeyError, ValueError):
                raise TranslationError("missing or malformed 'split' extra", step.id)
            if step.conclusion.literals:
                raise TranslationError("a split concludes a SAT clause; write $false", step.id)
            for sid in ids:
                if sid not in self.splits:
                    raise TranslationError(f"unknown split id {sid}", step.id)
            ty = split_clause_type(step.conditions, ids)
            body = build_avatar_split(b)
            kind = "sat"
        else:
            ty = self._concl_type(step)
            core = _BUILDERS[step.rule](b)
            body = core if step.rule == "avatar_contradiction" and isinstance(core, Const) \
                else b.close(core)
            kind = "sat" if step.rule == "avatar_contradiction" else "clause"
        entry = SignatureEntry(name, ty, body)
        self.records[step.id] = StepRecord(name, step.conclusion, step.conditions, ty, kind)
        return TranslationOutput([entry], entry)

    def _concl_type(self, step):
        from .embedding import EmbeddingError
        try:
            return self.record_type(step)
        except EmbeddingError as err:
            raise TranslationError(str(err), step.id)

    def _definition(self, step: DerivationStep) -> TranslationOutput:
        sid = step.extras.get("split")
        if sid is None:
            raise TranslationError("missing 'split' extra", step.id)
        comp = fol.clause_variable_closure(step.conclusion)
        self.records[step.id] = StepRecord(None, comp, (), None, "definition")
        old = self.splits.get(sid)
        if old is not None:
            if not _alpha_equivalent(old, comp):
                raise TranslationError(f"split {sid} redefined with a different component", step.id)
            return TranslationOutput([])
        self.splits[sid] = comp
        return TranslationOutput(split_definition(sid, comp))

    def sorry_fallback(self, step: DerivationStep) -> TranslationOutput:
        """Assert that the premises imply the conclusion, then use the assertion."""
        prem = [self.records[p] for p in step.premises if self.records[p].name is not None]
        concl = self._concl_type(step)
        ax = SignatureEntry(f"sorry_{step.id}", arrow(*(r.type for r in prem), concl))
        name = f"step_{step.id}"
        entry = SignatureEntry(name, concl, app(Const(ax.name), *(Const(r.name) for r in prem)))
        warning = f"sorry: step {step.id} rule {step.rule}"
        log.info(warning)
        self.warnings.append((step.id, step.rule))
        self.records[step.id] = StepRecord(name, step.conclusion, step.conditions, concl, "clause")
        return TranslationOutput([Comment(warning), ax, entry], entry, warning)

    def translate(self, doc: TraceDocument) -> Script:
        script = Script()
        enc, short = prelude_sections()
        script.sections[0].extend(enc)
        script.sections[1].extend(short)
        arities = doc.sort_arities()
        for s in doc.sorts:
            script.sections[2].append(declare_sort(s))
        from .embedding import EmbeddingError
        for d in doc.symbols:
            try:
                script.sections[2].append(declare_symbol(d, arities))
            except EmbeddingError as err:
                raise TranslationError(str(err))
        for step in doc.steps:
            out = self.translate_step(step)
            to_inputs = step.rule == "input" and not step.conditions
            script.sections[3 if to_inputs else 4].extend(out.entries)
            script.steps_translated += 1
        script.warnings = list(self.warnings)
        script.notes = list(self.notes)
        return script


def _alpha_equivalent(a: Clause, b: Clause) -> bool:
    if len(a.literals) != len(b.literals):
        return False
    b2, _ = fol.rename_clause(b, NameSupply(fol.clause_names(a) | fol.clause_names(b)))
    for x, y in ((a, b2), (b2, a)):
        m = match_into(x.literals, y.literals, injective=True)
        if m is None:
            return False
        sub = m[0]
        imgs = list(sub.term_map.values())
        if not all(isinstance(v, Var) for v in imgs) or len({v.name for v in imgs}) != len(imgs):
            return False
    return True


def translate_trace(doc: TraceDocument) -> Script:
    return Translator().translate(doc)
