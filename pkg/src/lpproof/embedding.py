"""Shallow embedding of polymorphic first-order clauses into the kernel.

A literal ``L`` is read as ``prf [L] -> prf bot`` and a clause as the
continuation type ``Pi vars. |L1| -> ... -> |Ln| -> prf bot``.  Equality is
Leibniz equality, quantified through the auxiliary binder ``forallP``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from . import fol
from .fol import Clause, Equation, Literal, Pred, Sort, SortApp, SortVar, Var, Fn
from .kernel import (TYPE, App, Const, Local, RewriteRule, SignatureEntry, Term, app,
                     arrow, lam, pi)

SET = Const("Set")
EL = Const("El")
IOTA = Const("iota")
PROP = Const("Prop")
PRF = Const("prf")
BOT = Const("bot")
IMP = Const("imp")
NOT = Const("not")
FORALL = Const("forall")
FORALL_SET = Const("forallSet")
FORALL_P = Const("forallP")
EQ = Const("eq")
STAR = Const("star")
REFL = Const("refl")
SYM = Const("sym")
COMML = Const("comml")
COMML_NOT = Const("comml_not")

PRELUDE_NAMES = ("Set", "El", "iota", "Prop", "prf", "bot", "imp", "not", "forall",
                 "forallSet", "forallP", "eq", "star")
SHORTHAND_NAMES = ("refl", "sym", "comml", "comml_not")


class EmbeddingError(Exception):
    pass


def el(s: Term) -> Term:
    return App(EL, s)


def prf(p: Term) -> Term:
    return App(PRF, p)


def shallow_prop(p: Term) -> Term:
    """``prf p -> prf bot``."""
    return arrow(prf(p), prf(BOT))


def _prelude_entries():
    A, a, b, p, f, x, y, z, h, l, k = (Local(n) for n in "A a b p f x y z h l k".split())
    elA = el(A)
    pred_A = arrow(elA, PROP)
    items = [
        SignatureEntry("Set", TYPE),
        SignatureEntry("El", arrow(SET, TYPE)),
        SignatureEntry("iota", SET),
        SignatureEntry("Prop", TYPE),
        SignatureEntry("prf", arrow(PROP, TYPE), rewritable=True),
        SignatureEntry("bot", PROP),
        SignatureEntry("imp", arrow(PROP, PROP, PROP)),
        RewriteRule((("a", PROP), ("b", PROP)), prf(app(IMP, a, b)),
                    arrow(prf(a), prf(b))),
        SignatureEntry("not", arrow(PROP, PROP), lam("a", PROP, app(IMP, a, BOT))),
        SignatureEntry("forall", pi("A", SET, arrow(pred_A, PROP))),
        RewriteRule((("A", SET), ("p", pred_A)), prf(app(FORALL, A, p)),
                    pi("x", elA, prf(App(p, x)))),
        SignatureEntry("forallSet", arrow(arrow(SET, PROP), PROP)),
        RewriteRule((("p", arrow(SET, PROP)),), prf(App(FORALL_SET, p)),
                    pi("A", SET, prf(App(p, A)))),
        SignatureEntry("forallP", pi("A", SET, arrow(arrow(pred_A, PROP), PROP))),
        RewriteRule((("A", SET), ("f", arrow(pred_A, PROP))), prf(app(FORALL_P, A, f)),
                    pi("p", pred_A, prf(App(f, p)))),
        SignatureEntry(
            "eq", pi("A", SET, arrow(elA, elA, PROP)),
            lam("A", SET, lam("x", elA, lam("y", elA, app(
                FORALL_P, A, lam("p", pred_A, app(IMP, App(p, x), App(p, y)))))))),
        SignatureEntry("star", pi("A", SET, elA)),
    ]
    eqAxy = app(EQ, A, x, y)
    eqAyx = app(EQ, A, y, x)
    shorthands = [
        SignatureEntry(
            "refl", pi("A", SET, pi("x", elA, prf(app(EQ, A, x, x)))),
            lam("A", SET, lam("x", elA, lam("p", pred_A, lam("h", prf(App(p, x)), h))))),
        SignatureEntry(
            "sym", pi("A", SET, pi("x", elA, pi("y", elA, arrow(prf(eqAxy), prf(eqAyx))))),
            lam("A", SET, lam("x", elA, lam("y", elA, lam("h", prf(eqAxy), app(
                h, lam("z", elA, app(EQ, A, z, x)), app(REFL, A, x))))))),
        SignatureEntry(
            "comml", pi("A", SET, pi("x", elA, pi("y", elA, arrow(
                shallow_prop(eqAxy), shallow_prop(eqAyx))))),
            lam("A", SET, lam("x", elA, lam("y", elA, lam("l", shallow_prop(eqAxy), lam(
                "h", prf(eqAyx), App(l, app(SYM, A, y, x, h)))))))),
        SignatureEntry(
            "comml_not", pi("A", SET, pi("x", elA, pi("y", elA, arrow(
                shallow_prop(App(NOT, eqAxy)), shallow_prop(App(NOT, eqAyx)))))),
            lam("A", SET, lam("x", elA, lam("y", elA, lam(
                "l", shallow_prop(App(NOT, eqAxy)), lam(
                    "k", prf(App(NOT, eqAyx)), App(l, lam(
                        "h", prf(eqAxy), App(k, app(SYM, A, x, y, h))))))))))
    ]
    return items, shorthands


def emit_prelude() -> list:
    """The fixed prelude (encoding of first-order logic plus shorthand lemmas)."""
    items, shorthands = _prelude_entries()
    return items + shorthands


def prelude_sections():
    """The prelude split into (encoding, shorthands)."""
    return _prelude_entries()


# -- symbols -----------------------------------------------------------------

_SAFE = re.compile(r"[A-Za-z0-9]")


def mangle(name: str) -> str:
    """Namespace a user identifier: ``u_`` prefix, non-alphanumerics as ``_xx`` hex."""
    out = []
    for ch in name:
        if _SAFE.fullmatch(ch):
            out.append(ch)
        else:
            out.append("".join(f"_{b:02x}" for b in ch.encode("utf-8")))
    return "u_" + "".join(out)


@dataclass(frozen=True)
class SymbolDeclaration:
    name: str
    kind: str                  # "function" | "predicate"
    sort_params: tuple = ()
    arg_sorts: tuple = ()
    result_sort: Optional[Sort] = None

    @property
    def sort_arity(self) -> int:
        return len(self.sort_params)


@dataclass(frozen=True)
class SortDeclaration:
    name: str
    arity: int


def deep_sort(s: Sort) -> Term:
    if isinstance(s, SortVar):
        return Local(s.name)
    if s.head == "iota":
        return IOTA
    return app(Const(mangle(s.head)), *(deep_sort(a) for a in s.args))


def declare_sort(d: SortDeclaration) -> SignatureEntry:
    if d.name == "iota":
        raise EmbeddingError("iota is built in")
    return SignatureEntry(mangle(d.name), arrow(*([SET] * d.arity), SET))


def _check_sort(s: Sort, params: set, sorts: Optional[dict]):
    if isinstance(s, SortVar):
        if s.name not in params:
            raise EmbeddingError(f"sort variable {s.name} is not a parameter")
        return
    if sorts is not None and s.head != "iota":
        if s.head not in sorts:
            raise EmbeddingError(f"unknown sort constructor {s.head}")
        if sorts[s.head] != len(s.args):
            raise EmbeddingError(f"sort constructor {s.head} expects {sorts[s.head]} arguments")
    for a in s.args:
        _check_sort(a, params, sorts)


def declare_symbol(d: SymbolDeclaration, sorts: Optional[dict] = None) -> SignatureEntry:
    """Kernel declaration for a function or predicate symbol.

    ``sorts`` maps declared sort constructors to arities; when given, unknown
    constructors are rejected.
    """
    params = set(d.sort_params)
    for s in d.arg_sorts + ((d.result_sort,) if d.result_sort is not None else ()):
        _check_sort(s, params, sorts)
    if d.kind == "function":
        if d.result_sort is None:
            raise EmbeddingError(f"function {d.name} needs a result sort")
        target = el(deep_sort(d.result_sort))
    elif d.kind == "predicate":
        target = PROP
    else:
        raise EmbeddingError(f"unknown symbol kind {d.kind}")
    ty = arrow(*(el(deep_sort(s)) for s in d.arg_sorts), target)
    for a in reversed(d.sort_params):
        ty = pi(a, SET, ty)
    return SignatureEntry(mangle(d.name), ty)


def declare_symbols(decls, sorts: Optional[dict] = None) -> list:
    seen = set()
    out = []
    for d in decls:
        if d.name in seen:
            raise EmbeddingError(f"duplicate symbol {d.name}")
        seen.add(d.name)
        out.append(declare_symbol(d, sorts))
    return out


# -- translations ------------------------------------------------------------

def deep_term(t) -> Term:
    if isinstance(t, Var):
        return Local(t.name)
    if t.head == fol.STAR:
        return inhabit(t.sort)
    return app(Const(mangle(t.head)), *(deep_sort(s) for s in t.sort_args),
               *(deep_term(a) for a in t.args))


def deep_atom(a) -> Term:
    if isinstance(a, Equation):
        return app(EQ, deep_sort(a.sort), deep_term(a.lhs), deep_term(a.rhs))
    return app(Const(mangle(a.head)), *(deep_sort(s) for s in a.sort_args),
               *(deep_term(x) for x in a.args))


def deep_literal(lit: Literal) -> Term:
    d = deep_atom(lit.atom)
    return d if lit.positive else App(NOT, d)


def shallow_literal(lit: Literal) -> Term:
    return shallow_prop(deep_literal(lit))


def bind_clause_vars(c: Clause, body: Term, binder=pi) -> Term:
    for name, s in reversed(c.term_vars):
        body = binder(name, el(deep_sort(s)), body)
    for a in reversed(c.sort_vars):
        body = binder(a, SET, body)
    return body


def clause_type(c: Clause) -> Term:
    body = arrow(*(shallow_literal(l) for l in c.literals), prf(BOT))
    return bind_clause_vars(c, body)


def split_name(split_id) -> str:
    return f"sp_{split_id}"


def condition_type(split_id, positive: bool) -> Term:
    """``|~sp|`` for a positive condition, ``|~~sp|`` for a negative one."""
    p = App(NOT, Const(split_name(split_id)))
    if not positive:
        p = App(NOT, p)
    return shallow_prop(p)


def avatar_clause_type(c: Clause, conditions=(), known_splits=None) -> Term:
    """Clause type prefixed by one argument per split condition."""
    if known_splits is not None:
        for sid, _ in conditions:
            if sid not in known_splits:
                raise EmbeddingError(f"unknown split id {sid}")
    return arrow(*(condition_type(sid, pos) for sid, pos in conditions), clause_type(c))


def component_formula(c: Clause) -> Term:
    """The proposition ``forall vars. ~L1 => ... => ~Ln => bot`` defining a split."""
    body = BOT
    for lit in reversed(c.literals):
        body = app(IMP, App(NOT, deep_literal(lit)), body)
    for name, s in reversed(c.term_vars):
        ds = deep_sort(s)
        body = app(FORALL, ds, lam(name, el(ds), body))
    for a in reversed(c.sort_vars):
        body = App(FORALL_SET, lam(a, SET, body))
    return body


def split_definition(split_id, component: Clause):
    """Declaration ``sp_i : Prop`` and its rule ``prf sp_i --> prf (component)``."""
    name = split_name(split_id)
    return [SignatureEntry(name, PROP),
            RewriteRule((), prf(Const(name)), prf(component_formula(component)))]


def inhabit(s: Sort) -> Term:
    return App(STAR, deep_sort(s))
