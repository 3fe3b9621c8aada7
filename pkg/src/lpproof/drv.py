"""Reader and writer for ``.drv`` derivation traces.

One statement per line, each ending in ``.``::

    format 1 cnf.
    sort list 1.
    fun f [] (iota iota iota) iota.
    pred P [] (iota).
    step 3 superposition [1,2] {} | P(d) ; != d c ; Q(c) | lits=1:1 pos=0.

Clause literals are separated by ``;``; ``$false`` is the empty clause.
Equations are written in prefix form ``= s t`` / ``!= s t`` (an optional
``{sort}`` may follow the operator), negation is ``~``.  Identifiers
declared with ``fun`` are function symbols, any other upper-case identifier
in term position is a variable; ``X:sort`` annotates a variable.  In sort
position, declared constructors and ``iota`` are constructors and other
upper-case identifiers are sort variables.  Conditions look like
``{+1,-2}`` (split 1 asserted, split 2 denied).
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from .embedding import SortDeclaration, SymbolDeclaration
from .fol import (IOTA, Clause, Equation, Fn, Literal, Pred, SortApp, SortVar, Substitution,
                  Var, make_clause)

LOGICS = ("cnf", "many-sorted", "polymorphic")
RULES = ("input", "resolution", "subsumption_resolution", "factoring", "superposition",
         "simultaneous_superposition", "demodulation", "equality_resolution",
         "avatar_definition", "avatar_split", "avatar_component", "avatar_contradiction")


class TraceParseError(Exception):
    def __init__(self, message, line=0, col=0, step=None):
        self.line, self.col, self.step = line, col, step
        where = f"{line}:{col}: " if line else ""
        if step is not None:
            where += f"step {step}: "
        super().__init__(where + message)


@dataclass(frozen=True)
class DerivationStep:
    id: str
    rule: str
    premises: tuple
    conclusion: Clause
    conditions: tuple = ()          # ((split id, positive), ...)
    extras: dict = field(default_factory=dict, hash=False)

    @property
    def supported(self) -> bool:
        return self.rule in RULES


@dataclass
class TraceDocument:
    version: int = 1
    logic: str = "cnf"
    sorts: list = field(default_factory=list)
    symbols: list = field(default_factory=list)
    steps: list = field(default_factory=list)

    def sort_arities(self) -> dict:
        return {s.name: s.arity for s in self.sorts}

    def symbol_table(self) -> dict:
        return {s.name: s for s in self.symbols}


# -- extras ------------------------------------------------------------------

def parse_indices(value: str) -> tuple:
    """``"2:1"`` -> ``(2, 1)``."""
    return tuple(int(x) for x in value.split(":") if x != "")


def parse_path(value: str) -> tuple:
    """``"0.2"`` -> ``(0, 2)``."""
    return tuple(int(x) for x in value.split(".") if x != "")


def parse_partition(value: str) -> tuple:
    """``"1:0,2;2:1"`` -> ``((1, (0, 2)), (2, (1,)))``."""
    out = []
    for block in value.split(";"):
        sid, _, idx = block.partition(":")
        out.append((sid.strip(), tuple(int(i) for i in idx.split(",") if i.strip() != "")))
    return tuple(out)


# -- lexing ------------------------------------------------------------------

_TOK = re.compile(r"""
    (?P<ws>\s+)
  | (?P<false>\$false)
  | (?P<sym>!=|[=~;(),{}:+\-\[\]|])
  | (?P<ident>[A-Za-z0-9_][A-Za-z0-9_'.]*)
""", re.VERBOSE)


def _lex(text: str, line: int, col0: int):
    out = []
    pos = 0
    while pos < len(text):
        m = _TOK.match(text, pos)
        if m is None:
            raise TraceParseError(f"unexpected character {text[pos]!r}", line, col0 + pos)
        if m.lastgroup != "ws":
            kind = "ident" if m.lastgroup == "ident" else m.group()
            out.append((kind, m.group(), col0 + pos))
        pos = m.end()
    out.append(("eof", "", col0 + pos))
    return out


class _Tokens:
    def __init__(self, toks, line):
        self.toks, self.i, self.line = toks, 0, line

    def peek(self):
        return self.toks[self.i]

    def next(self):
        t = self.toks[self.i]
        if t[0] != "eof":
            self.i += 1
        return t

    def expect(self, kind):
        t = self.next()
        if t[0] != kind:
            raise TraceParseError(f"expected {kind!r}, found {t[1]!r}", self.line, t[2])
        return t

    def error(self, msg):
        raise TraceParseError(msg, self.line, self.peek()[2])


# -- raw syntax --------------------------------------------------------------

@dataclass
class _RVar:
    name: str
    annot: object
    col: int


@dataclass
class _RApp:
    head: str
    sort_args: tuple
    args: tuple
    col: int


class _Parser:
    def __init__(self, sorts: dict, funs: dict, preds: dict):
        self.sorts, self.funs, self.preds = sorts, funs, preds

    # sorts
    def sort(self, tk: _Tokens):
        t = tk.expect("ident")
        name = t[1]
        args = ()
        if tk.peek()[0] == "(":
            tk.next()
            args = self.sort_list(tk, ")")
        if name == "iota" or name in self.sorts:
            return SortApp(name, args)
        if args or not name[0].isupper():
            raise TraceParseError(f"unknown sort constructor {name}", tk.line, t[2])
        return SortVar(name)

    def sort_list(self, tk, close):
        out = []
        while tk.peek()[0] != close:
            out.append(self.sort(tk))
            if tk.peek()[0] == ",":
                tk.next()
        tk.expect(close)
        return tuple(out)

    def sort_args(self, tk):
        if tk.peek()[0] == "{":
            tk.next()
            return self.sort_list(tk, "}")
        return ()

    # terms
    def term(self, tk: _Tokens):
        t = tk.expect("ident")
        name = t[1]
        if name in self.funs or not name[0].isupper():
            sargs = self.sort_args(tk)
            args = ()
            if tk.peek()[0] == "(":
                tk.next()
                args = []
                while tk.peek()[0] != ")":
                    args.append(self.term(tk))
                    if tk.peek()[0] == ",":
                        tk.next()
                tk.expect(")")
                args = tuple(args)
            return _RApp(name, sargs, args, t[2])
        annot = None
        if tk.peek()[0] == ":":
            tk.next()
            annot = self.sort(tk)
        return _RVar(name, annot, t[2])

    def literal(self, tk: _Tokens):
        t = tk.peek()
        if t[0] in ("=", "!="):
            tk.next()
            s = self.sort_args(tk)
            lhs = self.term(tk)
            rhs = self.term(tk)
            return ("eq", t[0] == "=", s[0] if s else None, lhs, rhs, t[2])
        positive = True
        if t[0] == "~":
            tk.next()
            positive = False
        h = tk.expect("ident")
        sargs = self.sort_args(tk)
        args = ()
        if tk.peek()[0] == "(":
            tk.next()
            args = []
            while tk.peek()[0] != ")":
                args.append(self.term(tk))
                if tk.peek()[0] == ",":
                    tk.next()
            tk.expect(")")
            args = tuple(args)
        return ("pred", positive, h[1], sargs, args, h[2])

    def clause_raw(self, tk: _Tokens):
        if tk.peek()[0] == "$false":
            tk.next()
            return []
        lits = [self.literal(tk)]
        while tk.peek()[0] == ";":
            tk.next()
            lits.append(self.literal(tk))
        return lits


# -- elaboration -------------------------------------------------------------

class _Elab:
    """Sort inference and checking for one clause."""

    def __init__(self, p: _Parser, logic: str, line: int):
        self.p, self.logic, self.line = p, logic, line
        self.var_sorts: dict = {}

    def err(self, msg, col=0):
        raise TraceParseError(msg, self.line, col)

    def note_var(self, v: _RVar, s):
        if s is None:
            return False
        old = self.var_sorts.get(v.name)
        if old is None:
            self.var_sorts[v.name] = s
            return True
        if old != s:
            self.err(f"variable {v.name} used at sorts {old} and {s}", v.col)
        return False

    def fun_sig(self, a: _RApp):
        d = self.p.funs.get(a.head)
        if d is None:
            self.err(f"undeclared function symbol {a.head}", a.col)
        if len(a.args) != len(d.arg_sorts):
            self.err(f"{a.head} expects {len(d.arg_sorts)} arguments, got {len(a.args)}", a.col)
        if len(a.sort_args) != len(d.sort_params):
            self.err(f"{a.head} expects {len(d.sort_params)} sort arguments", a.col)
        inst = Substitution(dict(zip(d.sort_params, a.sort_args)), {})
        return [inst.sort(s) for s in d.arg_sorts], inst.sort(d.result_sort)

    def raw_sort(self, t):
        if isinstance(t, _RVar):
            return t.annot or self.var_sorts.get(t.name)
        return self.fun_sig(t)[1]

    def walk(self, t, expected) -> bool:
        changed = False
        if isinstance(t, _RVar):
            changed |= self.note_var(t, t.annot)
            changed |= self.note_var(t, expected)
        else:
            arg_sorts, res = self.fun_sig(t)
            if expected is not None and res != expected:
                self.err(f"{t.head} has sort {res}, expected {expected}", t.col)
            for a, s in zip(t.args, arg_sorts):
                changed |= self.walk(a, s)
        return changed

    def pred_sig(self, head, sargs, args, col):
        d = self.p.preds.get(head)
        if d is None:
            self.err(f"undeclared predicate symbol {head}", col)
        if len(args) != len(d.arg_sorts):
            self.err(f"{head} expects {len(d.arg_sorts)} arguments, got {len(args)}", col)
        if len(sargs) != len(d.sort_params):
            self.err(f"{head} expects {len(d.sort_params)} sort arguments", col)
        inst = Substitution(dict(zip(d.sort_params, sargs)), {})
        return [inst.sort(s) for s in d.arg_sorts]

    def eq_sort(self, lit):
        _, _, s, lhs, rhs, _ = lit
        return s or self.raw_sort(lhs) or self.raw_sort(rhs)

    def infer(self, raw):
        changed = True
        while changed:
            changed = False
            for lit in raw:
                if lit[0] == "pred":
                    _, _, head, sargs, args, col = lit
                    for a, s in zip(args, self.pred_sig(head, sargs, args, col)):
                        changed |= self.walk(a, s)
                else:
                    s = self.eq_sort(lit)
                    changed |= self.walk(lit[3], s)
                    changed |= self.walk(lit[4], s)

    def build_term(self, t):
        if isinstance(t, _RVar):
            s = self.var_sorts.get(t.name)
            if s is None:
                if self.logic != "cnf":
                    self.err(f"cannot infer the sort of variable {t.name}", t.col)
                s = self.var_sorts[t.name] = IOTA
            return Var(t.name, s)
        _, res = self.fun_sig(t)
        return Fn(t.head, tuple(self.build_term(a) for a in t.args), res, tuple(t.sort_args))

    def build(self, raw) -> Clause:
        self.infer(raw)
        lits = []
        for lit in raw:
            if lit[0] == "pred":
                _, pos, head, sargs, args, col = lit
                lits.append(Literal(pos, Pred(head, tuple(self.build_term(a) for a in args),
                                              tuple(sargs))))
            else:
                _, pos, s, lhs, rhs, col = lit
                l, r = self.build_term(lhs), self.build_term(rhs)
                if l.sort != r.sort:
                    self.err(f"equation sides have sorts {l.sort} and {r.sort}", col)
                lits.append(Literal(pos, Equation(l, r, l.sort)))
        c = make_clause(lits)
        clash = set(c.sort_vars) & {n for n, _ in c.term_vars}
        if clash:
            self.err(f"names used both as sort and term variables: {sorted(clash)}")
        return c


# -- statements --------------------------------------------------------------

def _parse_params(tk: _Tokens):
    tk.expect("[")
    out = []
    while tk.peek()[0] != "]":
        out.append(tk.expect("ident")[1])
        if tk.peek()[0] == ",":
            tk.next()
    tk.expect("]")
    return tuple(out)


def _parse_sort_tuple(p: _Parser, tk: _Tokens, params):
    tk.expect("(")
    out = []
    while tk.peek()[0] != ")":
        s = p.sort(tk)
        out.append(s)
        if tk.peek()[0] == ",":
            tk.next()
    tk.expect(")")
    return tuple(out)


def _check_params(sorts_, params, tk, name):
    from .fol import sort_vars_of
    free = {}
    for s in sorts_:
        sort_vars_of(s, free)
    extra = set(free) - set(params)
    if extra:
        tk.error(f"{name}: sort variables {sorted(extra)} are not parameters")


def _split_step(body: str, line: int):
    parts = body.split("|")
    if len(parts) != 3:
        raise TraceParseError("step needs the form 'step <id> <rule> [...] {...} | clause | extras'", line, 1)
    return parts


def parse_trace(text: str) -> TraceDocument:
    """Parse and validate a ``.drv`` trace."""
    doc = TraceDocument()
    sorts: dict = {}
    funs: dict = {}
    preds: dict = {}
    parser = _Parser(sorts, funs, preds)
    seen_header = False
    clauses: dict = {}
    for lineno, raw_line in enumerate(text.splitlines(), 1):
        line = raw_line.strip()
        if not line or line.startswith("%"):
            continue
        if not line.endswith("."):
            raise TraceParseError("statement must end with '.'", lineno, len(raw_line))
        line = line[:-1]
        kw, _, rest = line.partition(" ")
        col0 = raw_line.index(kw) + len(kw) + 2
        if kw == "format":
            if seen_header or doc.steps or doc.symbols or doc.sorts:
                raise TraceParseError("format header must come first", lineno, 1)
            bits = rest.split()
            if len(bits) != 2 or not bits[0].isdigit() or bits[1] not in LOGICS:
                raise TraceParseError("expected 'format <version> <logic>'", lineno, col0)
            doc.version, doc.logic = int(bits[0]), bits[1]
            seen_header = True
            continue
        if not seen_header:
            raise TraceParseError("trace must start with a 'format' header", lineno, 1)
        if kw == "sort":
            bits = rest.split()
            if len(bits) != 2 or not bits[1].isdigit():
                raise TraceParseError("expected 'sort <name> <arity>'", lineno, col0)
            if bits[0] in sorts or bits[0] == "iota":
                raise TraceParseError(f"duplicate sort {bits[0]}", lineno, col0)
            sorts[bits[0]] = int(bits[1])
            doc.sorts.append(SortDeclaration(bits[0], int(bits[1])))
        elif kw in ("fun", "pred"):
            tk = _Tokens(_lex(rest, lineno, col0), lineno)
            name = tk.expect("ident")[1]
            if name in funs or name in preds:
                tk.error(f"duplicate symbol {name}")
            params = _parse_params(tk)
            args = _parse_sort_tuple(parser, tk, params)
            res = parser.sort(tk) if kw == "fun" else None
            tk.expect("eof")
            _check_params(args + ((res,) if res else ()), params, tk, name)
            if doc.logic == "cnf" and (params or any(s != IOTA for s in args) or
                                       (res is not None and res != IOTA)):
                tk.error("cnf traces only use the sort iota")
            d = SymbolDeclaration(name, "function" if kw == "fun" else "predicate",
                                  params, args, res)
            (funs if kw == "fun" else preds)[name] = d
            doc.symbols.append(d)
        elif kw == "step":
            head, clause_txt, extras_txt = _split_step(rest, lineno)
            tk = _Tokens(_lex(head, lineno, col0), lineno)
            sid = tk.expect("ident")[1]
            rule = tk.expect("ident")[1]
            tk.expect("[")
            prem = []
            while tk.peek()[0] != "]":
                prem.append(tk.expect("ident")[1])
                if tk.peek()[0] == ",":
                    tk.next()
            tk.expect("]")
            tk.expect("{")
            conds = []
            while tk.peek()[0] != "}":
                sign = tk.next()
                if sign[0] not in ("+", "-"):
                    tk.error("condition needs a sign")
                conds.append((tk.expect("ident")[1], sign[0] == "+"))
                if tk.peek()[0] == ",":
                    tk.next()
            tk.expect("}")
            tk.expect("eof")
            if sid in clauses:
                raise TraceParseError(f"duplicate step id {sid}", lineno, col0)
            for p in prem:
                if p not in clauses:
                    raise TraceParseError(f"premise {p} is not an earlier step", lineno, col0, sid)
            ctk = _Tokens(_lex(clause_txt, lineno, col0 + len(head) + 1), lineno)
            raw = parser.clause_raw(ctk)
            ctk.expect("eof")
            clause = _Elab(parser, doc.logic, lineno).build(raw)
            extras = {}
            for item in extras_txt.split():
                k, eq, v = item.partition("=")
                if not eq:
                    raise TraceParseError(f"extra {item!r} is not key=value", lineno, col0, sid)
                extras[k] = v
            step = DerivationStep(sid, rule, tuple(prem), clause, tuple(conds), extras)
            _validate_extras(step, clauses, lineno)
            clauses[sid] = clause
            doc.steps.append(step)
        else:
            raise TraceParseError(f"unknown statement {kw!r}", lineno, 1)
    return doc


def _validate_extras(step: DerivationStep, clauses: dict, line: int):
    def fail(msg):
        raise TraceParseError(msg, line, 0, step.id)

    try:
        lits = parse_indices(step.extras["lits"]) if "lits" in step.extras else None
        if "pos" in step.extras:
            parse_path(step.extras["pos"])
        part = parse_partition(step.extras["split"]) if (
            step.rule == "avatar_split" and "split" in step.extras) else None
    except ValueError:
        fail("malformed extras")
    prem = [clauses[p] for p in step.premises]
    if lits is None:
        return
    if step.rule in ("factoring", "equality_resolution"):
        targets = [prem[0]] * len(lits) if prem else []
    else:
        targets = prem
    for i, c in zip(lits, targets):
        if not 0 <= i < len(c.literals):
            fail(f"literal index {i} out of range")
    if part is not None and prem:
        for _, idx in part:
            for i in idx:
                if not 0 <= i < len(prem[0].literals):
                    fail(f"literal index {i} out of range")


# -- printing ----------------------------------------------------------------

def _sort_str(s) -> str:
    return str(s)


def _term_str(t, annotate: bool, seen: set) -> str:
    if isinstance(t, Var):
        if annotate and t.name not in seen:
            seen.add(t.name)
            return f"{t.name}:{_sort_str(t.sort)}"
        seen.add(t.name)
        return t.name
    s = t.head
    if t.sort_args:
        s += "{" + ",".join(map(_sort_str, t.sort_args)) + "}"
    if t.args:
        s += "(" + ",".join(_term_str(a, annotate, seen) for a in t.args) + ")"
    return s


def _literal_str(lit: Literal, annotate: bool, seen: set) -> str:
    a = lit.atom
    if isinstance(a, Equation):
        op = "=" if lit.positive else "!="
        return f"{op} {_term_str(a.lhs, annotate, seen)} {_term_str(a.rhs, annotate, seen)}"
    s = a.head
    if a.sort_args:
        s += "{" + ",".join(map(_sort_str, a.sort_args)) + "}"
    if a.args:
        s += "(" + ",".join(_term_str(x, annotate, seen) for x in a.args) + ")"
    return s if lit.positive else "~" + s


def clause_str(c: Clause, logic: str = "cnf") -> str:
    if not c.literals:
        return "$false"
    seen: set = set()
    annotate = logic != "cnf"
    return " ; ".join(_literal_str(l, annotate, seen) for l in c.literals)


def print_trace(doc: TraceDocument) -> str:
    out = [f"format {doc.version} {doc.logic}."]
    for s in doc.sorts:
        out.append(f"sort {s.name} {s.arity}.")
    for d in doc.symbols:
        kw = "fun" if d.kind == "function" else "pred"
        line = f"{kw} {d.name} [{','.join(d.sort_params)}] ({' '.join(map(_sort_str, d.arg_sorts))})"
        if d.kind == "function":
            line += f" {_sort_str(d.result_sort)}"
        out.append(line + ".")
    for st in doc.steps:
        conds = ",".join(f"{'+' if pos else '-'}{sid}" for sid, pos in st.conditions)
        extras = " ".join(f"{k}={v}" for k, v in st.extras.items())
        out.append(f"step {st.id} {st.rule} [{','.join(st.premises)}] {{{conds}}} | "
                   f"{clause_str(st.conclusion, doc.logic)} | {extras}.")
    return "\n".join(out) + "\n"
