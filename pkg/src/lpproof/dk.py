"""Dedukti (v2 concrete syntax) printing and reading of kernel documents.

Only the subset this package emits is read back: declarations, ``def``
declarations and definitions, typed rewrite rules and ``(; ... ;)`` comments.
"""
from __future__ import annotations

import re

from .kernel import (TYPE, App, BVar, Comment, Const, Kind, Lam, Local, Pi, RewriteRule,
                     SignatureEntry, Term, TypeSort, constants_of, mentions_bvar)


class DkSyntaxError(Exception):
    def __init__(self, message, line=0, col=0):
        self.line, self.col = line, col
        super().__init__(f"{line}:{col}: {message}")


# -- printing ----------------------------------------------------------------

def _pick(hint: str, scope: list, used: set) -> str:
    base = hint if hint and hint != "_" and "#" not in hint else "x"
    base = base.split("#")[0] or "x"
    name = base
    i = 0
    while name in used or name in scope or name in _KEYWORDS:
        i += 1
        name = f"{base}{i}"
    return name


_KEYWORDS = {"def", "Type", "thm", "inj", "private", "injective"}


def print_term(t: Term, scope=None, prec: int = 0) -> str:
    """Render a term; ``scope`` lists the names of enclosing binders, innermost last."""
    scope = [] if scope is None else scope
    if isinstance(t, Const):
        return t.name
    if isinstance(t, Local):
        return t.name
    if isinstance(t, BVar):
        if t.index >= len(scope):
            raise ValueError(f"loose bound variable {t.index}")
        return scope[-1 - t.index]
    if isinstance(t, TypeSort):
        return "Type"
    if isinstance(t, Kind):
        raise ValueError("Kind cannot be printed")
    if isinstance(t, App):
        head = t
        args = []
        while isinstance(head, App):
            args.append(head.arg)
            head = head.fun
        args.reverse()
        s = " ".join([print_term(head, scope, 2)] + [print_term(a, scope, 2) for a in args])
        return f"({s})" if prec > 1 else s
    if isinstance(t, (Lam, Pi)):
        dom = print_term(t.ty, scope, 1)
        if isinstance(t, Pi) and not mentions_bvar(t.body, 0):
            s = f"{dom} -> {print_term(t.body, scope + ['_'], 0)}"
        else:
            name = _pick(t.name, scope, constants_of(t.body))
            arrow_tok = "->" if isinstance(t, Pi) else "=>"
            s = f"{name} : {dom} {arrow_tok} {print_term(t.body, scope + [name], 0)}"
        return f"({s})" if prec > 0 else s
    raise TypeError(f"not a term: {t!r}")


def print_item(item) -> str:
    if isinstance(item, Comment):
        return f"(; {item.text} ;)"
    if isinstance(item, RewriteRule):
        ctx = ", ".join(n if ty is None else f"{n} : {print_term(ty)}" for n, ty in item.context)
        return f"[{ctx}] {print_term(item.lhs)}\n  --> {print_term(item.rhs)}."
    if isinstance(item, SignatureEntry):
        ty = print_term(item.type)
        if item.body is None:
            prefix = "def " if item.rewritable else ""
            return f"{prefix}{item.name} : {ty}."
        return f"def {item.name} :\n  {ty}\n  :=\n  {print_term(item.body)}."
    raise TypeError(f"cannot print {item!r}")


def print_dk(items) -> str:
    """Byte-stable Dedukti text for a sequence of items (UTF-8, LF endings)."""
    out = []
    for item in items:
        if isinstance(item, Comment) and out:
            out.append("")
        out.append(print_item(item))
    return "\n".join(out) + "\n"


# -- reading -----------------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<comment>\(;.*?;\))
  | (?P<sym>-->|->|=>|:=|[()\[\],:.])
  | (?P<ident>[A-Za-z0-9_][A-Za-z0-9_'!?]*)
""", re.VERBOSE | re.DOTALL)


def _tokenize(text: str):
    pos = 0
    line, col = 1, 1
    toks = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise DkSyntaxError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        val = m.group()
        if kind == "comment":
            toks.append(("comment", val[2:-2].strip(), line, col))
        elif kind != "ws":
            toks.append((kind if kind == "ident" else val, val, line, col))
        nl = val.count("\n")
        if nl:
            line += nl
            col = len(val) - val.rfind("\n")
        else:
            col += len(val)
        pos = m.end()
    toks.append(("eof", "", line, col))
    return toks


class _Reader:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self, k=0):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, kind):
        t = self.next()
        if t[0] != kind:
            raise DkSyntaxError(f"expected {kind!r}, found {t[1]!r}", t[2], t[3])
        return t

    def items(self):
        out = []
        while self.peek()[0] != "eof":
            t = self.peek()
            if t[0] == "comment":
                self.next()
                out.append(Comment(t[1]))
            elif t[0] == "[":
                out.append(self.rule())
            else:
                out.append(self.entry())
        return out

    def entry(self):
        rewritable = False
        t = self.peek()
        if t[0] == "ident" and t[1] == "def":
            self.next()
            rewritable = True
        name = self.expect("ident")[1]
        self.expect(":")
        ty = self.term([], set())
        body = None
        if self.peek()[0] == ":=":
            self.next()
            body = self.term([], set())
            rewritable = False
        self.expect(".")
        return SignatureEntry(name, ty, body, rewritable)

    def rule(self):
        self.expect("[")
        ctx = []
        names = set()
        while self.peek()[0] != "]":
            n = self.expect("ident")[1]
            ty = None
            if self.peek()[0] == ":":
                self.next()
                ty = self.term([], names)
            ctx.append((n, ty))
            names.add(n)
            if self.peek()[0] == ",":
                self.next()
        self.expect("]")
        lhs = self.term([], names)
        self.expect("-->")
        rhs = self.term([], names)
        self.expect(".")
        return RewriteRule(tuple(ctx), lhs, rhs)

    def term(self, scope, locals_):
        t = self.peek()
        if t[0] == "ident" and self.peek(1)[0] == ":":
            name = self.next()[1]
            self.next()
            dom = self.app(scope, locals_)
            op = self.next()
            body = self.term(scope + [name], locals_)
            if op[0] == "->":
                return Pi(name, dom, body)
            if op[0] == "=>":
                return Lam(name, dom, body)
            raise DkSyntaxError("expected -> or =>", op[2], op[3])
        left = self.app(scope, locals_)
        if self.peek()[0] == "->":
            self.next()
            right = self.term(scope + ["_"], locals_)
            return Pi("_", left, right)
        return left

    def app(self, scope, locals_):
        head = self.atom(scope, locals_)
        while self.peek()[0] in ("ident", "("):
            head = App(head, self.atom(scope, locals_))
        return head

    def atom(self, scope, locals_):
        t = self.next()
        if t[0] == "(":
            inner = self.term(scope, locals_)
            self.expect(")")
            return inner
        if t[0] != "ident":
            raise DkSyntaxError(f"unexpected {t[1]!r}", t[2], t[3])
        name = t[1]
        if name == "Type":
            return TYPE
        for depth, n in enumerate(reversed(scope)):
            if n == name:
                return BVar(depth)
        if name in locals_:
            return Local(name)
        return Const(name)


def parse_dk(text: str) -> list:
    """Read the emitted Dedukti subset back into kernel items."""
    return _Reader(text).items()
