"""A small type checker for the lambda-Pi calculus modulo rewriting.

Terms are locally nameless: binders use de Bruijn indices (``BVar``) and the
checker opens a binder by substituting a fresh ``Local``.  Binder names are
hints for printing only and take no part in equality, so ``==`` on terms is
alpha-equivalence.

Rewrite rules are first order at the head: the left-hand side is a declared
constant applied to patterns built from constants, applications and the
rule's context variables (``Local`` nodes).
"""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from typing import Optional, Union


class KernelError(Exception):
    """Ill-typed input.  ``path`` locates the offending subterm."""

    def __init__(self, message, path=(), entry=None):
        self.message = message
        self.path = tuple(path)
        self.entry = entry
        super().__init__(str(self))

    def __str__(self):
        s = self.message
        if self.path:
            s += f" (at {'/'.join(self.path)})"
        if self.entry:
            s = f"{self.entry}: {s}"
        return s


class BudgetExceeded(Exception):
    """The reduction budget ran out; distinct from a negative answer."""


# -- syntax ------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class Kind:
    pass


@dataclass(frozen=True, slots=True)
class TypeSort:
    pass


@dataclass(frozen=True, slots=True)
class Const:
    name: str


@dataclass(frozen=True, slots=True)
class BVar:
    index: int


@dataclass(frozen=True, slots=True)
class Local:
    name: str


@dataclass(frozen=True, slots=True)
class App:
    fun: "Term"
    arg: "Term"


@dataclass(frozen=True, slots=True)
class Lam:
    name: str = field(compare=False)
    ty: "Term"
    body: "Term"


@dataclass(frozen=True, slots=True)
class Pi:
    name: str = field(compare=False)
    ty: "Term"
    body: "Term"


Term = Union[Kind, TypeSort, Const, BVar, Local, App, Lam, Pi]
KIND = Kind()
TYPE = TypeSort()


def app(f: Term, *args: Term) -> Term:
    for a in args:
        f = App(f, a)
    return f


def spine(t: Term):
    args = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fun
    args.reverse()
    return t, args


def abstract(t: Term, name: str, depth: int = 0) -> Term:
    """Replace ``Local(name)`` by the bound variable at ``depth``."""
    if isinstance(t, Local):
        return BVar(depth) if t.name == name else t
    if isinstance(t, App):
        f = abstract(t.fun, name, depth)
        a = abstract(t.arg, name, depth)
        return t if f is t.fun and a is t.arg else App(f, a)
    if isinstance(t, Lam):
        return Lam(t.name, abstract(t.ty, name, depth), abstract(t.body, name, depth + 1))
    if isinstance(t, Pi):
        return Pi(t.name, abstract(t.ty, name, depth), abstract(t.body, name, depth + 1))
    return t


def instantiate(t: Term, value: Term, depth: int = 0) -> Term:
    """Substitute ``value`` (locally closed) for the bound variable at ``depth``."""
    if isinstance(t, BVar):
        return value if t.index == depth else t
    if isinstance(t, App):
        f = instantiate(t.fun, value, depth)
        a = instantiate(t.arg, value, depth)
        return t if f is t.fun and a is t.arg else App(f, a)
    if isinstance(t, Lam):
        return Lam(t.name, instantiate(t.ty, value, depth), instantiate(t.body, value, depth + 1))
    if isinstance(t, Pi):
        return Pi(t.name, instantiate(t.ty, value, depth), instantiate(t.body, value, depth + 1))
    return t


def subst_locals(t: Term, mapping: dict) -> Term:
    if isinstance(t, Local):
        return mapping.get(t.name, t)
    if isinstance(t, App):
        return App(subst_locals(t.fun, mapping), subst_locals(t.arg, mapping))
    if isinstance(t, Lam):
        return Lam(t.name, subst_locals(t.ty, mapping), subst_locals(t.body, mapping))
    if isinstance(t, Pi):
        return Pi(t.name, subst_locals(t.ty, mapping), subst_locals(t.body, mapping))
    return t


def lam(name: str, ty: Term, body: Term) -> Lam:
    return Lam(name, ty, abstract(body, name))


def pi(name: str, ty: Term, body: Term) -> Pi:
    return Pi(name, ty, abstract(body, name))


def arrow(*tys: Term) -> Term:
    """``A -> B -> ... -> Z`` (non-dependent)."""
    out = tys[-1]
    for t in reversed(tys[:-1]):
        out = Pi("_", t, out)
    return out


def has_loose(t: Term, depth: int = 0) -> bool:
    if isinstance(t, BVar):
        return t.index >= depth
    if isinstance(t, App):
        return has_loose(t.fun, depth) or has_loose(t.arg, depth)
    if isinstance(t, (Lam, Pi)):
        return has_loose(t.ty, depth) or has_loose(t.body, depth + 1)
    return False


def mentions_bvar(t: Term, index: int) -> bool:
    if isinstance(t, BVar):
        return t.index == index
    if isinstance(t, App):
        return mentions_bvar(t.fun, index) or mentions_bvar(t.arg, index)
    if isinstance(t, (Lam, Pi)):
        return mentions_bvar(t.ty, index) or mentions_bvar(t.body, index + 1)
    return False


def constants_of(t: Term, acc: Optional[set] = None) -> set:
    acc = set() if acc is None else acc
    stack = [t]
    while stack:
        u = stack.pop()
        if isinstance(u, Const):
            acc.add(u.name)
        elif isinstance(u, Local):
            acc.add(u.name)
        elif isinstance(u, App):
            stack.append(u.fun)
            stack.append(u.arg)
        elif isinstance(u, (Lam, Pi)):
            stack.append(u.ty)
            stack.append(u.body)
    return acc


def locals_of(t: Term) -> set:
    acc = set()
    stack = [t]
    while stack:
        u = stack.pop()
        if isinstance(u, Local):
            acc.add(u.name)
        elif isinstance(u, App):
            stack.extend((u.fun, u.arg))
        elif isinstance(u, (Lam, Pi)):
            stack.extend((u.ty, u.body))
    return acc


# -- signature ---------------------------------------------------------------

@dataclass(frozen=True)
class SignatureEntry:
    name: str
    type: Term
    body: Optional[Term] = None
    rewritable: bool = False   # printed with ``def``; may head rewrite rules


@dataclass(frozen=True)
class RewriteRule:
    context: tuple            # ((name, type or None), ...)
    lhs: Term
    rhs: Term

    @property
    def head(self) -> str:
        h, _ = spine(self.lhs)
        return h.name

    @property
    def name(self) -> str:
        _, args = spine(self.lhs)
        if args:
            h, _ = spine(args[0])
            if isinstance(h, Const):
                return f"{self.head}/{h.name}"
        return self.head


@dataclass(frozen=True)
class Comment:
    text: str


@dataclass
class Meter:
    budget: int = 10 ** 7
    steps: int = 0

    def tick(self):
        self.steps += 1
        if self.steps > self.budget:
            raise BudgetExceeded(f"reduction budget of {self.budget} steps exhausted")


class Signature:
    """Global context: typed constants, definitions and rewrite rules."""

    def __init__(self, budget: int = 10 ** 7):
        self.entries: dict[str, SignatureEntry] = {}
        self.rules: dict[str, list[RewriteRule]] = {}
        self.meter = Meter(budget)

    def __contains__(self, name):
        return name in self.entries

    def add_entry(self, e: SignatureEntry):
        if e.name in self.entries:
            raise KernelError(f"duplicate name {e.name}", entry=e.name)
        self.entries[e.name] = e

    def add_rule(self, r: RewriteRule):
        self.rules.setdefault(r.head, []).append(r)

    def type_of(self, name: str) -> Term:
        e = self.entries.get(name)
        if e is None:
            raise KernelError(f"unbound name {name}")
        return e.type


# -- reduction ---------------------------------------------------------------

def _match_pattern(sig: Signature, pat: Term, t: Term, pvars: set, binding: dict) -> bool:
    if isinstance(pat, Local) and pat.name in pvars:
        bound = binding.get(pat.name)
        if bound is None:
            binding[pat.name] = t
            return True
        return conv(sig, bound, t)
    t = whnf(sig, t)
    ph, pargs = spine(pat)
    th, targs = spine(t)
    if not isinstance(ph, Const) or ph != th or len(pargs) != len(targs):
        return False
    return all(_match_pattern(sig, p, a, pvars, binding) for p, a in zip(pargs, targs))


def _try_rules(sig: Signature, head: Const, args: list):
    for rule in sig.rules.get(head.name, ()):
        _, pargs = spine(rule.lhs)
        n = len(pargs)
        if n > len(args):
            continue
        binding: dict = {}
        pvars = {name for name, _ in rule.context}
        if all(_match_pattern(sig, p, a, pvars, binding) for p, a in zip(pargs, args)):
            return app(subst_locals(rule.rhs, binding), *args[n:])
    return None


def whnf(sig: Signature, t: Term) -> Term:
    """Weak-head normal form under beta, definition unfolding and rewriting."""
    while True:
        head, args = spine(t)
        if isinstance(head, Lam) and args:
            sig.meter.tick()
            t = app(instantiate(head.body, args[0]), *args[1:])
            continue
        if isinstance(head, Const):
            e = sig.entries.get(head.name)
            if e is not None and e.body is not None:
                sig.meter.tick()
                t = app(e.body, *args)
                continue
            if head.name in sig.rules:
                r = _try_rules(sig, head, args)
                if r is not None:
                    sig.meter.tick()
                    t = r
                    continue
        return t


def normalize(sig: Signature, t: Term) -> Term:
    """Full normal form (used by tests and diagnostics, not by the checker)."""
    t = whnf(sig, t)
    if isinstance(t, (Lam, Pi)):
        x = _fresh(t.name)
        body = normalize(sig, instantiate(t.body, Local(x)))
        return type(t)(t.name, normalize(sig, t.ty), abstract(body, x))
    head, args = spine(t)
    return app(head, *(normalize(sig, a) for a in args))


_locals = itertools.count()


def _fresh(hint: str) -> str:
    return f"{hint}#{next(_locals)}"


def conv(sig: Signature, a: Term, b: Term) -> bool:
    """Decide convertibility by weak-head reduction and spine comparison."""
    stack = [(a, b)]
    while stack:
        a, b = stack.pop()
        if a == b:
            continue
        # same rigid-looking head: compare arguments before unfolding
        ha, aa = spine(a)
        hb, ab = spine(b)
        if (isinstance(ha, Const) and ha == hb and len(aa) == len(ab) and aa
                and sig.entries.get(ha.name) is not None
                and sig.entries[ha.name].body is None and ha.name not in sig.rules):
            stack.extend(zip(aa, ab))
            continue
        a = whnf(sig, a)
        b = whnf(sig, b)
        if a == b:
            continue
        if isinstance(a, (Lam, Pi)) or isinstance(b, (Lam, Pi)):
            if type(a) is not type(b):
                return False
            x = Local(_fresh("c"))
            stack.append((a.ty, b.ty))
            stack.append((instantiate(a.body, x), instantiate(b.body, x)))
            continue
        ha, aa = spine(a)
        hb, ab = spine(b)
        if ha != hb or len(aa) != len(ab):
            return False
        if isinstance(ha, (Lam, Pi)):
            return False
        stack.extend(zip(aa, ab))
    return True


# -- typing ------------------------------------------------------------------

def _is_sort(t: Term) -> bool:
    return isinstance(t, (TypeSort, Kind))


def infer(sig: Signature, ctx, t: Term, path=()) -> Term:
    """Infer the type of ``t``.  ``ctx`` maps local names to their types.

    ``ctx`` may also be given as a list of (name, type) pairs.
    """
    if not isinstance(ctx, dict):
        ctx = dict(ctx)
    return _infer(sig, ctx, t, tuple(path))


def _infer(sig, ctx, t, path):
    if isinstance(t, TypeSort):
        return KIND
    if isinstance(t, Kind):
        raise KernelError("Kind has no type", path)
    if isinstance(t, Const):
        e = sig.entries.get(t.name)
        if e is None:
            raise KernelError(f"unbound name {t.name}", path)
        return e.type
    if isinstance(t, Local):
        ty = ctx.get(t.name)
        if ty is None:
            raise KernelError(f"unbound variable {t.name}", path)
        return ty
    if isinstance(t, BVar):
        raise KernelError("ill-scoped bound variable", path)
    if isinstance(t, App):
        head, args = spine(t)
        fty = _infer(sig, ctx, head, path + ("head",))
        for i, a in enumerate(args):
            fty = whnf(sig, fty)
            if not isinstance(fty, Pi):
                raise KernelError(f"non-Pi head in application (argument {i})", path + (f"arg{i}",))
            aty = _infer(sig, ctx, a, path + (f"arg{i}",))
            if not conv(sig, aty, fty.ty):
                raise KernelError(f"domain mismatch at argument {i}", path + (f"arg{i}",))
            fty = instantiate(fty.body, a)
        return fty
    if isinstance(t, (Lam, Pi)):
        kind = "lam" if isinstance(t, Lam) else "pi"
        s = whnf(sig, _infer(sig, ctx, t.ty, path + (f"{kind}.{t.name}.type",)))
        if not isinstance(s, TypeSort):
            raise KernelError(f"binder {t.name} has a domain that is not a type", path + (f"{kind}.{t.name}.type",))
        x = _fresh(t.name)
        ctx2 = dict(ctx)
        ctx2[x] = t.ty
        body = instantiate(t.body, Local(x))
        bty = _infer(sig, ctx2, body, path + (f"{kind}.{t.name}",))
        if isinstance(t, Pi):
            bs = whnf(sig, bty)
            if not _is_sort(bs):
                raise KernelError("codomain of Pi is not a sort", path + (f"pi.{t.name}",))
            return bs
        if isinstance(bty, Kind):
            raise KernelError("Kind in illegal position", path + (f"lam.{t.name}",))
        return Pi(t.name, t.ty, abstract(bty, x))
    raise KernelError(f"unknown term {t!r}", path)


def check(sig: Signature, ctx, t: Term, ty: Term, path=()) -> None:
    got = infer(sig, ctx, t, path)
    if not conv(sig, got, ty):
        raise KernelError("type mismatch", path)


def check_type(sig: Signature, ctx, ty: Term, path=()) -> Term:
    s = whnf(sig, infer(sig, ctx, ty, path))
    if not _is_sort(s):
        raise KernelError("not a type", path)
    return s


# -- entries and documents ---------------------------------------------------

def add_declaration(sig: Signature, e: SignatureEntry) -> None:
    """Type-check ``e`` against ``sig`` and add it."""
    try:
        if e.name in sig.entries:
            raise KernelError(f"duplicate name {e.name}")
        check_type(sig, {}, e.type, ("type",))
        if e.body is not None:
            bty = infer(sig, {}, e.body, ("body",))
            if not conv(sig, bty, e.type):
                raise KernelError("body does not have the declared type", ("body",))
    except KernelError as err:
        err.entry = err.entry or e.name
        raise
    sig.add_entry(e)


def _pattern_ok(sig: Signature, t: Term, pvars: set, top: bool) -> None:
    h, args = spine(t)
    if isinstance(h, Local):
        if h.name not in pvars or args:
            raise KernelError(f"bad pattern variable {h.name}")
        return
    if not isinstance(h, Const):
        raise KernelError("pattern head must be a constant")
    if h.name not in sig.entries:
        raise KernelError(f"unbound name {h.name}")
    if not top and h.name in sig.rules:
        raise KernelError(f"rule overlap: nested pattern on {h.name} which has rules")
    for a in args:
        _pattern_ok(sig, a, pvars, False)


def _patterns_unify(p: Term, q: Term, pv: set, qv: set) -> bool:
    # Root overlap between two linearised patterns (variables are wildcards).
    if (isinstance(p, Local) and p.name in pv) or (isinstance(q, Local) and q.name in qv):
        return True
    ph, pa = spine(p)
    qh, qa = spine(q)
    if ph != qh or len(pa) != len(qa):
        return False
    return all(_patterns_unify(x, y, pv, qv) for x, y in zip(pa, qa))


def add_rule(sig: Signature, r: RewriteRule) -> None:
    """Check a rewrite rule and install it.

    Both sides must have a common type under the rule context, every context
    variable must occur in the left-hand side, and the rule must not overlap
    an existing rule for the same head.
    """
    try:
        head, args = spine(r.lhs)
        if not isinstance(head, Const):
            raise KernelError("rule head must be a constant")
        e = sig.entries.get(head.name)
        if e is None:
            raise KernelError(f"unbound name {head.name}")
        if e.body is not None or not e.rewritable:
            raise KernelError(f"{head.name} is not a rewritable declaration")
        pvars = {n for n, _ in r.context}
        missing = pvars - locals_of(r.lhs)
        if missing:
            raise KernelError(f"context variables {sorted(missing)} do not occur in lhs")
        if locals_of(r.rhs) - pvars:
            raise KernelError("rhs has variables not bound by the context")
        for a in args:
            _pattern_ok(sig, a, pvars, False)
        for other in sig.rules.get(head.name, ()):
            _, oargs = spine(other.lhs)
            ov = {n for n, _ in other.context}
            n = min(len(args), len(oargs))
            if all(_patterns_unify(x, y, pvars, ov) for x, y in zip(args[:n], oargs[:n])):
                raise KernelError(f"rule overlaps an existing rule for {head.name}")
        ctx = {}
        for name, ty in r.context:
            if ty is None:
                raise KernelError(f"rule variable {name} needs a type annotation")
            check_type(sig, ctx, ty, (f"ctx.{name}",))
            ctx[name] = ty
        lty = infer(sig, ctx, r.lhs, ("lhs",))
        rty = infer(sig, ctx, r.rhs, ("rhs",))
        if not conv(sig, lty, rty):
            raise KernelError("lhs and rhs types differ", ("rhs",))
    except KernelError as err:
        err.entry = err.entry or f"rule {r.name}"
        raise
    sig.add_rule(r)


@dataclass
class EntryStatus:
    name: str
    ok: bool
    message: str = ""


@dataclass
class CheckReport:
    ok: bool
    statuses: list
    entries: int = 0
    rules: int = 0
    reductions: int = 0
    seconds: float = 0.0
    budget_exhausted: bool = False
    signature: Optional[Signature] = None

    @property
    def failures(self):
        return [s for s in self.statuses if not s.ok]

    def summary(self) -> str:
        lines = [f"{'ok' if s.ok else 'FAIL'} {s.name}{(' ' + s.message) if s.message else ''}"
                 for s in self.statuses]
        lines.append(f"entries={self.entries} rules={self.rules} reductions={self.reductions}")
        return "\n".join(lines)


def item_name(item) -> str:
    if isinstance(item, SignatureEntry):
        return item.name
    if isinstance(item, RewriteRule):
        return f"rule {item.name}"
    return "comment"


def check_document(items, permissive: bool = False, budget: int = 10 ** 7,
                   sig: Optional[Signature] = None) -> CheckReport:
    """Check declarations, definitions and rules in order.

    Stops at the first failure unless ``permissive``.  Comments are skipped.
    """
    sig = sig if sig is not None else Signature(budget)
    sig.meter.budget = budget
    start = time.perf_counter()
    statuses = []
    n_entries = n_rules = 0
    exhausted = False
    for item in items:
        if isinstance(item, Comment):
            continue
        name = item_name(item)
        try:
            if isinstance(item, SignatureEntry):
                add_declaration(sig, item)
                n_entries += 1
            else:
                add_rule(sig, item)
                n_rules += 1
            statuses.append(EntryStatus(name, True))
        except KernelError as err:
            msg = err.message + (f" (at {'/'.join(err.path)})" if err.path else "")
            statuses.append(EntryStatus(name, False, msg))
            if not permissive:
                break
        except BudgetExceeded as err:
            statuses.append(EntryStatus(name, False, str(err)))
            exhausted = True
            break
        except RecursionError:
            statuses.append(EntryStatus(name, False, "term too deep"))
            if not permissive:
                break
    ok = all(s.ok for s in statuses)
    return CheckReport(ok, statuses, n_entries, n_rules, sig.meter.steps,
                       time.perf_counter() - start, exhausted, sig)
