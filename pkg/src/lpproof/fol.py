"""First-order terms, literals and clauses over polymorphic sorts.

Variables are named.  Every term carries its sort, so sort questions never
need the symbol table once a term has been built.  Substitutions map both
sort variables and term variables; unification and matching handle the two
kinds in a single pass.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Union


class SortError(Exception):
    """Raised when a substitution would produce an ill-sorted term."""


# -- sorts -------------------------------------------------------------------

@dataclass(frozen=True)
class SortVar:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class SortApp:
    head: str
    args: tuple = ()

    def __str__(self):
        if not self.args:
            return self.head
        return f"{self.head}({','.join(map(str, self.args))})"


Sort = Union[SortVar, SortApp]
IOTA = SortApp("iota")


def sort_vars_of(s: Sort, acc: Optional[dict] = None) -> dict:
    """Sort variables of ``s`` in first-occurrence order (dict used as ordered set)."""
    if acc is None:
        acc = {}
    if isinstance(s, SortVar):
        acc.setdefault(s.name, None)
    else:
        for a in s.args:
            sort_vars_of(a, acc)
    return acc


# -- terms -------------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    name: str
    sort: Sort = IOTA

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Fn:
    """Function application; ``sort`` is the (instantiated) result sort."""
    head: str
    args: tuple = ()
    sort: Sort = IOTA
    sort_args: tuple = ()

    def __str__(self):
        s = self.head
        if self.sort_args:
            s += "{" + ",".join(map(str, self.sort_args)) + "}"
        if self.args:
            s += "(" + ",".join(map(str, self.args)) + ")"
        return s


Term = Union[Var, Fn]

# Reserved head for the inhabitant of a sort; only produced by translation.
STAR = "$star"


def star(s: Sort) -> Fn:
    return Fn(STAR, (), s, (s,))


@dataclass(frozen=True)
class Pred:
    head: str
    args: tuple = ()
    sort_args: tuple = ()

    def __str__(self):
        s = self.head
        if self.sort_args:
            s += "{" + ",".join(map(str, self.sort_args)) + "}"
        if self.args:
            s += "(" + ",".join(map(str, self.args)) + ")"
        return s


@dataclass(frozen=True)
class Equation:
    lhs: Term
    rhs: Term
    sort: Sort = IOTA

    def flipped(self) -> "Equation":
        return Equation(self.rhs, self.lhs, self.sort)

    def __str__(self):
        return f"{self.lhs} = {self.rhs}"


Atom = Union[Pred, Equation]


@dataclass(frozen=True)
class Literal:
    positive: bool
    atom: Atom

    @property
    def is_equation(self) -> bool:
        return isinstance(self.atom, Equation)

    def flipped(self) -> "Literal":
        return Literal(self.positive, self.atom.flipped())

    def negated(self) -> "Literal":
        return Literal(not self.positive, self.atom)

    def __str__(self):
        if isinstance(self.atom, Equation):
            op = "=" if self.positive else "!="
            return f"{self.atom.lhs} {op} {self.atom.rhs}"
        return str(self.atom) if self.positive else f"~{self.atom}"


@dataclass(frozen=True)
class Clause:
    literals: tuple = ()
    term_vars: tuple = ()   # ((name, sort), ...)
    sort_vars: tuple = ()   # (name, ...)

    def __str__(self):
        if not self.literals:
            return "$false"
        return " | ".join(map(str, self.literals))


def term_sort(t: Term) -> Sort:
    return t.sort


# -- traversal ---------------------------------------------------------------

def iter_subterms(t: Term) -> Iterator[Term]:
    yield t
    if isinstance(t, Fn):
        for a in t.args:
            yield from iter_subterms(a)


def atom_terms(a: Atom) -> tuple:
    if isinstance(a, Equation):
        return (a.lhs, a.rhs)
    return a.args


def _collect_term(t: Term, tv: dict, sv: dict):
    if isinstance(t, Var):
        tv.setdefault(t.name, t.sort)
        sort_vars_of(t.sort, sv)
    else:
        for s in t.sort_args:
            sort_vars_of(s, sv)
        for a in t.args:
            _collect_term(a, tv, sv)
        sort_vars_of(t.sort, sv)


def literal_vars(lit: Literal, tv: Optional[dict] = None, sv: Optional[dict] = None):
    """Free term and sort variables of a literal, in first-occurrence order."""
    tv = {} if tv is None else tv
    sv = {} if sv is None else sv
    atom = lit.atom
    if isinstance(atom, Equation):
        sort_vars_of(atom.sort, sv)
    else:
        for s in atom.sort_args:
            sort_vars_of(s, sv)
    for t in atom_terms(atom):
        _collect_term(t, tv, sv)
    return tv, sv


def term_vars(t: Term) -> dict:
    tv: dict = {}
    _collect_term(t, tv, {})
    return tv


def occurs(name: str, t: Term) -> bool:
    if isinstance(t, Var):
        return t.name == name
    return any(occurs(name, a) for a in t.args)


def sort_occurs(name: str, s: Sort) -> bool:
    if isinstance(s, SortVar):
        return s.name == name
    return any(sort_occurs(name, a) for a in s.args)


def clause_variable_closure(c: Clause) -> Clause:
    """Rebuild the variable lists as the free variables in first-occurrence order."""
    tv: dict = {}
    sv: dict = {}
    for lit in c.literals:
        literal_vars(lit, tv, sv)
    for s in tv.values():
        sort_vars_of(s, sv)
    return Clause(tuple(c.literals), tuple(tv.items()), tuple(sv))


def make_clause(literals: Iterable[Literal]) -> Clause:
    return clause_variable_closure(Clause(tuple(literals)))


# -- substitutions -----------------------------------------------------------

@dataclass(frozen=True)
class Substitution:
    sort_map: dict = field(default_factory=dict)
    term_map: dict = field(default_factory=dict)

    def __bool__(self):
        return bool(self.sort_map or self.term_map)

    def __hash__(self):
        return hash((frozenset(self.sort_map.items()), frozenset(self.term_map.items())))

    def sort(self, s: Sort) -> Sort:
        if not self.sort_map:
            return s
        if isinstance(s, SortVar):
            return self.sort_map.get(s.name, s)
        if not s.args:
            return s
        return SortApp(s.head, tuple(self.sort(a) for a in s.args))

    def term(self, t: Term) -> Term:
        if isinstance(t, Var):
            new_sort = self.sort(t.sort)
            r = self.term_map.get(t.name)
            if r is None:
                return t if new_sort is t.sort else Var(t.name, new_sort)
            if r.sort != new_sort:
                raise SortError(f"variable {t.name} : {new_sort} replaced by {r} : {r.sort}")
            return r
        return Fn(t.head,
                  tuple(self.term(a) for a in t.args),
                  self.sort(t.sort),
                  tuple(self.sort(s) for s in t.sort_args))

    def atom(self, a: Atom) -> Atom:
        if isinstance(a, Equation):
            return Equation(self.term(a.lhs), self.term(a.rhs), self.sort(a.sort))
        return Pred(a.head, tuple(self.term(x) for x in a.args),
                    tuple(self.sort(s) for s in a.sort_args))

    def literal(self, lit: Literal) -> Literal:
        return Literal(lit.positive, self.atom(lit.atom))

    def clause(self, c: Clause) -> Clause:
        """Apply to every literal and recompute the variable lists."""
        return make_clause(self.literal(l) for l in c.literals)

    def then(self, other: "Substitution") -> "Substitution":
        """Composition: first ``self``, then ``other``."""
        sm = {k: other.sort(v) for k, v in self.sort_map.items()}
        for k, v in other.sort_map.items():
            sm.setdefault(k, v)
        tm = {k: other.term(v) for k, v in self.term_map.items()}
        for k, v in other.term_map.items():
            tm.setdefault(k, v)
        return Substitution(sm, tm)

    def __str__(self):
        parts = [f"{k}->{v}" for k, v in self.sort_map.items()]
        parts += [f"{k}->{v}" for k, v in self.term_map.items()]
        return "{" + ", ".join(parts) + "}"


EMPTY = Substitution()


def apply_substitution(sub: Substitution, t: Term) -> Term:
    return sub.term(t)


# -- unification -------------------------------------------------------------

def _bind_sort(sub: Substitution, name: str, s: Sort) -> Substitution:
    return sub.then(Substitution({name: s}, {}))


def _unify_sorts(a: Sort, b: Sort, sub: Substitution) -> Optional[Substitution]:
    stack = [(a, b)]
    while stack:
        x, y = stack.pop()
        x, y = sub.sort(x), sub.sort(y)
        if x == y:
            continue
        if isinstance(y, SortVar) and not isinstance(x, SortVar):
            x, y = y, x
        if isinstance(x, SortVar):
            if sort_occurs(x.name, y):
                return None
            sub = _bind_sort(sub, x.name, y)
            continue
        if x.head != y.head or len(x.args) != len(y.args):
            return None
        stack.extend(zip(x.args, y.args))
    return sub


def unify_pairs(pairs, sub: Substitution = EMPTY) -> Optional[Substitution]:
    """Robinson unification of a list of term pairs, sorts included.

    Returns an idempotent most general unifier extending ``sub``, or None.
    """
    stack = list(pairs)[::-1]
    while stack:
        s, t = stack.pop()
        s, t = sub.term(s), sub.term(t)
        if s == t:
            continue
        sub2 = _unify_sorts(s.sort, t.sort, sub)
        if sub2 is None:
            return None
        if sub2 is not sub:
            sub = sub2
            stack.append((s, t))
            continue
        if isinstance(t, Var) and not isinstance(s, Var):
            s, t = t, s
        if isinstance(s, Var):
            if occurs(s.name, t):
                return None
            sub = sub.then(Substitution({}, {s.name: t}))
            continue
        if s.head != t.head or len(s.args) != len(t.args) or len(s.sort_args) != len(t.sort_args):
            return None
        for x, y in zip(s.sort_args, t.sort_args):
            sub = _unify_sorts(x, y, sub)
            if sub is None:
                return None
        stack.extend(reversed(list(zip(s.args, t.args))))
    return sub


def unify(a: Term, b: Term) -> Optional[Substitution]:
    return unify_pairs([(a, b)])


def unify_atoms(a: Atom, b: Atom, sub: Substitution = EMPTY) -> Optional[Substitution]:
    if isinstance(a, Equation) != isinstance(b, Equation):
        return None
    if isinstance(a, Equation):
        sub = _unify_sorts(a.sort, b.sort, sub)
        if sub is None:
            return None
        return unify_pairs([(a.lhs, b.lhs), (a.rhs, b.rhs)], sub)
    if a.head != b.head or len(a.args) != len(b.args):
        return None
    for x, y in zip(a.sort_args, b.sort_args):
        sub = _unify_sorts(x, y, sub)
        if sub is None:
            return None
    return unify_pairs(list(zip(a.args, b.args)), sub)


# -- matching ----------------------------------------------------------------

def _match_sort(p: Sort, t: Sort, sm: dict) -> bool:
    if isinstance(p, SortVar):
        bound = sm.get(p.name)
        if bound is None:
            sm[p.name] = t
            return True
        return bound == t
    if not isinstance(t, SortApp) or p.head != t.head or len(p.args) != len(t.args):
        return False
    return all(_match_sort(a, b, sm) for a, b in zip(p.args, t.args))


def _match(p: Term, t: Term, sm: dict, tm: dict) -> bool:
    if not _match_sort(p.sort, t.sort, sm):
        return False
    if isinstance(p, Var):
        bound = tm.get(p.name)
        if bound is None:
            tm[p.name] = t
            return True
        return bound == t
    if not isinstance(t, Fn) or p.head != t.head or len(p.args) != len(t.args):
        return False
    if len(p.sort_args) != len(t.sort_args):
        return False
    return (all(_match_sort(a, b, sm) for a, b in zip(p.sort_args, t.sort_args))
            and all(_match(a, b, sm, tm) for a, b in zip(p.args, t.args)))


def match_term(pattern: Term, target: Term,
               sub: Optional[Substitution] = None) -> Optional[Substitution]:
    """One-sided unification: find sigma with sigma(pattern) == target.

    Target variables are rigid.  ``sub`` seeds the bindings.
    """
    sm = dict(sub.sort_map) if sub else {}
    tm = dict(sub.term_map) if sub else {}
    if not _match(pattern, target, sm, tm):
        return None
    return Substitution(sm, tm)


def match_atom(pattern: Atom, target: Atom,
               sub: Optional[Substitution] = None) -> Optional[Substitution]:
    sm = dict(sub.sort_map) if sub else {}
    tm = dict(sub.term_map) if sub else {}
    if isinstance(pattern, Equation):
        if not isinstance(target, Equation):
            return None
        ok = (_match_sort(pattern.sort, target.sort, sm)
              and _match(pattern.lhs, target.lhs, sm, tm)
              and _match(pattern.rhs, target.rhs, sm, tm))
    else:
        if not isinstance(target, Pred) or pattern.head != target.head:
            return None
        if len(pattern.args) != len(target.args) or len(pattern.sort_args) != len(target.sort_args):
            return None
        ok = (all(_match_sort(a, b, sm) for a, b in zip(pattern.sort_args, target.sort_args))
              and all(_match(a, b, sm, tm) for a, b in zip(pattern.args, target.args)))
    return Substitution(sm, tm) if ok else None


def match_literal(pattern: Literal, target: Literal, sub: Optional[Substitution] = None,
                  allow_flip: bool = True):
    """Yield ``(sub, flipped)`` for each way ``pattern`` matches ``target``.

    ``flipped`` means the equation of ``pattern`` had to be swapped.
    """
    if pattern.positive != target.positive:
        return
    s = match_atom(pattern.atom, target.atom, sub)
    if s is not None:
        yield s, False
    if allow_flip and pattern.is_equation and pattern.atom.lhs != pattern.atom.rhs:
        s = match_atom(pattern.atom.flipped(), target.atom, sub)
        if s is not None:
            yield s, True


# -- renaming ----------------------------------------------------------------

_fresh_counter = itertools.count()


class NameSupply:
    """Deterministic fresh-name source; avoids every name in ``taken``."""

    def __init__(self, taken: Iterable[str] = ()):
        self.taken = set(taken)

    def fresh(self, base: str) -> str:
        if base not in self.taken:
            self.taken.add(base)
            return base
        for i in itertools.count():
            cand = f"{base}{i}"
            if cand not in self.taken:
                self.taken.add(cand)
                return cand


def clause_names(c: Clause) -> set:
    return {n for n, _ in c.term_vars} | set(c.sort_vars)


def rename_clause(c: Clause, supply: NameSupply):
    """Rename every variable of ``c`` to a fresh name from ``supply``.

    Returns the renamed clause (binder order preserved) and the renaming.
    """
    sm = {a: SortVar(supply.fresh(a)) for a in c.sort_vars}
    ssub = Substitution(sm, {})
    tm = {}
    for name, s in c.term_vars:
        tm[name] = Var(supply.fresh(name), ssub.sort(s))
    ren = Substitution(sm, tm)
    lits = tuple(ren.literal(l) for l in c.literals)
    return Clause(lits,
                  tuple((tm[n].name, tm[n].sort) for n, _ in c.term_vars),
                  tuple(sm[a].name for a in c.sort_vars)), ren


def rename_apart(c1: Clause, c2: Clause):
    """Rename ``c2`` so that it shares no variable name with ``c1``."""
    clash = clause_names(c1) & clause_names(c2)
    if not clash:
        return c1, c2, EMPTY
    taken = clause_names(c1) | clause_names(c2)
    sm = {}
    tm = {}
    for a in c2.sort_vars:
        if a in clash:
            new = _fresh_name(a, taken)
            sm[a] = SortVar(new)
    ssub = Substitution(sm, {})
    for name, s in c2.term_vars:
        if name in clash:
            tm[name] = Var(_fresh_name(name, taken), ssub.sort(s))
    # sort-only renaming must still reach unchanged variables
    for name, s in c2.term_vars:
        if name not in tm and ssub.sort(s) != s:
            tm[name] = Var(name, ssub.sort(s))
    ren = Substitution(sm, tm)
    lits = tuple(ren.literal(l) for l in c2.literals)
    tvs = tuple(((tm[n].name if n in tm else n), ssub.sort(s)) for n, s in c2.term_vars)
    svs = tuple(sm[a].name if a in sm else a for a in c2.sort_vars)
    return c1, Clause(lits, tvs, svs), ren


def _fresh_name(base: str, taken: set) -> str:
    while True:
        cand = f"{base}_{next(_fresh_counter)}"
        if cand not in taken:
            taken.add(cand)
            return cand


# -- positions ---------------------------------------------------------------

def subterm_at(t: Term, path: tuple) -> Term:
    for i in path:
        if not isinstance(t, Fn) or not 0 <= i < len(t.args):
            raise IndexError(f"invalid position {path}")
        t = t.args[i]
    return t


def replace_at(t: Term, path: tuple, new: Term) -> Term:
    if not path:
        return new
    i = path[0]
    if not isinstance(t, Fn) or not 0 <= i < len(t.args):
        raise IndexError(f"invalid position {path}")
    args = list(t.args)
    args[i] = replace_at(args[i], path[1:], new)
    return Fn(t.head, tuple(args), t.sort, t.sort_args)


def replace_all(t: Term, old: Term, new: Term) -> Term:
    if t == old:
        return new
    if isinstance(t, Var) or not t.args:
        return t
    return Fn(t.head, tuple(replace_all(a, old, new) for a in t.args), t.sort, t.sort_args)


def literal_subterm(lit: Literal, path: tuple) -> Term:
    terms = atom_terms(lit.atom)
    if not path or not 0 <= path[0] < len(terms):
        raise IndexError(f"invalid position {path}")
    return subterm_at(terms[path[0]], path[1:])


def _rebuild_atom(atom: Atom, terms) -> Atom:
    if isinstance(atom, Equation):
        return Equation(terms[0], terms[1], atom.sort)
    return Pred(atom.head, tuple(terms), atom.sort_args)


def literal_replace_at(lit: Literal, path: tuple, new: Term) -> Literal:
    terms = list(atom_terms(lit.atom))
    if not path or not 0 <= path[0] < len(terms):
        raise IndexError(f"invalid position {path}")
    terms[path[0]] = replace_at(terms[path[0]], path[1:], new)
    return Literal(lit.positive, _rebuild_atom(lit.atom, terms))


def literal_replace_all(lit: Literal, old: Term, new: Term) -> Literal:
    terms = [replace_all(t, old, new) for t in atom_terms(lit.atom)]
    return Literal(lit.positive, _rebuild_atom(lit.atom, terms))


def literal_contains(lit: Literal, t: Term) -> bool:
    return any(s == t for u in atom_terms(lit.atom) for s in iter_subterms(u))


def literal_positions(lit: Literal):
    """All positions of ``lit`` as paths (first index selects the atom argument)."""
    def walk(t, path):
        yield path
        if isinstance(t, Fn):
            for i, a in enumerate(t.args):
                yield from walk(a, path + (i,))
    for i, t in enumerate(atom_terms(lit.atom)):
        yield from walk(t, (i,))
