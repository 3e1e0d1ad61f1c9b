"""Abstract syntax, binding, substitution, and concrete syntax.

Terms, universe codes, and pretypes share one tree type (``PreTerm``); the
kernel decides which occurrences are well formed.  Binding is locally
nameless: bound variables are de Bruijn indices (``BVar``), free variables
are named (``FVar``), so alpha-equivalence is plain structural equality and
substitution can never capture.  Binder nodes keep name hints for printing
only; hints never take part in equality.

The concrete grammar is documented in docs/grammar.md.
"""

from __future__ import annotations

import dataclasses
import itertools
from dataclasses import dataclass, field


class SyntaxError_(Exception):
    """Parse-time failure, carrying a source position."""

    def __init__(self, msg: str, line: int = 0, col: int = 0):
        super().__init__(f"{line}:{col}: {msg}" if line else msg)
        self.msg = msg
        self.line = line
        self.col = col


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------

class PreTerm:
    """Base class for terms, universe codes, and pretypes."""

    __slots__ = ()

    def __str__(self) -> str:
        return to_src(self)


def _hint(default: str):
    return field(default=default, compare=False, repr=False)


def _hints(*names: str):
    return field(default=tuple(names), compare=False, repr=False)


# -- variables ---------------------------------------------------------------

@dataclass(frozen=True)
class BVar(PreTerm):
    k: int


@dataclass(frozen=True)
class FVar(PreTerm):
    name: str


# -- natural numbers ---------------------------------------------------------

@dataclass(frozen=True)
class Zero(PreTerm):
    pass


@dataclass(frozen=True)
class Succ(PreTerm):
    arg: PreTerm


@dataclass(frozen=True)
class NatRec(PreTerm):
    scrut: PreTerm
    base: PreTerm
    step: PreTerm                       # binds (k, prev)
    step_hints: tuple = _hints("k", "r")


# -- unit and empty ----------------------------------------------------------

@dataclass(frozen=True)
class Star(PreTerm):
    pass


@dataclass(frozen=True)
class UnitRec(PreTerm):
    scrut: PreTerm
    base: PreTerm


@dataclass(frozen=True)
class EmptyRec(PreTerm):
    scrut: PreTerm


# -- sigma -------------------------------------------------------------------

@dataclass(frozen=True)
class Pair(PreTerm):
    fst: PreTerm
    snd: PreTerm


@dataclass(frozen=True)
class Split(PreTerm):
    scrut: PreTerm
    body: PreTerm                       # binds (a, b)
    body_hints: tuple = _hints("a", "b")


# -- pi ----------------------------------------------------------------------

@dataclass(frozen=True)
class Lam(PreTerm):
    body: PreTerm                       # binds one variable
    hint: str = _hint("x")


@dataclass(frozen=True)
class Ap(PreTerm):
    fn: PreTerm
    arg: PreTerm


# -- disjoint sum ------------------------------------------------------------

@dataclass(frozen=True)
class Inl(PreTerm):
    arg: PreTerm


@dataclass(frozen=True)
class Inr(PreTerm):
    arg: PreTerm


@dataclass(frozen=True)
class When(PreTerm):
    scrut: PreTerm
    left: PreTerm                       # binds one variable
    right: PreTerm                      # binds one variable
    left_hint: str = _hint("a")
    right_hint: str = _hint("b")


# -- lists -------------------------------------------------------------------

@dataclass(frozen=True)
class Nil(PreTerm):
    pass


@dataclass(frozen=True)
class Cons(PreTerm):
    init: PreTerm                       # the shorter list
    last: PreTerm                       # the appended element


@dataclass(frozen=True)
class ListRec(PreTerm):
    scrut: PreTerm
    base: PreTerm
    step: PreTerm                       # binds (init, last, prev)
    step_hints: tuple = _hints("t", "a", "r")


# -- identity ----------------------------------------------------------------

@dataclass(frozen=True)
class Refl(PreTerm):
    arg: PreTerm


@dataclass(frozen=True)
class IdPeel(PreTerm):
    scrut: PreTerm
    body: PreTerm                       # binds one variable
    body_hint: str = _hint("x")


# -- cover proofs ------------------------------------------------------------

@dataclass(frozen=True)
class Rf(PreTerm):
    elem: PreTerm
    mem: PreTerm


@dataclass(frozen=True)
class Tr(PreTerm):
    elem: PreTerm
    idx: PreTerm
    fn: PreTerm


@dataclass(frozen=True)
class Ind(PreTerm):
    scrut: PreTerm
    base: PreTerm                       # binds (x, w)
    step: PreTerm                       # binds (x, h, k, f)
    base_hints: tuple = _hints("x", "w")
    step_hints: tuple = _hints("x", "h", "k", "f")


# -- universe codes ----------------------------------------------------------

@dataclass(frozen=True)
class N0Hat(PreTerm):
    pass


@dataclass(frozen=True)
class N1Hat(PreTerm):
    pass


@dataclass(frozen=True)
class NHat(PreTerm):
    pass


@dataclass(frozen=True)
class SigmaHat(PreTerm):
    base: PreTerm
    fam: PreTerm


@dataclass(frozen=True)
class PiHat(PreTerm):
    base: PreTerm
    fam: PreTerm


@dataclass(frozen=True)
class PlusHat(PreTerm):
    left: PreTerm
    right: PreTerm


@dataclass(frozen=True)
class ListHat(PreTerm):
    base: PreTerm


@dataclass(frozen=True)
class IdHat(PreTerm):
    base: PreTerm
    lhs: PreTerm
    rhs: PreTerm


@dataclass(frozen=True)
class CovHat(PreTerm):
    """Code of the cover proposition: cov(s; x. i; x y. c; a; v)."""

    base: PreTerm                       # s, code of the carrier set
    idx: PreTerm                        # i, binds x
    cov: PreTerm                        # c, binds (x, y)
    elem: PreTerm                       # a
    sub: PreTerm                        # v
    idx_hint: str = _hint("x")
    cov_hints: tuple = _hints("x", "y")


# -- pretypes ----------------------------------------------------------------

@dataclass(frozen=True)
class TN0(PreTerm):
    pass


@dataclass(frozen=True)
class TN1(PreTerm):
    pass


@dataclass(frozen=True)
class TN(PreTerm):
    pass


@dataclass(frozen=True)
class TU0(PreTerm):
    pass


@dataclass(frozen=True)
class TSigma(PreTerm):
    dom: PreTerm
    cod: PreTerm                        # binds one variable
    hint: str = _hint("x")


@dataclass(frozen=True)
class TPi(PreTerm):
    dom: PreTerm
    cod: PreTerm                        # binds one variable
    hint: str = _hint("x")


@dataclass(frozen=True)
class TSum(PreTerm):
    left: PreTerm
    right: PreTerm


@dataclass(frozen=True)
class TList(PreTerm):
    elem: PreTerm


@dataclass(frozen=True)
class TId(PreTerm):
    ty: PreTerm
    lhs: PreTerm
    rhs: PreTerm


@dataclass(frozen=True)
class TDec(PreTerm):
    """T(a): the type decoded from the universe code a."""

    code: PreTerm


# Per node class: (field name, number of variables the field binds).
_SIG: dict[type, tuple[tuple[str, int], ...]] = {
    BVar: (), FVar: (),
    Zero: (), Succ: (("arg", 0),),
    NatRec: (("scrut", 0), ("base", 0), ("step", 2)),
    Star: (), UnitRec: (("scrut", 0), ("base", 0)), EmptyRec: (("scrut", 0),),
    Pair: (("fst", 0), ("snd", 0)), Split: (("scrut", 0), ("body", 2)),
    Lam: (("body", 1),), Ap: (("fn", 0), ("arg", 0)),
    Inl: (("arg", 0),), Inr: (("arg", 0),),
    When: (("scrut", 0), ("left", 1), ("right", 1)),
    Nil: (), Cons: (("init", 0), ("last", 0)),
    ListRec: (("scrut", 0), ("base", 0), ("step", 3)),
    Refl: (("arg", 0),), IdPeel: (("scrut", 0), ("body", 1)),
    Rf: (("elem", 0), ("mem", 0)), Tr: (("elem", 0), ("idx", 0), ("fn", 0)),
    Ind: (("scrut", 0), ("base", 2), ("step", 4)),
    N0Hat: (), N1Hat: (), NHat: (),
    SigmaHat: (("base", 0), ("fam", 0)), PiHat: (("base", 0), ("fam", 0)),
    PlusHat: (("left", 0), ("right", 0)), ListHat: (("base", 0),),
    IdHat: (("base", 0), ("lhs", 0), ("rhs", 0)),
    CovHat: (("base", 0), ("idx", 1), ("cov", 2), ("elem", 0), ("sub", 0)),
    TN0: (), TN1: (), TN: (), TU0: (),
    TSigma: (("dom", 0), ("cod", 1)), TPi: (("dom", 0), ("cod", 1)),
    TSum: (("left", 0), ("right", 0)), TList: (("elem", 0),),
    TId: (("ty", 0), ("lhs", 0), ("rhs", 0)),
    TDec: (("code", 0),),
}

TYPE_CLASSES = (TN0, TN1, TN, TU0, TSigma, TPi, TSum, TList, TId, TDec)


def is_type_node(t: PreTerm) -> bool:
    return isinstance(t, TYPE_CLASSES)


# ---------------------------------------------------------------------------
# Binding operations
# ---------------------------------------------------------------------------

_fresh_counter = itertools.count()


def fresh_name(hint: str = "x") -> str:
    """A name no source program can mention ('%' is not an identifier char)."""
    return f"{hint}%{next(_fresh_counter)}"


def _map_vars(t: PreTerm, on_bvar, on_fvar, depth: int = 0) -> PreTerm:
    if isinstance(t, BVar):
        return on_bvar(t, depth)
    if isinstance(t, FVar):
        return on_fvar(t, depth)
    sig = _SIG[type(t)]
    if not sig:
        return t
    changes = {}
    for name, arity in sig:
        old = getattr(t, name)
        new = _map_vars(old, on_bvar, on_fvar, depth + arity)
        if new is not old:
            changes[name] = new
    return dataclasses.replace(t, **changes) if changes else t


def instantiate(body: PreTerm, vals: tuple[PreTerm, ...]) -> PreTerm:
    """Fill a body binding len(vals) variables; vals are listed outermost first."""
    n = len(vals)

    def on_bvar(v: BVar, depth: int) -> PreTerm:
        if v.k < depth:
            return v
        excess = v.k - depth
        if excess < n:
            return vals[n - 1 - excess]
        raise ValueError(f"dangling index {v.k} beyond binder arity {n}")

    return _map_vars(body, on_bvar, lambda v, d: v)


def close_over(t: PreTerm, names: tuple[str, ...]) -> PreTerm:
    """Turn the named free variables into bound ones, outermost first."""
    n = len(names)
    pos = {nm: i for i, nm in enumerate(names)}

    def on_fvar(v: FVar, depth: int) -> PreTerm:
        if v.name in pos:
            return BVar(depth + (n - 1 - pos[v.name]))
        return v

    return _map_vars(t, lambda v, d: v, on_fvar)


def open_with(body: PreTerm, hints: tuple[str, ...]) -> tuple[tuple[str, ...], PreTerm]:
    """Open a binder body with fresh free variables; returns (names, opened body)."""
    names = tuple(fresh_name(h) for h in hints)
    return names, instantiate(body, tuple(FVar(n) for n in names))


def substitute(t: PreTerm, name: str, u: PreTerm) -> PreTerm:
    """Capture-avoiding substitution of u for the free variable name in t."""
    return _map_vars(t, lambda v, d: v,
                     lambda v, d: u if v.name == name else v)


def free_vars(t: PreTerm) -> frozenset[str]:
    acc: set[str] = set()
    stack = [t]
    while stack:
        s = stack.pop()
        if isinstance(s, FVar):
            acc.add(s.name)
        elif isinstance(s, BVar):
            pass
        else:
            for name, _ in _SIG[type(s)]:
                stack.append(getattr(s, name))
    return frozenset(acc)


def alpha_eq(t: PreTerm, u: PreTerm) -> bool:
    """Alpha-equivalence is structural equality in the locally nameless tree."""
    return t == u


def abstract_out(t: PreTerm, sub: PreTerm, name: str) -> PreTerm:
    """Replace every occurrence alpha-equal to sub by the free variable name.

    sub must be locally closed; occurrences under binders are still found
    because indices inside them are self-contained.
    """
    if t == sub:
        return FVar(name)
    if isinstance(t, (BVar, FVar)):
        return t
    sig = _SIG[type(t)]
    if not sig:
        return t
    changes = {}
    for fname, _ in sig:
        old = getattr(t, fname)
        new = abstract_out(old, sub, name)
        if new is not old:
            changes[fname] = new
    return dataclasses.replace(t, **changes) if changes else t


def lam_(name: str, body: PreTerm, hint: str | None = None) -> Lam:
    return Lam(close_over(body, (name,)), hint or name.split("%")[0])


def pi_(name: str, dom: PreTerm, cod: PreTerm) -> TPi:
    return TPi(dom, close_over(cod, (name,)), name.split("%")[0])


def arrow(dom: PreTerm, cod: PreTerm) -> TPi:
    return TPi(dom, cod, "_")           # cod must not mention the variable


def numeral(n: int) -> PreTerm:
    t: PreTerm = Zero()
    for _ in range(n):
        t = Succ(t)
    return t


def as_numeral(t: PreTerm) -> int | None:
    n = 0
    while isinstance(t, Succ):
        n += 1
        t = t.arg
    return n if isinstance(t, Zero) else None


# ---------------------------------------------------------------------------
# Contexts and judgments
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Context:
    entries: tuple[tuple[str, PreTerm], ...] = ()

    def lookup(self, name: str) -> PreTerm | None:
        for n, ty in self.entries:
            if n == name:
                return ty
        return None

    def extend(self, name: str, ty: PreTerm) -> "Context":
        return Context(self.entries + ((name, ty),))

    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.entries)


@dataclass(frozen=True)
class TypeWF:
    ctx: Context
    ty: PreTerm


@dataclass(frozen=True)
class TypeEq:
    ctx: Context
    lhs: PreTerm
    rhs: PreTerm


@dataclass(frozen=True)
class TermOf:
    ctx: Context
    term: PreTerm
    ty: PreTerm


@dataclass(frozen=True)
class TermEq:
    ctx: Context
    lhs: PreTerm
    rhs: PreTerm
    ty: PreTerm


Judgment = TypeWF | TypeEq | TermOf | TermEq


@dataclass(frozen=True)
class CtDirective:
    """A `ct f` line: check the Church's-thesis realizer against the term f."""

    fn: PreTerm


# ---------------------------------------------------------------------------
# Lexer
# ---------------------------------------------------------------------------

_PUNCT2 = ("|-", "==", "->")
_PUNCT1 = "()[],;:.+"


@dataclass(frozen=True)
class _Tok:
    kind: str                           # ident | num | punct | eof
    text: str
    line: int
    col: int


def _lex(src: str) -> list[_Tok]:
    toks: list[_Tok] = []
    line, col, i = 1, 1, 0
    n = len(src)
    while i < n:
        ch = src[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and src[i] != "\n":
                i += 1
            continue
        two = src[i:i + 2]
        if two in _PUNCT2:
            toks.append(_Tok("punct", two, line, col))
            i += 2
            col += 2
            continue
        if ch in _PUNCT1:
            toks.append(_Tok("punct", ch, line, col))
            i += 1
            col += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and src[j].isdigit():
                j += 1
            toks.append(_Tok("num", src[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (src[j].isalnum() or src[j] == "_"):
                j += 1
            toks.append(_Tok("ident", src[i:j], line, col))
            col += j - i
            i = j
            continue
        raise SyntaxError_(f"unexpected character {ch!r}", line, col)
    toks.append(_Tok("eof", "", line, col))
    return toks


TYPE_KEYWORDS = {"N0", "N1", "N", "U0", "Sigma", "Pi", "Sum", "List", "Id", "T"}
TERM_KEYWORDS = {
    "succ", "natrec", "star", "unitrec", "emptyrec", "pair", "split", "lam",
    "Ap", "inl", "inr", "when", "nil", "cons", "listrec", "refl", "idpeel",
    "rf", "tr", "ind", "n0hat", "n1hat", "nhat", "sigmahat", "pihat",
    "plushat", "listhat", "idhat", "cov",
}
JUDGMENT_KEYWORDS = {"type", "typeeq", "term", "termeq", "ct"}
KEYWORDS = TYPE_KEYWORDS | TERM_KEYWORDS | JUDGMENT_KEYWORDS


class _Parser:
    def __init__(self, toks: list[_Tok], declared: set[str] | None):
        self.toks = toks
        self.pos = 0
        self.bound: list[str] = []
        # None: any identifier may occur free; a set: only those names may.
        self.declared = declared

    def peek(self) -> _Tok:
        return self.toks[self.pos]

    def next(self) -> _Tok:
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def expect(self, text: str) -> _Tok:
        t = self.next()
        if t.text != text:
            raise SyntaxError_(f"expected {text!r}, found {t.text or 'end of input'!r}",
                               t.line, t.col)
        return t

    def fail(self, msg: str) -> SyntaxError_:
        t = self.peek()
        return SyntaxError_(msg, t.line, t.col)

    def ident(self) -> str:
        t = self.next()
        if t.kind != "ident" or t.text in KEYWORDS:
            raise SyntaxError_(f"expected identifier, found {t.text!r}", t.line, t.col)
        return t.text

    # -- variables ----------------------------------------------------------

    def var(self, t: _Tok) -> PreTerm:
        for depth, nm in enumerate(reversed(self.bound)):
            if nm == t.text:
                return BVar(depth)
        if self.declared is not None and t.text not in self.declared:
            raise SyntaxError_(f"unbound identifier {t.text!r}", t.line, t.col)
        return FVar(t.text)

    def binder(self, names: list[str]):
        self.bound.extend(names)

    def unbind(self, n: int):
        del self.bound[-n:]

    # -- types ---------------------------------------------------------------

    def type_(self) -> PreTerm:
        lhs = self.type_atom()
        if self.peek().text == "->":
            self.next()
            # the codomain sits under one binder in the tree even though no
            # name is introduced; a dummy scope entry keeps indices aligned
            self.bound.append("%arrow%")
            rhs = self.type_()
            self.bound.pop()
            return TPi(lhs, rhs, "_")
        return lhs

    def type_atom(self) -> PreTerm:
        t = self.peek()
        if t.text == "(":
            self.next()
            ty = self.type_()
            self.expect(")")
            return ty
        if t.kind != "ident":
            raise self.fail(f"expected a type, found {t.text!r}")
        kw = t.text
        if kw == "N0":
            self.next()
            return TN0()
        if kw == "N1":
            self.next()
            return TN1()
        if kw == "N":
            self.next()
            return TN()
        if kw == "U0":
            self.next()
            return TU0()
        if kw in ("Sigma", "Pi"):
            self.next()
            x = self.ident()
            self.expect(":")
            dom = self.type_()
            self.expect(".")
            self.binder([x])
            cod = self.type_()
            self.unbind(1)
            cls = TSigma if kw == "Sigma" else TPi
            return cls(dom, cod, x)
        if kw == "Sum":
            self.next()
            self.expect("(")
            a = self.type_()
            self.expect(",")
            b = self.type_()
            self.expect(")")
            return TSum(a, b)
        if kw == "List":
            self.next()
            self.expect("(")
            a = self.type_()
            self.expect(")")
            return TList(a)
        if kw == "Id":
            self.next()
            self.expect("(")
            a = self.type_()
            self.expect(",")
            l = self.term()
            self.expect(",")
            r = self.term()
            self.expect(")")
            return TId(a, l, r)
        if kw == "T":
            self.next()
            self.expect("(")
            a = self.term()
            self.expect(")")
            return TDec(a)
        raise self.fail(f"expected a type, found {kw!r}")

    # -- terms ---------------------------------------------------------------

    def term(self) -> PreTerm:
        t = self.peek()
        if t.text == "(":
            self.next()
            tm = self.term()
            self.expect(")")
            return tm
        if t.kind == "num":
            self.next()
            return numeral(int(t.text))
        if t.kind != "ident":
            raise self.fail(f"expected a term, found {t.text or 'end of input'!r}")
        kw = t.text
        if kw not in KEYWORDS:
            self.next()
            return self.var(t)
        if kw == "star":
            self.next()
            return Star()
        if kw == "nil":
            self.next()
            return Nil()
        if kw in ("n0hat", "n1hat", "nhat"):
            self.next()
            return {"n0hat": N0Hat, "n1hat": N1Hat, "nhat": NHat}[kw]()
        if kw == "succ":
            return Succ(self.args1())
        if kw == "emptyrec":
            return EmptyRec(self.args1())
        if kw == "inl":
            return Inl(self.args1())
        if kw == "inr":
            return Inr(self.args1())
        if kw == "refl":
            return Refl(self.args1())
        if kw == "listhat":
            return ListHat(self.args1())
        if kw == "lam":
            self.next()
            x = self.ident()
            if self.peek().text == ":":      # optional annotation, discarded
                self.next()
                self.type_()
            self.expect(".")
            self.binder([x])
            body = self.term()
            self.unbind(1)
            return Lam(body, x)
        if kw == "pair":
            a, b = self.args2()
            return Pair(a, b)
        if kw == "Ap":
            a, b = self.args2()
            return Ap(a, b)
        if kw == "cons":
            a, b = self.args2()
            return Cons(a, b)
        if kw == "rf":
            a, b = self.args2()
            return Rf(a, b)
        if kw in ("sigmahat", "pihat", "plushat"):
            a, b = self.args2()
            return {"sigmahat": SigmaHat, "pihat": PiHat, "plushat": PlusHat}[kw](a, b)
        if kw == "tr":
            self.next()
            self.expect("(")
            a = self.term()
            self.expect(",")
            j = self.term()
            self.expect(",")
            r = self.term()
            self.expect(")")
            return Tr(a, j, r)
        if kw == "idhat":
            self.next()
            self.expect("(")
            s = self.term()
            self.expect(",")
            l = self.term()
            self.expect(",")
            r = self.term()
            self.expect(")")
            return IdHat(s, l, r)
        if kw == "natrec":
            self.next()
            self.expect("(")
            n = self.term()
            self.expect(";")
            z = self.term()
            self.expect(";")
            xs, s = self.bound_term(2)
            self.expect(")")
            return NatRec(n, z, s, tuple(xs))
        if kw == "unitrec":
            self.next()
            self.expect("(")
            c = self.term()
            self.expect(";")
            d = self.term()
            self.expect(")")
            return UnitRec(c, d)
        if kw == "split":
            self.next()
            self.expect("(")
            c = self.term()
            self.expect(";")
            xs, d = self.bound_term(2)
            self.expect(")")
            return Split(c, d, tuple(xs))
        if kw == "when":
            self.next()
            self.expect("(")
            c = self.term()
            self.expect(";")
            xl, dl = self.bound_term(1)
            self.expect(";")
            xr, dr = self.bound_term(1)
            self.expect(")")
            return When(c, dl, dr, xl[0], xr[0])
        if kw == "listrec":
            self.next()
            self.expect("(")
            c = self.term()
            self.expect(";")
            d = self.term()
            self.expect(";")
            xs, e = self.bound_term(3)
            self.expect(")")
            return ListRec(c, d, e, tuple(xs))
        if kw == "idpeel":
            self.next()
            self.expect("(")
            c = self.term()
            self.expect(";")
            xs, d = self.bound_term(1)
            self.expect(")")
            return IdPeel(c, d, xs[0])
        if kw == "ind":
            self.next()
            self.expect("(")
            m = self.term()
            self.expect(";")
            xs1, q1 = self.bound_term(2)
            self.expect(";")
            xs2, q2 = self.bound_term(4)
            self.expect(")")
            return Ind(m, q1, q2, tuple(xs1), tuple(xs2))
        if kw == "cov":
            self.next()
            self.expect("(")
            s = self.term()
            self.expect(";")
            xi, i = self.bound_term(1)
            self.expect(";")
            xc, c = self.bound_term(2)
            self.expect(";")
            a = self.term()
            self.expect(";")
            v = self.term()
            self.expect(")")
            return CovHat(s, i, c, a, v, xi[0], tuple(xc))
        raise self.fail(f"expected a term, found {kw!r}")

    def args1(self) -> PreTerm:
        self.next()
        self.expect("(")
        a = self.term()
        self.expect(")")
        return a

    def args2(self) -> tuple[PreTerm, PreTerm]:
        self.next()
        self.expect("(")
        a = self.term()
        self.expect(",")
        b = self.term()
        self.expect(")")
        return a, b

    def bound_term(self, n: int) -> tuple[list[str], PreTerm]:
        names = [self.ident() for _ in range(n)]
        if len(set(names)) != n:
            raise self.fail("repeated binder name")
        self.expect(".")
        self.binder(names)
        body = self.term()
        self.unbind(n)
        return names, body

    # -- judgments -------------------------------------------------------------

    def context(self) -> Context:
        self.expect("[")
        entries: list[tuple[str, PreTerm]] = []
        if self.peek().text != "]":
            while True:
                x = self.ident()
                if any(x == n for n, _ in entries):
                    raise self.fail(f"repeated context variable {x!r}")
                self.expect(":")
                ty = self.type_()
                entries.append((x, ty))
                if self.declared is not None:
                    self.declared.add(x)
                if self.peek().text == ",":
                    self.next()
                    continue
                break
        self.expect("]")
        return Context(tuple(entries))

    def judgment(self) -> Judgment | CtDirective:
        kw = self.next()
        if kw.text == "ct":
            return CtDirective(self.term())
        if kw.text not in ("type", "typeeq", "term", "termeq"):
            raise SyntaxError_(f"expected a judgment keyword, found {kw.text!r}",
                               kw.line, kw.col)
        if self.declared is None:
            self.declared = set()
        ctx = self.context()
        self.expect("|-")
        if kw.text == "type":
            return TypeWF(ctx, self.type_())
        if kw.text == "typeeq":
            a = self.type_()
            self.expect("==")
            return TypeEq(ctx, a, self.type_())
        if kw.text == "term":
            a = self.term()
            self.expect(":")
            return TermOf(ctx, a, self.type_())
        a = self.term()
        self.expect("==")
        b = self.term()
        self.expect(":")
        return TermEq(ctx, a, b, self.type_())

    def done(self):
        t = self.peek()
        if t.kind != "eof":
            raise SyntaxError_(f"trailing input {t.text!r}", t.line, t.col)


def parse_term(src: str, declared: set[str] | None = None) -> PreTerm:
    p = _Parser(_lex(src), declared)
    t = p.term()
    p.done()
    return t


def parse_type(src: str, declared: set[str] | None = None) -> PreTerm:
    p = _Parser(_lex(src), declared)
    t = p.type_()
    p.done()
    return t


def parse_judgment(src: str) -> Judgment | CtDirective:
    p = _Parser(_lex(src), set())
    j = p.judgment()
    p.done()
    return j


def parse(src: str) -> PreTerm | Judgment | CtDirective:
    """Parse a judgment, a type, or a term, dispatching on the first token."""
    toks = _lex(src)
    head = toks[0]
    if head.kind == "ident" and head.text in JUDGMENT_KEYWORDS:
        return parse_judgment(src)
    if head.kind == "ident" and head.text in TYPE_KEYWORDS:
        return parse_type(src)
    if head.text == "(":
        # parenthesized: try term first, then type
        try:
            return parse_term(src)
        except SyntaxError_ as term_err:
            try:
                return parse_type(src)
            except SyntaxError_:
                raise term_err from None
    return parse_term(src)


def parse_file(text: str) -> list[tuple[int, Judgment | CtDirective]]:
    """Parse a line-oriented judgment file; '#' comments and blank lines skipped."""
    out: list[tuple[int, Judgment | CtDirective]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        try:
            out.append((lineno, parse_judgment(stripped)))
        except SyntaxError_ as e:
            raise SyntaxError_(e.msg, lineno, e.col) from None
    return out


# ---------------------------------------------------------------------------
# Printer
# ---------------------------------------------------------------------------

def _pick(hint: str, used: set[str]) -> str:
    base = hint.split("%")[0] or "x"
    if base in KEYWORDS:
        base = base + "v"
    if base not in used:
        return base
    for i in itertools.count(1):
        cand = f"{base}{i}"
        if cand not in used:
            return cand
    raise AssertionError


def to_src(t: PreTerm, used: set[str] | None = None) -> str:
    if used is None:
        used = set(free_vars(t))
    return _pr(t, used)


def _open_pr(body: PreTerm, hints, used: set[str]) -> tuple[list[str], PreTerm]:
    if isinstance(hints, str):
        hints = (hints,)
    names = []
    for h in hints:
        nm = _pick(h, used)
        used.add(nm)
        names.append(nm)
    return names, instantiate(body, tuple(FVar(n) for n in names))


def _pr_binder(body, hints, used) -> tuple[str, str]:
    names, opened = _open_pr(body, hints, used)
    s = _pr(opened, used)
    for n in names:
        used.discard(n)
    return " ".join(names), s


def _pr(t: PreTerm, used: set[str]) -> str:
    match t:
        case FVar(name):
            return name
        case BVar(k):
            return f"?{k}"              # only reachable on non-locally-closed trees
        case Zero() | Succ():
            n = as_numeral(t)
            if n is not None:
                return str(n)
            return f"succ({_pr(t.arg, used)})"
        case NatRec(n, z, s):
            xs, body = _pr_binder(s, t.step_hints, used)
            return f"natrec({_pr(n, used)}; {_pr(z, used)}; {xs} . {body})"
        case Star():
            return "star"
        case UnitRec(c, d):
            return f"unitrec({_pr(c, used)}; {_pr(d, used)})"
        case EmptyRec(c):
            return f"emptyrec({_pr(c, used)})"
        case Pair(a, b):
            return f"pair({_pr(a, used)}, {_pr(b, used)})"
        case Split(c, d):
            xs, body = _pr_binder(d, t.body_hints, used)
            return f"split({_pr(c, used)}; {xs} . {body})"
        case Lam(b):
            xs, body = _pr_binder(b, t.hint, used)
            return f"lam {xs} . {body}"
        case Ap(f, a):
            return f"Ap({_pr(f, used)}, {_pr(a, used)})"
        case Inl(a):
            return f"inl({_pr(a, used)})"
        case Inr(a):
            return f"inr({_pr(a, used)})"
        case When(c, l, r):
            xl, bl = _pr_binder(l, t.left_hint, used)
            xr, br = _pr_binder(r, t.right_hint, used)
            return f"when({_pr(c, used)}; {xl} . {bl}; {xr} . {br})"
        case Nil():
            return "nil"
        case Cons(l, a):
            return f"cons({_pr(l, used)}, {_pr(a, used)})"
        case ListRec(c, d, e):
            xs, body = _pr_binder(e, t.step_hints, used)
            return f"listrec({_pr(c, used)}; {_pr(d, used)}; {xs} . {body})"
        case Refl(a):
            return f"refl({_pr(a, used)})"
        case IdPeel(c, d):
            xs, body = _pr_binder(d, t.body_hint, used)
            return f"idpeel({_pr(c, used)}; {xs} . {body})"
        case Rf(a, r):
            return f"rf({_pr(a, used)}, {_pr(r, used)})"
        case Tr(a, j, r):
            return f"tr({_pr(a, used)}, {_pr(j, used)}, {_pr(r, used)})"
        case Ind(m, q1, q2):
            x1, b1 = _pr_binder(q1, t.base_hints, used)
            x2, b2 = _pr_binder(q2, t.step_hints, used)
            return f"ind({_pr(m, used)}; {x1} . {b1}; {x2} . {b2})"
        case N0Hat():
            return "n0hat"
        case N1Hat():
            return "n1hat"
        case NHat():
            return "nhat"
        case SigmaHat(s, f):
            return f"sigmahat({_pr(s, used)}, {_pr(f, used)})"
        case PiHat(s, f):
            return f"pihat({_pr(s, used)}, {_pr(f, used)})"
        case PlusHat(a, b):
            return f"plushat({_pr(a, used)}, {_pr(b, used)})"
        case ListHat(s):
            return f"listhat({_pr(s, used)})"
        case IdHat(s, a, b):
            return f"idhat({_pr(s, used)}, {_pr(a, used)}, {_pr(b, used)})"
        case CovHat(s, i, c, a, v):
            xi, bi = _pr_binder(i, t.idx_hint, used)
            xc, bc = _pr_binder(c, t.cov_hints, used)
            return (f"cov({_pr(s, used)}; {xi} . {bi}; {xc} . {bc}; "
                    f"{_pr(a, used)}; {_pr(v, used)})")
        case TN0():
            return "N0"
        case TN1():
            return "N1"
        case TN():
            return "N"
        case TU0():
            return "U0"
        case TPi(dom, _) if not _uses_bound(t.cod):
            cod = instantiate(t.cod, (FVar(fresh_name("_")),))
            ds = _pr(dom, used)
            if isinstance(dom, (TPi, TSigma)):
                ds = f"({ds})"
            return f"{ds} -> {_pr(cod, used)}"
        case TSigma(dom, _) | TPi(dom, _):
            kw = "Sigma" if isinstance(t, TSigma) else "Pi"
            xs, body = _pr_binder(t.cod, t.hint, used)
            return f"{kw} {xs} : {_pr(dom, used)} . {body}"
        case TSum(a, b):
            return f"Sum({_pr(a, used)}, {_pr(b, used)})"
        case TList(a):
            return f"List({_pr(a, used)})"
        case TId(a, l, r):
            return f"Id({_pr(a, used)}, {_pr(l, used)}, {_pr(r, used)})"
        case TDec(a):
            return f"T({_pr(a, used)})"
    raise AssertionError(f"unprintable node {t!r}")


def _uses_bound(body: PreTerm, depth: int = 0) -> bool:
    if isinstance(body, BVar):
        return body.k == depth
    if isinstance(body, FVar):
        return False
    for name, arity in _SIG[type(body)]:
        if _uses_bound(getattr(body, name), depth + arity):
            return True
    return False


def judgment_to_src(j: Judgment | CtDirective) -> str:
    if isinstance(j, CtDirective):
        return f"ct {to_src(j.fn)}"
    used = set()
    for _, ty in j.ctx.entries:
        used |= free_vars(ty)
    for part in _judgment_parts(j):
        used |= free_vars(part)
    ctx = "[" + ", ".join(f"{n} : {to_src(ty, set(used))}" for n, ty in j.ctx.entries) + "]"
    if isinstance(j, TypeWF):
        return f"type {ctx} |- {to_src(j.ty, set(used))}"
    if isinstance(j, TypeEq):
        return f"typeeq {ctx} |- {to_src(j.lhs, set(used))} == {to_src(j.rhs, set(used))}"
    if isinstance(j, TermOf):
        return f"term {ctx} |- {to_src(j.term, set(used))} : {to_src(j.ty, set(used))}"
    return (f"termeq {ctx} |- {to_src(j.lhs, set(used))} == "
            f"{to_src(j.rhs, set(used))} : {to_src(j.ty, set(used))}")


def _judgment_parts(j: Judgment) -> list[PreTerm]:
    if isinstance(j, TypeWF):
        return [j.ty]
    if isinstance(j, TypeEq):
        return [j.lhs, j.rhs]
    if isinstance(j, TermOf):
        return [j.term, j.ty]
    return [j.lhs, j.rhs, j.ty]
