"""A concrete first Kleene algebra over the naturals.

Programs are naturals: a code is pair(tag, args) where args is the encoded
list of arguments collected so far.  Applying a code appends the argument;
once the tag's arity is reached the operation executes.  Partial application
is therefore pure arithmetic on codes, which is what makes the s-m-n tricks
(PAPP, the recursion theorem) cheap.

Every natural decodes: codes whose tag is unknown, or whose collected
argument list is already at or beyond the tag's arity, are the designated
diverging programs.

The instruction set is documented in docs/machine.md, together with the
trace format used by the T predicate and the U extractor.
"""

from __future__ import annotations

import itertools
import sys
from dataclasses import dataclass

# Bracket abstraction recurses over combinator spines; give it headroom.
# Machine evaluation itself is iterative and never deepens the Python stack.
sys.setrecursionlimit(max(sys.getrecursionlimit(), 20_000))

DEFAULT_FUEL = 10 ** 6


class Diverged(Exception):
    """Raised when evaluation exhausts its step budget or hits a diverger."""


class Budget:
    __slots__ = ("steps",)

    def __init__(self, steps: int = DEFAULT_FUEL):
        self.steps = steps

    def tick(self):
        if self.steps <= 0:
            raise Diverged("fuel exhausted")
        self.steps -= 1


# ---------------------------------------------------------------------------
# Pairing and list coding
# ---------------------------------------------------------------------------
#
# The pairing function ranks pairs of bit strings (naturals in bijective
# shortlex form) by total length, then by left length, then lexically.
# It is a primitive recursive bijection with pair(0, 0) = 0, and the size of
# pair(n, m) is about bits(n) + bits(m), so deeply nested codes stay
# polynomial in the number of tree nodes.  (Cantor pairing, whose output has
# 2*max(bits) bits, makes nested program codes exponentially large.)
#
# Layout: a natural n corresponds to the bit string s with 2^|s| + val(s)
# = n + 1.  With k = |s|, L = k + |t|,
#   pair(n, m) = pairs_below(L) + k*2^L + val(s)*2^(L-k) + val(t)
# where pairs_below(L) = (L-1)*2^L + 1 counts the pairs of total length < L.


def _pairs_below(length: int) -> int:
    return (length - 1) * (1 << length) + 1 if length else 0


def pair(n: int, m: int) -> int:
    k = (n + 1).bit_length() - 1
    lt = (m + 1).bit_length() - 1
    total = k + lt
    vs = n + 1 - (1 << k)
    vt = m + 1 - (1 << lt)
    return _pairs_below(total) + (k << total) + (vs << lt) + vt


def unpair(r: int) -> tuple[int, int]:
    total = r.bit_length()
    while _pairs_below(total) > r:
        total -= 1
    rem = r - _pairs_below(total)
    k = rem >> total
    rem -= k << total
    lt = total - k
    vs, vt = rem >> lt, rem & ((1 << lt) - 1)
    return (1 << k) + vs - 1, (1 << lt) + vt - 1


def unpair0(k: int) -> int:
    return unpair(k)[0]


def unpair1(k: int) -> int:
    return unpair(k)[1]


def pair3(a: int, b: int, c: int) -> int:
    return pair(pair(a, b), c)


def pair_many(*xs: int) -> int:
    acc = xs[0]
    for x in xs[1:]:
        acc = pair(acc, x)
    return acc


def snoc(lst: int, a: int) -> int:
    return pair(lst, a) + 1


def enc_list(items: list[int]) -> int:
    acc = 0
    for a in items:
        acc = snoc(acc, a)
    return acc


def dec_list(x: int) -> list[int]:
    out: list[int] = []
    while x:
        front, last = unpair(x - 1)
        out.append(last)
        x = front
    out.reverse()
    return out


def list_length(x: int) -> int:
    n = 0
    while x:
        x = unpair0(x - 1)
        n += 1
    return n


def list_component(x: int, j: int) -> int:
    """The j-th element of the encoded list; 0 when j is out of range."""
    items = dec_list(x)
    return items[j] if j < len(items) else 0


# ---------------------------------------------------------------------------
# The machine
# ---------------------------------------------------------------------------

K = 0       # K a x        = a
I = 1       # I x          = x
S = 2       # S f g x      = {  {f}(x)  }(  {g}(x)  )
SUCC = 3    # SUCC n       = n + 1
PRED = 4    # PRED n       = n - 1  (0 at 0)
PAIR = 5    # PAIR a b     = pair(a, b)
P0 = 6      # P0 k         = unpair0(k)
P1 = 7      # P1 k         = unpair1(k)
IFZ = 8     # IFZ n a b    = a if n = 0 else b
EQ = 9      # EQ a b       = 0 if a = b else 1
REC = 10    # REC z s n    = z if n = 0 else {s}(n-1, REC z s (n-1))
LREC = 11   # LREC d e l   = d if l = [] else {e}(front l, last l, LREC d e (front l))
SNOC = 12   # SNOC l a     = pair(l, a) + 1
LEN = 13    # LEN l        = list length
CPT = 14    # CPT l j      = j-th component
MU = 15     # MU f         = least m with {f}(m) = 0
AP = 16     # AP e x       = {e}(x)
PAPP = 17   # PAPP e a x   = {e}(a, x)   -- total code-level partial application
IND = 18    # IND q1 q2 m  -- cover recursor, see _run
TRACE = 19  # TRACE e x    = the halting trace of {e}(x)

ARITY = {
    K: 2, I: 1, S: 3, SUCC: 1, PRED: 1, PAIR: 2, P0: 1, P1: 1, IFZ: 3,
    EQ: 2, REC: 3, LREC: 3, SNOC: 2, LEN: 1, CPT: 2, MU: 1, AP: 2,
    PAPP: 3, IND: 3, TRACE: 2,
}


def code(tag: int, args: list[int] | None = None) -> int:
    return pair(tag, enc_list(args or []))


def decode(e: int) -> tuple[int, list[int]] | None:
    """Decode a code; None means the designated diverging program."""
    tag, payload = unpair(e)
    if tag not in ARITY:
        return None
    args = dec_list(payload)
    if len(args) >= ARITY[tag]:
        return None
    return tag, args


# Expressions fed to the iterative evaluator: either a value already, or an
# application node ("app", fn_expr, arg_expr).
_Expr = int | tuple


def _app(f: _Expr, *xs: _Expr) -> _Expr:
    for x in xs:
        f = ("app", f, x)
    return f


def _eval_expr(expr: _Expr, budget: Budget) -> int:
    """Evaluate an application tree without growing the Python stack.

    Control stack frames: ("ev", expr) evaluates an expression, ("ap",)
    applies the two topmost values, ("mu", f, m) resumes an unbounded
    search, ("tr", e, x, steps0) wraps a finished sub-run into a trace.
    """
    control: list[tuple] = [("ev", expr)]
    values: list[int] = []
    while control:
        frame = control.pop()
        op = frame[0]
        if op == "ev":
            e = frame[1]
            if isinstance(e, int):
                values.append(e)
            else:
                control.append(("ap",))
                control.append(("ev", e[2]))
                control.append(("ev", e[1]))
        elif op == "ap":
            x = values.pop()
            f = values.pop()
            budget.tick()
            dec = decode(f)
            if dec is None:
                raise Diverged(f"code {f} diverges by fiat")
            tag, args = dec
            if len(args) + 1 < ARITY[tag]:
                values.append(code(tag, args + [x]))
                continue
            a = args + [x]
            if tag in (K, I):
                values.append(a[0])
            elif tag == S:
                control.append(("ev", _app(_app(a[0], a[2]), _app(a[1], a[2]))))
            elif tag == SUCC:
                values.append(a[0] + 1)
            elif tag == PRED:
                values.append(a[0] - 1 if a[0] else 0)
            elif tag == PAIR:
                values.append(pair(a[0], a[1]))
            elif tag == P0:
                values.append(unpair0(a[0]))
            elif tag == P1:
                values.append(unpair1(a[0]))
            elif tag == IFZ:
                values.append(a[1] if a[0] == 0 else a[2])
            elif tag == EQ:
                values.append(0 if a[0] == a[1] else 1)
            elif tag == REC:
                z, s, n = a
                if n == 0:
                    values.append(z)
                else:
                    rest = _app(code(REC), z, s, n - 1)
                    control.append(("ev", _app(_app(s, n - 1), rest)))
            elif tag == LREC:
                d, e2, l = a
                if l == 0:
                    values.append(d)
                else:
                    front, last = unpair(l - 1)
                    rest = _app(code(LREC), d, e2, front)
                    control.append(("ev", _app(e2, front, last, rest)))
            elif tag == SNOC:
                values.append(snoc(a[0], a[1]))
            elif tag == LEN:
                values.append(list_length(a[0]))
            elif tag == CPT:
                values.append(list_component(a[0], a[1]))
            elif tag == MU:
                control.append(("mu", a[0], 0))
                control.append(("ev", _app(a[0], 0)))
            elif tag == AP:
                control.append(("ev", _app(a[0], a[1])))
            elif tag == PAPP:
                control.append(("ev", _app(a[0], a[1], a[2])))
            elif tag == IND:
                q1, q2, m = a
                mtag, payload = unpair(m)
                if mtag == 7:               # rf-proof: payload = pair(z, r)
                    z, r = unpair(payload)
                    control.append(("ev", _app(q1, z, r)))
                elif mtag == 8:             # tr-proof: payload = pair3(z, j, r)
                    zj, r = unpair(payload)
                    z, j = unpair(zj)
                    aux = _to_expr(c2_aux_term(KNum(q1), KNum(q2), KNum(r)), {})
                    control.append(("ev", _app(_app(q2, z, j, r), aux)))
                else:
                    values.append(0)
            elif tag == TRACE:
                e2, x2 = a
                control.append(("tr", e2, x2, budget.steps))
                control.append(("ev", _app(e2, x2)))
            else:
                raise AssertionError(f"tag {tag}")
        elif op == "mu":
            r = values.pop()
            _, f, m = frame
            if r == 0:
                values.append(m)
            else:
                budget.tick()
                control.append(("mu", f, m + 1))
                control.append(("ev", _app(f, m + 1)))
        elif op == "tr":
            r = values.pop()
            _, e2, x2, steps0 = frame
            values.append(pair(pair(e2, x2), pair(steps0 - budget.steps, r)))
        else:
            raise AssertionError(frame)
    assert len(values) == 1
    return values[0]


def apply(e: int, n: int, budget: Budget | int = DEFAULT_FUEL) -> int:
    """Kleene application {e}(n); raises Diverged on fuel exhaustion."""
    if isinstance(budget, int):
        budget = Budget(budget)
    return _eval_expr(("app", e, n), budget)


def apply_many(e: int, *ns: int, budget: Budget | int = DEFAULT_FUEL) -> int:
    if isinstance(budget, int):
        budget = Budget(budget)
    return _eval_expr(_app(e, *ns), budget)


def apply_counted(e: int, n: int, max_steps: int) -> tuple[int, int] | None:
    """Run {e}(n) from a fresh step counter; (result, steps) or None."""
    budget = Budget(max_steps)
    try:
        result = apply(e, n, budget)
    except Diverged:
        return None
    return result, max_steps - budget.steps


def trace_of(e: int, n: int, max_steps: int = DEFAULT_FUEL) -> int | None:
    got = apply_counted(e, n, max_steps)
    if got is None:
        return None
    result, steps = got
    return pair(pair(e, n), pair(steps, result))


def kleene_T(e: int, n: int, m: int) -> bool:
    """Decidable: m is the canonical halting trace of {e}(n)."""
    en, sr = unpair(m)
    if unpair(en) != (e, n):
        return False
    steps, result = unpair(sr)
    got = apply_counted(e, n, steps + 1)
    return got == (result, steps)


def kleene_U(m: int) -> int:
    return unpair1(unpair1(m))


# ---------------------------------------------------------------------------
# Applicative terms and bracket abstraction
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class KTerm:
    __slots__ = ()


@dataclass(frozen=True)
class KNum(KTerm):
    value: int


@dataclass(frozen=True)
class KVar(KTerm):
    name: str


@dataclass(frozen=True)
class KApp(KTerm):
    fn: KTerm
    arg: KTerm


_kfresh_counter = itertools.count()


def kfresh(hint: str = "k") -> str:
    return f"{hint}%{next(_kfresh_counter)}"


def kvars(t: KTerm) -> frozenset[str]:
    if isinstance(t, KVar):
        return frozenset((t.name,))
    if isinstance(t, KApp):
        return kvars(t.fn) | kvars(t.arg)
    return frozenset()


def ksubst(t: KTerm, name: str, u: KTerm) -> KTerm:
    if isinstance(t, KVar):
        return u if t.name == name else t
    if isinstance(t, KApp):
        return KApp(ksubst(t.fn, name, u), ksubst(t.arg, name, u))
    return t


def _to_expr(t: KTerm, env: dict[str, int]) -> _Expr:
    if isinstance(t, KNum):
        return t.value
    if isinstance(t, KVar):
        if t.name not in env:
            raise ValueError(f"unbound applicative variable {t.name!r}")
        return env[t.name]
    assert isinstance(t, KApp)
    return ("app", _to_expr(t.fn, env), _to_expr(t.arg, env))


def eval_kterm(t: KTerm, env: dict[str, int] | None = None,
               budget: Budget | int = DEFAULT_FUEL) -> int:
    """Evaluate a closed applicative term (env supplies the free variables)."""
    if isinstance(budget, int):
        budget = Budget(budget)
    return _eval_expr(_to_expr(t, env or {}), budget)


_K_CODE = code(K)
_I_CODE = code(I)
_S_CODE = code(S)


def lambda_abstract(t: KTerm, x: str) -> KTerm:
    """Bracket abstraction: for all n, {eval(Λx.t)}(n) = eval(t[n/x]).

    The uniform S/K scheme (no eta shortcut) makes abstraction commute with
    substitution on the nose, which is what validates the replacement rule
    in the model: the value of Λx.t depends only on the values of the free
    subterms of t, never on their syntax.
    """
    if isinstance(t, KVar) and t.name == x:
        return KNum(_I_CODE)
    if x not in kvars(t):
        return KApp(KNum(_K_CODE), t)
    assert isinstance(t, KApp)
    return KApp(KApp(KNum(_S_CODE), lambda_abstract(t.fn, x)),
                lambda_abstract(t.arg, x))


def lambda_abstract_many(t: KTerm, names: list[str]) -> KTerm:
    for x in reversed(names):
        t = lambda_abstract(t, x)
    return t


def kapp(f: KTerm, *args: KTerm) -> KTerm:
    for a in args:
        f = KApp(f, a)
    return f


def kop(tag: int, *args: KTerm) -> KTerm:
    return kapp(KNum(code(tag)), *args)


# ---------------------------------------------------------------------------
# The cover recursor and its contraction shape
# ---------------------------------------------------------------------------

def ind_call(q1: KTerm, q2: KTerm, m: KTerm) -> KTerm:
    return kop(IND, q1, q2, m)


def c2_aux_term(q1: KTerm, q2: KTerm, r: KTerm) -> KTerm:
    """The argument fed to q2 by the tr-contraction: Λz.Λu. ind(q1, q2, {r}(z, u)).

    The IND instruction evaluates exactly this term at runtime, so the
    machine-built argument and the interpretation of the contractum's
    lambda coincide as numerals whenever the leaf values coincide.
    """
    z, u = kfresh("z"), kfresh("u")
    body = ind_call(q1, q2, kapp(r, KVar(z), KVar(u)))
    return lambda_abstract_many(body, [z, u])


# ---------------------------------------------------------------------------
# Recursion theorem
# ---------------------------------------------------------------------------

def fix_by_recursion_theorem(transformer: int, fuel: int = DEFAULT_FUEL) -> int:
    """A code e with {e}(x) = {{transformer}(e)}(x) for all x.

    Kleene's construction: d computes x from u via the transformed
    self-application code, and e is the PAPP code applying d to itself.
    PAPP makes s-m-n a total arithmetic operation on codes, so the diagonal
    never needs to run anything to build e.
    """
    u, x = kfresh("u"), kfresh("x")
    self_code = kop(PAIR, KNum(PAPP),
                    kop(SNOC, kop(SNOC, KNum(0), KVar(u)), KVar(u)))
    body = kapp(KApp(KNum(transformer), self_code), KVar(x))
    d = eval_kterm(lambda_abstract_many(body, [u, x]), {}, fuel)
    return code(PAPP, [d, d])


# ---------------------------------------------------------------------------
# Derived codes
# ---------------------------------------------------------------------------

def _build(term: KTerm) -> int:
    return eval_kterm(term, {}, 10 ** 7)


def _mk_plus() -> int:
    a, b, k, r = kfresh("a"), kfresh("b"), kfresh("k"), kfresh("r")
    step = lambda_abstract_many(kop(SUCC, KVar(r)), [k, r])
    return _build(lambda_abstract_many(kop(REC, KVar(a), step, KVar(b)), [a, b]))


def _mk_monus() -> int:
    a, b, k, r = kfresh("a"), kfresh("b"), kfresh("k"), kfresh("r")
    step = lambda_abstract_many(kop(PRED, KVar(r)), [k, r])
    return _build(lambda_abstract_many(kop(REC, KVar(a), step, KVar(b)), [a, b]))


def _mk_mult() -> int:
    a, b, k, r = kfresh("a"), kfresh("b"), kfresh("k"), kfresh("r")
    step = lambda_abstract_many(kapp(KNum(PLUS_CODE), KVar(a), KVar(r)), [k, r])
    return _build(lambda_abstract_many(kop(REC, KNum(0), step, KVar(b)), [a, b]))


PLUS_CODE = _mk_plus()
MONUS_CODE = _mk_monus()
MULT_CODE = _mk_mult()
IDENTITY_CODE = _I_CODE


# ---------------------------------------------------------------------------
# The realizer of the formal Church's thesis
# ---------------------------------------------------------------------------

def _mk_ct_realizer() -> int:
    # Given a function realizer a, return pair(a, w) where {w}(x) is
    # pair(z, U(z)) with z the halting trace of {a}(x).  The code itself is
    # a fixed numeral; it is close to the identity, dressed with the trace
    # search and the result extractor.
    a, x, z = kfresh("a"), kfresh("x"), kfresh("z")
    inner = lambda_abstract(kop(PAIR, KVar(z), kop(P1, kop(P1, KVar(z)))), z)
    witness = lambda_abstract(KApp(inner, kop(TRACE, KVar(a), KVar(x))), x)
    return _build(lambda_abstract(kop(PAIR, KVar(a), witness), a))


CT_REALIZER = _mk_ct_realizer()


def ct_realizer() -> int:
    """The fixed numeral realizing the formal Church's thesis."""
    return CT_REALIZER


def ct_check(fn_code: int, xmax: int = 20, fuel: int = DEFAULT_FUEL) -> bool:
    """Pointwise check of the realizer against one function realizer.

    Extracts pair(e, w) = {CT_REALIZER}(fn_code) and verifies, for each
    x <= xmax, that {w}(x) = pair(z, r) with T(e, x, z), U(z) = {fn_code}(x),
    and r = U(z).
    """
    budget = Budget(fuel)
    ew = apply(CT_REALIZER, fn_code, budget)
    e, w = unpair(ew)
    for x in range(xmax + 1):
        zr = apply(w, x, budget)
        z, r = unpair(zr)
        if not kleene_T(e, x, z):
            return False
        expected = apply(fn_code, x, budget)
        if kleene_U(z) != expected or r != expected:
            return False
    return True
