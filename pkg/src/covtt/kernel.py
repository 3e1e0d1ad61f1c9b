"""Judgment checker: weak-head normalization, typing, and equality.

The checker is sound for the declarative theory and deliberately incomplete:

- algorithmic term equality reduces at the head only and compares binder
  bodies up to alpha.  In particular the xi rule (congruence of lambda under
  an open equation) is not admitted; the replacement rule is what the
  equality recursion implements at non-binding positions.
- eliminator motives are not part of the term syntax; the checker synthesizes
  them by abstracting the goal type over the scrutinee (and, for the cover
  eliminator, over the covered element).  Eliminators whose scrutinee has no
  inferable type are rejected.

Rejections carry the name of the rule whose premise failed.
"""

from __future__ import annotations

import dataclasses
from contextlib import contextmanager
from dataclasses import dataclass

from .syntax import _SIG  # field signatures drive the congruence recursion
from .syntax import (
    Ap, BVar, Context, Cons, CovHat, EmptyRec, FVar, IdHat, IdPeel, Ind, Inl,
    Inr, Judgment, Lam, ListHat, ListRec, N0Hat, N1Hat, NatRec, NHat, Nil,
    Pair, PiHat, PlusHat, PreTerm, Refl, Rf, SigmaHat, Split, Star, Succ,
    TDec, TId, TList, TN, TN0, TN1, TPi, TSigma, TSum, TU0, Tr, TypeEq,
    TypeWF, TermEq, TermOf, UnitRec, When, Zero, abstract_out, arrow,
    fresh_name, instantiate, pi_, substitute, to_src,
)

DEFAULT_FUEL = 10 ** 6

Whnf = PreTerm


class FuelExhausted(Exception):
    pass


class CheckFailure(Exception):
    def __init__(self, rule: str, msg: str):
        super().__init__(f"[{rule}] {msg}")
        self.rule = rule
        self.msg = msg


@dataclass(frozen=True)
class CheckResult:
    accepted: bool
    rule: str | None = None
    reason: str | None = None

    @staticmethod
    def ok() -> "CheckResult":
        return CheckResult(True)

    @staticmethod
    def fail(e: CheckFailure) -> "CheckResult":
        return CheckResult(False, e.rule, e.msg)


@contextmanager
def _premise(rule: str, what: str):
    """Attribute a failing premise to the rule being applied."""
    try:
        yield
    except CheckFailure as e:
        raise CheckFailure(rule, f"{what}: {e.msg}") from None


class _Fuel:
    __slots__ = ("steps",)

    def __init__(self, steps: int):
        self.steps = steps

    def tick(self):
        if self.steps <= 0:
            raise FuelExhausted("weak-head step limit reached")
        self.steps -= 1


# ---------------------------------------------------------------------------
# Weak-head normalization
# ---------------------------------------------------------------------------

_ELIM_SCRUT = {
    Ap: "fn", NatRec: "scrut", UnitRec: "scrut", Split: "scrut",
    When: "scrut", ListRec: "scrut", IdPeel: "scrut", Ind: "scrut",
}


def _contract(frame: PreTerm, head: PreTerm) -> PreTerm | None:
    """One computation step for an eliminator frame over a canonical head."""
    match frame, head:
        case Ap(), Lam(body):
            return instantiate(body, (frame.arg,))
        case NatRec(), Zero():
            return frame.base
        case NatRec(), Succ(n):
            prev = NatRec(n, frame.base, frame.step, frame.step_hints)
            return instantiate(frame.step, (n, prev))
        case UnitRec(), Star():
            return frame.base
        case Split(), Pair(a, b):
            return instantiate(frame.body, (a, b))
        case When(), Inl(a):
            return instantiate(frame.left, (a,))
        case When(), Inr(b):
            return instantiate(frame.right, (b,))
        case ListRec(), Nil():
            return frame.base
        case ListRec(), Cons(init, last):
            prev = ListRec(init, frame.base, frame.step, frame.step_hints)
            return instantiate(frame.step, (init, last, prev))
        case IdPeel(), Refl(a):
            return instantiate(frame.body, (a,))
        case Ind(), Rf(a, r):
            return instantiate(frame.base, (a, r))
        case Ind(), Tr(a, j, r):
            # q2(a, j, r, lam z . lam u . ind(Ap(Ap(r, z), u); q1; q2))
            inner = Ind(Ap(Ap(r, BVar(1)), BVar(0)), frame.base, frame.step,
                        frame.base_hints, frame.step_hints)
            fn = Lam(Lam(inner, "u"), "z")
            return instantiate(frame.step, (a, j, r, fn))
    return None


def whnf(t: PreTerm, fuel: int = DEFAULT_FUEL) -> Whnf:
    """Leftmost-outermost weak-head normal form; raises FuelExhausted."""
    budget = _Fuel(fuel)
    return _whnf(t, budget)


def _whnf(t: PreTerm, budget: _Fuel) -> PreTerm:
    spine: list[PreTerm] = []
    cur = t
    while True:
        cls = type(cur)
        if cls in _ELIM_SCRUT:
            spine.append(cur)
            cur = getattr(cur, _ELIM_SCRUT[cls])
            continue
        if not spine:
            return cur
        frame = spine[-1]
        contracted = _contract(frame, cur)
        if contracted is None:
            # stuck: rebuild the spine around the head
            for frame in reversed(spine):
                cur = dataclasses.replace(frame, **{_ELIM_SCRUT[type(frame)]: cur})
            return cur
        budget.tick()
        spine.pop()
        cur = contracted


def whnf_step(t: PreTerm) -> PreTerm | None:
    """One leftmost-outermost head step, or None when t's head is stuck."""
    spine: list[PreTerm] = []
    cur = t
    while type(cur) in _ELIM_SCRUT:
        spine.append(cur)
        cur = getattr(cur, _ELIM_SCRUT[type(cur)])
    while spine:
        frame = spine.pop()
        contracted = _contract(frame, cur)
        if contracted is not None:
            cur = contracted
            for frame in reversed(spine):
                cur = dataclasses.replace(frame, **{_ELIM_SCRUT[type(frame)]: cur})
            return cur
        cur = dataclasses.replace(frame, **{_ELIM_SCRUT[type(frame)]: cur})
    return None


def whnf_type(a: PreTerm, budget: _Fuel) -> PreTerm:
    """Head normal form of a pretype; decodes T(code) one former at a time."""
    while isinstance(a, TDec):
        code = _whnf(a.code, budget)
        match code:
            case N0Hat():
                return TN0()
            case N1Hat():
                return TN1()
            case NHat():
                return TN()
            case SigmaHat(s, t):
                return TSigma(TDec(s), TDec(Ap(t, BVar(0))), "x")
            case PiHat(s, t):
                return TPi(TDec(s), TDec(Ap(t, BVar(0))), "x")
            case PlusHat(l, r):
                return TSum(TDec(l), TDec(r))
            case ListHat(s):
                return TList(TDec(s))
            case IdHat(s, l, r):
                return TId(TDec(s), l, r)
            case _:
                # CovHat is a canonical type head; anything else is stuck.
                return TDec(code)
    return a


# ---------------------------------------------------------------------------
# Algorithmic equality
# ---------------------------------------------------------------------------

def _eq_type(ctx: Context, a: PreTerm, b: PreTerm, budget: _Fuel) -> None:
    wa = whnf_type(a, budget)
    wb = whnf_type(b, budget)
    if type(wa) is not type(wb):
        raise CheckFailure("eq-type", f"{to_src(wa)} and {to_src(wb)} differ")
    match wa:
        case TN0() | TN1() | TN() | TU0():
            return
        case TSigma(dom, _) | TPi(dom, _):
            _eq_type(ctx, dom, wb.dom, budget)
            x = FVar(fresh_name(wa.hint))
            _eq_type(ctx, instantiate(wa.cod, (x,)), instantiate(wb.cod, (x,)), budget)
        case TSum(l, r):
            _eq_type(ctx, l, wb.left, budget)
            _eq_type(ctx, r, wb.right, budget)
        case TList(e):
            _eq_type(ctx, e, wb.elem, budget)
        case TId(ty, l, r):
            _eq_type(ctx, ty, wb.ty, budget)
            _eq_term_in(ctx, l, wb.lhs, budget)
            _eq_term_in(ctx, r, wb.rhs, budget)
        case TDec(code):
            _eq_term_in(ctx, code, wb.code, budget)
        case _:
            raise AssertionError(f"non-type head {wa!r}")


def _eq_term_in(ctx: Context, a: PreTerm, b: PreTerm, budget: _Fuel) -> None:
    wa = _whnf(a, budget)
    wb = _whnf(b, budget)
    if type(wa) is not type(wb):
        raise CheckFailure("eq-term", f"{to_src(wa)} and {to_src(wb)} differ")
    if isinstance(wa, FVar):
        if wa.name != wb.name:
            raise CheckFailure("eq-term", f"variables {wa.name} and {wb.name} differ")
        return
    if isinstance(wa, BVar):
        if wa.k != wb.k:
            raise CheckFailure("eq-term", "bound variables differ")
        return
    for field, arity in _SIG[type(wa)]:
        fa, fb = getattr(wa, field), getattr(wb, field)
        if arity == 0:
            _eq_term_in(ctx, fa, fb, budget)
        elif fa != fb:
            # binder bodies compare up to alpha only; no reduction under binders
            if isinstance(wa, Lam):
                raise CheckFailure(
                    "xi", "lambda bodies are not alpha-equal "
                          "(the xi rule is not admitted)")
            raise CheckFailure(
                "eq-term", f"binder bodies at {type(wa).__name__}.{field} "
                           f"are not alpha-equal")


def check_eq_type(ctx: Context, a: PreTerm, b: PreTerm,
                  fuel: int = DEFAULT_FUEL) -> CheckResult:
    try:
        _eq_type(ctx, a, b, _Fuel(fuel))
        return CheckResult.ok()
    except CheckFailure as e:
        return CheckResult.fail(e)
    except FuelExhausted as e:
        return CheckResult(False, "fuel", str(e))


def check_eq_term(ctx: Context, a: PreTerm, b: PreTerm, ty: PreTerm,
                  fuel: int = DEFAULT_FUEL) -> CheckResult:
    """Both terms are assumed to check against ty (the caller's obligation)."""
    try:
        _eq_term_in(ctx, a, b, _Fuel(fuel))
        return CheckResult.ok()
    except CheckFailure as e:
        return CheckResult.fail(e)
    except FuelExhausted as e:
        return CheckResult(False, "fuel", str(e))


# ---------------------------------------------------------------------------
# Type formation
# ---------------------------------------------------------------------------

def _wf_type(ctx: Context, a: PreTerm, budget: _Fuel) -> None:
    match a:
        case TN0() | TN1() | TN() | TU0():
            return
        case TSigma(dom, cod) | TPi(dom, cod):
            rule = "Sigma-F" if isinstance(a, TSigma) else "Pi-F"
            with _premise(rule, "domain"):
                _wf_type(ctx, dom, budget)
            x = fresh_name(a.hint)
            with _premise(rule, "codomain"):
                _wf_type(ctx.extend(x, dom), instantiate(cod, (FVar(x),)), budget)
        case TSum(l, r):
            with _premise("Sum-F", "component"):
                _wf_type(ctx, l, budget)
                _wf_type(ctx, r, budget)
        case TList(e):
            with _premise("List-F", "element type"):
                _wf_type(ctx, e, budget)
        case TId(ty, l, r):
            with _premise("Id-F", "underlying type"):
                _wf_type(ctx, ty, budget)
            with _premise("Id-F", "endpoint"):
                _check(ctx, l, ty, budget)
                _check(ctx, r, ty, budget)
        case TDec(code):
            with _premise("T-F", "code is not an element of U0"):
                _check(ctx, code, TU0(), budget)
        case _:
            raise CheckFailure("type", f"{to_src(a)} is not a pretype")


# ---------------------------------------------------------------------------
# Term checking and inference
# ---------------------------------------------------------------------------

def _axcov(ctx: Context, s, i, c, i_hint, c_hints, budget: _Fuel) -> None:
    """The shared premises of the cover rules: axcov(s, i, c)."""
    with _premise("F-cov", "carrier code s"):
        _check(ctx, s, TU0(), budget)
    x = fresh_name(i_hint)
    ctx_x = ctx.extend(x, TDec(s))
    with _premise("F-cov", "index family i"):
        _check(ctx_x, instantiate(i, (FVar(x),)), TU0(), budget)
    xc = fresh_name(c_hints[0])
    y = fresh_name(c_hints[1])
    i_at = instantiate(i, (FVar(xc),))
    ctx_c = ctx.extend(xc, TDec(s)).extend(y, TDec(i_at))
    with _premise("F-cov", "covering family c"):
        _check(ctx_c, instantiate(c, (FVar(xc), FVar(y))),
               arrow(TDec(s), TU0()), budget)


def _infer(ctx: Context, t: PreTerm, budget: _Fuel) -> PreTerm:
    match t:
        case FVar(name):
            ty = ctx.lookup(name)
            if ty is None:
                raise CheckFailure("var", f"variable {name} is not in the context")
            return ty
        case Zero():
            return TN()
        case Succ(arg):
            with _premise("N-I", "argument of succ"):
                _check(ctx, arg, TN(), budget)
            return TN()
        case Star():
            return TN1()
        case Ap(fn, arg):
            fty = whnf_type(_infer(ctx, fn, budget), budget)
            if not isinstance(fty, TPi):
                raise CheckFailure("Ap", f"applied term has type {to_src(fty)}, "
                                         f"which is not a Pi type")
            with _premise("Ap", "argument"):
                _check(ctx, arg, fty.dom, budget)
            return instantiate(fty.cod, (arg,))
        case Refl(arg):
            ty = _infer(ctx, arg, budget)
            return TId(ty, arg, arg)
        case N0Hat() | N1Hat() | NHat():
            return TU0()
        case SigmaHat(s, f) | PiHat(s, f):
            rule = "Sigma-hat" if isinstance(t, SigmaHat) else "Pi-hat"
            with _premise(rule, "base code"):
                _check(ctx, s, TU0(), budget)
            with _premise(rule, "family"):
                _check(ctx, f, arrow(TDec(s), TU0()), budget)
            return TU0()
        case PlusHat(l, r):
            with _premise("plus-hat", "summand code"):
                _check(ctx, l, TU0(), budget)
                _check(ctx, r, TU0(), budget)
            return TU0()
        case ListHat(s):
            with _premise("list-hat", "element code"):
                _check(ctx, s, TU0(), budget)
            return TU0()
        case IdHat(s, l, r):
            with _premise("id-hat", "base code"):
                _check(ctx, s, TU0(), budget)
            with _premise("id-hat", "endpoint"):
                _check(ctx, l, TDec(s), budget)
                _check(ctx, r, TDec(s), budget)
            return TU0()
        case CovHat(s, i, c, a, v):
            _axcov(ctx, s, i, c, t.idx_hint, t.cov_hints, budget)
            with _premise("F-cov", "element a"):
                _check(ctx, a, TDec(s), budget)
            with _premise("F-cov", "subset v"):
                _check(ctx, v, arrow(TDec(s), TU0()), budget)
            return TU0()
    raise CheckFailure("infer", f"no type can be inferred for {to_src(t)}")


def _cover_at(g: TDec, elem: PreTerm) -> TDec:
    cov = g.code
    assert isinstance(cov, CovHat)
    return TDec(CovHat(cov.base, cov.idx, cov.cov, elem, cov.sub,
                       cov.idx_hint, cov.cov_hints))


def _check(ctx: Context, t: PreTerm, goal: PreTerm, budget: _Fuel) -> None:
    g = whnf_type(goal, budget)
    match t:
        case Lam(body):
            if not isinstance(g, TPi):
                raise CheckFailure("Pi-I", f"lambda against {to_src(g)}")
            x = fresh_name(t.hint)
            _check(ctx.extend(x, g.dom), instantiate(body, (FVar(x),)),
                   instantiate(g.cod, (FVar(x),)), budget)
        case Pair(a, b):
            if not isinstance(g, TSigma):
                raise CheckFailure("Sigma-I", f"pair against {to_src(g)}")
            with _premise("Sigma-I", "first component"):
                _check(ctx, a, g.dom, budget)
            with _premise("Sigma-I", "second component"):
                _check(ctx, b, instantiate(g.cod, (a,)), budget)
        case Inl(a) | Inr(a):
            if not isinstance(g, TSum):
                raise CheckFailure("Sum-I", f"injection against {to_src(g)}")
            side = g.left if isinstance(t, Inl) else g.right
            with _premise("Sum-I", "injected term"):
                _check(ctx, a, side, budget)
        case Nil():
            if not isinstance(g, TList):
                raise CheckFailure("List-I", f"nil against {to_src(g)}")
        case Cons(init, last):
            if not isinstance(g, TList):
                raise CheckFailure("List-I", f"cons against {to_src(g)}")
            with _premise("List-I", "list part"):
                _check(ctx, init, g, budget)
            with _premise("List-I", "element part"):
                _check(ctx, last, g.elem, budget)
        case Zero() | Succ():
            if not isinstance(g, TN):
                raise CheckFailure("N-I", f"numeral against {to_src(g)}")
            if isinstance(t, Succ):
                with _premise("N-I", "argument of succ"):
                    _check(ctx, t.arg, TN(), budget)
        case Star():
            if not isinstance(g, TN1):
                raise CheckFailure("N1-I", f"star against {to_src(g)}")
        case Refl(a):
            if not isinstance(g, TId):
                raise CheckFailure("Id-I", f"refl against {to_src(g)}")
            with _premise("Id-I", "reflected term"):
                _check(ctx, a, g.ty, budget)
            with _premise("Id-I", "equation"):
                _eq_term_in(ctx, a, g.lhs, budget)
                _eq_term_in(ctx, a, g.rhs, budget)
        case Rf(a, r):
            cov = g.code if isinstance(g, TDec) else None
            if not isinstance(cov, CovHat):
                raise CheckFailure("rf-cov", f"rf against {to_src(g)}")
            with _premise("rf-cov", "element a"):
                _check(ctx, a, TDec(cov.base), budget)
            with _premise("rf-cov", "a is not the covered element"):
                _eq_term_in(ctx, a, cov.elem, budget)
            with _premise("rf-cov", "r does not check against a eps v"):
                _check(ctx, r, TDec(Ap(cov.sub, a)), budget)
        case Tr(a, j, r):
            cov = g.code if isinstance(g, TDec) else None
            if not isinstance(cov, CovHat):
                raise CheckFailure("tr-cov", f"tr against {to_src(g)}")
            with _premise("tr-cov", "element a"):
                _check(ctx, a, TDec(cov.base), budget)
            with _premise("tr-cov", "a is not the covered element"):
                _eq_term_in(ctx, a, cov.elem, budget)
            with _premise("tr-cov", "index j"):
                _check(ctx, j, TDec(instantiate(cov.idx, (a,))), budget)
            c_at = instantiate(cov.cov, (a, j))
            z = fresh_name("z")
            r_ty = pi_(z, TDec(cov.base),
                       arrow(TDec(Ap(c_at, FVar(z))), _cover_at(g, FVar(z))))
            with _premise("tr-cov", "r does not check against "
                                    "(Pi z : T(s)) (z eps c(a,j) -> z cov v)"):
                _check(ctx, r, r_ty, budget)
        case NatRec() | UnitRec() | EmptyRec() | Split() | When() | ListRec() \
                | IdPeel() | Ind():
            _check_elim(ctx, t, goal, budget)
        case _:
            inferred = _infer(ctx, t, budget)
            with _premise("conv", "inferred type does not match the goal"):
                _eq_type(ctx, inferred, goal, budget)


def _motive(goal: PreTerm, scrut: PreTerm, var: str) -> PreTerm:
    """Synthesize a motive by abstracting the goal over the scrutinee."""
    return abstract_out(goal, scrut, var)


def _check_elim(ctx: Context, t: PreTerm, goal: PreTerm, budget: _Fuel) -> None:
    match t:
        case NatRec(n, z, s):
            with _premise("N-E", "scrutinee"):
                _check(ctx, n, TN(), budget)
            x = fresh_name("x")
            p = _motive(goal, n, x)
            with _premise("N-E", "motive"):
                _wf_type(ctx.extend(x, TN()), p, budget)
            with _premise("N-E", "base case"):
                _check(ctx, z, substitute(p, x, Zero()), budget)
            k, r = fresh_name(t.step_hints[0]), fresh_name(t.step_hints[1])
            ctx2 = ctx.extend(k, TN()).extend(r, substitute(p, x, FVar(k)))
            with _premise("N-E", "step case"):
                _check(ctx2, instantiate(s, (FVar(k), FVar(r))),
                       substitute(p, x, Succ(FVar(k))), budget)
        case UnitRec(c, d):
            with _premise("N1-E", "scrutinee"):
                _check(ctx, c, TN1(), budget)
            x = fresh_name("x")
            p = _motive(goal, c, x)
            with _premise("N1-E", "motive"):
                _wf_type(ctx.extend(x, TN1()), p, budget)
            with _premise("N1-E", "base case"):
                _check(ctx, d, substitute(p, x, Star()), budget)
        case EmptyRec(c):
            with _premise("N0-E", "scrutinee"):
                _check(ctx, c, TN0(), budget)
        case Split(c, d):
            tc = whnf_type(_infer_scrut(ctx, c, "Sigma-E", budget), budget)
            if not isinstance(tc, TSigma):
                raise CheckFailure("Sigma-E", f"scrutinee has type {to_src(tc)}")
            z = fresh_name("z")
            p = _motive(goal, c, z)
            with _premise("Sigma-E", "motive"):
                _wf_type(ctx.extend(z, tc), p, budget)
            a, b = fresh_name(t.body_hints[0]), fresh_name(t.body_hints[1])
            ctx2 = ctx.extend(a, tc.dom).extend(b, instantiate(tc.cod, (FVar(a),)))
            with _premise("Sigma-E", "branch"):
                _check(ctx2, instantiate(d, (FVar(a), FVar(b))),
                       substitute(p, z, Pair(FVar(a), FVar(b))), budget)
        case When(c, l, r):
            tc = whnf_type(_infer_scrut(ctx, c, "Sum-E", budget), budget)
            if not isinstance(tc, TSum):
                raise CheckFailure("Sum-E", f"scrutinee has type {to_src(tc)}")
            z = fresh_name("z")
            p = _motive(goal, c, z)
            with _premise("Sum-E", "motive"):
                _wf_type(ctx.extend(z, tc), p, budget)
            a = fresh_name(t.left_hint)
            with _premise("Sum-E", "left branch"):
                _check(ctx.extend(a, tc.left), instantiate(l, (FVar(a),)),
                       substitute(p, z, Inl(FVar(a))), budget)
            b = fresh_name(t.right_hint)
            with _premise("Sum-E", "right branch"):
                _check(ctx.extend(b, tc.right), instantiate(r, (FVar(b),)),
                       substitute(p, z, Inr(FVar(b))), budget)
        case ListRec(c, d, e):
            tc = whnf_type(_infer_scrut(ctx, c, "List-E", budget), budget)
            if not isinstance(tc, TList):
                raise CheckFailure("List-E", f"scrutinee has type {to_src(tc)}")
            z = fresh_name("z")
            p = _motive(goal, c, z)
            with _premise("List-E", "motive"):
                _wf_type(ctx.extend(z, tc), p, budget)
            with _premise("List-E", "nil case"):
                _check(ctx, d, substitute(p, z, Nil()), budget)
            tl, hd, pr = (fresh_name(h) for h in t.step_hints)
            ctx2 = (ctx.extend(tl, tc).extend(hd, tc.elem)
                    .extend(pr, substitute(p, z, FVar(tl))))
            with _premise("List-E", "cons case"):
                _check(ctx2, instantiate(e, (FVar(tl), FVar(hd), FVar(pr))),
                       substitute(p, z, Cons(FVar(tl), FVar(hd))), budget)
        case IdPeel(c, d):
            tc = whnf_type(_infer_scrut(ctx, c, "Id-E", budget), budget)
            if not isinstance(tc, TId):
                raise CheckFailure("Id-E", f"scrutinee has type {to_src(tc)}")
            u, y, x = fresh_name("u"), fresh_name("y"), fresh_name("x")
            p = _motive(_motive(_motive(goal, c, u), tc.rhs, y), tc.lhs, x)
            ctx_p = (ctx.extend(x, tc.ty).extend(y, tc.ty)
                     .extend(u, TId(tc.ty, FVar(x), FVar(y))))
            with _premise("Id-E", "motive"):
                _wf_type(ctx_p, p, budget)
            xd = fresh_name(t.body_hint)
            inst = substitute(substitute(substitute(p, x, FVar(xd)), y, FVar(xd)),
                              u, Refl(FVar(xd)))
            with _premise("Id-E", "branch"):
                _check(ctx.extend(xd, tc.ty), instantiate(d, (FVar(xd),)),
                       inst, budget)
        case Ind(m, q1, q2):
            tm = whnf_type(_infer_scrut(ctx, m, "ind-cov", budget), budget)
            cov = tm.code if isinstance(tm, TDec) else None
            if not isinstance(cov, CovHat):
                raise CheckFailure("ind-cov",
                                   f"scrutinee has type {to_src(tm)}, "
                                   f"which is not a cover")
            s, i, c, v = cov.base, cov.idx, cov.cov, cov.sub
            u, x = fresh_name("u"), fresh_name("x")
            p = _motive(_motive(goal, m, u), cov.elem, x)
            ctx_p = ctx.extend(x, TDec(s)).extend(u, _cover_at(tm, FVar(x)))
            with _premise("ind-cov", "motive"):
                _wf_type(ctx_p, p, budget)

            def p_at(xt: PreTerm, ut: PreTerm) -> PreTerm:
                return substitute(substitute(p, x, xt), u, ut)

            xq, w = fresh_name(t.base_hints[0]), fresh_name(t.base_hints[1])
            ctx1 = ctx.extend(xq, TDec(s)).extend(w, TDec(Ap(v, FVar(xq))))
            with _premise("ind-cov", "rf branch q1"):
                _check(ctx1, instantiate(q1, (FVar(xq), FVar(w))),
                       p_at(FVar(xq), Rf(FVar(xq), FVar(w))), budget)

            x2, h, k, f = (fresh_name(hh) for hh in t.step_hints)
            c_at = instantiate(c, (FVar(x2), FVar(h)))
            z = fresh_name("z")
            k_ty = pi_(z, TDec(s),
                       arrow(TDec(Ap(c_at, FVar(z))), _cover_at(tm, FVar(z))))
            uu = fresh_name("u")
            f_ty = pi_(z, TDec(s),
                       pi_(uu, TDec(Ap(c_at, FVar(z))),
                           p_at(FVar(z), Ap(Ap(FVar(k), FVar(z)), FVar(uu)))))
            ctx2 = (ctx.extend(x2, TDec(s))
                    .extend(h, TDec(instantiate(i, (FVar(x2),))))
                    .extend(k, k_ty).extend(f, f_ty))
            with _premise("ind-cov", "tr branch q2"):
                _check(ctx2, instantiate(q2, (FVar(x2), FVar(h), FVar(k), FVar(f))),
                       p_at(FVar(x2), Tr(FVar(x2), FVar(h), FVar(k))), budget)
        case _:
            raise AssertionError(type(t))


def _infer_scrut(ctx: Context, c: PreTerm, rule: str, budget: _Fuel) -> PreTerm:
    try:
        return _infer(ctx, c, budget)
    except CheckFailure as e:
        raise CheckFailure(rule, f"scrutinee type cannot be inferred: {e.msg}") \
            from None


# ---------------------------------------------------------------------------
# Public entry points
# ---------------------------------------------------------------------------

def check_type(ctx: Context, a: PreTerm, fuel: int = DEFAULT_FUEL) -> CheckResult:
    try:
        _wf_type(ctx, a, _Fuel(fuel))
        return CheckResult.ok()
    except CheckFailure as e:
        return CheckResult.fail(e)
    except FuelExhausted as e:
        return CheckResult(False, "fuel", str(e))


def check_term(ctx: Context, t: PreTerm, a: PreTerm,
               fuel: int = DEFAULT_FUEL) -> CheckResult:
    try:
        _check(ctx, t, a, _Fuel(fuel))
        return CheckResult.ok()
    except CheckFailure as e:
        return CheckResult.fail(e)
    except FuelExhausted as e:
        return CheckResult(False, "fuel", str(e))


def check_context(ctx: Context, fuel: int = DEFAULT_FUEL) -> CheckResult:
    seen = Context()
    for name, ty in ctx.entries:
        r = check_type(seen, ty, fuel)
        if not r.accepted:
            return CheckResult(False, r.rule,
                               f"context entry {name}: {r.reason}")
        seen = seen.extend(name, ty)
    return CheckResult.ok()


def check_judgment(j: Judgment, fuel: int = DEFAULT_FUEL) -> CheckResult:
    r = check_context(j.ctx, fuel)
    if not r.accepted:
        return r
    if isinstance(j, TypeWF):
        return check_type(j.ctx, j.ty, fuel)
    if isinstance(j, TypeEq):
        for side in (j.lhs, j.rhs):
            r = check_type(j.ctx, side, fuel)
            if not r.accepted:
                return r
        return check_eq_type(j.ctx, j.lhs, j.rhs, fuel)
    if isinstance(j, TermOf):
        r = check_type(j.ctx, j.ty, fuel)
        if not r.accepted:
            return r
        return check_term(j.ctx, j.term, j.ty, fuel)
    if isinstance(j, TermEq):
        r = check_type(j.ctx, j.ty, fuel)
        if not r.accepted:
            return r
        # the equands' own typability is the file author's obligation
        return check_eq_term(j.ctx, j.lhs, j.rhs, j.ty, fuel)
    raise TypeError(f"not a judgment: {j!r}")
