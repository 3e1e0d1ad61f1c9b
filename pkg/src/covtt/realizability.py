"""Realizability backend: terms to machine codes, types to classes of naturals.

Terms translate compositionally to applicative terms over the machine in
``kleene``; lambda goes through bracket abstraction, so the translation
commutes with substitution syntactically.  Types translate to predicates on
naturals; the universe is stage-indexed, with finite stages standing in for
the ordinals of the construction (every code built at desk scale has finite
rank, and persistence makes finite cofinal stages sufficient).

Answers are tri-valued: Yes and No are exact, Unknown records that a fuel
limit or a sampled infinite quantifier blocked an exact answer.  Whenever a
carrier is infinite, universally quantified conditions are checked on all
candidates below ``bound`` plus the documented sample points, and a passing
check is reported as Unknown(sampling), never Yes.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import kleene as K
from .kleene import (
    Budget, Diverged, KApp, KNum, KTerm, KVar, eval_kterm, ind_call, kapp,
    kfresh, kop, ksubst, lambda_abstract, lambda_abstract_many,
    list_component, list_length, pair, unpair,
)
from .syntax import (
    Ap, BVar, Cons, Context, CovHat, CtDirective, EmptyRec, FVar, IdHat,
    IdPeel, Ind, Inl, Inr, Judgment, Lam, ListHat, ListRec, N0Hat, N1Hat,
    NatRec, NHat, Nil, Pair, PiHat, PlusHat, PreTerm, Refl, Rf, SigmaHat,
    Split, Star, Succ, TDec, TId, TList, TN, TN0, TN1, TPi, TSigma, TSum,
    TU0, Tr, TypeEq, TypeWF, TermEq, TermOf, UnitRec, When, Zero, open_with,
    to_src,
)

DEFAULT_STAGE = 8
DEFAULT_FUEL = 10 ** 6
DEFAULT_BOUND = 64
SAMPLE_POINTS = (100, 1000)     # extra probes beyond range(bound)


# ---------------------------------------------------------------------------
# Tri-valued answers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Tri:
    kind: str                   # "yes" | "no" | "unknown"
    reason: str | None = None

    def __bool__(self):
        raise TypeError("Tri is not a boolean; match on .kind")

    def __str__(self):
        return self.kind if self.kind != "unknown" else f"unknown({self.reason})"


YES = Tri("yes")


def no(reason: str) -> Tri:
    return Tri("no", reason)


def unknown(reason: str) -> Tri:
    return Tri("unknown", reason)


def tri_all(parts) -> Tri:
    pending = None
    for p in parts:
        if p.kind == "no":
            return p
        if p.kind == "unknown" and pending is None:
            pending = p
    return YES if pending is None else pending


# ---------------------------------------------------------------------------
# Term interpretation
# ---------------------------------------------------------------------------

def interpret_term(t: PreTerm) -> KTerm:
    """Translate a preterm to an applicative term; free variables pass through."""
    match t:
        case FVar(name):
            return KVar(name)
        case BVar():
            raise ValueError("cannot interpret a dangling bound variable")
        case Zero():
            return KNum(0)
        case Succ(a):
            return kop(K.SUCC, interpret_term(a))
        case NatRec(n, z, s):
            names, body = open_with(s, t.step_hints)
            step = lambda_abstract_many(interpret_term(body), list(names))
            return kop(K.REC, interpret_term(z), step, interpret_term(n))
        case Star():
            return KNum(0)
        case UnitRec(c, d):
            return KApp(kop(K.K, interpret_term(d)), interpret_term(c))
        case EmptyRec(c):
            return kop(K.I, interpret_term(c))
        case Pair(a, b):
            return kop(K.PAIR, interpret_term(a), interpret_term(b))
        case Split(c, d):
            names, body = open_with(d, t.body_hints)
            fn = lambda_abstract_many(interpret_term(body), list(names))
            ci = interpret_term(c)
            return kapp(fn, kop(K.P0, ci), kop(K.P1, ci))
        case Lam(b):
            (x,), body = open_with(b, (t.hint,))
            return lambda_abstract(interpret_term(body), x)
        case Ap(f, a):
            return KApp(interpret_term(f), interpret_term(a))
        case Inl(a):
            return kop(K.PAIR, KNum(0), interpret_term(a))
        case Inr(a):
            return kop(K.PAIR, KNum(1), interpret_term(a))
        case When(c, l, r):
            (xl,), lb = open_with(l, (t.left_hint,))
            (xr,), rb = open_with(r, (t.right_hint,))
            ci = interpret_term(c)
            sel = kop(K.IFZ, kop(K.P0, ci),
                      lambda_abstract(interpret_term(lb), xl),
                      lambda_abstract(interpret_term(rb), xr))
            return KApp(sel, kop(K.P1, ci))
        case Nil():
            return KNum(0)
        case Cons(l, a):
            return kop(K.SNOC, interpret_term(l), interpret_term(a))
        case ListRec(c, d, e):
            names, body = open_with(e, t.step_hints)
            step = lambda_abstract_many(interpret_term(body), list(names))
            return kop(K.LREC, interpret_term(d), step, interpret_term(c))
        case Refl(a):
            return interpret_term(a)
        case IdPeel(c, d):
            (x,), body = open_with(d, (t.body_hint,))
            return KApp(lambda_abstract(interpret_term(body), x),
                        interpret_term(c))
        case Rf(a, r):
            return kop(K.PAIR, KNum(7),
                       kop(K.PAIR, interpret_term(a), interpret_term(r)))
        case Tr(a, j, r):
            triple = kop(K.PAIR,
                         kop(K.PAIR, interpret_term(a), interpret_term(j)),
                         interpret_term(r))
            return kop(K.PAIR, KNum(8), triple)
        case Ind(m, q1, q2):
            n1, b1 = open_with(q1, t.base_hints)
            n2, b2 = open_with(q2, t.step_hints)
            q1t = lambda_abstract_many(interpret_term(b1), list(n1))
            q2t = lambda_abstract_many(interpret_term(b2), list(n2))
            return ind_call(q1t, q2t, interpret_term(m))
        case N0Hat():
            return KNum(pair(0, 0))
        case N1Hat():
            return KNum(pair(0, 1))
        case NHat():
            return KNum(pair(0, 2))
        case SigmaHat(s, f):
            return kop(K.PAIR, KNum(1),
                       kop(K.PAIR, interpret_term(s), interpret_term(f)))
        case PiHat(s, f):
            return kop(K.PAIR, KNum(2),
                       kop(K.PAIR, interpret_term(s), interpret_term(f)))
        case PlusHat(l, r):
            return kop(K.PAIR, KNum(3),
                       kop(K.PAIR, interpret_term(l), interpret_term(r)))
        case ListHat(s):
            return kop(K.PAIR, KNum(4), interpret_term(s))
        case IdHat(s, a, b):
            p3 = kop(K.PAIR, kop(K.PAIR, interpret_term(s), interpret_term(a)),
                     interpret_term(b))
            return kop(K.PAIR, KNum(5), p3)
        case CovHat(s, i, c, a, v):
            (xi,), ib = open_with(i, (t.idx_hint,))
            nc, cb = open_with(c, t.cov_hints)
            it = lambda_abstract(interpret_term(ib), xi)
            ct = lambda_abstract_many(interpret_term(cb), list(nc))
            p5 = interpret_term(a)
            for part in (interpret_term(v), interpret_term(s), it, ct):
                p5 = kop(K.PAIR, p5, part)
            return kop(K.PAIR, KNum(6), p5)
    raise ValueError(f"not a term: {to_src(t)}")


def interpret_subst(t: KTerm, name: str, u: KTerm) -> KTerm:
    return ksubst(t, name, u)


# ---------------------------------------------------------------------------
# Set codes
# ---------------------------------------------------------------------------

def decode_set(n: int):
    """Decoded view of a universe code, or None when the tag is not 0..8."""
    tag, payload = unpair(n)
    if tag == 0:
        return ("base", payload) if payload in (0, 1, 2) else None
    if tag in (1, 2):
        kc, e = unpair(payload)
        return ("sigma" if tag == 1 else "pi", kc, e)
    if tag == 3:
        a, b = unpair(payload)
        return ("plus", a, b)
    if tag == 4:
        return ("list", payload)
    if tag == 5:
        ab, c = unpair(payload)
        a, b = unpair(ab)
        return ("id", a, b, c)
    if tag == 6:
        rest, c = unpair(payload)
        rest, i = unpair(rest)
        rest, s = unpair(rest)
        a, v = unpair(rest)
        return ("cov", a, v, s, i, c)
    if tag == 7:
        z, r = unpair(payload)
        return ("rf", z, r)
    if tag == 8:
        zj, r = unpair(payload)
        z, j = unpair(zj)
        return ("tr", z, j, r)
    return None


def rf_code(z: int, r: int) -> int:
    return pair(7, pair(z, r))


def tr_code(z: int, j: int, r: int) -> int:
    return pair(8, pair(pair(z, j), r))


def cov_code(a: int, v: int, s: int, i: int, c: int) -> int:
    return pair(6, pair(pair(pair(pair(a, v), s), i), c))


N0_CODE = pair(0, 0)
N1_CODE = pair(0, 1)
N_CODE = pair(0, 2)


# ---------------------------------------------------------------------------
# The stage-indexed model
# ---------------------------------------------------------------------------

class Model:
    """Stage-indexed universe with shared fuel and memoized queries."""

    def __init__(self, stage: int = DEFAULT_STAGE, fuel: int = DEFAULT_FUEL,
                 bound: int = DEFAULT_BOUND, samples: tuple = SAMPLE_POINTS,
                 list_cap: int = 64, env_samples: int = 3, max_envs: int = 36,
                 cover_depth: int = 48, scan_cap: int = 8):
        self.stage = stage
        self.budget = Budget(fuel)
        self.bound = bound
        self.samples = samples
        self.list_cap = list_cap
        self.env_samples = env_samples
        self.max_envs = max_envs
        self.cover_depth = cover_depth
        # candidate scans over non-enumerable carriers (Pi, U0) stop after
        # this many hits; the results are marked inexact either way
        self.scan_cap = scan_cap
        # compound enumerations are truncated here and marked inexact
        self.members_cap = 4 * bound
        self._set_memo: dict = {}
        self._mem_memo: dict = {}
        self._members_memo: dict = {}
        self._cover_memo: dict = {}

    # -- machine helpers ----------------------------------------------------

    def apply(self, e: int, *args: int) -> int | None:
        try:
            return K.apply_many(e, *args, budget=self.budget)
        except Diverged:
            return None

    def eval_term(self, t: PreTerm, env: dict[str, int]) -> int | None:
        try:
            return eval_kterm(interpret_term(t), env, self.budget)
        except Diverged:
            return None

    def nat_candidates(self) -> list[int]:
        return list(range(self.bound)) + [s for s in self.samples
                                          if s >= self.bound]

    # -- Set_k --------------------------------------------------------------

    def set_at(self, n: int, k: int) -> Tri:
        key = (n, k)
        if key in self._set_memo:
            return self._set_memo[key]
        r = self._set_at(n, k)
        self._set_memo[key] = r
        return r

    def _fam(self, e: int, kc: int, k: int) -> Tri:
        """Fam_k(e, kc): kc is a set and {e}(m) is a set for every member m."""
        parts = [self.set_at(kc, k)]
        if parts[0].kind == "no":
            return parts[0]
        ms, exact = self.members(kc, k)
        for m in ms:
            em = self.apply(e, m)
            if em is None:
                parts.append(unknown("fuel"))
                continue
            parts.append(self.set_at(em, k))
        if not exact:
            parts.append(unknown("sampling"))
        return tri_all(parts)

    def _set_at(self, n: int, k: int) -> Tri:
        dec = decode_set(n)
        if dec is None:
            return no(f"{n} is not a set code")
        kind = dec[0]
        if kind == "base":
            return YES
        if kind in ("rf", "tr"):
            return no("proof codes are not set codes")
        if k <= 0:
            return no(f"{kind} codes require a positive stage")
        if kind in ("sigma", "pi"):
            _, kc, e = dec
            return self._fam(e, kc, k - 1)
        if kind == "plus":
            _, a, b = dec
            return tri_all([self.set_at(a, k - 1), self.set_at(b, k - 1)])
        if kind == "list":
            return self.set_at(dec[1], k - 1)
        if kind == "id":
            _, a, _, _ = dec
            return self.set_at(a, k - 1)
        assert kind == "cov"
        _, a, v, s, i, c = dec
        return self._star_conditions(a, v, s, i, c, k - 1)

    def _star_conditions(self, a, v, s, i, c, k: int) -> Tri:
        parts = [self.set_at(s, k)]
        if parts[0].kind == "no":
            return parts[0]
        parts.append(self.mem_at(a, s, k))
        parts.append(self._fam(v, s, k))
        parts.append(self._fam(i, s, k))
        xs, exact = self.members(s, k)
        for x in xs:
            ix = self.apply(i, x)
            if ix is None:
                parts.append(unknown("fuel"))
                continue
            ys, exact_y = self.members(ix, k)
            if not exact_y:
                exact = False
            for y in ys:
                cxy = self.apply(c, x, y)
                if cxy is None:
                    parts.append(unknown("fuel"))
                    continue
                parts.append(self._fam(cxy, s, k))
        if not exact:
            parts.append(unknown("sampling"))
        return tri_all(parts)

    # -- membership ----------------------------------------------------------

    def mem_at(self, m: int, n: int, k: int) -> Tri:
        key = (m, n, k)
        if key in self._mem_memo:
            return self._mem_memo[key]
        self._mem_memo[key] = unknown("cycle")    # provisional, cycles stay unknown
        r = self._mem_at(m, n, k)
        self._mem_memo[key] = r
        return r

    def _mem_at(self, m: int, n: int, k: int) -> Tri:
        gate = self.set_at(n, k)
        if gate.kind == "no":
            return no(f"{n} is not a set code at stage {k}: {gate.reason}")
        dec = decode_set(n)
        kind = dec[0]
        result: Tri
        if kind == "base":
            j = dec[1]
            if j == 2:
                result = YES
            else:
                result = YES if m < j else no(f"{m} is not below {j}")
        elif kind in ("sigma", "pi"):
            _, kc, e = dec
            if kind == "sigma":
                m0, m1 = unpair(m)
                em = self.apply(e, m0)
                if em is None:
                    result = unknown("fuel")
                else:
                    result = tri_all([self.mem_at(m0, kc, k - 1),
                                      self.mem_at(m1, em, k - 1)])
            else:
                parts = []
                ms, exact = self.members(kc, k - 1)
                for i in ms:
                    ei = self.apply(e, i)
                    mi = self.apply(m, i)
                    if ei is None or mi is None:
                        parts.append(unknown("fuel"))
                        continue
                    parts.append(self.mem_at(mi, ei, k - 1))
                if not exact:
                    parts.append(unknown("sampling"))
                result = tri_all(parts)
        elif kind == "plus":
            _, a, b = dec
            tag, payload = unpair(m)
            if tag == 0:
                result = self.mem_at(payload, a, k - 1)
            elif tag == 1:
                result = self.mem_at(payload, b, k - 1)
            else:
                result = no(f"injection tag {tag} is neither 0 nor 1")
        elif kind == "list":
            a = dec[1]
            result = tri_all(self.mem_at(list_component(m, j), a, k - 1)
                             for j in range(list_length(m)))
        elif kind == "id":
            _, a, b, c = dec
            if m == b == c:
                result = self.mem_at(b, a, k - 1)
            else:
                result = no(f"{m}, {b}, {c} are not all equal")
        elif kind == "cov":
            _, a, v, s, i, c = dec
            result = self.in_cover(s, i, c, v, k - 1, a, m, self.cover_depth)
        else:
            result = no("proof codes are not set codes")
        if gate.kind == "unknown" and result.kind == "yes":
            return gate
        return result

    # -- member enumeration ---------------------------------------------------

    def members(self, n: int, k: int) -> tuple[list[int], bool]:
        """Members of a set code at a stage; the flag reports exhaustiveness."""
        key = (n, k)
        if key in self._members_memo:
            return self._members_memo[key]
        self._members_memo[key] = ([], False)     # provisional for cycles
        r = self._members(n, k)
        if len(r[0]) > self.members_cap:
            r = (r[0][:self.members_cap], False)
        self._members_memo[key] = r
        return r

    def _members(self, n: int, k: int) -> tuple[list[int], bool]:
        if self.set_at(n, k).kind == "no":
            return [], True
        dec = decode_set(n)
        kind = dec[0]
        if kind == "base":
            j = dec[1]
            if j < 2:
                return list(range(j)), True
            return self.nat_candidates(), False
        if kind == "sigma":
            _, kc, e = dec
            out, exact = [], True
            ms, exm = self.members(kc, k - 1)
            exact &= exm
            for m0 in ms:
                em = self.apply(e, m0)
                if em is None:
                    exact = False
                    continue
                m1s, ex1 = self.members(em, k - 1)
                exact &= ex1
                out.extend(pair(m0, m1) for m1 in m1s)
            return out, exact
        if kind == "pi":
            out = []
            for cand in self.nat_candidates():
                if self.mem_at(cand, n, k).kind == "yes":
                    out.append(cand)
                    if len(out) >= self.scan_cap:
                        break
            return out, False
        if kind == "plus":
            _, a, b = dec
            la, ea = self.members(a, k - 1)
            lb, eb = self.members(b, k - 1)
            return ([pair(0, m) for m in la] + [pair(1, m) for m in lb],
                    ea and eb)
        if kind == "list":
            a = dec[1]
            la, ea = self.members(a, k - 1)
            if not la:
                return [0], ea
            out, frontier = [0], [0]
            exact = False                    # nonempty element type: infinite
            while frontier and len(out) < self.list_cap:
                nxt = []
                for l in frontier:
                    for m in la:
                        if len(out) >= self.list_cap:
                            break
                        enc = K.snoc(l, m)
                        out.append(enc)
                        nxt.append(enc)
                frontier = nxt
            return out, exact
        if kind == "id":
            _, a, b, c = dec
            if b != c:
                return [], True
            t = self.mem_at(b, a, k - 1)
            if t.kind == "yes":
                return [b], True
            return [], t.kind == "no"
        if kind == "cov":
            _, a, v, s, i, c = dec
            cover, exact = self.cover_v(s, i, c, v, k - 1)
            return sorted(cover.get(a, ())), exact
        return [], True

    # -- the least fixpoint of a cover ---------------------------------------

    def cover_v(self, s: int, i: int, c: int, v: int,
                k: int) -> tuple[dict[int, set[int]], bool]:
        """Saturated approximation of the proof-pair set of a cover code.

        Keys are carrier members z, values are proof codes q with
        pair(z, q) in the fixpoint.  The tr rule quantifies its function
        component over all naturals; the approximation adds one canonical
        table code per (z, index) whenever the rule's premise is satisfiable,
        which is enough to make the key set exact on finite carriers.
        """
        key = (s, i, c, v, k)
        if key in self._cover_memo:
            return self._cover_memo[key]
        zs, exact = self.members(s, k)
        cover: dict[int, set[int]] = {z: set() for z in zs}
        # rf rule
        for z in zs:
            vz = self.apply(v, z)
            if vz is None:
                exact = False
                continue
            rs, exr = self.members(vz, k)
            exact &= exr
            for r in rs:
                cover[z].add(rf_code(z, r))
        # index and premise data
        idx: dict[int, list[int]] = {}
        for z in zs:
            iz = self.apply(i, z)
            if iz is None:
                exact = False
                idx[z] = []
                continue
            js, exj = self.members(iz, k)
            exact &= exj
            idx[z] = js
        needs: dict[tuple[int, int], list[int] | None] = {}
        for z in zs:
            for j in idx[z]:
                needed = []
                ok = True
                for u in zs:
                    cu = self.apply(c, z, j, u)
                    if cu is None:
                        exact = False
                        ok = False
                        break
                    ts, ext = self.members(cu, k)
                    exact &= ext
                    if ts:
                        needed.append(u)
                needs[(z, j)] = needed if ok else None
        # saturate with canonical table witnesses, one per point and index
        witnessed: set[tuple[int, int]] = set()
        changed = True
        while changed:
            changed = False
            for (z, j), needed in needs.items():
                if needed is None or (z, j) in witnessed:
                    continue
                if not all(cover.get(u) for u in needed):
                    continue
                table = {u: min(cover[u]) for u in needed}
                witnessed.add((z, j))
                cover[z].add(tr_code(z, j, self._table_code(table)))
                changed = True
        result = (cover, exact)
        self._cover_memo[key] = result
        return result

    def _table_code(self, table: dict[int, int]) -> int:
        """A code r with {r}(u, t) = table[u] (0 outside the table)."""
        u, t = kfresh("u"), kfresh("t")
        body: KTerm = KNum(0)
        for key in sorted(table, reverse=True):
            body = kop(K.IFZ, kop(K.EQ, KVar(u), KNum(key)),
                       KNum(table[key]), body)
        return eval_kterm(lambda_abstract_many(body, [u, t]), {}, self.budget)

    def in_cover(self, s: int, i: int, c: int, v: int, k: int,
                 z: int, q: int, depth: int) -> Tri:
        """Demand-driven check that pair(z, q) lies in the cover fixpoint."""
        if depth <= 0:
            return unknown("fuel")
        dec = decode_set(q)
        if dec is None or dec[0] not in ("rf", "tr"):
            return no(f"{q} is not a cover proof code")
        if dec[1] != z:
            return no("the proof is about a different element")
        if dec[0] == "rf":
            _, _, r = dec
            vz = self.apply(v, z)
            if vz is None:
                return unknown("fuel")
            return tri_all([self.mem_at(z, s, k), self.mem_at(r, vz, k)])
        _, _, j, r = dec
        iz = self.apply(i, z)
        if iz is None:
            return unknown("fuel")
        parts = [self.mem_at(z, s, k), self.mem_at(j, iz, k)]
        us, exact = self.members(s, k)
        for u in us:
            cu = self.apply(c, z, j, u)
            if cu is None:
                parts.append(unknown("fuel"))
                continue
            ts, ext = self.members(cu, k)
            exact &= ext
            for t in ts:
                ru = self.apply(r, u, t)
                if ru is None:
                    parts.append(unknown("fuel"))
                    continue
                parts.append(self.in_cover(s, i, c, v, k, u, ru, depth - 1))
        if not exact:
            parts.append(unknown("sampling"))
        return tri_all(parts)


# ---------------------------------------------------------------------------
# Type interpretation
# ---------------------------------------------------------------------------

class ClassExpr:
    """Predicate-on-naturals view of a pretype under an environment."""

    def __init__(self, model: Model, ty: PreTerm, env: dict[str, int]):
        self.model = model
        self.ty = ty
        self.env = dict(env)

    def __repr__(self):
        return f"ClassExpr({to_src(self.ty)})"

    def _sub(self, ty: PreTerm, extra: dict[str, int] | None = None) -> "ClassExpr":
        env = self.env if extra is None else {**self.env, **extra}
        return ClassExpr(self.model, ty, env)

    def contains(self, x: int) -> Tri:
        m = self.model
        ty = self.ty
        match ty:
            case TN0():
                return no("the empty type has no realizers")
            case TN1():
                return YES if x == 0 else no(f"{x} is not 0")
            case TN():
                return YES
            case TSigma(dom, cod):
                x0, x1 = unpair(x)
                first = self._sub(dom).contains(x0)
                if first.kind == "no":
                    return first
                (y,), opened = open_with(cod, (ty.hint,))
                rest = self._sub(opened, {y: x0}).contains(x1)
                return tri_all([first, rest])
            case TPi(dom, cod):
                domc = self._sub(dom)
                ys, exact = domc.enumerate()
                (yn,), opened = open_with(cod, (ty.hint,))
                parts = []
                for y in ys:
                    xy = m.apply(x, y)
                    if xy is None:
                        parts.append(unknown("fuel"))
                        continue
                    parts.append(self._sub(opened, {yn: y}).contains(xy))
                if not exact:
                    parts.append(unknown("sampling"))
                return tri_all(parts)
            case TSum(l, r):
                tag, payload = unpair(x)
                if tag == 0:
                    return self._sub(l).contains(payload)
                if tag == 1:
                    return self._sub(r).contains(payload)
                return no(f"injection tag {tag} is neither 0 nor 1")
            case TList(el):
                elc = self._sub(el)
                return tri_all(elc.contains(list_component(x, j))
                               for j in range(list_length(x)))
            case TId(base, lt, rt):
                va = self.model.eval_term(lt, self.env)
                vb = self.model.eval_term(rt, self.env)
                if va is None or vb is None:
                    return unknown("fuel")
                if x != va:
                    return no(f"{x} is not the left endpoint value {va}")
                if va != vb:
                    return no(f"endpoint values {va} and {vb} differ")
                return self._sub(base).contains(va)
            case TU0():
                return m.set_at(x, m.stage)
            case TDec(code):
                vc = self.model.eval_term(code, self.env)
                if vc is None:
                    return unknown("fuel")
                return m.mem_at(x, vc, m.stage)
        raise ValueError(f"not a pretype: {to_src(ty)}")

    def enumerate(self) -> tuple[list[int], bool]:
        m = self.model
        ty = self.ty
        match ty:
            case TN0():
                return [], True
            case TN1():
                return [0], True
            case TN():
                return m.nat_candidates(), False
            case TSigma(dom, cod):
                out, exact = [], True
                xs, ex0 = self._sub(dom).enumerate()
                exact &= ex0
                (y,), opened = open_with(cod, (ty.hint,))
                for x0 in xs:
                    x1s, ex1 = self._sub(opened, {y: x0}).enumerate()
                    exact &= ex1
                    out.extend(pair(x0, x1) for x1 in x1s)
                return out, exact
            case TPi():
                out = []
                for x in m.nat_candidates():
                    if self.contains(x).kind == "yes":
                        out.append(x)
                        if len(out) >= m.scan_cap:
                            break
                return out, False
            case TSum(l, r):
                ls, el = self._sub(l).enumerate()
                rs, er = self._sub(r).enumerate()
                return ([pair(0, x) for x in ls] + [pair(1, x) for x in rs],
                        el and er)
            case TList(el):
                xs, ex = self._sub(el).enumerate()
                if not xs:
                    return [0], ex
                out, frontier = [0], [0]
                while frontier and len(out) < m.list_cap:
                    nxt = []
                    for l in frontier:
                        for x in xs:
                            if len(out) >= m.list_cap:
                                break
                            enc = K.snoc(l, x)
                            out.append(enc)
                            nxt.append(enc)
                    frontier = nxt
                return out, False
            case TId():
                va = m.eval_term(ty.lhs, self.env)
                vb = m.eval_term(ty.rhs, self.env)
                if va is None or vb is None:
                    return [], False
                if va != vb:
                    return [], True
                t = self._sub(ty.ty).contains(va)
                if t.kind == "yes":
                    return [va], True
                return [], t.kind == "no"
            case TU0():
                out = []
                for x in m.nat_candidates():
                    if m.set_at(x, m.stage).kind == "yes":
                        out.append(x)
                        if len(out) >= m.scan_cap:
                            break
                return out, False
            case TDec(code):
                vc = m.eval_term(code, self.env)
                if vc is None:
                    return [], False
                return m.members(vc, m.stage)
        raise ValueError(f"not a pretype: {to_src(ty)}")


def interpret_type(ty: PreTerm, env: dict[str, int] | None = None,
                   model: Model | None = None) -> ClassExpr:
    return ClassExpr(model or Model(), ty, env or {})


# ---------------------------------------------------------------------------
# Judgment validity
# ---------------------------------------------------------------------------

class _Vacuous(Exception):
    pass


def _sample_envs(model: Model, ctx: Context) -> tuple[list[dict[str, int]], bool]:
    """Environments of realizers for the context, plus an exactness flag.

    Raises _Vacuous when some hypothesis has exactly no realizers, in which
    case every judgment under the context holds vacuously.
    """
    envs: list[dict[str, int]] = [{}]
    exact = True
    for name, ty in ctx.entries:
        new_envs = []
        for env in envs:
            vals, ex = ClassExpr(model, ty, env).enumerate()
            if not vals:
                if ex:
                    raise _Vacuous
                exact = False
                continue
            if len(vals) > model.env_samples:
                vals = vals[:model.env_samples]
                exact = False
            exact &= ex
            for v in vals:
                new_envs.append({**env, name: v})
        envs = new_envs[:model.max_envs]
        if len(new_envs) > model.max_envs:
            exact = False
    return envs, exact


def _validate_in_env(model: Model, j: Judgment, env: dict[str, int]) -> Tri:
    if isinstance(j, TypeWF):
        # every interpreted pretype is a class of naturals by construction
        return YES
    if isinstance(j, TypeEq):
        ca = ClassExpr(model, j.lhs, env)
        cb = ClassExpr(model, j.rhs, env)
        xs_a, ex_a = ca.enumerate()
        xs_b, ex_b = cb.enumerate()
        probes = set(xs_a) | set(xs_b) | set(range(min(model.bound, 16)))
        parts = []
        for x in sorted(probes):
            ta, tb = ca.contains(x), cb.contains(x)
            if "no" in (ta.kind, tb.kind) and "yes" in (ta.kind, tb.kind):
                return no(f"the classes differ at {x}")
            if "unknown" in (ta.kind, tb.kind):
                parts.append(unknown(ta.reason or tb.reason))
        if not (ex_a and ex_b):
            parts.append(unknown("sampling"))
        return tri_all(parts)
    if isinstance(j, TermOf):
        v = model.eval_term(j.term, env)
        if v is None:
            return unknown("fuel")
        return ClassExpr(model, j.ty, env).contains(v)
    if isinstance(j, TermEq):
        va = model.eval_term(j.lhs, env)
        vb = model.eval_term(j.rhs, env)
        if va is None or vb is None:
            return unknown("fuel")
        if va != vb:
            return no(f"the sides evaluate to {va} and {vb}")
        return ClassExpr(model, j.ty, env).contains(va)
    raise TypeError(f"not a judgment: {j!r}")


def validate_judgment(j: Judgment, stage: int = DEFAULT_STAGE,
                      fuel: int = DEFAULT_FUEL, bound: int = DEFAULT_BOUND,
                      model: Model | None = None) -> Tri:
    model = model or Model(stage=stage, fuel=fuel, bound=bound)
    if isinstance(j, TypeWF):
        # interpretations are predicates on the naturals in every
        # environment, so formation validity needs no sampling
        return YES
    try:
        envs, exact = _sample_envs(model, j.ctx)
    except _Vacuous:
        return YES
    except Diverged:
        return unknown("fuel")
    if not envs:
        return unknown("sampling")
    parts = []
    for env in envs:
        try:
            parts.append(_validate_in_env(model, j, env))
        except Diverged:
            parts.append(unknown("fuel"))
    if not exact:
        parts.append(unknown("sampling"))
    return tri_all(parts)


# ---------------------------------------------------------------------------
# Spec-level operations
# ---------------------------------------------------------------------------

def set_at_stage(n: int, k: int, fuel: int = DEFAULT_FUEL,
                 bound: int = DEFAULT_BOUND, model: Model | None = None) -> Tri:
    model = model or Model(stage=k, fuel=fuel, bound=bound)
    return model.set_at(n, k)


def mem_at_stage(m: int, n: int, k: int, fuel: int = DEFAULT_FUEL,
                 bound: int = DEFAULT_BOUND, model: Model | None = None) -> Tri:
    model = model or Model(stage=k, fuel=fuel, bound=bound)
    return model.mem_at(m, n, k)


def cover_fixpoint(s: int, i: int, c: int, v: int, k: int,
                   fuel: int = DEFAULT_FUEL, bound: int = DEFAULT_BOUND,
                   model: Model | None = None) -> tuple[set[int], bool]:
    """The pairs pair(z, proofcode) of the saturated cover approximation."""
    model = model or Model(stage=k, fuel=fuel, bound=bound)
    cover, exact = model.cover_v(s, i, c, v, k)
    pairs = {pair(z, q) for z, qs in cover.items() for q in qs}
    return pairs, exact


def check_realizer(r: int, ty: PreTerm, k: int = DEFAULT_STAGE,
                   fuel: int = DEFAULT_FUEL, bound: int = DEFAULT_BOUND,
                   model: Model | None = None) -> Tri:
    model = model or Model(stage=k, fuel=fuel, bound=bound)
    return ClassExpr(model, ty, {}).contains(r)


def realize(t: PreTerm, fuel: int = DEFAULT_FUEL) -> int | KTerm:
    """Evaluate a closed term's interpretation; open terms stay applicative."""
    kt = interpret_term(t)
    if K.kvars(kt):
        return kt
    return eval_kterm(kt, {}, fuel)


def ct_validate(fn: PreTerm, xmax: int = 20, fuel: int = DEFAULT_FUEL) -> Tri:
    """Check the Church's-thesis realizer against one closed function term."""
    kt = interpret_term(fn)
    if K.kvars(kt):
        return no("the function term must be closed")
    try:
        e = eval_kterm(kt, {}, fuel)
        ok = K.ct_check(e, xmax=xmax, fuel=fuel)
    except Diverged:
        return unknown("fuel")
    return YES if ok else no("a pointwise check failed")


def validate(j: Judgment | CtDirective, stage: int = DEFAULT_STAGE,
             fuel: int = DEFAULT_FUEL, bound: int = DEFAULT_BOUND) -> Tri:
    if isinstance(j, CtDirective):
        return ct_validate(j.fn, fuel=fuel)
    return validate_judgment(j, stage=stage, fuel=fuel, bound=bound)
