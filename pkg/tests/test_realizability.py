import random

from covtt import kleene as K
from covtt.kleene import KNum, apply, apply_many, code, eval_kterm, pair
from covtt.realizability import (
    Model, N0_CODE, N1_CODE, N_CODE, check_realizer, cover_fixpoint,
    ct_validate, decode_set, interpret_subst, interpret_term, mem_at_stage,
    realize, rf_code, set_at_stage, tr_code, validate, validate_judgment,
)
from covtt.syntax import parse_judgment, parse_term, parse_type, substitute


# ---------------------------------------------------------------------------
# term interpretation
# ---------------------------------------------------------------------------

def test_interpretation_clauses():
    assert realize(parse_term("0")) == 0
    assert realize(parse_term("star")) == 0
    assert realize(parse_term("rf(3, 9)")) == pair(7, pair(3, 9))
    assert realize(parse_term("tr(1, 2, 3)")) == pair(8, pair(pair(1, 2), 3))
    assert realize(parse_term("pair(3, 4)")) == pair(3, 4)
    assert realize(parse_term("inl(5)")) == pair(0, 5)
    assert realize(parse_term("inr(5)")) == pair(1, 5)
    assert realize(parse_term("n0hat")) == pair(0, 0)
    assert realize(parse_term("n1hat")) == pair(0, 1)
    assert realize(parse_term("nhat")) == pair(0, 2)
    assert realize(parse_term("cons(nil, 7)")) == K.enc_list([7])
    # the cover code packs (a, v, s, i, c) under tag 6
    got = realize(parse_term(
        "cov(n1hat; x . n1hat; x y . lam z . n0hat; 0; lam z . n1hat)"))
    dec = decode_set(got)
    assert dec[0] == "cov" and dec[1] == 0 and dec[3] == pair(0, 1)


def test_interpretation_computes():
    assert realize(parse_term("Ap(lam x . succ(x), 4)")) == 5
    assert realize(parse_term("natrec(3; 0; k r . succ(succ(r)))")) == 6
    assert realize(parse_term("split(pair(3, 4); a b . pair(b, a))")) == pair(4, 3)
    assert realize(parse_term("when(inl(7); a . succ(a); b . 0)")) == 8
    assert realize(parse_term("listrec(cons(cons(nil, 5), 6); 0; t a r . succ(r))")) == 2
    assert realize(parse_term("idpeel(refl(4); x . succ(x))")) == 5
    assert realize(parse_term("unitrec(star; 3)")) == 3
    assert realize(parse_term("emptyrec(0)")) == 0
    assert realize(parse_term("refl(2)")) == 2


def test_substitution_commutation_bulk():
    rng = random.Random(29)
    pool = [
        "succ(x)", "pair(x, y)", "Ap(lam z . pair(z, x), y)",
        "natrec(x; y; k r . pair(k, r))", "rf(x, y)", "tr(x, y, x)",
        "lam z . pair(x, z)", "when(inl(x); a . a; b . y)",
        "ind(x; a w . pair(a, w); a h k f . y)",
        "cov(x; z . y; z w . x; x; y)", "idhat(x, y, y)",
        "listrec(x; y; t a r . cons(t, a))",
    ]
    args = ["0", "succ(0)", "pair(1, 2)", "lam w . w", "star", "nil"]
    for _ in range(1000):
        t = parse_term(rng.choice(pool))
        u = parse_term(rng.choice(args))
        var = rng.choice(["x", "y"])
        lhs = interpret_term(substitute(t, var, u))
        rhs = interpret_subst(interpret_term(t), var, interpret_term(u))
        assert lhs == rhs, (t, var, u)


# ---------------------------------------------------------------------------
# stages
# ---------------------------------------------------------------------------

def test_base_clauses():
    assert set_at_stage(N_CODE, 1).kind == "yes"
    assert set_at_stage(N0_CODE, 0).kind == "yes"
    assert mem_at_stage(0, N1_CODE, 1).kind == "yes"
    assert mem_at_stage(1, N1_CODE, 1).kind == "no"
    assert mem_at_stage(0, N0_CODE, 1).kind == "no"
    for m in (0, 5, 64, 12345):
        assert mem_at_stage(m, N_CODE, 1).kind == "yes"


def test_sigma_pi_clauses_finite():
    e_n1 = code(K.K, [N1_CODE])             # constant family over anything
    sig = pair(1, pair(N1_CODE, e_n1))
    assert set_at_stage(sig, 0).kind == "no"     # needs an earlier stage
    assert set_at_stage(sig, 1).kind == "yes"
    assert set_at_stage(sig, 2).kind == "yes"
    assert mem_at_stage(pair(0, 0), sig, 2).kind == "yes"
    assert mem_at_stage(pair(1, 0), sig, 2).kind == "no"
    pi = pair(2, pair(N1_CODE, e_n1))
    assert set_at_stage(pi, 2).kind == "yes"
    # a function sending 0 to 0 realizes (Pi x in N1) N1: K 0 does
    assert mem_at_stage(code(K.K, [0]), pi, 2).kind == "yes"
    assert mem_at_stage(code(K.SUCC), pi, 2).kind == "no"


def test_plus_list_id_clauses():
    plus = pair(3, pair(N1_CODE, N1_CODE))
    assert mem_at_stage(pair(0, 0), plus, 2).kind == "yes"
    assert mem_at_stage(pair(1, 0), plus, 2).kind == "yes"
    assert mem_at_stage(pair(2, 0), plus, 2).kind == "no"
    lst = pair(4, N1_CODE)
    assert mem_at_stage(K.enc_list([]), lst, 2).kind == "yes"
    assert mem_at_stage(K.enc_list([0, 0]), lst, 2).kind == "yes"
    assert mem_at_stage(K.enc_list([1]), lst, 2).kind == "no"
    idc = pair(5, pair(pair(N_CODE, 5), 5))
    assert mem_at_stage(5, idc, 2).kind == "yes"
    assert mem_at_stage(4, idc, 2).kind == "no"
    bad = pair(5, pair(pair(N_CODE, 5), 6))
    assert mem_at_stage(5, bad, 2).kind == "no"


def test_persistence_small():
    e_n1 = code(K.K, [N1_CODE])
    codes = [N0_CODE, N1_CODE, N_CODE,
             pair(1, pair(N1_CODE, e_n1)),
             pair(2, pair(N1_CODE, e_n1)),
             pair(3, pair(N1_CODE, N0_CODE)),
             pair(4, N1_CODE),
             pair(5, pair(pair(N1_CODE, 0), 0))]
    model = Model(fuel=10 ** 7)
    for n in codes:
        first = next((k for k in range(6) if model.set_at(n, k).kind == "yes"),
                     None)
        assert first is not None
        for k in range(first, 7):
            assert model.set_at(n, k).kind == "yes"
        for i in range(10):
            kinds = {model.mem_at(i, n, k).kind for k in range(first, 7)}
            assert len(kinds) == 1, (n, i, kinds)


# ---------------------------------------------------------------------------
# covers in the model
# ---------------------------------------------------------------------------

def _two_point_cover(v_code):
    s = pair(3, pair(N1_CODE, N1_CODE))         # two-point carrier
    i = code(K.K, [N1_CODE])                    # one index per point
    c = eval_kterm(K.lambda_abstract_many(KNum(code(K.K, [N0_CODE])),
                                          ["x", "y"]))  # empty covering subsets
    return s, i, c, v_code


def test_cover_fixpoint_rf_rule():
    s, i, c, _ = _two_point_cover(None)
    v = code(K.K, [N1_CODE])                    # the full subset
    pairs, exact = cover_fixpoint(s, i, c, v, 4)
    assert exact
    for z in (pair(0, 0), pair(1, 0)):
        assert pair(z, rf_code(z, 0)) in pairs


def test_cover_fixpoint_tr_closure():
    s, i, c, _ = _two_point_cover(None)
    v = code(K.K, [N0_CODE])                    # the empty subset
    pairs, exact = cover_fixpoint(s, i, c, v, 4)
    assert exact
    # the covering subsets are empty, so tr fires vacuously at each point
    zs = {K.unpair0(p) for p in pairs}
    assert zs == {pair(0, 0), pair(1, 0)}
    for p in pairs:
        q = K.unpair1(p)
        assert decode_set(q)[0] == "tr"
    # and the demand-driven membership check accepts each saturated pair
    model = Model()
    for p in pairs:
        z, q = K.unpair(p)
        assert model.in_cover(s, i, c, v, 4, z, q, 32).kind == "yes"


def test_cover_fixpoint_empty_when_no_rule_applies():
    s = pair(3, pair(N1_CODE, N1_CODE))
    i = code(K.K, [N0_CODE])                    # no indices at all
    c = eval_kterm(K.lambda_abstract_many(KNum(code(K.K, [N0_CODE])),
                                          ["x", "y"]))
    v = code(K.K, [N0_CODE])
    pairs, exact = cover_fixpoint(s, i, c, v, 4)
    assert exact and pairs == set()


def test_cover_membership_via_types():
    ty = parse_type("T(cov(plushat(n1hat, n1hat); x . n1hat; "
                    "x y . lam z . n0hat; inl(star); lam z . n1hat))")
    q = rf_code(pair(0, 0), 0)
    assert check_realizer(q, ty).kind == "yes"
    assert check_realizer(rf_code(pair(1, 0), 0), ty).kind == "no"
    assert check_realizer(0, ty).kind == "no"


# ---------------------------------------------------------------------------
# the interpretation validates judgments
# ---------------------------------------------------------------------------

def test_check_realizer_clause_examples():
    assert check_realizer(0, parse_type("N1")).kind == "yes"
    assert check_realizer(1, parse_type("N1")).kind == "no"
    assert check_realizer(7, parse_type("N0")).kind == "no"
    for n in (0, 1, 63, 1000):
        assert check_realizer(n, parse_type("N")).kind == "yes"
    assert check_realizer(K.enc_list([2, 4]), parse_type("List(N)")).kind == "yes"
    assert check_realizer(pair(3, 3), parse_type("Sigma x : N . Id(N, x, x)")
                          ).kind == "yes"
    assert check_realizer(pair(3, 4), parse_type("Sigma x : N . Id(N, x, x)")
                          ).kind == "no"


def test_validate_judgments():
    assert validate(parse_judgment("term [] |- 0 : N")).kind == "yes"
    assert validate(parse_judgment("termeq [] |- 0 == 1 : N")).kind == "no"
    assert validate(parse_judgment(
        "termeq [] |- Ap(lam x . x, 0) == 0 : N")).kind == "yes"
    assert validate(parse_judgment(
        "term [c : N0] |- emptyrec(c) : Id(N, 0, 1)")).kind == "yes"
    r = validate(parse_judgment("typeeq [] |- T(nhat) == N"))
    assert r.kind in ("yes", "unknown")
    r = validate(parse_judgment("typeeq [] |- T(n1hat) == N1"))
    assert r.kind == "yes"                      # finite carriers are exact
    assert validate(parse_judgment("typeeq [] |- N1 == N0")).kind == "no"


def test_type_formation_judgments_hold_by_construction():
    # every interpreted pretype is a class of naturals, so formation holds
    for src in ["type [] |- N", "type [x : U0] |- T(x)",
                "type [] |- Pi x : N . Id(N, x, x)"]:
        assert validate(parse_judgment(src)).kind == "yes"


def test_c1_c2_same_numeral():
    lhs = parse_term("ind(rf(inl(star), star); x w . pair(x, w); x h k f . 0)")
    rhs = parse_term("pair(inl(star), star)")
    assert realize(lhs) == realize(rhs)
    lhs = parse_term("ind(tr(inl(star), star, lam z . lam h . emptyrec(h)); "
                     "x w . 0; x h k f . pair(h, 1))")
    rhs = parse_term("pair(star, 1)")
    assert realize(lhs) == realize(rhs)


def test_c2_passes_the_contraction_function():
    # q2 returns its fourth argument; both sides must build the same code
    base = "x w . 0"
    step = "x h k f . f"
    r_fn = "lam z . lam h2 . rf(z, star)"
    lhs = parse_term(f"ind(tr(inl(star), star, {r_fn}); {base}; {step})")
    rhs = parse_term(
        f"lam z . lam u . ind(Ap(Ap({r_fn}, z), u); {base}; {step})")
    assert realize(lhs) == realize(rhs)


def test_xi_instance_distinct_numerals():
    n1 = realize(parse_term("lam x . Ap(lam y . y, x)"))
    n2 = realize(parse_term("lam x . x"))
    assert n1 != n2
    for k in range(8):
        assert apply(n1, k, 10 ** 4) == apply(n2, k, 10 ** 4)


def test_ind_code_defining_clauses_via_terms():
    rng = random.Random(31)
    bodies1 = ["pair(x, w)", "succ(w)", "0"]
    bodies2 = ["f", "pair(h, k)", "x", "1"]
    for _ in range(20):
        b1, b2 = rng.choice(bodies1), rng.choice(bodies2)
        q1t = parse_term(f"lam x . lam w . {b1}")
        q2t = parse_term(f"lam x . lam h . lam k . lam f . {b2}")
        q1c = realize(q1t)
        q2c = realize(q2t)
        indq = apply_many(code(K.IND), q1c, q2c)
        z, r = rng.randrange(20), rng.randrange(20)
        assert apply(indq, rf_code(z, r), 10 ** 5) == apply_many(q1c, z, r)
        rfn = realize(parse_term(f"lam z . lam u . rf({z}, {r})"))
        got = apply(indq, tr_code(z, 3, rfn), 10 ** 6)
        aux = eval_kterm(K.c2_aux_term(KNum(q1c), KNum(q2c), KNum(rfn)))
        assert got == apply_many(q2c, z, 3, rfn, aux)


def test_ct_validation():
    for src in ["lam x . x", "lam x . succ(x)",
                "lam x . natrec(x; 0; k r . succ(succ(r)))"]:
        assert ct_validate(parse_term(src)).kind == "yes"
    assert ct_validate(parse_term("lam x . Ap(x, x)")).kind != "yes"


def test_soundness_spot_checks(corpus_dir):
    from covtt.syntax import parse_file
    lines = [j for _, j in parse_file((corpus_dir / "golden.judg").read_text())]
    for j in lines[:12]:
        assert validate_judgment(j).kind in ("yes", "unknown")
