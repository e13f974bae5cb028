import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import cylinder_points
from lodaycheck import ensemble as ens
from lodaycheck.ensemble import Ensemble, apply_level, coherence_probe, combine, compose, product_terms, restrict
from lodaycheck.functions import battery
from lodaycheck.geometry import X, Y, eval_word, make_h, make_hbar, make_p, make_q, point
from lodaycheck.sampling import PointSampler, substream

F = Fraction


def oracle_restrict(A, T):
    """Group terms by their value tuples using plain word evaluation."""
    table = {}
    for c, w in A.terms:
        key = tuple(eval_word(w, t) for t in T)
        table[key] = table.get(key, 0) + c
    return {k: v for k, v in table.items() if v != 0}


def small_ensemble(rng, source=X, target=X, size=4, N=3):
    makers = {(X, X): [make_p], (Y, Y): [make_q], (X, Y): [make_h], (Y, X): [make_hbar]}[(source, target)]
    pool = {X: make_p, Y: make_q}
    terms = []
    for _ in range(size):
        w = rng.choice(makers)(rng.randint(1, N))
        if rng.random() < 0.5:
            w = pool[source](rng.randint(1, N)).then(w)
        terms.append((F(rng.randint(-3, 3)), w))
    return Ensemble.build(source, target, terms)


def test_combine_examples():
    A = ens.Z(2)
    assert combine(1, A, -1, A).is_zero
    assert combine(1, ens.identity(X), -1, ens.p_ens(1)) == ens.Z(1)
    w = make_p(1)
    five = combine(2, Ensemble.of(w), 3, Ensemble.of(w))
    assert five.terms == ((F(5), w),)
    with pytest.raises(ValueError):
        combine(1, ens.Z(1), 1, ens.Zbar(1))
    with pytest.raises(ValueError):
        combine(0.5, ens.Z(1), 1, ens.Z(1))


def test_compose_examples():
    A = ens.Z(2)
    assert compose(ens.identity(X), A) == A
    assert compose(A, ens.identity(X)) == A
    assert len(product_terms(ens.Z(1), ens.Z(1))) == 4
    # 1 - 2 p_1 + p_1 p_1: merging is syntactic, so p_1 p_1 stays separate
    assert len(compose(ens.Z(1), ens.Z(1))) == 3
    assert len(product_terms(ens.T(2), ens.Tbar(2))) == 9
    with pytest.raises(ValueError):
        compose(ens.Z(1), ens.T(1))


def test_constructors():
    assert ens.Z(0) == ens.identity(X)
    assert len(ens.Z(2)) == 4 and {abs(c) for c, _ in ens.Z(2).terms} == {1}
    assert len(ens.T(2)) == 3
    assert (ens.T(3).source, ens.T(3).target) == (X, Y)
    assert (ens.Tbar(3).source, ens.Tbar(3).target) == (Y, X)
    # T_{n+1} - T_n = Zbar_n h_{n+1}
    for n in range(1, 4):
        assert ens.T(n + 1) - ens.T(n) == compose(ens.Zbar(n), ens.h_ens(n + 1))


def test_restrict_examples():
    assert restrict(Ensemble.zero(X, X), [point(X, F(1, 2), 0)]).is_zero
    assert restrict(ens.Z(2), [point(X, F(1, 2), 0)]).is_zero
    res = restrict(ens.Z(1), [point(X, F(1, 2), 0)])
    assert res.table == {(point(X, F(1, 2), 0),): 1, (point(X, F(1, 2), F(1, 2)),): -1}
    with pytest.raises(ValueError):
        restrict(ens.Z(1), [point(Y, 0, 0)])


def test_apply_level_examples():
    y = battery(X)[0]
    p = point(X, F(2, 7), F(3, 5))
    assert apply_level(ens.identity(X), [y], [p]) == F(3, 5)
    assert apply_level(ens.Z(1), [y], [point(X, F(1, 2), 0)]) == F(-1, 2)
    assert apply_level(ens.Z(2), [y], [point(X, 0, F(1, 3))]) == 0


def test_probe_examples():
    sampler = PointSampler(X, 3, substream(0, "t"))
    assert coherence_probe(Ensemble.zero(X, X), 2, sampler, 20).corroborated
    assert coherence_probe(ens.Z(2), 1, sampler, 200).corroborated
    pair = [point(X, F(1, 2), 0), point(X, F(1, 3), 0)]
    result = coherence_probe(ens.Z(2), 2, sampler, 0, witnesses=[pair])
    assert result.status == "refuted" and result.witness.points == tuple(pair)
    # known witnesses are checked first, so more trials never lose them
    for trials in (1, 10, 100):
        assert coherence_probe(ens.Z(2), 2, sampler, trials, witnesses=[pair]).trials == 0
    # a witness larger than r is ignored
    assert coherence_probe(ens.Z(2), 1, sampler, 10, witnesses=[pair]).corroborated


def test_probe_level_zero():
    sampler = PointSampler(X, 2, substream(0, "z"))
    assert coherence_probe(ens.Z(1), 0, sampler, 5).corroborated
    assert coherence_probe(ens.identity(X), 0, sampler, 5).status == "refuted"


def test_restrict_matches_oracle():
    rng = random.Random(5)
    for _ in range(40):
        A = small_ensemble(rng, size=5)
        T = PointSampler(X, 3, rng).point_set(rng.randint(1, 3))
        assert restrict(A, T).table == oracle_restrict(A, T)


@settings(max_examples=60, deadline=None)
@given(st.randoms(use_true_random=False), st.lists(cylinder_points, min_size=1, max_size=3))
def test_restriction_is_linear(rnd, T):
    A, B = small_ensemble(rnd), small_ensemble(rnd)
    a, b = F(rnd.randint(-4, 4)), F(rnd.randint(-4, 4))
    lhs = restrict(combine(a, A, b, B), T).table
    ra, rb = restrict(A, T).table, restrict(B, T).table
    rhs = {}
    for k in set(ra) | set(rb):
        v = a * ra.get(k, 0) + b * rb.get(k, 0)
        if v:
            rhs[k] = v
    assert lhs == rhs


@settings(max_examples=40, deadline=None)
@given(st.randoms(use_true_random=False), st.lists(cylinder_points, min_size=1, max_size=3))
def test_compose_associative(rnd, T):
    A = small_ensemble(rnd, Y, X, 3)
    B = small_ensemble(rnd, X, Y, 3)
    C = small_ensemble(rnd, X, X, 3)
    assert restrict(compose(compose(A, B), C), T).table == restrict(compose(A, compose(B, C)), T).table


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5), st.lists(cylinder_points, min_size=1, max_size=3))
def test_idempotence_at_restriction_level(n, T):
    assert restrict(ens.p_ens(n) @ ens.p_ens(n) - ens.p_ens(n), T).is_zero


@settings(max_examples=60, deadline=None)
@given(st.randoms(use_true_random=False), st.lists(cylinder_points, min_size=2, max_size=3))
def test_permutation_equivariance(rnd, T):
    A = small_ensemble(rnd)
    perm = list(range(len(T)))
    rnd.shuffle(perm)
    table = restrict(A, T).table
    permuted = restrict(A, [T[i] for i in perm]).table
    assert permuted == {tuple(k[i] for i in perm): v for k, v in table.items()}


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.lists(cylinder_points, min_size=1, max_size=3))
def test_z_identity_on_restrictions(n, T):
    # Z_n - Z_{n-1} = -Z_{n-1} p_n
    lhs = ens.Z(n) - ens.Z(n - 1)
    rhs = -compose(ens.Z(n - 1), ens.p_ens(n))
    assert restrict(lhs, T).table == restrict(rhs, T).table


@settings(max_examples=60, deadline=None)
@given(st.randoms(use_true_random=False), st.lists(cylinder_points, min_size=1, max_size=3))
def test_apply_level_agrees_with_pairing(rnd, T):
    A = small_ensemble(rnd, X, Y, 4)
    fs = [rnd.choice(battery(Y)) for _ in T]
    assert apply_level(A, fs, T) == restrict(A, T).pair(fs)


def test_json_round_trip():
    A = ens.T(3)
    assert Ensemble.from_json(A.to_json()) == A
    res = restrict(ens.Z(1), [point(X, F(1, 2), 0)]).to_json()
    assert [e["coeff"] for e in res["table"]] == ["1", "-1"]
