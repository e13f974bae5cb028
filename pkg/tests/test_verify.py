from fractions import Fraction

import pytest

from lodaycheck import ensemble as ens
from lodaycheck.ensemble import apply_level, compose, identity, restrict
from lodaycheck.functions import EXACT, TestFunction, battery
from lodaycheck.geometry import Schedule, X, Y, make_h, make_hbar, make_p, point
from lodaycheck.omega import Surjection, enumerate_surjections
from lodaycheck.report import CORROBORATED, FAIL, PASS, REFUTED, CheckOutcome, gated_ok, report_json
from lodaycheck.verify import (
    _square_check,
    _square_paths,
    axiom_suite,
    compare_words,
    lemma_t_calculation,
    lemma_t_compat,
    lemma_z_coherence,
    lemma_z_identity,
    naturality_square,
    run_checks,
    sharpness_set,
    theorem_inverse,
    undamped_twist_comparison,
    z_identity_sides,
)

F = Fraction
MUTANT = Schedule(eps_factor=F(2))


def test_offdiagonal_witness():
    p = point(X, F(2, 5), F(9, 10))
    lhs = make_h(1).then(make_hbar(2))
    rhs = make_p(1).then(make_p(2))
    assert compare_words(lhs, rhs, [point(X, 0, 0), p]) == p
    assert compare_words(make_p(1), make_p(1), [p]) is None
    with pytest.raises(ValueError):
        compare_words(make_h(1), make_p(1), [p])


def test_axiom_suite_small():
    outcomes = {o.name: o for o in axiom_suite(3, 150, seed=1)}
    assert len(outcomes) == 11
    for name, o in outcomes.items():
        if o.gated:
            assert o.status == PASS, name
        else:
            assert o.status == REFUTED and o.witnesses, name


def test_mutant_schedule_breaks_coherence_not_the_identity():
    assert lemma_z_identity(2, 100, schedule=MUTANT).status == PASS
    assert lemma_z_coherence(2, 100, schedule=MUTANT).status == FAIL
    mov = {o.name: o for o in axiom_suite(3, 50, schedule=MUTANT)}["axiom_mov_disjoint"]
    assert mov.status == FAIL


def test_z_identity_sides_are_restriction_equal():
    lhs, rhs = z_identity_sides(3, Y)
    T = sharpness_set(3, Y)
    assert restrict(lhs, T).table == restrict(rhs, T).table
    assert not restrict(lhs, T).is_zero


def test_lemmas_small():
    assert lemma_z_identity(3, 100).status == PASS
    assert lemma_t_calculation(2, 100).status == PASS
    assert lemma_z_coherence(2, 100).status == CORROBORATED
    assert lemma_t_compat(2, 100).status == CORROBORATED


def test_undamped_twist_refuted_and_informational():
    o = undamped_twist_comparison(1, 2, 300)
    assert o.status == REFUTED and not o.gated


def test_sharpness_every_size():
    for k in range(1, 6):
        T = sharpness_set(k, X)
        assert not restrict(ens.Z(k), T).is_zero
        assert restrict(ens.Z(k), T[:-1]).is_zero


def test_t_compat_sharpness():
    for r in range(2, 5):
        tail = compose(ens.Zbar(r), ens.h_ens(r + 1))
        assert not restrict(tail, sharpness_set(r, X)).is_zero


def test_zero_function_gives_zero_on_both_paths():
    zero = TestFunction("0", Y, EXACT, lambda x, y: 0)
    sigma = Surjection.parse("1,1")
    ts = [point(X, F(1, 2), F(1, 7))]
    for _, lhs, rhs in _square_paths(ens.T(3), ens.T(2), sigma, [zero], ts, Schedule()):
        assert lhs == rhs == 0


def test_naturality_square_small():
    for sigma in enumerate_surjections(2, 1) + enumerate_surjections(2, 2):
        assert naturality_square(2, sigma, 20).status == PASS


def test_naturality_detects_wrong_pairing():
    # T_1 is not T_2 at level 1: their difference Zbar_1 h_2 does not vanish on single points
    sigma = Surjection.parse("1,1")
    o = _square_check("naturality_square", [("T_3/T_1", ens.T(3), ens.T(1))], sigma, 40, 0, 1e-9,
                      (EXACT,), Schedule(), {"r": 2})
    assert o.status == FAIL and o.witnesses


def test_theorem_level_one_example():
    y = battery(X)[0]
    E = compose(ens.Tbar(2), ens.T(2)) - identity(X)
    assert apply_level(E, [y], [point(X, F(1, 2), 0)]) == 0
    assert theorem_inverse(1, 30).status == CORROBORATED


def test_run_checks_is_deterministic():
    a = run_checks(("axioms", "z_coherence"), 3, 1, 60, seed=9)
    b = run_checks(("axioms", "z_coherence"), 3, 1, 60, seed=9)
    assert report_json(a, {}) == report_json(b, {})
    with pytest.raises(ValueError):
        run_checks(("nope",))


def test_outcome_invariants():
    with pytest.raises(ValueError):
        CheckOutcome("x", {}, REFUTED)
    informational = CheckOutcome("x", {}, REFUTED, [{"w": 1}], gated=False)
    assert gated_ok([informational, CheckOutcome("y", {}, PASS)])
    assert "elapsed" not in informational.to_json()
    assert "elapsed" in informational.to_json(timings=True)
