"""Checks for the projections-and-twists axioms, the lemmas built on them,
and the resulting isomorphism of Loday functors of C(cylinder) and
C(Moebius strip).

Every check is deterministic given its parameters and the master seed: each
one draws from its own substream (:func:`sampling.substream`).
"""

from __future__ import annotations

import itertools
import time
from fractions import Fraction
from typing import Callable, Sequence

from . import ensemble as ens
from .ensemble import Ensemble, coherence_probe, compose, identity, restrict
from .functions import EXACT, TRIG, TRIG_TOLERANCE, TestFunction, battery
from .geometry import (
    DEFAULT_SCHEDULE,
    MapWord,
    QuotientPoint,
    Schedule,
    Space,
    X,
    Y,
    eval_y,
    make_h,
    make_hbar,
    make_p,
    make_q,
    mov_contains,
    point,
)
from .omega import Surjection, enumerate_surjections
from .report import CORROBORATED, FAIL, PASS, REFUTED, CheckOutcome
from .sampling import PointSampler, substream

MAX_WITNESSES = 10


def _pt(p: QuotientPoint) -> dict:
    return p.to_json()


def _status(ok: bool, gated: bool = True, success: str = PASS) -> str:
    if ok:
        return success
    return FAIL if gated else REFUTED


def _sampler(space: Space, max_index: int, seed: int, *labels, schedule=DEFAULT_SCHEDULE) -> PointSampler:
    return PointSampler(space, max_index, substream(seed, *labels), schedule)


# -- axioms -------------------------------------------------------------------


def compare_words(
    lhs: MapWord, rhs: MapWord, points: Sequence[QuotientPoint], schedule: Schedule = DEFAULT_SCHEDULE
) -> QuotientPoint | None:
    """First sample point where two words disagree, or None."""
    if (lhs.source, lhs.target) != (rhs.source, rhs.target):
        raise ValueError("words have different types")
    for p in points:
        if eval_y(lhs, p, schedule) != eval_y(rhs, p, schedule):
            return p
    return None


def _identity_class(name, instances, points, seed, gated, schedule, parameters) -> CheckOutcome:
    """``instances``: list of (label, lhs word, rhs word)."""
    start = time.perf_counter()
    witnesses = []
    failed = 0
    for label, lhs, rhs in instances:
        bad = compare_words(lhs, rhs, points[lhs.source], schedule)
        if bad is not None:
            failed += 1
            if len(witnesses) < MAX_WITNESSES:
                witnesses.append({
                    "instance": label,
                    "point": _pt(bad),
                    "lhs_y": str(eval_y(lhs, bad, schedule)),
                    "rhs_y": str(eval_y(rhs, bad, schedule)),
                })
    params = dict(parameters, instances=len(instances), failed_instances=failed)
    return CheckOutcome(
        name, params, _status(failed == 0, gated), witnesses, seed, gated, time.perf_counter() - start
    )


def _compose_words(*words: MapWord) -> MapWord:
    """``words[0] o words[1] o ...`` (rightmost applied first)."""
    out = words[-1]
    for w in reversed(words[:-1]):
        out = out.then(w)
    return out


def axiom_suite(
    N: int = 5, samples: int = 1000, seed: int = 0, schedule: Schedule = DEFAULT_SCHEDULE
) -> list[CheckOutcome]:
    """One outcome per axiom class, each checked pointwise on the same samples.

    The off-diagonal twist classes are informational: they are reported but
    do not gate the exit status.
    """
    if not 1 <= N <= 8:
        raise ValueError("axiom suite needs 1 <= N <= 8")
    points = {
        space: _sampler(space, N + 1, seed, "axioms", space, schedule=schedule).points(samples)
        for space in (X, Y)
    }
    base = {"N": N, "samples": samples}
    idx = range(1, N + 1)
    pairs = [(i, j) for i in idx for j in idx]
    off = [(i, j) for i, j in pairs if i != j]
    p, q, h, hb = make_p, make_q, make_h, make_hbar

    classes = [
        ("axiom_idempotence_p", [(f"n={n}", _compose_words(p(n), p(n)), p(n)) for n in idx], True),
        ("axiom_idempotence_q", [(f"n={n}", _compose_words(q(n), q(n)), q(n)) for n in idx], True),
        ("axiom_commutation_p",
         [(f"i={i},j={j}", _compose_words(p(i), p(j)), _compose_words(p(j), p(i))) for i, j in pairs if i < j], True),
        ("axiom_commutation_q",
         [(f"i={i},j={j}", _compose_words(q(i), q(j)), _compose_words(q(j), q(i))) for i, j in pairs if i < j], True),
        ("axiom_intertwining_q_h",
         [(f"i={i},j={j}", _compose_words(q(j), h(i)), _compose_words(h(i), p(j))) for i, j in pairs], True),
        ("axiom_intertwining_p_hbar",
         [(f"i={i},j={j}", _compose_words(p(j), hb(i)), _compose_words(hb(i), q(j))) for i, j in pairs], True),
        ("axiom_twist_diagonal_hbar_h",
         [(f"i={i}", _compose_words(hb(i), h(i)), _compose_words(p(i), p(i))) for i in idx], True),
        ("axiom_twist_diagonal_h_hbar",
         [(f"i={i}", _compose_words(h(i), hb(i)), _compose_words(q(i), q(i))) for i in idx], True),
        ("axiom_twist_offdiagonal_hbar_h",
         [(f"i={i},j={j}", _compose_words(hb(j), h(i)), _compose_words(p(j), p(i))) for i, j in off], False),
        ("axiom_twist_offdiagonal_h_hbar",
         [(f"i={i},j={j}", _compose_words(h(i), hb(j)), _compose_words(q(i), q(j))) for i, j in off], False),
    ]
    outcomes = [_identity_class(name, inst, points, seed, gated, schedule, base) for name, inst, gated in classes]
    outcomes.insert(4, mov_disjointness(N, points, seed, schedule))
    return outcomes


def mov_disjointness(N: int, points: dict, seed: int, schedule: Schedule = DEFAULT_SCHEDULE) -> CheckOutcome:
    """Strips are disjoint by rational inequality; each sample moves under at most one index."""
    start = time.perf_counter()
    witnesses = []
    if not schedule.strips_disjoint(N):
        witnesses.append({"kind": "overlapping strips", "eps_factor": str(schedule.eps_factor)})
    for space in (X, Y):
        for pt in points[space]:
            movers = [n for n in range(1, N + 1) if mov_contains(n, pt, schedule)]
            if len(movers) > 1 and len(witnesses) < MAX_WITNESSES:
                witnesses.append({"point": _pt(pt), "moved_by": movers})
            for n in movers:
                if abs(pt.x - schedule.x(n)) >= schedule.eps(n) and len(witnesses) < MAX_WITNESSES:
                    witnesses.append({"point": _pt(pt), "moved_outside_strip": n})
    params = {"N": N, "samples": len(points[X])}
    return CheckOutcome(
        "axiom_mov_disjoint", params, _status(not witnesses), witnesses, seed, True, time.perf_counter() - start
    )


# -- lemmas -------------------------------------------------------------------


def _restriction_identity(
    name: str, identities: list[tuple[str, Ensemble, Ensemble]], params: dict, samples: int, seed: int,
    max_index: int, sizes=(1, 3), schedule: Schedule = DEFAULT_SCHEDULE, gated: bool = True,
) -> CheckOutcome:
    """Both sides of each identity must restrict to the same table on every sampled set.

    The sides are restricted separately rather than as one difference, so the
    check still evaluates every word when the difference cancels syntactically.
    """
    start = time.perf_counter()
    witnesses = []
    notes = []
    for label, lhs, rhs in identities:
        if (lhs - rhs).is_zero:
            notes.append(f"{label}: sides agree after syntactic merging")
        sampler = _sampler(lhs.source, max_index, seed, name, label, *params.values(), schedule=schedule)
        for T in sampler.sets(samples, *sizes):
            left, right = restrict(lhs, T, schedule), restrict(rhs, T, schedule)
            if left.table != right.table:
                witnesses.append({
                    "identity": label,
                    "points": [_pt(t) for t in T],
                    "lhs": left.to_json()["table"],
                    "rhs": right.to_json()["table"],
                })
                break
    return CheckOutcome(
        name, dict(params, samples=samples), _status(not witnesses, gated), witnesses, seed, gated,
        time.perf_counter() - start, notes,
    )


def z_identity_sides(n: int, space: Space = X) -> tuple[Ensemble, Ensemble]:
    """sum_{i<=n} Z_{i-1} p_i and 1 - Z_n, or their Moebius counterparts."""
    z, single = (ens.Z, ens.p_ens) if space is X else (ens.Zbar, ens.q_ens)
    lhs = ens.linear_sum([compose(z(i - 1), single(i)) for i in range(1, n + 1)], space, space)
    return lhs, identity(space) - z(n)


def lemma_z_identity(n: int, samples: int = 500, seed: int = 0, schedule: Schedule = DEFAULT_SCHEDULE) -> CheckOutcome:
    if not 1 <= n <= 6:
        raise ValueError("lemma_z_identity needs 1 <= n <= 6")
    sides = [("Z", *z_identity_sides(n, X)), ("Zbar", *z_identity_sides(n, Y))]
    return _restriction_identity("lemma_z_identity", sides, {"n": n}, samples, seed, n + 1, schedule=schedule)


def lemma_t_calculation(n: int, samples: int = 500, seed: int = 0, schedule: Schedule = DEFAULT_SCHEDULE) -> CheckOutcome:
    if not 1 <= n <= 4:
        raise ValueError("lemma_t_calculation needs 1 <= n <= 4")
    sides = [
        ("T Tbar = 1 - Zbar", compose(ens.T(n), ens.Tbar(n)), identity(Y) - ens.Zbar(n)),
        ("Tbar T = 1 - Z", compose(ens.Tbar(n), ens.T(n)), identity(X) - ens.Z(n)),
    ]
    return _restriction_identity("lemma_t_calculation", sides, {"n": n}, samples, seed, n + 1, schedule=schedule)


def undamped_twist_comparison(i: int = 1, j: int = 2, samples: int = 500, seed: int = 0,
                              schedule: Schedule = DEFAULT_SCHEDULE) -> CheckOutcome:
    """h_i hbar_j against q_i q_j without the Zbar damping factors (informational)."""
    sides = [(f"h_{i} hbar_{j} = q_{i} q_{j}",
              compose(ens.h_ens(i), ens.hbar_ens(j)), compose(ens.q_ens(i), ens.q_ens(j)))]
    return _restriction_identity(
        "twist_undamped", sides, {"i": i, "j": j}, samples, seed, max(i, j) + 1, sizes=(1, 1),
        schedule=schedule, gated=False,
    )


def sharpness_set(k: int, space: Space, schedule: Schedule = DEFAULT_SCHEDULE) -> list[QuotientPoint]:
    """{(x_1, 0), ..., (x_k, 0)}: one point moved by each of the first k projections."""
    return [point(space, schedule.x(m), 0) for m in range(1, k + 1)]


def lemma_z_coherence(n: int, samples: int = 500, seed: int = 0, schedule: Schedule = DEFAULT_SCHEDULE) -> CheckOutcome:
    """Z_{n+1} and Zbar_{n+1} are n-coherent, and not (n+1)-coherent."""
    if not 1 <= n <= 5:
        raise ValueError("lemma_z_coherence needs 1 <= n <= 5")
    start = time.perf_counter()
    witnesses = []
    for space, z in ((X, ens.Z(n + 1)), (Y, ens.Zbar(n + 1))):
        label = f"{'Z' if space is X else 'Zbar'}_{n + 1}"
        sampler = _sampler(space, n + 1, seed, "lemma_z_coherence", n, space, schedule=schedule)
        probe = coherence_probe(z, n, sampler, samples, schedule=schedule)
        if not probe.corroborated:
            witnesses.append(dict(probe.witness.to_json(), ensemble=label, kind="coherence refuted"))
        # the pigeonhole step: n points cannot meet all n+1 Mov sets
        pigeon = _sampler(space, n + 1, seed, "pigeonhole", n, space, schedule=schedule)
        for T in pigeon.sets(samples, 1, n):
            hit = {m for m in range(1, n + 2) for t in T if mov_contains(m, t, schedule)}
            if len(hit) == n + 1:
                witnesses.append({"ensemble": label, "kind": "pigeonhole", "points": [_pt(t) for t in T]})
                break
        sharp = restrict(z, sharpness_set(n + 1, space, schedule), schedule)
        if sharp.is_zero:
            witnesses.append({"ensemble": label, "kind": "sharpness set did not refute",
                              "points": [_pt(t) for t in sharp.points]})
    return CheckOutcome(
        "lemma_z_coherence", {"n": n, "samples": samples}, _status(not witnesses, success=CORROBORATED),
        witnesses, seed, True, time.perf_counter() - start,
    )


def lemma_t_compat(r: int, samples: int = 500, seed: int = 0, schedule: Schedule = DEFAULT_SCHEDULE) -> CheckOutcome:
    """T_{r+1} - T_r = Zbar_r h_{r+1} is (r-1)-coherent, and not r-coherent."""
    if not 2 <= r <= 4:
        raise ValueError("lemma_t_compat needs 2 <= r <= 4")
    start = time.perf_counter()
    witnesses = []
    tail = compose(ens.Zbar(r), ens.h_ens(r + 1))
    if not (ens.T(r + 1) - ens.T(r) - tail).is_zero:
        witnesses.append({"kind": "T_{r+1} - T_r differs syntactically from Zbar_r h_{r+1}"})
    sampler = _sampler(X, r + 1, seed, "lemma_t_compat", r, schedule=schedule)
    probe = coherence_probe(tail, r - 1, sampler, samples, schedule=schedule)
    if not probe.corroborated:
        witnesses.append(dict(probe.witness.to_json(), kind="coherence refuted"))
    if restrict(tail, sharpness_set(r, X, schedule), schedule).is_zero:
        witnesses.append({"kind": "sharpness set did not refute"})
    return CheckOutcome(
        "lemma_t_compat", {"r": r, "samples": samples}, _status(not witnesses, success=CORROBORATED),
        witnesses, seed, True, time.perf_counter() - start,
    )


# -- function-level checks ----------------------------------------------------


def _close(a, b, family: str, tolerance: float) -> bool:
    if family == EXACT:
        return a == b
    return abs(a - b) <= tolerance


def _value_table(res, fs: Sequence[TestFunction]):
    """Per group: coefficient and, per slot, every battery function at the value."""
    return [(c, [[f(v) for f in fs] for v in values]) for values, c in res.table.items()]


def _sum_products(table, choice: Sequence[Sequence[int]]):
    """sum_g c_g * prod_slot prod_{k in choice[slot]} F_k(value_{g,slot})."""
    total = 0
    for c, slots in table:
        term = c
        for vals, ks in zip(slots, choice):
            for k in ks:
                term = term * vals[k]
        total = total + term
    return total


def _square_paths(big: Ensemble, small: Ensemble, sigma: Surjection, fs, ts, schedule):
    """Both paths around the square for every battery tensor at the tuple ``ts``.

    Path 1 multiplies slots along sigma, then applies ``small`` at level m.
    Path 2 applies ``big`` at level n, then multiplies slots along sigma.
    Evaluated at (t_1, ..., t_m), path 2 is big^{(n)} at (t_sigma(1), ..., t_sigma(n)).
    """
    first = _value_table(restrict(small, ts, schedule), fs)
    second = _value_table(restrict(big, [ts[sigma(i) - 1] for i in range(1, sigma.n + 1)], schedule), fs)
    for ks in itertools.product(range(len(fs)), repeat=sigma.n):
        fibres = [[ks[i - 1] for i in sigma.preimage(j)] for j in range(1, sigma.m + 1)]
        yield ks, _sum_products(first, fibres), _sum_products(second, [[k] for k in ks])


def _square_check(name, pairs, sigma, samples, seed, tolerance, families, schedule, params):
    start = time.perf_counter()
    witnesses = []
    compared = 0
    for label, big, small in pairs:
        target_fs = {fam: battery(big.target, fam) for fam in families}
        sampler = _sampler(big.source, sigma.n + 2, seed, name, label, str(sigma), schedule=schedule)
        for _ in range(samples):
            ts = sampler.point_set(sigma.m)
            for fam in families:
                fs = target_fs[fam]
                for ks, lhs, rhs in _square_paths(big, small, sigma, fs, ts, schedule):
                    compared += 1
                    if not _close(lhs, rhs, fam, tolerance) and len(witnesses) < MAX_WITNESSES:
                        witnesses.append({
                            "pair": label, "family": fam, "sigma": str(sigma),
                            "functions": [fs[k].name for k in ks], "points": [_pt(t) for t in ts],
                            "sigma_then_ensemble": str(lhs), "ensemble_then_sigma": str(rhs),
                        })
    params = dict(params, sigma=str(sigma), samples=samples, comparisons=compared)
    return CheckOutcome(name, params, _status(not witnesses), witnesses, seed, True, time.perf_counter() - start)


def naturality_square(
    r: int, sigma: Surjection, samples: int = 200, seed: int = 0, tolerance: float = TRIG_TOLERANCE,
    families=(EXACT, TRIG), schedule: Schedule = DEFAULT_SCHEDULE,
) -> CheckOutcome:
    """The square for T_{r+1} at level r against T_{m+1} at level m, for sigma: <r> -> <m>.

    Checked for both T (functions on the Moebius strip, points on the
    cylinder) and Tbar (the other way round).
    """
    if not 2 <= r <= 3 or sigma.n != r:
        raise ValueError("naturality_square needs 2 <= r <= 3 and sigma: <r> -> <m>")
    m = sigma.m
    pairs = [
        (f"T_{r + 1}/T_{m + 1}", ens.T(r + 1), ens.T(m + 1)),
        (f"Tbar_{r + 1}/Tbar_{m + 1}", ens.Tbar(r + 1), ens.Tbar(m + 1)),
    ]
    return _square_check("naturality_square", pairs, sigma, samples, seed, tolerance, families, schedule, {"r": r})


def generic_square(
    A: Ensemble, label: str, sigma: Surjection, samples: int = 200, seed: int = 0,
    tolerance: float = TRIG_TOLERANCE, families=(EXACT, TRIG), schedule: Schedule = DEFAULT_SCHEDULE,
) -> CheckOutcome:
    """The square that commutes for any ensemble: the same A at both levels."""
    return _square_check(
        "generic_square", [(label, A, A)], sigma, samples, seed, tolerance, families, schedule, {"ensemble": label}
    )


def theorem_inverse(
    r: int, samples: int = 200, seed: int = 0, tolerance: float = TRIG_TOLERANCE,
    families=(EXACT, TRIG), probe_samples: int | None = None, schedule: Schedule = DEFAULT_SCHEDULE,
) -> CheckOutcome:
    """Psi o Phi and Phi o Psi act as the identity on r-fold tensors.

    Ensemble level: Tbar_{r+1} T_{r+1} - 1 and T_{r+1} Tbar_{r+1} - 1 are
    corroborated r-coherent. Function level: every battery tensor evaluated
    through the composite at sampled r-tuples equals f_1(t_1)...f_r(t_r).
    """
    if not 1 <= r <= 3:
        raise ValueError("theorem_inverse needs 1 <= r <= 3")
    start = time.perf_counter()
    probe_samples = samples if probe_samples is None else probe_samples
    witnesses = []
    compared = 0
    composites = [
        ("Tbar T", X, compose(ens.Tbar(r + 1), ens.T(r + 1))),
        ("T Tbar", Y, compose(ens.T(r + 1), ens.Tbar(r + 1))),
    ]
    for label, space, E in composites:
        sampler = _sampler(space, r + 2, seed, "theorem_inverse", r, label, "probe", schedule=schedule)
        probe = coherence_probe(E - identity(space), r, sampler, probe_samples, schedule=schedule)
        if not probe.corroborated:
            witnesses.append(dict(probe.witness.to_json(), composite=label, kind="coherence refuted"))
        sampler = _sampler(space, r + 2, seed, "theorem_inverse", r, label, "functions", schedule=schedule)
        for _ in range(samples):
            ts = sampler.point_set(r)
            res = restrict(E, ts, schedule)
            for fam in families:
                fs = battery(space, fam)
                table = _value_table(res, fs)
                direct = [[f(t) for f in fs] for t in ts]
                for ks in itertools.product(range(len(fs)), repeat=r):
                    compared += 1
                    got = _sum_products(table, [[k] for k in ks])
                    want = 1
                    for vals, k in zip(direct, ks):
                        want = want * vals[k]
                    if not _close(got, want, fam, tolerance) and len(witnesses) < MAX_WITNESSES:
                        witnesses.append({
                            "composite": label, "family": fam, "functions": [fs[k].name for k in ks],
                            "points": [_pt(t) for t in ts], "composite_value": str(got), "expected": str(want),
                        })
    params = {"r": r, "samples": samples, "probe_samples": probe_samples, "comparisons": compared}
    return CheckOutcome(
        "theorem_inverse", params, _status(not witnesses, success=CORROBORATED), witnesses, seed, True,
        time.perf_counter() - start,
    )


# -- campaign -----------------------------------------------------------------

CHECK_NAMES = ("axioms", "z_identity", "z_coherence", "t_calculation", "t_compat", "naturality", "theorem")


def run_checks(
    checks: Sequence[str] = CHECK_NAMES,
    max_index: int = 5,
    max_level: int = 2,
    samples: int = 500,
    seed: int = 0,
    tolerance: float = TRIG_TOLERANCE,
    progress: Callable[[CheckOutcome], None] | None = None,
) -> list[CheckOutcome]:
    """Run the selected checks in canonical order.

    ``samples`` sizes the sampled-set checks and the axiom point pool; the
    function-level checks use at most 200 tuples.
    """
    unknown = set(checks) - set(CHECK_NAMES)
    if unknown:
        raise ValueError(f"unknown checks: {sorted(unknown)}")
    N, R = max_index, max_level
    fn_samples = min(samples, 200)
    jobs: list[Callable[[], list[CheckOutcome] | CheckOutcome]] = []
    if "axioms" in checks:
        jobs.append(lambda: axiom_suite(N, samples, seed))
    if "z_identity" in checks:
        jobs += [lambda n=n: lemma_z_identity(n, samples, seed) for n in range(1, min(N, 6) + 1)]
    if "z_coherence" in checks:
        jobs += [lambda n=n: lemma_z_coherence(n, samples, seed) for n in range(1, min(N - 1, 5) + 1)]
    if "t_calculation" in checks:
        jobs += [lambda n=n: lemma_t_calculation(n, samples, seed) for n in range(1, min(N, 4) + 1)]
        jobs.append(lambda: undamped_twist_comparison(1, 2, samples, seed))
    if "t_compat" in checks:
        jobs += [lambda r=r: lemma_t_compat(r, samples, seed) for r in range(2, min(N - 1, 4) + 1)]
    if "naturality" in checks:
        for r in range(2, min(R, 3) + 1):
            for sigma in enumerate_surjections(r, r - 1) + enumerate_surjections(r, r):
                jobs.append(lambda r=r, s=sigma: naturality_square(r, s, fn_samples, seed, tolerance))
        for sigma in enumerate_surjections(2, 1):
            jobs.append(lambda s=sigma: generic_square(ens.Z(2), "Z_2", s, fn_samples, seed, tolerance))
    if "theorem" in checks:
        jobs += [lambda r=r: theorem_inverse(r, fn_samples, seed, tolerance, probe_samples=samples)
                 for r in range(1, min(R, 3) + 1)]

    outcomes: list[CheckOutcome] = []
    for job in jobs:
        result = job()
        for outcome in result if isinstance(result, list) else [result]:
            outcomes.append(outcome)
            if progress is not None:
                progress(outcome)
    return outcomes
