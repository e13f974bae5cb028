"""Ensembles: formal rational combinations of maps between the two spaces.

Composition multiplies out bilinearly and merges only syntactically equal
words. Questions about whether two maps agree pointwise are answered by
restricting to finite point sets and grouping terms by their exact values
there (:func:`restrict`).
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .algebra import to_fraction
from .geometry import (
    DEFAULT_SCHEDULE,
    MapWord,
    QuotientPoint,
    RationalPoint,
    Schedule,
    Space,
    X,
    Y,
    _fibre,
    run_scaled,
    identity_word,
    make_h,
    make_hbar,
    make_p,
    make_q,
)


@dataclass(frozen=True)
class Ensemble:
    source: Space
    target: Space
    terms: tuple[tuple[Fraction, MapWord], ...] = ()

    def __post_init__(self):
        for _, w in self.terms:
            if w.source is not self.source or w.target is not self.target:
                raise ValueError(f"word {w} does not match ensemble {self.source}->{self.target}")

    @classmethod
    def build(cls, source: Space, target: Space, terms) -> "Ensemble":
        """Merge syntactically equal words and drop zero coefficients."""
        merged: dict[MapWord, Fraction] = {}
        for coeff, word in terms:
            merged[word] = merged.get(word, Fraction(0)) + Fraction(coeff)
        return cls(Space(source), Space(target), tuple((c, w) for w, c in merged.items() if c != 0))

    @classmethod
    def of(cls, word: MapWord, coeff=1) -> "Ensemble":
        return cls.build(word.source, word.target, [(coeff, word)])

    @classmethod
    def zero(cls, source: Space, target: Space) -> "Ensemble":
        return cls(Space(source), Space(target), ())

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def __add__(self, other: "Ensemble") -> "Ensemble":
        return combine(1, self, 1, other)

    def __sub__(self, other: "Ensemble") -> "Ensemble":
        return combine(1, self, -1, other)

    def __rmul__(self, scalar) -> "Ensemble":
        return combine(scalar, self, 0, self)

    def __neg__(self) -> "Ensemble":
        return combine(-1, self, 0, self)

    def __matmul__(self, other: "Ensemble") -> "Ensemble":
        return compose(self, other)

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({c})*{w}" for c, w in self.terms)

    def to_json(self) -> dict:
        return {
            "source": self.source.value,
            "target": self.target.value,
            "terms": [{"coeff": str(c), "word": w.to_json()["atoms"]} for c, w in self.terms],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Ensemble":
        source, target = Space(data["source"]), Space(data["target"])
        terms = [
            (Fraction(t["coeff"]), MapWord.from_json({"source": source, "target": target, "atoms": t["word"]}))
            for t in data["terms"]
        ]
        return cls.build(source, target, terms)


def identity(space: Space) -> Ensemble:
    return Ensemble.of(identity_word(space))


def combine(alpha, A: Ensemble, beta, B: Ensemble) -> Ensemble:
    if (A.source, A.target) != (B.source, B.target):
        raise ValueError(f"cannot combine {A.source}->{A.target} with {B.source}->{B.target}")
    alpha, beta = to_fraction(alpha, "alpha"), to_fraction(beta, "beta")
    terms = [(alpha * c, w) for c, w in A.terms] + [(beta * c, w) for c, w in B.terms]
    return Ensemble.build(A.source, A.target, terms)


def product_terms(A: Ensemble, B: Ensemble) -> list[tuple[Fraction, MapWord]]:
    """Raw bilinear expansion of ``A o B`` before any merging."""
    if B.target is not A.source:
        raise ValueError(f"cannot compose {A.source}->{A.target} after {B.source}->{B.target}")
    return [(u * v, b.then(a)) for v, b in B.terms for u, a in A.terms]


def compose(A: Ensemble, B: Ensemble) -> Ensemble:
    """``A o B``: apply B first."""
    return Ensemble.build(B.source, A.target, product_terms(A, B))


def linear_sum(ensembles: Sequence[Ensemble], source: Space, target: Space) -> Ensemble:
    terms = [t for e in ensembles for t in e.terms]
    return Ensemble.build(source, target, terms)


# -- restriction ------------------------------------------------------------


@dataclass(frozen=True)
class Restriction:
    """Coefficients of ``A|_T`` grouped by the value tuple of each term on T."""

    points: tuple[QuotientPoint, ...]
    table: dict  # tuple[QuotientPoint, ...] -> Fraction, zero groups removed

    @property
    def is_zero(self) -> bool:
        return not self.table

    def pair(self, fs: Sequence[Callable]) -> object:
        """sum over groups of v_psi * f_1(psi_1) * ... * f_r(psi_r)."""
        if len(fs) != len(self.points):
            raise ValueError("need one function per point")
        total = 0
        for values, coeff in self.table.items():
            term = coeff
            for f, v in zip(fs, values):
                term = term * f(v)
            total = total + term
        return total

    def to_json(self) -> dict:
        entries = [
            {"values": [v.to_json() for v in values], "coeff": str(c)}
            for values, c in self.table.items()
        ]
        entries.sort(key=lambda e: [(v["x"], v["y"]) for v in e["values"]])
        return {"points": [p.to_json() for p in self.points], "table": entries}


def restrict(A: Ensemble, T: Sequence[QuotientPoint], schedule: Schedule = DEFAULT_SCHEDULE) -> Restriction:
    T = tuple(T)
    for p in T:
        if p.space is not A.source:
            raise ValueError(f"point {p} is not in the source space {A.source}")
    maxn = max((w.max_index for _, w in A.terms), default=0)
    scaled = [_fibre(p.rep.x, schedule).scaled(p.rep.y, maxn) for p in T]
    # atoms preserve x, so a value tuple is determined by its y-coordinates
    groups: dict[tuple, Fraction] = defaultdict(Fraction)
    for coeff, w in A.terms:
        code = w.code
        key = tuple(run_scaled(code, yi, D, los, flips) for D, yi, los, flips in scaled)
        groups[key] += coeff
    table = {}
    for key, coeff in groups.items():
        if coeff != 0:
            values = tuple(
                QuotientPoint(A.target, RationalPoint(p.rep.x, Fraction(yi, s[0])))
                for p, yi, s in zip(T, key, scaled)
            )
            table[values] = coeff
    return Restriction(T, table)


@dataclass(frozen=True)
class ProbeResult:
    status: str  # "corroborated" or "refuted"
    level: int
    trials: int
    witness: Restriction | None = None

    @property
    def corroborated(self) -> bool:
        return self.status == "corroborated"

    def to_json(self) -> dict:
        out = {"status": self.status, "level": self.level, "trials": self.trials}
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        return out


def coherence_probe(
    A: Ensemble,
    r: int,
    sampler,
    trials: int,
    witnesses: Sequence[Sequence[QuotientPoint]] = (),
    schedule: Schedule = DEFAULT_SCHEDULE,
) -> ProbeResult:
    """Search for a set of at most r points on which A does not vanish.

    Known witnesses are re-checked before sampling, so a refutation is never
    lost by rerunning with more trials. A refutation proves A is not
    r-coherent (the targets are metric, hence completely Hausdorff); running
    out of trials only corroborates.
    """
    if r == 0:
        total = sum((c for c, _ in A.terms), Fraction(0))
        if total != 0:
            return ProbeResult("refuted", 0, 0, Restriction((), {(): total}))
        return ProbeResult("corroborated", 0, 0)
    for T in witnesses:
        if 0 < len(T) <= r:
            res = restrict(A, T, schedule)
            if not res.is_zero:
                return ProbeResult("refuted", r, 0, res)
    done = 0
    for T in sampler.sets(trials, 1, r):
        done += 1
        res = restrict(A, T, schedule)
        if not res.is_zero:
            return ProbeResult("refuted", r, done, res)
    return ProbeResult("corroborated", r, done)


def apply_level(
    A: Ensemble,
    fs: Sequence[Callable],
    ts: Sequence[QuotientPoint],
    schedule: Schedule = DEFAULT_SCHEDULE,
):
    """Value of A^{(r)}(f_1 (x) ... (x) f_r) at the point (t_1, ..., t_r).

    Computed term by term: sum_i u_i * f_1(a_i(t_1)) * ... * f_r(a_i(t_r)).
    """
    if len(fs) != len(ts):
        raise ValueError("need as many functions as points")
    for t in ts:
        if t.space is not A.source:
            raise ValueError(f"point {t} is not in the source space {A.source}")
    total = 0
    for coeff, w in A.terms:
        term = coeff
        for f, t in zip(fs, ts):
            y = _fibre(t.rep.x, schedule).run(w.atoms, t.rep.y)
            term = term * f(QuotientPoint(A.target, RationalPoint(t.rep.x, y)))
        total = total + term
    return total


# -- the Z and T ensembles --------------------------------------------------


def _z(n: int, space: Space, make) -> Ensemble:
    if n < 0:
        raise ValueError("Z_n needs n >= 0")
    one = identity(space)
    out = one
    for i in range(1, n + 1):
        out = compose(out, one - Ensemble.of(make(i)))
    return out


def Z(n: int) -> Ensemble:
    """(1 - p_1)(1 - p_2)...(1 - p_n) over the cylinder; Z(0) is the identity."""
    return _z(n, X, make_p)


def Zbar(n: int) -> Ensemble:
    return _z(n, Y, make_q)


def T(n: int) -> Ensemble:
    """sum_{i<=n} Zbar_{i-1} h_i, from the cylinder to the Moebius strip."""
    if n < 1:
        raise ValueError("T_n needs n >= 1")
    return linear_sum([compose(Zbar(i - 1), Ensemble.of(make_h(i))) for i in range(1, n + 1)], X, Y)


def Tbar(n: int) -> Ensemble:
    if n < 1:
        raise ValueError("Tbar_n needs n >= 1")
    return linear_sum([compose(Z(i - 1), Ensemble.of(make_hbar(i))) for i in range(1, n + 1)], Y, X)


def p_ens(n: int) -> Ensemble:
    return Ensemble.of(make_p(n))


def q_ens(n: int) -> Ensemble:
    return Ensemble.of(make_q(n))


def h_ens(n: int) -> Ensemble:
    return Ensemble.of(make_h(n))


def hbar_ens(n: int) -> Ensemble:
    return Ensemble.of(make_hbar(n))
