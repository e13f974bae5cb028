"""Exact rational model of the cylinder and the Moebius strip.

Both spaces are quotients of the unit square. The cylinder glues (0, y) to
(1, y); the Moebius strip glues (0, y) to (1, 1 - y). Around each
x_n = 1/(n+1) sits a strip of half-width eps_n. Inside it, the region R_n
pinches to the single point (x_n, 1/2).

Maps are words in two kinds of atoms acting on square coordinates:

* ``Clamp(n)`` clamps y fibrewise onto [l_n(x), 1 - l_n(x)]. This is a
  retraction of the square onto R_n, symmetric about y = 1/2.
* ``Flip(n)`` sends y to 1 - y whenever x >= x_n. This is the half-twist of
  the right half of R_n.

Every atom preserves x. Words are evaluated on the canonical representative
(x in [0, 1)), so evaluation never leaves it.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cached_property, lru_cache
from math import lcm

ZERO = Fraction(0)
HALF = Fraction(1, 2)
ONE = Fraction(1)


class Space(str, Enum):
    CYLINDER = "cylinder"
    MOEBIUS = "moebius"

    def __str__(self):
        return self.value


X = Space.CYLINDER
Y = Space.MOEBIUS


@dataclass(frozen=True)
class Schedule:
    """Strip centres x_n = 1/(n+1) and half-widths eps_n = factor/((n+1)(n+2)).

    The default factor 1/4 keeps neighbouring strips a half-gap apart; larger
    factors exist only to build deliberately broken geometries.
    """

    eps_factor: Fraction = Fraction(1, 4)

    def x(self, n: int) -> Fraction:
        return Fraction(1, n + 1)

    def eps(self, n: int) -> Fraction:
        return Fraction(self.eps_factor) / ((n + 1) * (n + 2))

    def ell(self, n: int, x: Fraction) -> Fraction:
        """Lower edge of the fibre of R_n over x."""
        t = (1 - abs(x - self.x(n)) / self.eps(n)) / 2
        return t if t > 0 else ZERO

    def strips_disjoint(self, upto: int) -> bool:
        """Open intervals (x_n - eps_n, x_n + eps_n) for n <= upto never meet."""
        return all(
            self.x(n + 1) + self.eps(n + 1) <= self.x(n) - self.eps(n) for n in range(1, upto)
        )


DEFAULT_SCHEDULE = Schedule()


@dataclass(frozen=True)
class RationalPoint:
    x: Fraction
    y: Fraction

    def __post_init__(self):
        x, y = Fraction(self.x), Fraction(self.y)
        if not (0 <= x <= 1 and 0 <= y <= 1):
            raise ValueError(f"point ({x}, {y}) outside the unit square")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)


@dataclass(frozen=True)
class QuotientPoint:
    """A point of the cylinder or Moebius strip via its representative with x < 1."""

    space: Space
    rep: RationalPoint

    def __post_init__(self):
        if self.rep.x >= 1:
            raise ValueError("canonical representative needs x < 1; use canonicalize")

    @property
    def x(self) -> Fraction:
        return self.rep.x

    @property
    def y(self) -> Fraction:
        return self.rep.y

    def __str__(self):
        return f"{self.space}({self.x}, {self.y})"

    def to_json(self) -> dict:
        return {"space": self.space.value, "x": str(self.x), "y": str(self.y)}

    @classmethod
    def from_json(cls, data: dict) -> "QuotientPoint":
        return canonicalize(Space(data["space"]), RationalPoint(Fraction(data["x"]), Fraction(data["y"])))


def point(space: Space, x, y) -> QuotientPoint:
    return canonicalize(Space(space), RationalPoint(Fraction(x), Fraction(y)))


def canonicalize(space: Space, p: RationalPoint) -> QuotientPoint:
    if p.x < 1:
        return QuotientPoint(space, p)
    y = p.y if space is X else 1 - p.y
    return QuotientPoint(space, RationalPoint(ZERO, y))


@dataclass(frozen=True)
class Atom:
    kind: str  # "clamp" or "flip"
    n: int

    def __post_init__(self):
        if self.kind not in ("clamp", "flip"):
            raise ValueError(f"unknown atom kind {self.kind!r}")
        if self.n < 1:
            raise ValueError("atom index must be >= 1")

    def __str__(self):
        return f"{self.kind}:{self.n}"

    def to_json(self) -> dict:
        return {"atom": self.kind, "n": self.n}


def Clamp(n: int) -> Atom:
    return Atom("clamp", n)


def Flip(n: int) -> Atom:
    return Atom("flip", n)


class _Fibre:
    """Per-x cache of clamp bounds and flip decisions.

    Words run in integers: every value a word can produce on this fibre is a
    multiple of 1/D, where D is the lcm of the denominators of y and of the
    clamp bounds involved.
    """

    __slots__ = ("x", "schedule", "_ell", "_flip", "_tables")

    def __init__(self, x: Fraction, schedule: Schedule):
        self.x = x
        self.schedule = schedule
        self._ell = {}
        self._flip = {}
        self._tables = {}

    def ell(self, n: int) -> Fraction:
        v = self._ell.get(n)
        if v is None:
            v = self._ell[n] = self.schedule.ell(n, self.x)
        return v

    def flips(self, n: int) -> bool:
        v = self._flip.get(n)
        if v is None:
            v = self._flip[n] = self.x >= self.schedule.x(n)
        return v

    def tables(self, maxn: int):
        t = self._tables.get(maxn)
        if t is None:
            ells = [ZERO] + [self.ell(n) for n in range(1, maxn + 1)]
            den = 1
            for e in ells:
                den = lcm(den, e.denominator)
            flips = [False] + [self.flips(n) for n in range(1, maxn + 1)]
            t = self._tables[maxn] = (den, ells, flips)
        return t

    def scaled(self, y: Fraction, maxn: int):
        """Scale factor D, D*y, clamp bounds times D, and flip flags."""
        den, ells, flips = self.tables(maxn)
        D = lcm(den, y.denominator)
        los = [int(e * D) for e in ells]
        return D, int(y * D), los, flips

    def run(self, atoms, y: Fraction) -> Fraction:
        code = encode(atoms)
        D, yi, los, flips = self.scaled(y, max((abs(a) for a in code), default=0))
        return Fraction(run_scaled(code, yi, D, los, flips), D)


def encode(atoms) -> tuple[int, ...]:
    """Clamp(n) as +n, Flip(n) as -n."""
    return tuple(a.n if a.kind == "clamp" else -a.n for a in atoms)


def run_scaled(code, y: int, D: int, los, flips) -> int:
    for a in code:
        if a > 0:
            lo = los[a]
            if lo:
                if y < lo:
                    y = lo
                elif y > D - lo:
                    y = D - lo
        elif flips[-a]:
            y = D - y
    return y


@lru_cache(maxsize=1 << 16)
def _fibre(x: Fraction, schedule: Schedule) -> _Fibre:
    return _Fibre(x, schedule)


def eval_atom(a: Atom, p: RationalPoint, schedule: Schedule = DEFAULT_SCHEDULE) -> RationalPoint:
    return RationalPoint(p.x, _fibre(p.x, schedule).run((a,), p.y))


@dataclass(frozen=True)
class MapWord:
    """Atoms applied left to right, read as a map source -> target."""

    source: Space
    target: Space
    atoms: tuple[Atom, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "source", Space(self.source))
        object.__setattr__(self, "target", Space(self.target))
        object.__setattr__(self, "atoms", tuple(self.atoms))

    @cached_property
    def code(self) -> tuple[int, ...]:
        return encode(self.atoms)

    @cached_property
    def max_index(self) -> int:
        return max((a.n for a in self.atoms), default=0)

    def then(self, other: "MapWord") -> "MapWord":
        """``other o self``."""
        if self.target is not other.source:
            raise ValueError(f"cannot follow a map into {self.target} by a map from {other.source}")
        return MapWord(self.source, other.target, self.atoms + other.atoms)

    def __str__(self):
        body = " ".join(map(str, self.atoms)) or "id"
        return f"[{body}]:{self.source}->{self.target}"

    def to_json(self) -> dict:
        return {
            "source": self.source.value,
            "target": self.target.value,
            "atoms": [a.to_json() for a in self.atoms],
        }

    @classmethod
    def from_json(cls, data: dict) -> "MapWord":
        atoms = tuple(Atom(a["atom"], int(a["n"])) for a in data["atoms"])
        return cls(Space(data["source"]), Space(data["target"]), atoms)


def identity_word(space: Space) -> MapWord:
    return MapWord(space, space, ())


def run_raw(w: MapWord, p: RationalPoint, schedule: Schedule = DEFAULT_SCHEDULE) -> QuotientPoint:
    """Evaluate on an arbitrary representative (x may be 1) and canonicalize."""
    y = _fibre(p.x, schedule).run(w.atoms, p.y)
    return canonicalize(w.target, RationalPoint(p.x, y))


def eval_y(w: MapWord, p: QuotientPoint, schedule: Schedule = DEFAULT_SCHEDULE) -> Fraction:
    """Target y-coordinate of ``w(p)``; the x-coordinate is always ``p.x``."""
    return _fibre(p.rep.x, schedule).run(w.atoms, p.rep.y)


def eval_word(w: MapWord, p: QuotientPoint, schedule: Schedule = DEFAULT_SCHEDULE) -> QuotientPoint:
    if p.space is not w.source:
        raise ValueError(f"word from {w.source} applied to a point of {p.space}")
    return QuotientPoint(w.target, RationalPoint(p.rep.x, eval_y(w, p, schedule)))


def make_p(n: int) -> MapWord:
    return MapWord(X, X, (Clamp(n),))


def make_q(n: int) -> MapWord:
    return MapWord(Y, Y, (Clamp(n),))


def make_h(n: int) -> MapWord:
    return MapWord(X, Y, (Clamp(n), Flip(n)))


def make_hbar(n: int) -> MapWord:
    return MapWord(Y, X, (Clamp(n), Flip(n)))


def mov_contains(n: int, p: QuotientPoint, schedule: Schedule = DEFAULT_SCHEDULE) -> bool:
    w = make_p(n) if p.space is X else make_q(n)
    return eval_y(w, p, schedule) != p.y


def seam_check(
    w: MapWord,
    samples: int = 100,
    seed: int = 0,
    schedule: Schedule = DEFAULT_SCHEDULE,
) -> tuple[bool, Fraction | None]:
    """Check that ``w`` respects the gluing of its source and target spaces.

    Both representatives (0, y) and (1, y') of each sampled seam point must
    land on the same target point. Returns ``(passed, witness_y)``.
    """
    rng = random.Random(f"seam:{seed}")
    ys = [ZERO, Fraction(1, 4), HALF, ONE]
    while len(ys) < samples:
        q = rng.randint(1, 1 << 16)
        ys.append(Fraction(rng.randint(0, q), q))
    for y in ys[:max(samples, 1)]:
        left = run_raw(w, RationalPoint(ZERO, y), schedule)
        right_y = y if w.source is X else 1 - y
        right = run_raw(w, RationalPoint(ONE, right_y), schedule)
        if left != right:
            return False, y
    return True, None


def clamp_region_polygon(n: int, schedule: Schedule = DEFAULT_SCHEDULE) -> list[tuple[Fraction, Fraction]]:
    """Outline of R_n as a polygon (for plotting)."""
    x, e = schedule.x(n), schedule.eps(n)
    return [
        (ZERO, ZERO), (x - e, ZERO), (x, HALF), (x + e, ZERO), (ONE, ZERO),
        (ONE, ONE), (x + e, ONE), (x, HALF), (x - e, ONE), (ZERO, ONE),
    ]
