"""Seeded point sampling on the cylinder and the Moebius strip.

Discrepancies between maps concentrate on the strips and on the seam, so
uniform points are mixed with structured ones: pinch points, strip
boundaries, strip interiors, the seam x = 0, and y in {0, 1/2, 1}.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .geometry import DEFAULT_SCHEDULE, HALF, ONE, ZERO, QuotientPoint, Schedule, Space, point

MAX_DENOMINATOR = 1 << 16


def substream(seed: int, *labels) -> random.Random:
    """Independent deterministic stream for one job; str seeds hash with sha512."""
    return random.Random(":".join([str(seed), *map(str, labels)]))


def random_rational(rng: random.Random, upper_open: bool = False) -> Fraction:
    q = rng.randint(1, MAX_DENOMINATOR)
    p = rng.randint(0, q - 1 if upper_open else q)
    return Fraction(p, q)


class PointSampler:
    def __init__(
        self,
        space: Space,
        max_index: int,
        rng: random.Random,
        schedule: Schedule = DEFAULT_SCHEDULE,
    ):
        self.space = Space(space)
        self.max_index = max_index
        self.rng = rng
        self.schedule = schedule
        self.structured = structured_points(self.space, max_index, schedule)

    def _strip_point(self) -> QuotientPoint:
        n = self.rng.randint(1, self.max_index)
        x, e = self.schedule.x(n), self.schedule.eps(n)
        t = random_rational(self.rng) * 2 - 1
        return point(self.space, x + t * e, random_rational(self.rng))

    def point(self) -> QuotientPoint:
        kind = self.rng.randrange(3)
        if kind == 0:
            return self.rng.choice(self.structured)
        if kind == 1:
            return self._strip_point()
        return point(self.space, random_rational(self.rng, upper_open=True), random_rational(self.rng))

    def point_set(self, size: int) -> list[QuotientPoint]:
        return [self.point() for _ in range(size)]

    def sets(self, count: int, min_size: int, max_size: int):
        """``count`` sets with sizes uniform in [min_size, max_size]; prefix-stable in ``count``."""
        for _ in range(count):
            yield self.point_set(self.rng.randint(min_size, max_size))

    def points(self, count: int) -> list[QuotientPoint]:
        """All structured points first, then random ones up to ``count``."""
        out = list(self.structured[:count])
        while len(out) < count:
            out.append(self.point())
        return out


def structured_points(space: Space, max_index: int, schedule: Schedule = DEFAULT_SCHEDULE) -> list[QuotientPoint]:
    ys = [ZERO, Fraction(1, 4), HALF, Fraction(3, 4), ONE]
    out = [point(space, ZERO, y) for y in ys]
    for n in range(1, max_index + 1):
        x, e = schedule.x(n), schedule.eps(n)
        out.append(point(space, x, HALF))
        for y in ys:
            out.append(point(space, x, y))
            out.append(point(space, x - e, y))
            out.append(point(space, x + e, y))
            out.append(point(space, x - e / 2, y))
            out.append(point(space, x + e / 3, y))
        # midway to the next strip, outside every Mov set
        mid = (x + schedule.x(n + 1)) / 2
        out.append(point(space, mid, Fraction(1, 10)))
        out.append(point(space, mid, Fraction(9, 10)))
    seen = set()
    unique = []
    for p in out:
        if p not in seen:
            seen.add(p)
            unique.append(p)
    return unique
