"""Test functions on the cylinder and the Moebius strip.

Two families are provided. ``exact_pl`` holds piecewise-bilinear functions
with rational data, evaluated exactly. ``trig`` holds float functions built
from cos and sin; these are a cross-check at a fixed tolerance.

A function on the Moebius strip must satisfy f(1, y) = f(0, 1 - y). A
function on the cylinder must satisfy f(1, y) = f(0, y). Custom functions
must pass :meth:`TestFunction.certify` before they are used.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .geometry import ONE, ZERO, QuotientPoint, Space, X, Y

EXACT = "exact_pl"
TRIG = "trig"
TRIG_TOLERANCE = 1e-9


@dataclass(frozen=True)
class TestFunction:
    __test__ = False  # not a pytest class

    name: str
    space: Space
    family: str
    formula: Callable = field(repr=False, compare=False)  # (x, y) on the square -> scalar

    def __call__(self, p: QuotientPoint):
        return self.formula(p.rep.x, p.rep.y)

    def certify(self, samples: int = 64, seed: int = 0, tolerance: float = TRIG_TOLERANCE):
        """Sampled seam-consistency check; returns the offending y or None."""
        rng = random.Random(f"certify:{self.name}:{seed}")
        ys = [ZERO, Fraction(1, 2), ONE] + [Fraction(rng.randint(0, 1000), 1000) for _ in range(samples)]
        for y in ys:
            glued = y if self.space is X else 1 - y
            a, b = self.formula(ONE, y), self.formula(ZERO, glued)
            if self.family == EXACT:
                if a != b:
                    return y
            elif abs(a - b) > tolerance:
                return y
        return None


def tent(x):
    """Distance to the seam x = 0 ~ 1."""
    return min(x, 1 - x)


def hat(x, centre, width):
    t = 1 - abs(x - centre) / width
    return t if t > 0 else 0 * t


def _exact_cylinder() -> list[TestFunction]:
    h = Fraction(1, 2)
    third = Fraction(1, 3)
    return [
        TestFunction("y", X, EXACT, lambda x, y: y),
        TestFunction("tent", X, EXACT, lambda x, y: tent(x)),
        TestFunction("tent*y", X, EXACT, lambda x, y: tent(x) * y),
        TestFunction("hat1*(2y-1)", X, EXACT, lambda x, y: hat(x, h, Fraction(1, 8)) * (2 * y - 1)),
        TestFunction("(y-1/3)*(1-2tent)", X, EXACT, lambda x, y: (y - third) * (1 - 2 * tent(x))),
    ]


def _exact_moebius() -> list[TestFunction]:
    return [
        TestFunction("|2y-1|", Y, EXACT, lambda x, y: abs(2 * y - 1)),
        TestFunction("(2y-1)*(1-2x)", Y, EXACT, lambda x, y: (2 * y - 1) * (1 - 2 * x)),
        TestFunction("tent*y", Y, EXACT, lambda x, y: tent(x) * y),
        TestFunction("min(y,1-y)+tent", Y, EXACT, lambda x, y: min(y, 1 - y) + tent(x)),
        TestFunction("hat2*(2y-1)", Y, EXACT, lambda x, y: hat(x, Fraction(1, 3), Fraction(1, 10)) * (2 * y - 1)),
    ]


def _trig_cylinder() -> list[TestFunction]:
    tau = 2 * math.pi
    return [
        TestFunction("cos2pix", X, TRIG, lambda x, y: math.cos(tau * float(x))),
        TestFunction("y*sin2pix", X, TRIG, lambda x, y: float(y) * math.sin(tau * float(x))),
        TestFunction("cos2piy+sin2pix", X, TRIG, lambda x, y: math.cos(tau * float(y)) + math.sin(tau * float(x))),
        TestFunction("(2y-1)cos4pix", X, TRIG, lambda x, y: (2 * float(y) - 1) * math.cos(2 * tau * float(x))),
        TestFunction("y^2 sin2pix+y", X, TRIG, lambda x, y: float(y) ** 2 * math.sin(tau * float(x)) + float(y)),
    ]


def _trig_moebius() -> list[TestFunction]:
    pi = math.pi
    return [
        TestFunction("(2y-1)cospix", Y, TRIG, lambda x, y: (2 * float(y) - 1) * math.cos(pi * float(x))),
        TestFunction("(2y-1)sinpix", Y, TRIG, lambda x, y: (2 * float(y) - 1) * math.sin(pi * float(x))),
        TestFunction("cos2pix*(y-1/2)^2", Y, TRIG, lambda x, y: math.cos(2 * pi * float(x)) * (float(y) - 0.5) ** 2),
        TestFunction("sin2pix+cos(pi(2y-1))", Y, TRIG, lambda x, y: math.sin(2 * pi * float(x)) + math.cos(pi * (2 * float(y) - 1))),
        TestFunction("(2y-1)^3 cos3pix", Y, TRIG, lambda x, y: (2 * float(y) - 1) ** 3 * math.cos(3 * pi * float(x))),
    ]


def battery(space: Space, family: str = EXACT) -> list[TestFunction]:
    space = Space(space)
    if family == EXACT:
        return _exact_cylinder() if space is X else _exact_moebius()
    if family == TRIG:
        return _trig_cylinder() if space is X else _trig_moebius()
    raise ValueError(f"unknown function family {family!r}")


def pointwise_product(fs: list[TestFunction]) -> Callable:
    def f(p):
        out = 1
        for g in fs:
            out = out * g(p)
        return out

    return f
