from fractions import Fraction

from hypothesis import strategies as st

from lodaycheck.geometry import X, Y, point

ACCEPTANCE_LINES = []


def rationals(upper_open=False):
    def make(pair):
        p, q = pair
        return Fraction(p % (q if upper_open else q + 1), q)

    return st.tuples(st.integers(0, 10**6), st.integers(1, 4096)).map(make)


def strip_heavy_x():
    """x values concentrated on the strips around 1/(n+1), plus uniform ones."""
    def near(args):
        n, t = args
        c = Fraction(1, n + 1)
        e = Fraction(1, 4 * (n + 1) * (n + 2))
        return c + (2 * t - 1) * e

    return st.one_of(rationals(upper_open=True), st.tuples(st.integers(1, 6), rationals()).map(near))


def points(space):
    return st.tuples(strip_heavy_x(), rationals()).map(lambda xy: point(space, *xy))


cylinder_points = points(X)
moebius_points = points(Y)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
