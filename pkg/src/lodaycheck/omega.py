"""The category of finite sets <n> = {1, ..., n} and surjective maps.

Elements are 1-based throughout, including the text form ``"2,1,1"``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

MAX_ENUMERATION = 7


@dataclass(frozen=True)
class Surjection:
    """A surjection <n> -> <m> stored as its image table."""

    image: tuple[int, ...]
    m: int

    def __post_init__(self):
        image = tuple(int(v) for v in self.image)
        object.__setattr__(self, "image", image)
        if not image:
            raise ValueError("a surjection needs a nonempty domain")
        if self.m < 1 or self.m > len(image):
            raise ValueError(f"codomain size {self.m} impossible for domain size {len(image)}")
        bad = [v for v in image if not 1 <= v <= self.m]
        if bad:
            raise ValueError(f"image entries {bad} outside 1..{self.m}")
        missing = set(range(1, self.m + 1)) - set(image)
        if missing:
            raise ValueError(f"not surjective: {sorted(missing)} never hit")

    @property
    def n(self) -> int:
        return len(self.image)

    def __call__(self, i: int) -> int:
        return self.image[i - 1]

    def preimage(self, j: int) -> tuple[int, ...]:
        return tuple(i for i, v in enumerate(self.image, start=1) if v == j)

    @property
    def is_bijection(self) -> bool:
        return self.n == self.m

    def __str__(self):
        return ",".join(map(str, self.image))

    @classmethod
    def parse(cls, text: str) -> "Surjection":
        """Read the comma-separated text form; the codomain is <max image>."""
        try:
            image = tuple(int(tok) for tok in text.replace(" ", "").split(","))
        except ValueError:
            raise ValueError(f"malformed surjection {text!r}") from None
        return cls(image, max(image))


def identity(n: int) -> Surjection:
    return Surjection(tuple(range(1, n + 1)), n)


def merge(r: int, k: int) -> Surjection:
    """Adjacent merge <r> -> <r-1>: k+1 goes to k, larger values shift down."""
    if not 1 <= k < r:
        raise ValueError(f"merge index {k} invalid at level {r}")
    return Surjection(tuple(i if i <= k else i - 1 for i in range(1, r + 1)), r - 1)


def transposition(r: int, k: int) -> Surjection:
    """Adjacent transposition of k and k+1 in <r>."""
    if not 1 <= k < r:
        raise ValueError(f"transposition index {k} invalid at level {r}")
    image = list(range(1, r + 1))
    image[k - 1], image[k] = image[k], image[k - 1]
    return Surjection(tuple(image), r)


def compose(second: Surjection, first: Surjection) -> Surjection:
    """``second o first``: apply ``first`` then ``second``."""
    if first.m != second.n:
        raise ValueError(f"cannot compose <{first.n}>-><{first.m}> with <{second.n}>-><{second.m}>")
    return Surjection(tuple(second(v) for v in first.image), second.m)


def enumerate_surjections(n: int, m: int) -> list[Surjection]:
    """All surjections <n> -> <m> in lexicographic order of image tables."""
    if n > MAX_ENUMERATION:
        raise ValueError(f"enumeration capped at n <= {MAX_ENUMERATION}, got {n}")
    if n < 1 or m < 1:
        raise ValueError("sizes must be positive")
    if m > n:
        return []
    full = set(range(1, m + 1))
    return [
        Surjection(image, m)
        for image in itertools.product(range(1, m + 1), repeat=n)
        if set(image) == full
    ]


def decompose(sigma: Surjection) -> tuple[Surjection, list[int]]:
    """Factor ``sigma`` as a permutation followed by adjacent merges.

    Returns ``(perm, merges)`` such that applying ``perm`` and then
    ``merge(., k)`` for each ``k`` in ``merges`` (in order) gives ``sigma``.
    The permutation is the stable sort of the domain by image value, so the
    remaining map is monotone.
    """
    n = sigma.n
    order = sorted(range(1, n + 1), key=lambda i: (sigma(i), i))
    perm_image = [0] * n
    for pos, i in enumerate(order, start=1):
        perm_image[i - 1] = pos
    perm = Surjection(tuple(perm_image), n)

    # block values of the monotone remainder; merge from the top so lower
    # indices stay valid
    values = [sigma(i) for i in order]
    merges = []
    for k in range(n - 1, 0, -1):
        if values[k - 1] == values[k]:
            merges.append(k)
            del values[k]
    return perm, merges


def recompose(perm: Surjection, merges: list[int]) -> Surjection:
    result = perm
    for k in merges:
        result = compose(merge(result.m, k), result)
    return result
