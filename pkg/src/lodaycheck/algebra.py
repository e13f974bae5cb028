"""Finite-dimensional commutative algebras over Q and their Loday functors.

A Loday functor sends <n> to the n-th tensor power of the algebra and a
surjection to the map multiplying together the tensor factors in each fibre.
Tensors are dense object arrays of :class:`fractions.Fraction`, indexed by
mixed-radix words with the first slot most significant (the ``np.kron``
convention).
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .omega import Surjection, decompose

MAX_TENSOR_SIZE = 10**6


def to_fraction(value, where: str = "value") -> Fraction:
    """Parse ``"p/q"`` strings, ints and Fractions; floats are refused."""
    if isinstance(value, bool) or isinstance(value, float):
        raise ValueError(f"{where}: expected an exact rational, got {value!r}")
    try:
        return Fraction(value)
    except (TypeError, ValueError, ZeroDivisionError):
        raise ValueError(f"{where}: invalid rational {value!r}") from None


def fraction_array(data, shape=None, where: str = "array") -> np.ndarray:
    raw = np.array(data, dtype=object)
    if shape is not None and raw.shape != tuple(shape):
        raise ValueError(f"{where}: expected shape {tuple(shape)}, got {raw.shape}")
    out = np.empty(raw.shape, dtype=object)
    for idx in np.ndindex(raw.shape):
        loc = where + "".join(f"[{i}]" for i in idx)
        out[idx] = to_fraction(raw[idx], loc)
    return out


def fraction_str(q: Fraction) -> str:
    return str(Fraction(q))


def _identity(d: int) -> np.ndarray:
    eye = np.full((d, d), Fraction(0), dtype=object)
    for i in range(d):
        eye[i, i] = Fraction(1)
    return eye


def _zeros(shape) -> np.ndarray:
    return np.full(shape, Fraction(0), dtype=object)


@dataclass(frozen=True, eq=False)
class FiniteCommAlgebra:
    """Structure constants ``c[i, j, k]``: coefficient of e_k in e_i * e_j."""

    c: np.ndarray
    name: str = ""

    def __post_init__(self):
        c = fraction_array(self.c, where="c")
        if c.ndim != 3 or len(set(c.shape)) != 1:
            raise ValueError(f"structure constants must be d x d x d, got {c.shape}")
        if np.any(c != c.transpose(1, 0, 2)):
            raise ValueError("algebra is not commutative")
        # (e_i e_j) e_k versus e_i (e_j e_k)
        left = np.tensordot(c, c, axes=([2], [0]))  # [i, j, k, q]
        right = np.tensordot(c, c, axes=([2], [1])).transpose(2, 0, 1, 3)  # [i, j, k, q]
        if np.any(left != right):
            raise ValueError("algebra is not associative")
        c.setflags(write=False)
        object.__setattr__(self, "c", c)

    @property
    def dim(self) -> int:
        return self.c.shape[0]

    def basis(self, i: int) -> np.ndarray:
        v = _zeros(self.dim)
        v[i] = Fraction(1)
        return v

    def to_json(self) -> dict:
        return {"dim": self.dim, "c": [[[fraction_str(v) for v in row] for row in plane] for plane in self.c]}

    @classmethod
    def from_json(cls, data: dict, where: str = "algebra") -> "FiniteCommAlgebra":
        if not isinstance(data, dict) or "dim" not in data or "c" not in data:
            raise ValueError(f"{where}: expected an object with 'dim' and 'c'")
        d = data["dim"]
        if not isinstance(d, int) or d < 1:
            raise ValueError(f"{where}.dim: expected a positive integer, got {d!r}")
        c = fraction_array(data["c"], shape=(d, d, d), where=f"{where}.c")
        return cls(c, name=str(data.get("name", "")))


def load_algebra(path) -> FiniteCommAlgebra:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return FiniteCommAlgebra.from_json(data, where=str(path))


def product(A: FiniteCommAlgebra, a, b) -> np.ndarray:
    a = fraction_array(a, where="a")
    b = fraction_array(b, where="b")
    if a.shape != (A.dim,) or b.shape != (A.dim,):
        raise ValueError(f"vectors must have length {A.dim}")
    out = _zeros(A.dim)
    for i, j in itertools.product(range(A.dim), repeat=2):
        if a[i] and b[j]:
            out = out + a[i] * b[j] * A.c[i, j]
    return out


# -- standard algebras ------------------------------------------------------


def split_algebra(d: int) -> FiniteCommAlgebra:
    """Q^d with coordinatewise product."""
    c = _zeros((d, d, d))
    for i in range(d):
        c[i, i, i] = Fraction(1)
    return FiniteCommAlgebra(c, name=f"split{d}")


def truncated_polynomials(d: int) -> FiniteCommAlgebra:
    """Q[x]/(x^d) in the basis 1, x, ..., x^{d-1}."""
    c = _zeros((d, d, d))
    for i, j in itertools.product(range(d), repeat=2):
        if i + j < d:
            c[i, j, i + j] = Fraction(1)
    return FiniteCommAlgebra(c, name=f"poly{d}")


def nilpotent_algebra(d: int) -> FiniteCommAlgebra:
    """The non-unital algebra xQ[x]/(x^{d+1}) in the basis x, ..., x^d."""
    c = _zeros((d, d, d))
    for i, j in itertools.product(range(d), repeat=2):
        if i + j + 1 < d:
            c[i, j, i + j + 1] = Fraction(1)
    return FiniteCommAlgebra(c, name=f"nil{d}")


def direct_sum(A: FiniteCommAlgebra, B: FiniteCommAlgebra) -> FiniteCommAlgebra:
    d, e = A.dim, B.dim
    c = _zeros((d + e,) * 3)
    c[:d, :d, :d] = A.c
    c[d:, d:, d:] = B.c
    return FiniteCommAlgebra(c, name=f"{A.name}+{B.name}")


def change_basis(A: FiniteCommAlgebra, g) -> FiniteCommAlgebra:
    """Structure constants in the basis f_a = sum_i g[i, a] e_i.

    The matrix ``g`` is then an algebra isomorphism from the result to ``A``.
    """
    g = fraction_array(g, shape=(A.dim, A.dim), where="g")
    ginv = inverse(g)
    c = np.tensordot(np.tensordot(g.T, A.c, axes=([1], [0])), g, axes=([1], [0]))  # [a, k, b]
    c = np.tensordot(c, ginv.T, axes=([1], [0]))  # [a, b, c]
    return FiniteCommAlgebra(c, name=f"{A.name}'")


def inverse(m: np.ndarray) -> np.ndarray:
    import sympy

    mat = sympy.Matrix(m.tolist())
    if not mat.is_square or mat.det() == 0:
        raise ValueError("matrix is not invertible")
    inv = mat.inv()
    return fraction_array([[Fraction(int(v.p), int(v.q)) for v in row] for row in inv.tolist()])


# -- tensors and the functor ------------------------------------------------


@dataclass(frozen=True, eq=False)
class Tensor:
    algebra: FiniteCommAlgebra
    level: int
    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = fraction_array(self.coeffs, where="tensor").reshape(-1)
        if coeffs.shape != (self.algebra.dim**self.level,):
            raise ValueError(f"tensor at level {self.level} needs {self.algebra.dim ** self.level} coefficients")
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)

    def __eq__(self, other):
        return (
            isinstance(other, Tensor)
            and self.level == other.level
            and self.coeffs.shape == other.coeffs.shape
            and bool(np.all(self.coeffs == other.coeffs))
        )

    @classmethod
    def pure(cls, A: FiniteCommAlgebra, vectors) -> "Tensor":
        out = np.array([Fraction(1)], dtype=object)
        for v in vectors:
            out = np.kron(out, fraction_array(v))
        return cls(A, len(vectors), out)

    def to_json(self) -> dict:
        return {"level": self.level, "coeffs": [fraction_str(v) for v in self.coeffs]}


@dataclass(frozen=True)
class SigmaStar:
    """The linear map A^{(x)n} -> A^{(x)m} induced by a surjection."""

    algebra: FiniteCommAlgebra
    sigma: Surjection

    def __post_init__(self):
        if self.algebra.dim**self.sigma.n > MAX_TENSOR_SIZE:
            raise ValueError(f"d^n = {self.algebra.dim}^{self.sigma.n} exceeds {MAX_TENSOR_SIZE}")

    @property
    def shape(self) -> tuple[int, int]:
        d = self.algebra.dim
        return d**self.sigma.m, d**self.sigma.n

    def apply_array(self, coeffs: np.ndarray) -> np.ndarray:
        d = self.algebra.dim
        n = self.sigma.n
        t = np.asarray(coeffs, dtype=object).reshape((d,) * n)
        perm, merges = decompose(self.sigma)
        # slot i of the input becomes slot perm(i)
        axes = [0] * n
        for i in range(1, n + 1):
            axes[perm(i) - 1] = i - 1
        t = np.transpose(t, axes)
        for k in merges:
            t = np.tensordot(t, self.algebra.c, axes=([k - 1, k], [0, 1]))
            t = np.moveaxis(t, -1, k - 1)
        return np.asarray(t, dtype=object).reshape(-1)

    def __call__(self, tensor: Tensor) -> Tensor:
        if tensor.level != self.sigma.n:
            raise ValueError(f"expected a level-{self.sigma.n} tensor, got level {tensor.level}")
        return Tensor(self.algebra, self.sigma.m, self.apply_array(tensor.coeffs))

    def matrix(self) -> np.ndarray:
        rows, cols = self.shape
        out = _zeros((rows, cols))
        for col in range(cols):
            e = _zeros(cols)
            e[col] = Fraction(1)
            out[:, col] = self.apply_array(e)
        return out


def sigma_star(A: FiniteCommAlgebra, sigma: Surjection) -> SigmaStar:
    return SigmaStar(A, sigma)


@dataclass(frozen=True, eq=False)
class TransformationFamily:
    """Components ``levels[r]`` of shape d_B^r x d_A^r."""

    source_dim: int
    target_dim: int
    levels: dict = field(default_factory=dict)

    def __post_init__(self):
        levels = {}
        for r, mat in self.levels.items():
            r = int(r)
            shape = (self.target_dim**r, self.source_dim**r)
            levels[r] = fraction_array(mat, shape=shape, where=f"level {r}")
        object.__setattr__(self, "levels", levels)

    def __getitem__(self, r: int) -> np.ndarray:
        if r not in self.levels:
            raise KeyError(f"level {r} missing from transformation (have {sorted(self.levels)})")
        return self.levels[r]

    @classmethod
    def from_json(cls, data: dict, source_dim: int, target_dim: int, where: str = "eta"):
        if "induced" in data:
            phi = fraction_array(data["induced"], where=f"{where}.induced")
            return induced_transformation(phi, int(data.get("max_level", 3)))
        if "levels" not in data or not isinstance(data["levels"], dict):
            raise ValueError(f"{where}: expected 'levels' (object of level -> matrix) or 'induced'")
        levels = {}
        for key, mat in data["levels"].items():
            try:
                r = int(key)
            except ValueError:
                raise ValueError(f"{where}.levels: level key {key!r} is not an integer") from None
            levels[r] = fraction_array(mat, shape=(target_dim**r, source_dim**r), where=f"{where}.levels[{key}]")
        return cls(source_dim, target_dim, levels)


def induced_transformation(phi, max_level: int = 3) -> TransformationFamily:
    """Kronecker powers of an invertible linear map between algebras."""
    phi = fraction_array(phi, where="phi")
    if phi.ndim != 2 or phi.shape[0] != phi.shape[1]:
        raise ValueError(f"phi must be square, got shape {phi.shape}")
    inverse(phi)
    levels = {}
    power = np.array([[Fraction(1)]], dtype=object)
    for r in range(1, max_level + 1):
        power = np.kron(power, phi)
        levels[r] = power
    return TransformationFamily(phi.shape[1], phi.shape[0], levels)


@dataclass(frozen=True)
class NaturalityResult:
    passed: bool
    sigma: Surjection
    witness: tuple[int, ...] | None = None  # 1-based basis word of the source tensor
    lhs: list | None = None
    rhs: list | None = None

    def to_json(self) -> dict:
        out = {"status": "pass" if self.passed else "fail", "sigma": str(self.sigma)}
        if not self.passed:
            out["witness_basis_word"] = list(self.witness)
            out["eta_after_sigma"] = [fraction_str(v) for v in self.lhs]
            out["sigma_after_eta"] = [fraction_str(v) for v in self.rhs]
        return out


def check_naturality(
    eta: TransformationFamily, A: FiniteCommAlgebra, B: FiniteCommAlgebra, sigma: Surjection
) -> NaturalityResult:
    """Compare eta_m o sigma*_A with sigma*_B o eta_n exactly."""
    if eta.source_dim != A.dim or eta.target_dim != B.dim:
        raise ValueError("transformation dimensions do not match the algebras")
    eta_n, eta_m = eta[sigma.n], eta[sigma.m]
    lhs = eta_m.dot(sigma_star(A, sigma).matrix())
    rhs = sigma_star(B, sigma).matrix().dot(eta_n)
    for col in range(lhs.shape[1]):
        if np.any(lhs[:, col] != rhs[:, col]):
            word = np.unravel_index(col, (A.dim,) * sigma.n)
            return NaturalityResult(
                False, sigma, tuple(int(i) + 1 for i in word), list(lhs[:, col]), list(rhs[:, col])
            )
    return NaturalityResult(True, sigma)
