"""Real associative unital algebras given by dense structure constants.

An algebra of dimension N is the tensor c with

    basis_i * basis_j = sum_k c[i, j, k] * basis_k

plus a distinguished unit basis index.  Everything downstream (multiplication
operators, inverses, zerodivisor tests) is plain dense linear algebra over
this tensor.  Clifford algebras R_{p,q} are built from signed blade products
over subsets of generators, graded-lexicographically ordered so that the
unit is index 0 and the pseudoscalar is the last basis element.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .config import (
    MAX_CLIFFORD_GENERATORS,
    MAX_DIMENSION,
    ZERODIVISOR_RELTOL,
    resolve_tol,
)
from .errors import (
    BadUnitError,
    DimensionMismatchError,
    NonAssociativeError,
    TooLargeError,
    ZeroDivisorError,
)


@dataclass(eq=False)
class Algebra:
    """Immutable container for one structure-constant algebra."""

    structure_constants: np.ndarray
    unit_index: int
    labels: tuple[str, ...]
    signature: tuple[int, int] | None = None

    def __post_init__(self) -> None:
        c = np.asarray(self.structure_constants, dtype=float)
        if c.ndim != 3 or len(set(c.shape)) != 1:
            raise DimensionMismatchError(f"structure tensor must be cubic, got shape {c.shape}")
        c = np.ascontiguousarray(c)
        c.flags.writeable = False
        object.__setattr__(self, "structure_constants", c)
        object.__setattr__(self, "labels", tuple(self.labels))
        if len(self.labels) != c.shape[0]:
            raise DimensionMismatchError("label count must match dimension")

    @property
    def dimension(self) -> int:
        return self.structure_constants.shape[0]

    # -- element constructors ------------------------------------------------

    def element(self, coeffs: Iterable[float]) -> "Element":
        v = np.asarray(list(coeffs) if not isinstance(coeffs, np.ndarray) else coeffs,
                       dtype=float)
        if v.shape != (self.dimension,):
            raise DimensionMismatchError(
                f"expected {self.dimension} coefficients, got {v.shape}")
        return Element(self, v)

    def basis_element(self, i: int) -> "Element":
        v = np.zeros(self.dimension)
        v[i] = 1.0
        return Element(self, v)

    def unit(self) -> "Element":
        return self.basis_element(self.unit_index)

    def zero(self) -> "Element":
        return Element(self, np.zeros(self.dimension))

    def scalar(self, t: float) -> "Element":
        v = np.zeros(self.dimension)
        v[self.unit_index] = float(t)
        return Element(self, v)

    def random_element(self, rng: np.random.Generator, scale: float = 1.0) -> "Element":
        return Element(self, scale * rng.standard_normal(self.dimension))

    # -- raw vector kernels --------------------------------------------------

    def multiply_vec(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return np.einsum("i,j,ijk->k", x, y, self.structure_constants)

    def left_matrix_vec(self, a: np.ndarray) -> np.ndarray:
        """Matrix of x -> a*x; column j is a*basis_j."""
        return np.einsum("i,ijk->kj", a, self.structure_constants)

    def right_matrix_vec(self, a: np.ndarray) -> np.ndarray:
        """Matrix of x -> x*a; column i is basis_i*a."""
        return np.einsum("j,ijk->ki", a, self.structure_constants)

    def compatible(self, other: "Algebra") -> bool:
        if self is other:
            return True
        return (self.dimension == other.dimension
                and self.unit_index == other.unit_index
                and np.array_equal(self.structure_constants, other.structure_constants))

    def label_linear_combination(self, coeffs: np.ndarray, digits: int = 6) -> str:
        parts = []
        for x, lab in zip(coeffs, self.labels):
            if x == 0.0:
                continue
            parts.append(f"{round(float(x), digits):+g}*{lab}")
        return " ".join(parts) if parts else "0"

    def __repr__(self) -> str:
        sig = f", signature={self.signature}" if self.signature else ""
        return f"Algebra(dim={self.dimension}{sig})"


@dataclass(frozen=True, eq=False)
class Element:
    """One element of an Algebra, stored as its coefficient vector."""

    algebra: Algebra
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        v = np.asarray(self.coeffs, dtype=float)
        v.flags.writeable = False
        object.__setattr__(self, "coeffs", v)

    def _require_same(self, other: "Element") -> None:
        if not self.algebra.compatible(other.algebra):
            raise DimensionMismatchError("elements from incompatible algebras")

    def __add__(self, other: "Element") -> "Element":
        self._require_same(other)
        return Element(self.algebra, self.coeffs + other.coeffs)

    def __sub__(self, other: "Element") -> "Element":
        self._require_same(other)
        return Element(self.algebra, self.coeffs - other.coeffs)

    def __neg__(self) -> "Element":
        return Element(self.algebra, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, Element):
            self._require_same(other)
            return Element(self.algebra,
                           self.algebra.multiply_vec(self.coeffs, other.coeffs))
        return Element(self.algebra, self.coeffs * float(other))

    def __rmul__(self, other) -> "Element":
        return Element(self.algebra, float(other) * self.coeffs)

    def __truediv__(self, other) -> "Element":
        return Element(self.algebra, self.coeffs / float(other))

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def approx_eq(self, other: "Element", tol: float | None = None) -> bool:
        self._require_same(other)
        return float(np.linalg.norm(self.coeffs - other.coeffs)) <= resolve_tol(tol)

    def __repr__(self) -> str:
        return f"<{self.algebra.label_linear_combination(self.coeffs)}>"


@dataclass(frozen=True)
class OperatorMatrix:
    """An N x N multiplication operator attached to its defining element."""

    element: Element
    kind: str
    entries: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        m = np.asarray(self.entries, dtype=float)
        m.flags.writeable = False
        object.__setattr__(self, "entries", m)


def make_algebra(structure_constants,
                 unit_index: int = 0,
                 labels: Sequence[str] | None = None,
                 signature: tuple[int, int] | None = None,
                 tol: float | None = None) -> Algebra:
    """Validate structure constants and wrap them as an Algebra.

    Associativity is checked to tolerance on the full basis; the unit law is
    required to hold exactly on the tensor entries.
    """
    c = np.asarray(structure_constants, dtype=float)
    if c.ndim != 3 or len(set(c.shape)) != 1:
        raise DimensionMismatchError(f"structure tensor must be cubic, got shape {c.shape}")
    n = c.shape[0]
    if n < 1:
        raise DimensionMismatchError("dimension must be at least 1")
    if n > MAX_DIMENSION:
        raise TooLargeError(f"dimension {n} exceeds the limit of {MAX_DIMENSION}")
    if not 0 <= unit_index < n:
        raise BadUnitError(f"unit index {unit_index} out of range")

    eye = np.eye(n)
    if not (np.array_equal(c[unit_index], eye) and np.array_equal(c[:, unit_index], eye)):
        raise BadUnitError("designated unit fails the unit law")

    # (e_i e_j) e_k versus e_i (e_j e_k) over the whole basis.
    lhs = np.einsum("ijm,mkl->ijkl", c, c)
    rhs = np.einsum("jkm,iml->ijkl", c, c)
    violation = float(np.max(np.abs(lhs - rhs)))
    if violation > resolve_tol(tol):
        raise NonAssociativeError(f"max associativity violation {violation:.3e}")

    if labels is None:
        labels = ["1" if i == unit_index else f"b{i}" for i in range(n)]
    return Algebra(c, unit_index, tuple(labels), signature)


def associativity_residual(algebra: Algebra) -> float:
    c = algebra.structure_constants
    lhs = np.einsum("ijm,mkl->ijkl", c, c)
    rhs = np.einsum("jkm,iml->ijkl", c, c)
    return float(np.max(np.abs(lhs - rhs)))


# -- Clifford construction ---------------------------------------------------


def _blade_product(left: tuple[int, ...], right: tuple[int, ...], p: int):
    """Product of two basis blades; returns (sign, sorted generator tuple).

    Generators are numbered 1..n; the first p square to +1, the rest to -1.
    """
    gens = list(left) + list(right)
    sign = 1
    # Bubble sort counting transpositions of distinct generators.
    swapped = True
    while swapped:
        swapped = False
        for t in range(len(gens) - 1):
            if gens[t] > gens[t + 1]:
                gens[t], gens[t + 1] = gens[t + 1], gens[t]
                sign = -sign
                swapped = True
    # Cancel adjacent equal pairs against the generator squares.
    out: list[int] = []
    t = 0
    while t < len(gens):
        if t + 1 < len(gens) and gens[t] == gens[t + 1]:
            if gens[t] > p:
                sign = -sign
            t += 2
        else:
            out.append(gens[t])
            t += 1
    return sign, tuple(out)


def _blade_label(subset: tuple[int, ...]) -> str:
    if not subset:
        return "1"
    return "e" + "".join(str(g) for g in subset)


def clifford_algebra(p: int, q: int) -> Algebra:
    """The Clifford algebra R_{p,q} on n = p+q anticommuting generators.

    Basis blades e_I are indexed by subsets of {1..n}, ordered by cardinality
    and then lexicographically, so index 0 is the unit and the last index is
    the pseudoscalar e_1...e_n.
    """
    if p < 0 or q < 0:
        raise ValueError("signature parts must be nonnegative")
    n = p + q
    if n > MAX_CLIFFORD_GENERATORS:
        raise TooLargeError(f"{n} generators exceed the limit of {MAX_CLIFFORD_GENERATORS}")
    subsets: list[tuple[int, ...]] = []
    for size in range(n + 1):
        subsets.extend(combinations(range(1, n + 1), size))
    index = {s: i for i, s in enumerate(subsets)}
    dim = len(subsets)

    c = np.zeros((dim, dim, dim))
    for i, left in enumerate(subsets):
        for j, right in enumerate(subsets):
            sign, prod = _blade_product(left, right, p)
            c[i, j, index[prod]] = sign
    labels = tuple(_blade_label(s) for s in subsets)
    return make_algebra(c, unit_index=0, labels=labels, signature=(p, q))


# -- operations --------------------------------------------------------------


def multiply(a: Element, b: Element) -> Element:
    return a * b


def operator_matrix(a: Element, kind: str) -> OperatorMatrix:
    """Multiplication operator of the requested kind: L, R, F = L+R, T = L.R."""
    if kind not in ("L", "R", "F", "T"):
        raise ValueError(f"unknown operator kind {kind!r}")
    left = a.algebra.left_matrix_vec(a.coeffs)
    if kind == "L":
        m = left
    else:
        right = a.algebra.right_matrix_vec(a.coeffs)
        if kind == "R":
            m = right
        elif kind == "F":
            m = left + right
        else:
            m = left @ right
    return OperatorMatrix(a, kind, m)


def inverse(a: Element, tol_rel: float = ZERODIVISOR_RELTOL) -> Element:
    """Two-sided inverse, via the left multiplication operator."""
    left = a.algebra.left_matrix_vec(a.coeffs)
    u, sv, vt = np.linalg.svd(left)
    if sv[0] == 0.0 or sv[-1] < tol_rel * sv[0]:
        raise ZeroDivisorError(f"element {a!r} is numerically singular")
    unit = a.algebra.unit().coeffs
    x = vt.T @ ((u.T @ unit) / sv)
    return Element(a.algebra, x)


def is_zerodivisor(a: Element, tol_rel: float = ZERODIVISOR_RELTOL) -> bool:
    """True when the left or right multiplication operator is singular."""
    for m in (a.algebra.left_matrix_vec(a.coeffs), a.algebra.right_matrix_vec(a.coeffs)):
        sv = np.linalg.svd(m, compute_uv=False)
        if sv[0] == 0.0 or sv[-1] < tol_rel * sv[0]:
            return True
    return False


# -- JSON interchange --------------------------------------------------------


def _jsonable(x: float):
    xf = float(x)
    return int(xf) if xf.is_integer() else xf


def algebra_to_dict(algebra: Algebra) -> dict:
    c = algebra.structure_constants
    return {
        "dimension": algebra.dimension,
        "unit_index": algebra.unit_index,
        "labels": list(algebra.labels),
        "structure_constants": [[[_jsonable(v) for v in row] for row in plane]
                                for plane in c],
    }


def algebra_from_dict(data: dict, tol: float | None = None) -> Algebra:
    c = np.asarray(data["structure_constants"], dtype=float)
    n = int(data["dimension"])
    if c.shape != (n, n, n):
        raise DimensionMismatchError(
            f"declared dimension {n} does not match tensor shape {c.shape}")
    return make_algebra(c,
                        unit_index=int(data["unit_index"]),
                        labels=[str(s) for s in data["labels"]],
                        tol=tol)


def dump_algebra(algebra: Algebra, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(algebra_to_dict(algebra), fh, sort_keys=True)
        fh.write("\n")


def load_algebra(path: str, tol: float | None = None) -> Algebra:
    with open(path, "r", encoding="utf-8") as fh:
        return algebra_from_dict(json.load(fh), tol=tol)
