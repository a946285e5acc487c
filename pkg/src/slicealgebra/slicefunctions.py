"""Stem polynomials and the slice functions they induce.

A stem F(z) = sum z^k c_k with ComplexElement coefficients induces, when
intrinsic (F(conj z) = conj F(z)), a well-defined function on the algebra
through f(pi(z, s)) = pi(F(z), s).  Evaluation runs Horner on the complex
scalar first and applies the tensor structure once, so noncommutativity of
the algebra never enters the powers of z.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import Algebra, Element, inverse
from .config import resolve_tol
from .errors import InvalidTwistError, NotIntrinsicError
from .roots import RootOfMinusOne, is_root, root_residual
from .zerovariety import ComplexElement, pi_tensor_eval


@dataclass(frozen=True)
class StemPolynomial:
    """F(z) = sum_k z^k c_k, coefficients stored as a (d+1, N) complex array."""

    algebra: Algebra
    coeff_matrix: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        mat = np.array(self.coeff_matrix, dtype=complex)
        if mat.ndim != 2 or mat.shape[1] != self.algebra.dimension:
            raise ValueError("coefficient matrix must be (degree+1, N)")
        if mat.shape[0] == 0:
            mat = np.zeros((1, self.algebra.dimension), dtype=complex)
        mat.setflags(write=False)
        object.__setattr__(self, "coeff_matrix", mat)

    @classmethod
    def from_coefficients(cls, coefficients: list[ComplexElement]) -> "StemPolynomial":
        if not coefficients:
            raise ValueError("need at least one coefficient")
        alg = coefficients[0].algebra
        mat = np.stack([c.as_vector() for c in coefficients])
        return cls(alg, mat)

    @property
    def degree(self) -> int:
        return self.coeff_matrix.shape[0] - 1

    @property
    def coefficients(self) -> list[ComplexElement]:
        return [ComplexElement.from_vector(self.algebra, row)
                for row in self.coeff_matrix]

    def evaluate_vector(self, z: complex) -> np.ndarray:
        z = complex(z)
        acc = np.array(self.coeff_matrix[-1])
        for k in range(self.coeff_matrix.shape[0] - 2, -1, -1):
            acc = z * acc + self.coeff_matrix[k]
        return acc

    def evaluate(self, z: complex) -> ComplexElement:
        return ComplexElement.from_vector(self.algebra, self.evaluate_vector(z))

    def evaluate_many(self, zz: np.ndarray) -> np.ndarray:
        zz = np.asarray(zz, dtype=complex)
        acc = np.broadcast_to(self.coeff_matrix[-1], zz.shape + (self.algebra.dimension,)).copy()
        for k in range(self.coeff_matrix.shape[0] - 2, -1, -1):
            acc = zz[..., None] * acc + self.coeff_matrix[k]
        return acc

    def derivative(self) -> "StemPolynomial":
        if self.degree == 0:
            return StemPolynomial(self.algebra,
                                  np.zeros((1, self.algebra.dimension), complex))
        powers = np.arange(1, self.degree + 1, dtype=complex)
        return StemPolynomial(self.algebra,
                              self.coeff_matrix[1:] * powers[:, None])

    def __add__(self, other: "StemPolynomial") -> "StemPolynomial":
        if not self.algebra.compatible(other.algebra):
            raise ValueError("stems over incompatible algebras")
        rows = max(self.coeff_matrix.shape[0], other.coeff_matrix.shape[0])
        mat = np.zeros((rows, self.algebra.dimension), dtype=complex)
        mat[:self.coeff_matrix.shape[0]] += self.coeff_matrix
        mat[:other.coeff_matrix.shape[0]] += other.coeff_matrix
        return StemPolynomial(self.algebra, mat)

    def __repr__(self) -> str:
        return (f"StemPolynomial(degree={self.degree}, "
                f"algebra_dim={self.algebra.dimension})")


def stem_from_slice_poly(a_k: list[Element]) -> StemPolynomial:
    """Intrinsic stem of the one-sided polynomial sum x^k a_k."""
    if not a_k:
        raise ValueError("need at least one coefficient")
    mat = np.stack([a.coeffs.astype(complex) for a in a_k])
    return StemPolynomial(a_k[0].algebra, mat)


# 2 radii x 16 angles: enough samples to pin any stem of moderate degree.
_SAMPLE_RADII = (0.7, 1.3)
_SAMPLE_ANGLES = 16


def intrinsic_defect(F: StemPolynomial) -> float:
    """max ||F(conj z) - conj F(z)|| over the deterministic sample ring."""
    worst = 0.0
    for r in _SAMPLE_RADII:
        for k in range(_SAMPLE_ANGLES):
            z = r * np.exp(2j * np.pi * (k + 0.5) / _SAMPLE_ANGLES)
            gap = F.evaluate_vector(np.conj(z)) - np.conj(F.evaluate_vector(z))
            worst = max(worst, float(np.linalg.norm(gap)))
    return worst


def is_intrinsic(F: StemPolynomial, tol: float | None = None) -> bool:
    return intrinsic_defect(F) <= resolve_tol(tol) * (
        1.0 + float(np.linalg.norm(F.coeff_matrix)))


def require_intrinsic(F: StemPolynomial, tol: float | None = None) -> None:
    if not is_intrinsic(F, tol):
        raise NotIntrinsicError(
            f"stem is not intrinsic (defect {intrinsic_defect(F):.3e})")


def eval_slice(F: StemPolynomial, z: complex, s: RootOfMinusOne,
               tol: float | None = None) -> Element:
    """f(pi(z, s)) = pi(F(z), s) for the induced slice function."""
    require_intrinsic(F, tol)
    return pi_tensor_eval(F.evaluate(z), s)


def alpha_beta(F: StemPolynomial, z: complex,
               tol: float | None = None) -> tuple[Element, Element]:
    """The decomposition f(x + sy) = alpha(z) + s beta(z)."""
    require_intrinsic(F, tol)
    w = F.evaluate(z)
    return w.re, w.im


def _slice_value(F: StemPolynomial, z: complex, s: RootOfMinusOne) -> np.ndarray:
    # The induced function lives on the quotient by (z, s) ~ (conj z, -s);
    # canonicalize to Im z >= 0 so non-intrinsic stems show their seam.
    if z.imag < 0:
        z = np.conj(z)
        s_vec = -s.element.coeffs
    else:
        s_vec = s.element.coeffs
    fz = F.evaluate_vector(z)
    return fz.real + F.algebra.left_matrix_vec(s_vec) @ fz.imag


def cauchy_riemann_residual(F: StemPolynomial, z: complex, s: RootOfMinusOne,
                            h: float = 1e-5, *,
                            check_intrinsic: bool = True,
                            tol: float | None = None) -> float:
    """Central-difference norm of (d/dx + L_s d/dy) f(x + sy), O(h^2) when
    the stem is intrinsic."""
    if check_intrinsic:
        require_intrinsic(F, tol)
    if not h > 0:
        raise ValueError("step must be positive")
    z = complex(z)
    fx = (_slice_value(F, z + h, s) - _slice_value(F, z - h, s)) / (2.0 * h)
    fy = (_slice_value(F, z + 1j * h, s) - _slice_value(F, z - 1j * h, s)) / (2.0 * h)
    alg = F.algebra
    return float(np.linalg.norm(fx + alg.left_matrix_vec(s.element.coeffs) @ fy))


@dataclass(frozen=True)
class TwistMap:
    """Twist of the root argument: identity, a fixed inner automorphism
    s -> y^{-1} s y, or an arbitrary per-z callback."""

    kind: str
    y: Element | None = None
    callback: object = None

    @classmethod
    def identity(cls) -> "TwistMap":
        return cls("identity")

    @classmethod
    def conjugation(cls, y: Element) -> "TwistMap":
        return cls("fixed-automorphism", y=y)

    @classmethod
    def from_callable(cls, fn) -> "TwistMap":
        return cls("per-z-automorphism", callback=fn)

    def apply(self, z: complex, s: RootOfMinusOne,
              tol: float | None = None) -> RootOfMinusOne:
        if self.kind == "identity":
            return s
        if self.kind == "fixed-automorphism":
            out = inverse(self.y) * s.element * self.y
        elif self.kind == "per-z-automorphism":
            out = self.callback(z, s)
            if isinstance(out, RootOfMinusOne):
                out = out.element
        else:
            raise ValueError(f"unknown twist kind {self.kind!r}")
        if not is_root(out, tol):
            raise InvalidTwistError(
                f"twist output has residual {root_residual(out):.3e}")
        return RootOfMinusOne(out, root_residual(out))


def eval_generalized(F: StemPolynomial, twist: TwistMap, z: complex,
                     s: RootOfMinusOne, tol: float | None = None) -> Element:
    """f(pi(z, s)) = pi(F(z), twist(z, s)) for twisted slice functions."""
    require_intrinsic(F, tol)
    return pi_tensor_eval(F.evaluate(z), twist.apply(z, s, tol))
