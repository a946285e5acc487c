"""Twistor maps: the quaternionic projective pipeline and the generalized
stereographic bundle.

The CP^1 x CP^1 -> CP^3 model identifies the quaternions with gamma(z, w) =
z_I + w_I J; point evaluation of a slice function factors through Segre
embeddings and a linear projection delta1, sending complex spheres to
projective lines.  For a general algebra with a fixed root u, the fiber over
s collects the c with u*c = c*s; a section of that bundle turns a stem into
a map to P(E + E) whose chart quotient recovers the slice function.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .algebra import Algebra, Element, inverse, is_zerodivisor
from .config import RANK_RELTOL, resolve_tol
from .errors import (
    BadSectionError,
    BasePointAtInfinityError,
    DegenerateImageError,
    FrameNotFoundError,
)
from .roots import ComplexSubspace, RootOfMinusOne, is_root, root_residual
from .slicefunctions import StemPolynomial, require_intrinsic
from .zerovariety import ComplexElement


@dataclass(frozen=True)
class ProjectivePoint:
    """Homogeneous coordinates, scaled so the first nonzero entry is 1."""

    coords: np.ndarray

    def __post_init__(self) -> None:
        vec = np.array(self.coords, dtype=complex).ravel()
        peak = np.abs(vec).max() if vec.size else 0.0
        if peak == 0.0:
            raise ValueError("projective point needs a nonzero coordinate")
        lead = np.flatnonzero(np.abs(vec) > 1e-12 * peak)[0]
        vec = vec / vec[lead]
        vec.setflags(write=False)
        object.__setattr__(self, "coords", vec)

    @classmethod
    def from_affine(cls, z: complex) -> "ProjectivePoint":
        return cls(np.array([1.0, z], dtype=complex))

    def chordal_distance(self, other: "ProjectivePoint") -> float:
        a = self.coords / np.linalg.norm(self.coords)
        b = other.coords / np.linalg.norm(other.coords)
        # align the global phase first: sqrt(2 - 2|<a,b>|) computed as a
        # difference norm stays exact near zero
        overlap = np.vdot(a, b)
        if abs(overlap) > 0:
            b = b * (np.conj(overlap) / abs(overlap))
        return float(np.linalg.norm(a - b))

    def approx_eq(self, other: "ProjectivePoint", tol: float = 1e-9) -> bool:
        return self.coords.shape == other.coords.shape and \
            self.chordal_distance(other) <= tol

    def to_json(self) -> list[list[float]]:
        return [[float(c.real), float(c.imag)] for c in self.coords]

    def __repr__(self) -> str:
        inside = ":".join(f"{c:.4g}" for c in self.coords)
        return f"[{inside}]"


@dataclass(frozen=True)
class QuaternionFrame:
    """A basis {1, I, J, K} with I^2 = J^2 = -1, IJ = K = -JI."""

    algebra: Algebra
    i: Element
    j: Element

    def __post_init__(self) -> None:
        if self.algebra.dimension != 4:
            raise FrameNotFoundError("frame requires a 4-dimensional algebra")
        tol = 1e-9
        anti = self.i * self.j + self.j * self.i
        if root_residual(self.i) > tol or root_residual(self.j) > tol \
                or anti.norm() > tol:
            raise FrameNotFoundError("candidate pair is not a quaternion frame")
        k = self.i * self.j
        mat = np.stack([self.algebra.unit().coeffs, self.i.coeffs,
                        self.j.coeffs, k.coeffs], axis=1)
        if abs(np.linalg.det(mat)) < 1e-9:
            raise FrameNotFoundError("frame vectors are linearly dependent")
        object.__setattr__(self, "_matrix", mat)

    @classmethod
    def detect(cls, algebra: Algebra) -> "QuaternionFrame":
        """Search basis elements for an anticommuting pair of roots."""
        if algebra.dimension != 4:
            raise FrameNotFoundError(
                f"dimension {algebra.dimension} algebra has no quaternion frame")
        candidates = [algebra.basis_element(k) for k in range(4)]
        candidates += [a * b for a, b in combinations(candidates, 2)]
        roots = [c for c in candidates if root_residual(c) <= 1e-9]
        for a, b in combinations(roots, 2):
            if (a * b + b * a).norm() <= 1e-9:
                try:
                    return cls(algebra, a, b)
                except FrameNotFoundError:
                    continue
        raise FrameNotFoundError("no quaternion frame in this basis")

    @property
    def k(self) -> Element:
        return self.i * self.j

    @property
    def i_root(self) -> RootOfMinusOne:
        return RootOfMinusOne(self.i, root_residual(self.i))

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    def decompose(self, w: ComplexElement) -> np.ndarray:
        """Complex coordinates of w in the {1, I, J, K} basis."""
        return np.linalg.solve(self.matrix, w.as_vector())


def gamma(z: complex, w: complex, frame: QuaternionFrame) -> Element:
    """gamma(z, w) = (Re z) 1 + (Im z) I + (Re w) J + (Im w) K."""
    z, w = complex(z), complex(w)
    vec = frame.matrix @ np.array([z.real, z.imag, w.real, w.imag])
    return frame.algebra.element(vec)


def segre1(p: ProjectivePoint, q: ProjectivePoint) -> ProjectivePoint:
    """([x:y], [a:b]) -> [xa:xb:ya:yb], the Klein-quadric embedding."""
    if p.coords.shape != (2,) or q.coords.shape != (2,):
        raise ValueError("segre1 expects two CP^1 points")
    return ProjectivePoint(np.outer(p.coords, q.coords).ravel())


def segre2(p: ProjectivePoint, q: ProjectivePoint) -> ProjectivePoint:
    """CP^4 x CP^1 -> CP^9 in lexicographic coordinate order."""
    if p.coords.shape != (5,) or q.coords.shape != (2,):
        raise ValueError("segre2 expects a CP^4 and a CP^1 point")
    return ProjectivePoint(np.outer(p.coords, q.coords).ravel())


def delta1(p: ProjectivePoint) -> ProjectivePoint:
    """Linear projection CP^9 -> CP^3 factoring quaternionic evaluation.

    Pairing the Segre coordinates w_{2m+n} = v_m u_n with the right actions
    of 1, I, J, K puts the J and K contributions of v in the opposite CP^1
    slot: the third output takes -w_7 + i w_9 and the fourth +w_6 + i w_8.
    """
    if p.coords.shape != (10,):
        raise ValueError("delta1 expects a CP^9 point")
    w = p.coords
    out = np.array([w[0],
                    w[1],
                    w[2] + 1j * w[4] - w[7] + 1j * w[9],
                    w[3] - 1j * w[5] + w[6] + 1j * w[8]])
    peak = np.abs(w).max()
    if np.abs(out).max() <= 1e-12 * peak:
        raise DegenerateImageError("delta1 image is the zero vector")
    return ProjectivePoint(out)


def rho1(p: ProjectivePoint, frame: QuaternionFrame) -> Element:
    """gamma(w0, w1)^{-1} gamma(w2, w3) on the affine chart of CP^3."""
    if p.coords.shape != (4,):
        raise ValueError("rho1 expects a CP^3 point")
    w = p.coords
    base_scale = np.abs(w[:2]).max()
    if base_scale <= 1e-12 * np.abs(w).max():
        raise BasePointAtInfinityError("base point (w0, w1) = (0, 0)")
    return inverse(gamma(w[0], w[1], frame)) * gamma(w[2], w[3], frame)


def rho(z: complex, u: ProjectivePoint, frame: QuaternionFrame) -> Element:
    """rho(z, [u0:u1]) = rho1(segre1([1:z], u)), a point of the slice C_s."""
    return rho1(segre1(ProjectivePoint.from_affine(z), u), frame)


def twistor_lift(F: StemPolynomial, z: complex, u: ProjectivePoint,
                 frame: QuaternionFrame,
                 tol: float | None = None) -> ProjectivePoint:
    """Lift of the induced slice function to CP^3: delta1 of the Segre image
    of [1 : F_0(z) : F_1(z) : F_2(z) : F_3(z)] with u."""
    require_intrinsic(F, tol)
    comps = frame.decompose(F.evaluate(z))
    cp4 = ProjectivePoint(np.concatenate([[1.0 + 0j], comps]))
    return delta1(segre2(cp4, u))


# -- stereographic bundle ----------------------------------------------------


def fiber_embed(u: RootOfMinusOne, a: Element) -> np.ndarray:
    """C-linear chart of E = (A, L_u) into C^N: a -> a - i(u a)."""
    return a.coeffs - 1j * (u.element * a).coeffs


def fiber_real_basis(u: RootOfMinusOne, s: RootOfMinusOne) -> np.ndarray:
    """Columns spanning {c : u c = c s}, the (-1)-eigenspace of R_s L_u."""
    alg = u.algebra
    op = alg.right_matrix_vec(s.element.coeffs) @ alg.left_matrix_vec(u.element.coeffs)
    _, sv, vt = np.linalg.svd(op + np.eye(alg.dimension))
    cutoff = RANK_RELTOL * (sv[0] if sv.size and sv[0] > 0 else 1.0)
    rank = int(np.sum(sv > cutoff))
    return np.ascontiguousarray(vt[rank:].T)


def stereographic_fiber(u: RootOfMinusOne, s: RootOfMinusOne) -> ComplexSubspace:
    """The fiber over s of the bundle carried by (A, L_u), embedded C-linearly.

    The real solution space of u c = c s is L_u-closed, so its chart image
    is a complex subspace of half the real dimension.
    """
    alg = u.algebra
    basis = fiber_real_basis(u, s)
    if basis.shape[1] == 0:
        return ComplexSubspace(alg, np.zeros((alg.dimension, 0), dtype=complex))
    cols = np.stack([fiber_embed(u, alg.element(col)) for col in basis.T], axis=1)
    q, sv, _ = np.linalg.svd(cols)
    cutoff = RANK_RELTOL * (sv[0] if sv.size and sv[0] > 0 else 1.0)
    rank = int(np.sum(sv > cutoff))
    return ComplexSubspace(alg, np.ascontiguousarray(q[:, :rank]))


def standard_section(u: RootOfMinusOne):
    """Section s -> 1 - u s of the stereographic bundle, valid away from -u."""
    unit = u.algebra.unit()

    def section(s: RootOfMinusOne) -> Element:
        return unit - u.element * s.element

    return section


def _check_section_value(u: RootOfMinusOne, s: RootOfMinusOne,
                         c: Element, tol: float) -> None:
    defect = (u.element * c - c * s.element).norm()
    if defect > tol * (1.0 + c.norm()):
        raise BadSectionError(
            f"section value misses the fiber (defect {defect:.3e})")
    if c.norm() == 0.0 or is_zerodivisor(c):
        raise BadSectionError("section value is a zerodivisor")


def generalized_twistor(F: StemPolynomial, sigma, z: complex,
                        s: RootOfMinusOne, frame,
                        tol: float | None = None) -> ProjectivePoint:
    """Point of P(E + E) inducing the slice function at (z, s).

    The first block is the chart image of c = sigma(s); the second is the
    image of T_{F(z)}(c) = c a + u (c b) for F(z) = a + i b.  Taking the
    ratio gamma(c)^{-1} gamma(T c) in the algebra recovers eval_slice.
    """
    require_intrinsic(F, tol)
    u = frame.i_root if isinstance(frame, QuaternionFrame) else frame
    if not isinstance(u, RootOfMinusOne):
        raise TypeError("frame must be a QuaternionFrame or a RootOfMinusOne")
    tol_v = resolve_tol(tol)
    if not is_root(u.element, tol):
        raise BadSectionError("bundle base point u is not a root of -1")
    c = sigma(s)
    _check_section_value(u, s, c, max(tol_v, 1e-8))
    w = F.evaluate(z)
    image = c * w.re + u.element * (c * w.im)
    return ProjectivePoint(np.concatenate([fiber_embed(u, c),
                                           fiber_embed(u, image)]))


def rho1_general(p: ProjectivePoint, u: RootOfMinusOne) -> Element:
    """Chart quotient of a P(E + E) point: gamma(c)^{-1} gamma(d).

    Both blocks sit in the chart image of E, so their E-representatives are
    the real parts; the ratio is scale-invariant.
    """
    n = u.algebra.dimension
    if p.coords.shape != (2 * n,):
        raise ValueError("point does not match the algebra dimension")
    c = u.algebra.element(p.coords[:n].real)
    d = u.algebra.element(p.coords[n:].real)
    return inverse(c) * d
