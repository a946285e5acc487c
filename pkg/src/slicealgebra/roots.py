"""The locus S = {s : s*s = -1} inside a real associative algebra.

Membership, seed search, conjugation orbits, tangent spaces ker(F_s), the
integer component invariant tr(T_s), the complex structure h -> s*h on
tangent spaces, and the (-i)-eigenspace of L_s inside the complexification.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import Algebra, Element, inverse, is_zerodivisor
from .config import RANK_RELTOL, resolve_tol
from .errors import NonIntegerTraceError, NotFoundError, NotTangentError, ZeroDivisorError


@dataclass(frozen=True)
class RootOfMinusOne:
    """An element s with s*s = -1, together with its defect ||s*s + 1||."""

    element: Element
    residual: float

    @classmethod
    def from_element(cls, element: Element, tol: float | None = None) -> "RootOfMinusOne":
        r = root_residual(element)
        if r > resolve_tol(tol):
            raise ValueError(f"not a square root of -1, residual {r:.3e}")
        return cls(element, r)

    @property
    def algebra(self) -> Algebra:
        return self.element.algebra


def root_residual(a: Element) -> float:
    return (a * a + a.algebra.unit()).norm()


def is_root(a: Element, tol: float | None = None) -> bool:
    return root_residual(a) <= resolve_tol(tol)


def negate_root(s: RootOfMinusOne) -> RootOfMinusOne:
    return RootOfMinusOne(-s.element, s.residual)


def sigma_involution(z: complex, s: RootOfMinusOne) -> tuple[complex, RootOfMinusOne]:
    """The slice-domain involution (z, s) -> (conj z, -s)."""
    return complex(z).conjugate(), negate_root(s)


# -- seed search -------------------------------------------------------------


def _newton_square_root(algebra: Algebra, start: np.ndarray,
                        iterations: int = 100, target: float = 1e-12):
    """Damped Gauss-Newton on g(a) = a*a + 1 from one start vector."""
    unit = algebra.unit().coeffs
    x = np.array(start, dtype=float)
    g = algebra.multiply_vec(x, x) + unit
    gn = np.linalg.norm(g)
    for _ in range(iterations):
        if gn <= target:
            return x
        jac = algebra.left_matrix_vec(x) + algebra.right_matrix_vec(x)
        step = np.linalg.lstsq(jac, -g, rcond=None)[0]
        t = 1.0
        while True:
            xn = x + t * step
            g2 = algebra.multiply_vec(xn, xn) + unit
            gn2 = np.linalg.norm(g2)
            if gn2 < gn or t <= 1.0 / 1024.0:
                break
            t *= 0.5
        x, g, gn = xn, g2, gn2
    return x if gn <= target else None


def find_seed_root(algebra: Algebra,
                   rng: np.random.Generator | None = None,
                   tol: float | None = None,
                   starts: int = 50) -> RootOfMinusOne:
    """Find some s in S, or raise NotFoundError.

    Basis elements and products of two basis elements are tried first; for
    Clifford algebras this already covers every blade.  A bounded damped
    Newton search on a*a + 1 = 0 is the fallback for general algebras.
    """
    n = algebra.dimension
    for i in range(n):
        cand = algebra.basis_element(i)
        if is_root(cand, tol):
            return RootOfMinusOne(cand, root_residual(cand))
    for i in range(n):
        for j in range(n):
            cand = algebra.basis_element(i) * algebra.basis_element(j)
            if is_root(cand, tol):
                return RootOfMinusOne(cand, root_residual(cand))
    if rng is None:
        rng = np.random.default_rng(0)
    for _ in range(starts):
        x = _newton_square_root(algebra, rng.standard_normal(n))
        if x is not None:
            cand = Element(algebra, x)
            if is_root(cand, tol):
                return RootOfMinusOne(cand, root_residual(cand))
    raise NotFoundError("no square root of -1 found; the locus may be empty")


def conjugate_root(y: Element, s: RootOfMinusOne) -> RootOfMinusOne:
    """Move s along its connected component: y*s*y^{-1}."""
    out = y * s.element * inverse(y)
    return RootOfMinusOne(out, root_residual(out))


def sample_root(seed: RootOfMinusOne, rng: np.random.Generator,
                tol: float | None = None,
                max_norm: float = 32.0) -> RootOfMinusOne:
    """Conjugate the seed by a random invertible element.

    Rejection-samples standard normal vectors until invertible and until the
    conjugate passes the membership test.  Conjugates with norm above
    max_norm are rejected outright: on noncompact components the orbit is
    unbounded and ill-conditioned y would otherwise dominate the draw.  The
    survivor is polished with two Newton steps so the residual sits at the
    rounding floor rather than just under the membership tolerance.
    """
    algebra = seed.algebra
    for _ in range(200):
        y = algebra.random_element(rng)
        if is_zerodivisor(y):
            continue
        try:
            out = y * seed.element * inverse(y)
            if out.norm() > max_norm:
                continue
            for _ in range(2):
                # the defect s^2 + 1 commutes with s, so the correction
                # -(s^2 + 1)(2s)^-1 is the exact Newton step
                defect = out * out + algebra.unit()
                out = out - defect * inverse(2.0 * out)
        except ZeroDivisorError:
            continue
        cand = RootOfMinusOne(out, root_residual(out))
        if cand.residual <= resolve_tol(tol):
            return cand
    raise NotFoundError("conjugation sampling failed repeatedly")


# -- tangent structure -------------------------------------------------------


@dataclass(frozen=True)
class TangentFrame:
    """Basis of the tangent space {h : s*h + h*s = 0} at a root s."""

    base: RootOfMinusOne
    basis: np.ndarray  # (N, k), orthonormal columns

    @property
    def dimension(self) -> int:
        return self.basis.shape[1]

    @property
    def elements(self) -> list[Element]:
        alg = self.base.algebra
        return [Element(alg, self.basis[:, j].copy()) for j in range(self.dimension)]

    def random_tangent(self, rng: np.random.Generator) -> Element:
        if self.dimension == 0:
            return self.base.algebra.zero()
        return Element(self.base.algebra,
                       self.basis @ rng.standard_normal(self.dimension))


def tangent_frame(s: RootOfMinusOne) -> TangentFrame:
    """Kernel of F_s = L_s + R_s by singular value decomposition."""
    alg = s.algebra
    f = alg.left_matrix_vec(s.element.coeffs) + alg.right_matrix_vec(s.element.coeffs)
    _, sv, vt = np.linalg.svd(f)
    cutoff = RANK_RELTOL * (sv[0] if sv.size and sv[0] > 0 else 1.0)
    rank = int(np.sum(sv > cutoff))
    return TangentFrame(s, np.ascontiguousarray(vt[rank:].T))


def component_invariant(s: RootOfMinusOne) -> int:
    """tr(T_s), an integer constant on connected components of S."""
    alg = s.algebra
    t = alg.left_matrix_vec(s.element.coeffs) @ alg.right_matrix_vec(s.element.coeffs)
    tr = float(np.trace(t))
    snapped = round(tr)
    if abs(tr - snapped) > 0.01:
        raise NonIntegerTraceError(f"trace {tr} is not close to an integer")
    return int(snapped)


def _require_tangent(s: RootOfMinusOne, h: Element, tol: float | None) -> None:
    defect = (s.element * h + h * s.element).norm()
    if defect > resolve_tol(tol) * (1.0 + h.norm()):
        raise NotTangentError(f"anticommutator defect {defect:.3e}")


def j_structure(s: RootOfMinusOne, h: Element, tol: float | None = None) -> Element:
    """The complex structure h -> s*h on the tangent space at s."""
    _require_tangent(s, h, tol)
    return s.element * h


def nijenhuis(s: RootOfMinusOne, x: Element, y: Element,
              tol: float | None = None) -> Element:
    """Integrability tensor s(yx) - s(xy) + (sx)y - (sy)x at tangent x, y.

    Bracket expansion of N(X, Y) = [JX, JY] - J[JX, Y] - J[X, JY] for
    constant fields; associativity of the algebra forces it to vanish.
    """
    _require_tangent(s, x, tol)
    _require_tangent(s, y, tol)
    se = s.element
    return se * (y * x) - se * (x * y) + (se * x) * y - (se * y) * x


# -- complexified eigenspace -------------------------------------------------


@dataclass(frozen=True)
class ComplexSubspace:
    """A complex subspace of the complexification, as a column basis."""

    algebra: Algebra
    matrix: np.ndarray  # complex (N, k), full column rank

    @property
    def rank(self) -> int:
        return self.matrix.shape[1]

    def contains(self, vector: np.ndarray, tol: float | None = None) -> bool:
        if self.rank == 0:
            return bool(np.linalg.norm(vector) <= resolve_tol(tol))
        coeffs = np.linalg.lstsq(self.matrix, vector, rcond=None)[0]
        defect = np.linalg.norm(self.matrix @ coeffs - vector)
        return bool(defect <= resolve_tol(tol) * (1.0 + np.linalg.norm(vector)))


def minus_i_eigenspace(s: RootOfMinusOne) -> ComplexSubspace:
    """The (-i)-eigenspace of L_s on the complexification.

    Spanned by the vectors v + i(s*v); each basis column w returned satisfies
    L_s w = -i w, so its imaginary part is s times its real part.
    """
    alg = s.algebra
    left = alg.left_matrix_vec(s.element.coeffs)
    cols = np.eye(alg.dimension) + 1j * left
    u, sv, _ = np.linalg.svd(cols)
    cutoff = RANK_RELTOL * (sv[0] if sv.size and sv[0] > 0 else 1.0)
    rank = int(np.sum(sv > cutoff))
    return ComplexSubspace(alg, np.ascontiguousarray(u[:, :rank]))


# -- trace report ------------------------------------------------------------


@dataclass(frozen=True)
class TraceReport:
    rows: tuple[dict, ...]

    @property
    def passed(self) -> bool:
        return all(row["pass"] for row in self.rows)

    def to_json(self) -> list[dict]:
        return [dict(row) for row in self.rows]


def _signature_trace_formula(signature: tuple[int, int], s0: float, s_top: float) -> float:
    """Expected tr(T_s) from the metric signature and the coefficients of s
    on the unit and on the pseudoscalar."""
    p, q = signature
    n = p + q
    scale = float(2 ** n)
    d = (p - q) % 4
    if d in (0, 2):
        return scale * s0 * s0
    if d == 1:
        return scale * (s0 * s0 + s_top * s_top)
    return scale * (s0 * s0 - s_top * s_top)


def verify_trace_identities(s: RootOfMinusOne, tol: float | None = None) -> TraceReport:
    """Check the vanishing traces of L_s, R_s, F_s and, for Clifford
    algebras, the unit-coefficient constraint and the signature formula
    for tr(T_s)."""
    alg = s.algebra
    tol = resolve_tol(tol)
    left = alg.left_matrix_vec(s.element.coeffs)
    right = alg.right_matrix_vec(s.element.coeffs)
    rows = []

    def add(name: str, residual: float, bound: float) -> None:
        rows.append({"identity": name, "residual": float(residual),
                     "pass": bool(residual <= bound)})

    add("trace L_s = 0", abs(np.trace(left)), tol)
    add("trace R_s = 0", abs(np.trace(right)), tol)
    add("trace F_s = 0", abs(np.trace(left + right)), tol)
    if alg.signature is not None:
        s0 = float(s.element.coeffs[0])
        s_top = float(s.element.coeffs[-1])
        add("unit coefficient s_0 = 0", abs(s0), 1e-7)
        expected = _signature_trace_formula(alg.signature, s0, s_top)
        add("trace T_s signature formula",
            abs(float(np.trace(left @ right)) - expected), 1e-6)
    return TraceReport(tuple(rows))
