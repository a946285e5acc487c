"""Inner-product constructions: orthogonal roots, the quadratic cone, and
the quadratic equations cutting out the distinguished zero variety.

With an inner product G on the algebra, S0 collects the roots of -1 whose
left multiplication is an orthogonal complex structure.  Any two of
{s*s = -1, L_s orthogonal, L_s antisymmetric} force the third, so membership
is a two-of-three test.  Elements of the quadratic cone factor as
x = beta*1 + gamma*s with s in S0, and the variety of w = a + ib with
L_w^T L_w = 0 (bilinear, non-conjugating transpose) is probed by an explicit
residual.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import Algebra, Element, OperatorMatrix, inverse, is_zerodivisor
from .config import RANK_RELTOL, resolve_tol
from .errors import DimensionMismatchError, NotFoundError
from .roots import RootOfMinusOne, is_root, root_residual
from .zerovariety import ComplexElement, WitnessSearch, zero_variety_witness


@dataclass(frozen=True)
class InnerProduct:
    """<a, b> = a^T G b with G symmetric positive definite."""

    gram: np.ndarray

    def __post_init__(self) -> None:
        g = np.array(self.gram, dtype=float)
        if g.ndim != 2 or g.shape[0] != g.shape[1]:
            raise ValueError("gram matrix must be square")
        if not np.allclose(g, g.T, atol=1e-12 * (1.0 + np.abs(g).max())):
            raise ValueError("gram matrix must be symmetric")
        eigs = np.linalg.eigvalsh(g)
        if eigs[0] <= 0:
            raise ValueError("gram matrix must be positive definite")
        g.setflags(write=False)
        object.__setattr__(self, "gram", g)

    @classmethod
    def standard(cls, algebra: Algebra) -> "InnerProduct":
        """Identity Gram matrix: the chosen basis is declared orthonormal."""
        return cls(np.eye(algebra.dimension))

    @property
    def dimension(self) -> int:
        return self.gram.shape[0]

    def pairing(self, a: Element, b: Element) -> float:
        return float(a.coeffs @ self.gram @ b.coeffs)

    def norm(self, a: Element) -> float:
        return float(np.sqrt(max(self.pairing(a, a), 0.0)))


def _gram_for(G: InnerProduct, alg: Algebra) -> np.ndarray:
    if G.dimension != alg.dimension:
        raise DimensionMismatchError(
            f"inner product on dimension {G.dimension}, algebra {alg.dimension}")
    return G.gram


def adjoint(L: OperatorMatrix | np.ndarray, G: InnerProduct) -> np.ndarray:
    """G^{-1} L^T G, the adjoint of L for <a, b> = a^T G b."""
    mat = L.entries if isinstance(L, OperatorMatrix) else np.asarray(L)
    if mat.shape != G.gram.shape:
        raise DimensionMismatchError("operator and gram shapes differ")
    return np.linalg.solve(G.gram, mat.T @ G.gram)


def is_in_S0(s: Element, G: InnerProduct, tol: float | None = None) -> bool:
    """Two of {s*s = -1, L_s L_s^t = I, L_s + L_s^t = 0} hold (hence all)."""
    tol = resolve_tol(tol)
    alg = s.algebra
    _gram_for(G, alg)
    left = alg.left_matrix_vec(s.coeffs)
    adj = adjoint(left, G)
    eye = np.eye(alg.dimension)
    scale = 1.0 + s.norm()
    checks = (root_residual(s) <= tol * scale,
              np.linalg.norm(adj @ left - eye) <= tol * scale * scale,
              np.linalg.norm(left + adj) <= tol * scale)
    return sum(checks) >= 2


def antisymmetric_subspace(algebra: Algebra, G: InnerProduct,
                           tol: float | None = None) -> list[Element]:
    """Basis of A0 = {a : L_a + L_a^t = 0}, the ambient space of S0."""
    gram = _gram_for(G, algebra)
    n = algebra.dimension
    ginv = np.linalg.inv(gram)
    # column j = vec(L_{e_j} + L_{e_j}^t)
    cols = np.empty((n * n, n))
    for j in range(n):
        left = algebra.left_matrix_vec(np.eye(n)[j])
        cols[:, j] = (left + ginv @ left.T @ gram).ravel()
    _, sv, vt = np.linalg.svd(cols)
    cutoff = RANK_RELTOL * (sv[0] if sv.size and sv[0] > 0 else 1.0)
    rank = int(np.sum(sv > cutoff))
    return [algebra.element(row) for row in vt[rank:]]


def sample_S0(algebra: Algebra, G: InnerProduct,
              rng: np.random.Generator | None = None,
              tol: float | None = None, tries: int = 50) -> RootOfMinusOne:
    """Draw a root of -1 inside A0; antisymmetry plus s*s = -1 gives
    orthogonality for free."""
    if rng is None:
        rng = np.random.default_rng(0)
    basis = antisymmetric_subspace(algebra, G, tol)
    if not basis:
        raise NotFoundError("antisymmetric subspace is trivial")
    span = np.stack([b.coeffs for b in basis], axis=1)  # (N, m)
    unit = algebra.unit().coeffs
    for _ in range(tries):
        t = rng.standard_normal(span.shape[1])
        s_vec = span @ t
        nrm = np.linalg.norm(s_vec)
        if nrm < 1e-9:
            continue
        s_vec /= nrm
        g = algebra.multiply_vec(s_vec, s_vec) + unit
        gn = np.linalg.norm(g)
        for _ in range(60):
            if gn <= 1e-13:
                break
            jac = (algebra.left_matrix_vec(s_vec)
                   + algebra.right_matrix_vec(s_vec)) @ span
            step = np.linalg.lstsq(jac, -g, rcond=None)[0]
            damp = 1.0
            while True:
                t_new = t + damp * step
                s_new = span @ t_new
                g2 = algebra.multiply_vec(s_new, s_new) + unit
                gn2 = np.linalg.norm(g2)
                if gn2 < gn or damp <= 1.0 / 1024.0:
                    break
                damp *= 0.5
            t, s_vec, g, gn = t_new, s_new, g2, gn2
        cand = algebra.element(s_vec)
        if is_root(cand, tol) and is_in_S0(cand, G, tol):
            return RootOfMinusOne(cand, root_residual(cand))
    raise NotFoundError("no orthogonal root found in the antisymmetric subspace")


@dataclass(frozen=True)
class CharacterizationReport:
    rows: tuple[dict, ...]

    @property
    def passed(self) -> bool:
        return all(row["pass"] for row in self.rows)

    def to_json(self) -> list[dict]:
        return [dict(row) for row in self.rows]


def orthogonality_characterization(s: RootOfMinusOne, G: InnerProduct,
                                   rng: np.random.Generator | None = None,
                                   tol: float | None = None) -> CharacterizationReport:
    """<sa, sa> = <a, a> and <sa, a> = 0 on every basis vector and 32 random
    a; passes exactly when s is an orthogonal complex structure."""
    tol = resolve_tol(tol)
    alg = s.algebra
    _gram_for(G, alg)
    if rng is None:
        rng = np.random.default_rng(0)
    probes = [alg.basis_element(k) for k in range(alg.dimension)]
    probes += [alg.random_element(rng) for _ in range(32)]
    rows = []
    for idx, a in enumerate(probes):
        sa = s.element * a
        bound = tol * (1.0 + a.norm()) ** 2
        iso = abs(G.pairing(sa, sa) - G.pairing(a, a))
        perp = abs(G.pairing(sa, a))
        label = f"e_{idx}" if idx < alg.dimension else f"random_{idx - alg.dimension}"
        rows.append({"probe": label, "identity": "<sa,sa> = <a,a>",
                     "residual": float(iso), "pass": bool(iso <= bound)})
        rows.append({"probe": label, "identity": "<sa,a> = 0",
                     "residual": float(perp), "pass": bool(perp <= bound)})
    return CharacterizationReport(tuple(rows))


# -- quadratic cone ----------------------------------------------------------


@dataclass(frozen=True)
class ConeDecomposition:
    """x = beta*1 + gamma*s with gamma = sqrt(alpha^2 - beta^2); root is None
    for real x (gamma below tolerance)."""

    beta: float
    alpha: float
    root: RootOfMinusOne | None

    @property
    def gamma(self) -> float:
        return float(np.sqrt(max(self.alpha ** 2 - self.beta ** 2, 0.0)))


def cone_decompose(x: Element, G: InnerProduct,
                   tol: float = 1e-8) -> ConeDecomposition | None:
    """Split x = beta + gamma*s when L_x + L_x^t and L_x^t L_x are scalar.

    beta and alpha^2 come from traces; membership is the residual of the two
    scalar-matrix identities.  None signals x outside the cone.
    """
    alg = x.algebra
    _gram_for(G, alg)
    n = alg.dimension
    left = alg.left_matrix_vec(x.coeffs)
    adj = adjoint(left, G)
    eye = np.eye(n)
    scale = 1.0 + x.norm()

    beta = float(np.trace(left + adj)) / (2.0 * n)
    r_sym = np.linalg.norm(left + adj - 2.0 * beta * eye)
    if r_sym > tol * np.sqrt(n) * scale:
        return None
    alpha_sq = float(np.trace(adj @ left)) / n
    r_norm = np.linalg.norm(adj @ left - alpha_sq * eye)
    if r_norm > tol * np.sqrt(n) * scale * scale:
        return None
    if alpha_sq < beta ** 2 - tol * scale * scale:
        return None
    alpha = float(np.sqrt(max(alpha_sq, 0.0)))
    gamma_sq = max(alpha_sq - beta ** 2, 0.0)
    if gamma_sq <= (tol * scale) ** 2:
        return ConeDecomposition(beta, alpha, None)
    gamma = float(np.sqrt(gamma_sq))
    s = (x - beta * alg.unit()) / gamma
    return ConeDecomposition(beta, alpha, RootOfMinusOne(s, root_residual(s)))


# -- the quadratic equations for the distinguished variety -------------------


def z0_residual(w: ComplexElement, G: InnerProduct) -> float:
    """Frobenius norm of G^{-1} L_w^T G L_w for L_w = L_a + i L_b.

    The transpose is the plain one (bilinear extension of the inner product),
    so the real and imaginary parts encode the two quadratic systems
    L_a^t L_a = L_b^t L_b and L_a^t L_b + L_b^t L_a = 0.
    """
    alg = w.algebra
    gram = _gram_for(G, alg)
    lw = (alg.left_matrix_vec(w.re.coeffs)
          + 1j * alg.left_matrix_vec(w.im.coeffs))
    m = np.linalg.solve(gram, lw.T @ gram) @ lw
    return float(np.linalg.norm(m))


@dataclass(frozen=True)
class Z0Verdict:
    """Agreement record between the quadratic equations and witness search."""

    residual: float
    residual_member: bool
    witness_status: str  # found | absent | inconclusive
    replay: dict | None

    @property
    def witness_member(self) -> bool | None:
        if self.witness_status == "found":
            return True
        if self.witness_status == "absent":
            return False
        return None

    @property
    def agree(self) -> bool | None:
        wm = self.witness_member
        return None if wm is None else wm == self.residual_member

    def to_json(self) -> dict:
        return {"residual": self.residual,
                "residual_member": self.residual_member,
                "witness_status": self.witness_status,
                "agree": self.agree,
                "replay": self.replay}


def _s0_witness_status(w: ComplexElement, G: InnerProduct,
                       tol: float | None,
                       rng: np.random.Generator | None) -> str:
    search: WitnessSearch = zero_variety_witness(w, tol=tol, rng=rng)
    if search.status == "found":
        if is_in_S0(search.witness.root.element, G, tol):
            return "found"
        # unique witness (invertible im part) outside S0 settles restriction
        if w.im.norm() > 0 and not is_zerodivisor(w.im):
            return "absent"
        return "inconclusive"
    return search.status


def z0_equivalence_check(w: ComplexElement, G: InnerProduct,
                         tol: float = 1e-8,
                         rng: np.random.Generator | None = None) -> Z0Verdict:
    """Compare quadratic-equation membership against a root witness in S0.

    For w with invertible parts the containment proof is replayed through
    u = b a^{-1}: orthogonality and antisymmetry of L_u plus the factoring
    L_b = L_u L_a.  Disagreements are recorded, not resolved.
    """
    alg = w.algebra
    _gram_for(G, alg)
    scale = 1.0 + w.norm()
    residual = z0_residual(w, G)
    residual_member = residual <= tol * scale * scale
    status = _s0_witness_status(w, G, None, rng)

    replay = None
    a, b = w.re, w.im
    if a.norm() > 0 and b.norm() > 0 and \
            not is_zerodivisor(a) and not is_zerodivisor(b):
        u = b * inverse(a)
        lu = alg.left_matrix_vec(u.coeffs)
        adj = adjoint(lu, G)
        la = alg.left_matrix_vec(a.coeffs)
        lb = alg.left_matrix_vec(b.coeffs)
        replay = {"u_orthogonal": float(np.linalg.norm(adj @ lu - np.eye(alg.dimension))),
                  "u_antisymmetric": float(np.linalg.norm(lu + adj)),
                  "factor": float(np.linalg.norm(lb - lu @ la))}
    return Z0Verdict(residual, residual_member, status, replay)
