"""Projective pipeline over the quaternions and the generalized
stereographic bundle."""

import numpy as np
import pytest

import oracle_quaternion as oq
from slicealgebra import (
    BadSectionError,
    BasePointAtInfinityError,
    DegenerateImageError,
    FrameNotFoundError,
    ProjectivePoint,
    QuaternionFrame,
    RootOfMinusOne,
    delta1,
    eval_slice,
    fiber_embed,
    find_seed_root,
    gamma,
    generalized_twistor,
    inverse,
    pi_eval,
    conjugate_root,
    rho,
    rho1,
    rho1_general,
    sample_root,
    segre1,
    segre2,
    standard_section,
    stem_from_slice_poly,
    stereographic_fiber,
    twistor_lift,
)


@pytest.fixture(scope="module")
def frame(quaternions):
    return QuaternionFrame.detect(quaternions)


def _cp(vals):
    return ProjectivePoint(np.asarray(vals, dtype=complex))


def test_projective_point_normalization():
    p = ProjectivePoint(np.array([2.0, 4.0, 6.0]))
    assert np.allclose(p.coords, [1.0, 2.0, 3.0])
    q = ProjectivePoint(np.array([0.0, 3j, 6.0]))
    assert np.allclose(q.coords, [0.0, 1.0, -2j])
    with pytest.raises(ValueError):
        ProjectivePoint(np.zeros(3))

    a = _cp([1 + 2j, 3.0, -1j])
    scaled = ProjectivePoint((0.3 - 1.7j) * np.asarray([1 + 2j, 3.0, -1j]))
    assert a.approx_eq(scaled)
    assert a.chordal_distance(scaled) <= 1e-12
    assert a.chordal_distance(_cp([1.0, 0.0, 0.0])) > 0.5
    assert ProjectivePoint.from_affine(2j).approx_eq(_cp([1.0, 2j]))
    assert _cp([1.0, 2j]).to_json() == [[1.0, 0.0], [0.0, 2.0]]


def test_frame_detection(quaternions, cl11, cl03):
    f = QuaternionFrame.detect(quaternions)
    assert np.allclose(f.matrix, np.eye(4))
    assert np.allclose(f.k.coeffs, oq.qmul(f.i.coeffs, f.j.coeffs))
    assert (f.i * f.j + f.j * f.i).norm() <= 1e-12
    with pytest.raises(FrameNotFoundError):
        QuaternionFrame.detect(cl11)
    with pytest.raises(FrameNotFoundError):
        QuaternionFrame.detect(cl03)
    with pytest.raises(FrameNotFoundError):
        QuaternionFrame(quaternions, quaternions.basis_element(1),
                        quaternions.basis_element(1))


def test_gamma_basis_values(quaternions, frame):
    assert gamma(1.0, 0.0, frame).approx_eq(quaternions.unit())
    assert np.allclose(gamma(1j, 0.0, frame).coeffs, oq.I)
    assert np.allclose(gamma(0.0, 1.0, frame).coeffs, oq.J)
    assert np.allclose(gamma(0.0, 1j, frame).coeffs, oq.K)
    rng = np.random.default_rng(5)
    for _ in range(25):
        z, w = (complex(*rng.standard_normal(2)) for _ in range(2))
        assert np.allclose(gamma(z, w, frame).coeffs, oq.gamma_pair(z, w),
                           atol=1e-13)


def test_gamma_right_action_identities(quaternions, frame):
    rng = np.random.default_rng(6)
    I, J, K = frame.i, frame.j, frame.k
    for _ in range(50):
        z, w = (complex(*rng.standard_normal(2)) for _ in range(2))
        g = gamma(z, w, frame)
        assert (g * I - gamma(1j * z, -1j * w, frame)).norm() <= 1e-12
        assert (g * J - gamma(-w, z, frame)).norm() <= 1e-12
        assert (g * K - gamma(1j * w, 1j * z, frame)).norm() <= 1e-12


def test_segre1_klein_quadric():
    p = segre1(_cp([1.0, 2.0]), _cp([3.0, 4.0]))
    assert p.approx_eq(_cp([3.0, 4.0, 6.0, 8.0]))
    rng = np.random.default_rng(7)
    for _ in range(25):
        a = _cp(rng.standard_normal(2) + 1j * rng.standard_normal(2))
        b = _cp(rng.standard_normal(2) + 1j * rng.standard_normal(2))
        x = segre1(a, b).coords
        assert abs(x[0] * x[3] - x[1] * x[2]) <= 1e-12
    with pytest.raises(ValueError):
        segre1(_cp([1.0, 0.0, 0.0]), _cp([1.0, 0.0]))


def test_rho1_values(quaternions, frame):
    z0, z1 = 0.4 - 0.3j, 1.1 + 0.2j
    p = _cp([1.0, 0.0, z0, z1])
    assert rho1(p, frame).approx_eq(gamma(z0, z1, frame))
    with pytest.raises(BasePointAtInfinityError):
        rho1(_cp([0.0, 0.0, 1.0, 0.0]), frame)
    with pytest.raises(ValueError):
        rho1(_cp([1.0, 0.0]), frame)


def test_rho_lands_on_conjugated_slice(quaternions, frame):
    """rho(z, u) = x + y * (gamma(u)^{-1} I gamma(u)): the slice through the
    rotated root."""
    rng = np.random.default_rng(8)
    for _ in range(25):
        z = complex(*rng.standard_normal(2))
        uvec = rng.standard_normal(4).reshape(2, 2)
        u = _cp(uvec[0] + 1j * uvec[1])
        got = rho(z, u, frame)
        # oracle for the same chart
        wantv = oq.rho_point(z, u.coords[0], u.coords[1])
        assert np.allclose(got.coeffs, wantv, atol=1e-10)
        gu = gamma(u.coords[0], u.coords[1], frame)
        s_u = conjugate_root(inverse(gu), frame.i_root)
        assert (got - pi_eval(z, s_u)).norm() <= 1e-10


def test_delta1_pinned_slots():
    p = np.array([0.7, 1.0 - 2j, 0.5j, -1.2, 0.25 + 0.25j])
    left = delta1(segre2(_cp(p), _cp([1.0, 0.0])))
    assert left.approx_eq(_cp([p[0], 0.0, p[1] + 1j * p[2], p[3] + 1j * p[4]]))
    right = delta1(segre2(_cp(p), _cp([0.0, 1.0])))
    assert right.approx_eq(_cp([0.0, p[0], -p[3] + 1j * p[4], p[1] - 1j * p[2]]))
    with pytest.raises(ValueError):
        delta1(_cp(np.ones(9)))
    with pytest.raises(DegenerateImageError):
        delta1(segre2(_cp([0.0, 1.0, 1j, 1.0, 1j]), _cp([1.0, 0.0])))


def test_twistor_lift_constant_stem(quaternions, frame):
    one = stem_from_slice_poly([quaternions.unit()])
    u = _cp([0.3 + 0.4j, 1.0])
    lift = twistor_lift(one, 0.7 + 0.2j, u, frame)
    expect = _cp([u.coords[0], u.coords[1], u.coords[0], u.coords[1]])
    assert lift.approx_eq(expect)


def test_twistor_diagram_against_oracle(quaternions, frame):
    """rho1 after the lift equals the slice polynomial evaluated at
    rho(z, u), checked with plain Hamilton arithmetic."""
    rng = np.random.default_rng(9)
    for _ in range(200):
        degree = int(rng.integers(1, 6))
        coeffs = [quaternions.random_element(rng) for _ in range(degree + 1)]
        stem = stem_from_slice_poly(coeffs)
        z = complex(*(0.8 * rng.standard_normal(2)))
        u = _cp(rng.standard_normal(2) + 1j * rng.standard_normal(2))
        lift = twistor_lift(stem, z, u, frame)
        got = rho1(lift, frame)
        q = oq.rho_point(z, u.coords[0], u.coords[1])
        want = oq.slice_poly_eval([c.coeffs for c in coeffs], q)
        assert np.allclose(got.coeffs, want, atol=1e-8 * (1 + np.linalg.norm(want)))


def test_twistor_image_of_sphere_is_line(quaternions, frame):
    stem = stem_from_slice_poly([quaternions.unit(), quaternions.zero(),
                                 quaternions.unit()])
    rng = np.random.default_rng(10)
    for z in (0.5 + 1.2j, -0.3 + 0.8j, 1.4 - 0.6j):
        rows = []
        for _ in range(5):
            u = _cp(rng.standard_normal(2) + 1j * rng.standard_normal(2))
            rows.append(twistor_lift(stem, z, u, frame).coords)
        sv = np.linalg.svd(np.stack(rows), compute_uv=False)
        assert sv[1] > 1e-3 * sv[0]
        assert sv[2] <= 1e-10 * sv[0]


def test_fiber_quaternions(quaternions, frame, rng):
    i = frame.i_root
    same = stereographic_fiber(i, i)
    assert same.rank == 1
    assert same.contains(fiber_embed(i, quaternions.unit()), 1e-9)
    anti = stereographic_fiber(i, RootOfMinusOne.from_element(-i.element))
    assert anti.rank == 1
    assert anti.contains(fiber_embed(i, quaternions.basis_element(2)), 1e-9)
    assert not anti.contains(fiber_embed(i, quaternions.unit()), 1e-9)

    seed = find_seed_root(quaternions)
    for _ in range(20):
        s = sample_root(seed, rng)
        assert stereographic_fiber(i, s).rank == 1


def test_fiber_complex_and_cl03(complex_algebra, cl03, rng):
    i = RootOfMinusOne.from_element(complex_algebra.basis_element(1))
    assert stereographic_fiber(i, i).rank == 1
    minus = RootOfMinusOne.from_element(-complex_algebra.basis_element(1))
    assert stereographic_fiber(i, minus).rank == 0

    u = find_seed_root(cl03)
    for _ in range(10):
        s = sample_root(u, rng)
        assert stereographic_fiber(u, s).rank == 2


def test_fiber_embed_is_complex_linear(quaternions, rng):
    u = RootOfMinusOne.from_element(quaternions.basis_element(1))
    for _ in range(20):
        v = quaternions.random_element(rng)
        lhs = fiber_embed(u, u.element * v)
        assert np.allclose(lhs, 1j * fiber_embed(u, v), atol=1e-13)
        assert np.allclose(fiber_embed(u, v).real, v.coeffs)


def test_standard_section_values(quaternions, frame, rng):
    u = frame.i_root
    sigma = standard_section(u)
    seed = find_seed_root(quaternions)
    for _ in range(20):
        s = sample_root(seed, rng)
        c = sigma(s)
        assert (u.element * c - c * s.element).norm() <= 1e-9
    at_u = sigma(u)
    assert np.allclose(at_u.coeffs, 2.0 * quaternions.unit().coeffs)
    vanish = sigma(RootOfMinusOne.from_element(-u.element))
    assert vanish.norm() <= 1e-15


def test_generalized_twistor_consistency(quaternions, cl03, frame, rng):
    for alg, base in ((quaternions, frame), (cl03, find_seed_root(cl03))):
        u = base.i_root if isinstance(base, QuaternionFrame) else base
        sigma = standard_section(u)
        stem = stem_from_slice_poly([alg.random_element(rng)
                                     for _ in range(4)])
        seed = find_seed_root(alg)
        for _ in range(100):
            s = sample_root(seed, rng)
            if (s.element + u.element).norm() < 1e-3:
                continue  # section vanishes at -u
            z = complex(*rng.standard_normal(2))
            p = generalized_twistor(stem, sigma, z, s, base)
            got = rho1_general(p, u)
            want = eval_slice(stem, z, s)
            assert (got - want).norm() <= 1e-8 * (1 + want.norm())


def test_generalized_twistor_constant_stem(quaternions, frame):
    one = stem_from_slice_poly([quaternions.unit()])
    u = frame.i_root
    sigma = standard_section(u)
    seed = find_seed_root(quaternions)
    s = sample_root(seed, np.random.default_rng(11))
    p = generalized_twistor(one, sigma, 0.4 + 0.9j, s, frame)
    n = quaternions.dimension
    assert np.allclose(p.coords[:n], p.coords[n:], atol=1e-12)


def test_generalized_twistor_bad_sections(quaternions, frame):
    stem = stem_from_slice_poly([quaternions.unit(), quaternions.unit()])
    u = frame.i_root
    s = RootOfMinusOne.from_element(quaternions.basis_element(2))
    off_fiber = lambda _s: quaternions.unit()
    with pytest.raises(BadSectionError):
        generalized_twistor(stem, off_fiber, 0.1 + 0.1j, s, frame)
    vanishing = lambda _s: quaternions.zero()
    with pytest.raises(BadSectionError):
        generalized_twistor(stem, vanishing, 0.1 + 0.1j, s, frame)
    # the standard section itself dies at s = -u
    sigma = standard_section(u)
    minus_u = RootOfMinusOne.from_element(-u.element)
    with pytest.raises(BadSectionError):
        generalized_twistor(stem, sigma, 0.1 + 0.1j, minus_u, frame)
