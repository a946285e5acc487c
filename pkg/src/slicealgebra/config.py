"""Shared numeric policy: tolerances and size guards."""

import os

# Comparison tolerance for algebraic identities.  Overridable per call and,
# globally, through the SLICE_ALGEBRA_TOL environment variable.
DEFAULT_TOL = 1e-9

# Relative singular-value cutoffs.  Rank decisions (kernels, eigenspaces) and
# the zerodivisor test are exact-rank statements, so both thresholds are
# relative to the largest singular value.
RANK_RELTOL = 1e-8
ZERODIVISOR_RELTOL = 1e-8

# Dense structure-constant tensors only; everything stays small.
MAX_DIMENSION = 64
MAX_CLIFFORD_GENERATORS = 6


def default_tol() -> float:
    """Return the comparison tolerance, honoring SLICE_ALGEBRA_TOL."""
    raw = os.environ.get("SLICE_ALGEBRA_TOL")
    if raw is None:
        return DEFAULT_TOL
    return float(raw)


def resolve_tol(tol: float | None) -> float:
    return default_tol() if tol is None else float(tol)
