"""Dense vectors, matrices, spectral primitives, and operator expression trees.

Everything lives in R^n with plain float64 numpy arrays.  Operator
expressions are small immutable trees; evaluation is pure and exact
linearization (when it exists) returns the matrix plus affine offset.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

SYMMETRY_TOL = 1e-12


class DimensionMismatch(ValueError):
    pass


class NonFiniteInput(ValueError):
    pass


class NonSquare(ValueError):
    pass


def as_vector(x, dim: Optional[int] = None) -> np.ndarray:
    """Coerce to a finite 1-D float array, optionally checking its length."""
    v = np.atleast_1d(np.asarray(x, dtype=float))
    if v.ndim != 1:
        raise DimensionMismatch(f"expected a vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise NonFiniteInput("vector contains NaN or Inf")
    if dim is not None and v.shape[0] != dim:
        raise DimensionMismatch(f"expected dim {dim}, got {v.shape[0]}")
    return v


def as_matrix(M) -> np.ndarray:
    A = np.asarray(M, dtype=float)
    if A.ndim != 2:
        raise DimensionMismatch(f"expected a matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise NonFiniteInput("matrix contains NaN or Inf")
    return A


def is_symmetric(M, tol: float = SYMMETRY_TOL) -> bool:
    A = np.asarray(M, dtype=float)
    if A.shape[0] != A.shape[1]:
        return False
    return float(np.max(np.abs(A - A.T))) <= tol if A.size else True


def rotation_matrix(theta: float) -> np.ndarray:
    """Counterclockwise rotator by theta in R^2."""
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues (symmetric input only, sorted ascending) and operator norm."""

    eigenvalues: Optional[np.ndarray]
    operator_norm: float


def spectrum(M) -> Spectrum:
    A = as_matrix(M)
    if A.shape[0] != A.shape[1]:
        raise NonSquare(f"spectrum needs a square matrix, got {A.shape}")
    norm = float(np.linalg.norm(A, 2)) if A.size else 0.0
    eigs = np.sort(np.linalg.eigvalsh(A)) if is_symmetric(A) else None
    return Spectrum(eigs, norm)


# ---------------------------------------------------------------------------
# Operator expression tree
# ---------------------------------------------------------------------------


class OperatorExpr:
    """Closed expression denoting a map R^dim -> R^dim."""

    dim: int  # leaves store it; composites derive it


@dataclass(frozen=True)
class Identity(OperatorExpr):
    dim: int


@dataclass(frozen=True)
class Zero(OperatorExpr):
    dim: int


@dataclass(frozen=True, eq=False)
class Constant(OperatorExpr):
    c: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "c", as_vector(self.c))

    @property
    def dim(self) -> int:
        return self.c.shape[0]


@dataclass(frozen=True, eq=False)
class Linear(OperatorExpr):
    M: np.ndarray

    def __post_init__(self):
        A = as_matrix(self.M)
        if A.shape[0] != A.shape[1]:
            raise NonSquare(f"Linear needs a square matrix, got {A.shape}")
        object.__setattr__(self, "M", A)

    @property
    def dim(self) -> int:
        return self.M.shape[0]


@dataclass(frozen=True)
class Rotation(OperatorExpr):
    """Counterclockwise rotation by theta; only defined on R^2."""

    theta: float

    @property
    def dim(self) -> int:
        return 2

    @property
    def matrix(self) -> np.ndarray:
        return rotation_matrix(self.theta)


@dataclass(frozen=True, eq=False)
class ProxOf(OperatorExpr):
    """Proximal mapping of a catalog atom (see prox_catalog)."""

    atom: object

    @property
    def dim(self) -> int:
        return self.atom.dim


@dataclass(frozen=True, eq=False)
class ResolventOf(OperatorExpr):
    """(I + A)^{-1} for a square (monotone) matrix A."""

    A: np.ndarray

    def __post_init__(self):
        A = as_matrix(self.A)
        if A.shape[0] != A.shape[1]:
            raise NonSquare(f"ResolventOf needs a square matrix, got {A.shape}")
        object.__setattr__(self, "A", A)

    @property
    def dim(self) -> int:
        return self.A.shape[0]


@dataclass(frozen=True, eq=False)
class Scale(OperatorExpr):
    alpha: float
    child: OperatorExpr

    @property
    def dim(self) -> int:
        return self.child.dim


@dataclass(frozen=True, eq=False)
class Sum(OperatorExpr):
    children: tuple

    def __post_init__(self):
        kids = tuple(self.children)
        if not kids:
            raise DimensionMismatch("Sum needs at least one child")
        d = kids[0].dim
        for k in kids:
            if k.dim != d:
                raise DimensionMismatch("Sum children disagree on dim")
        object.__setattr__(self, "children", kids)

    @property
    def dim(self) -> int:
        return self.children[0].dim


@dataclass(frozen=True, eq=False)
class Difference(OperatorExpr):
    left: OperatorExpr
    right: OperatorExpr

    def __post_init__(self):
        if self.left.dim != self.right.dim:
            raise DimensionMismatch("Difference operands disagree on dim")

    @property
    def dim(self) -> int:
        return self.left.dim


@dataclass(frozen=True, eq=False)
class Compose(OperatorExpr):
    outer: OperatorExpr
    inner: OperatorExpr

    def __post_init__(self):
        if self.outer.dim != self.inner.dim:
            raise DimensionMismatch("Compose operands disagree on dim")

    @property
    def dim(self) -> int:
        return self.outer.dim


def evaluate(op: OperatorExpr, x) -> np.ndarray:
    """Evaluate the denoted map at x.  Deterministic and total on finite input."""
    x = as_vector(x, op.dim)
    return _eval(op, x)


def _eval(op: OperatorExpr, x: np.ndarray) -> np.ndarray:
    if isinstance(op, Identity):
        return x.copy()
    if isinstance(op, Zero):
        return np.zeros_like(x)
    if isinstance(op, Constant):
        return op.c.copy()
    if isinstance(op, Linear):
        return op.M @ x
    if isinstance(op, Rotation):
        return op.matrix @ x
    if isinstance(op, ProxOf):
        return op.atom.prox(x)
    if isinstance(op, ResolventOf):
        return np.linalg.solve(np.eye(op.dim) + op.A, x)
    if isinstance(op, Scale):
        return op.alpha * _eval(op.child, x)
    if isinstance(op, Sum):
        out = _eval(op.children[0], x)
        for k in op.children[1:]:
            out = out + _eval(k, x)
        return out
    if isinstance(op, Difference):
        return _eval(op.left, x) - _eval(op.right, x)
    if isinstance(op, Compose):
        return _eval(op.outer, _eval(op.inner, x))
    raise TypeError(f"unknown operator node {type(op).__name__}")


class AffineParts(NamedTuple):
    """Exact affine form x -> matrix @ x + offset."""

    matrix: np.ndarray
    offset: np.ndarray

    @property
    def is_linear(self) -> bool:
        return not np.any(self.offset)


def linearize(op: OperatorExpr) -> Optional[AffineParts]:
    """Exact affine parts of the map, or None when the tree is nonlinear.

    ProxOf nodes linearize whenever the atom's prox is itself affine
    (quadratics, subspaces, points, linear tilts); ResolventOf always does.
    """
    if isinstance(op, Identity):
        return AffineParts(np.eye(op.dim), np.zeros(op.dim))
    if isinstance(op, Zero):
        return AffineParts(np.zeros((op.dim, op.dim)), np.zeros(op.dim))
    if isinstance(op, Constant):
        return AffineParts(np.zeros((op.dim, op.dim)), op.c.copy())
    if isinstance(op, Linear):
        return AffineParts(op.M.copy(), np.zeros(op.dim))
    if isinstance(op, Rotation):
        return AffineParts(op.matrix, np.zeros(2))
    if isinstance(op, ProxOf):
        parts = op.atom.prox_affine_parts()
        return None if parts is None else AffineParts(*parts)
    if isinstance(op, ResolventOf):
        return AffineParts(np.linalg.inv(np.eye(op.dim) + op.A), np.zeros(op.dim))
    if isinstance(op, Scale):
        p = linearize(op.child)
        if p is None:
            return None
        return AffineParts(op.alpha * p.matrix, op.alpha * p.offset)
    if isinstance(op, Sum):
        parts = [linearize(k) for k in op.children]
        if any(p is None for p in parts):
            return None
        return AffineParts(
            sum(p.matrix for p in parts), sum(p.offset for p in parts)
        )
    if isinstance(op, Difference):
        pl, pr = linearize(op.left), linearize(op.right)
        if pl is None or pr is None:
            return None
        return AffineParts(pl.matrix - pr.matrix, pl.offset - pr.offset)
    if isinstance(op, Compose):
        po, pi = linearize(op.outer), linearize(op.inner)
        if po is None or pi is None:
            return None
        return AffineParts(po.matrix @ pi.matrix, po.matrix @ pi.offset + po.offset)
    raise TypeError(f"unknown operator node {type(op).__name__}")


def compose_power(op: OperatorExpr, n: int) -> OperatorExpr:
    """n-fold composition of op with itself; n = 0 gives the identity."""
    if n < 0:
        raise ValueError("power must be nonnegative")
    out: OperatorExpr = Identity(op.dim)
    for _ in range(n):
        out = Compose(op, out)
    return out
