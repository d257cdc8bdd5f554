"""Closed-form proximal mappings, envelopes, and polar cones for a fixed catalog.

Each atom is a convex function on R^n with an exact prox.  Conjugates are
never formed symbolically: prox of the conjugate is always Id - prox
(Moreau decomposition), and the few conjugate pairs that happen to live in
the catalog are exposed through ``conjugate_atom`` for cross-checks only.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .linops import as_matrix, as_vector, is_symmetric

INF = float("inf")
MEMBERSHIP_TOL = 1e-9
SOC_BOUNDARY_TOL = 1e-12


class NonPSDQuadratic(ValueError):
    pass


class UnsupportedCone(ValueError):
    pass


class BadAtom(ValueError):
    pass


class ConvexAtom:
    """A convex function with closed-form prox.  Immutable."""

    dim: int
    is_indicator = False

    def prox(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def value(self, x: np.ndarray) -> float:
        raise NotImplementedError

    def prox_affine_parts(self) -> Optional[Tuple[np.ndarray, np.ndarray]]:
        """(matrix, offset) of the prox when it is affine, else None."""
        return None

    def domain_sample(self, rng: np.random.Generator) -> np.ndarray:
        """A point where the function is finite; used by the brute-force oracle.

        Indicator atoms parametrize their set directly (independent of the
        projection formula); finite-valued atoms sample free space.
        """
        return 3.0 * rng.standard_normal(self.dim)


@dataclass(frozen=True)
class ZeroFunction(ConvexAtom):
    """f = 0; prox is the identity.  Its domain is all of R^n (the full-space cone)."""

    dim: int

    def prox(self, x):
        return np.asarray(x, float).copy()

    def value(self, x):
        return 0.0

    def prox_affine_parts(self):
        return np.eye(self.dim), np.zeros(self.dim)


@dataclass(frozen=True, eq=False)
class IndicatorPoint(ConvexAtom):
    """Indicator of the singleton {p}."""

    p: np.ndarray
    is_indicator = True

    def __post_init__(self):
        object.__setattr__(self, "p", as_vector(self.p))

    @property
    def dim(self):
        return self.p.shape[0]

    def prox(self, x):
        return self.p.copy()

    def value(self, x):
        tol = MEMBERSHIP_TOL * (1.0 + np.linalg.norm(x))
        return 0.0 if np.linalg.norm(x - self.p) <= tol else INF

    def prox_affine_parts(self):
        return np.zeros((self.dim, self.dim)), self.p.copy()

    def domain_sample(self, rng):
        return self.p.copy()


@dataclass(frozen=True, eq=False)
class IndicatorBall(ConvexAtom):
    """Indicator of the closed ball of given center and radius."""

    center: np.ndarray
    radius: float
    is_indicator = True

    def __post_init__(self):
        object.__setattr__(self, "center", as_vector(self.center))
        if not self.radius > 0:
            raise BadAtom("ball radius must be positive")

    @property
    def dim(self):
        return self.center.shape[0]

    def prox(self, x):
        d = x - self.center
        n = np.linalg.norm(d)
        if n <= self.radius:
            return np.asarray(x, float).copy()
        return self.center + (self.radius / n) * d

    def value(self, x):
        tol = MEMBERSHIP_TOL * (1.0 + np.linalg.norm(x))
        return 0.0 if np.linalg.norm(x - self.center) <= self.radius + tol else INF

    def domain_sample(self, rng):
        u = rng.standard_normal(self.dim)
        n = np.linalg.norm(u)
        if n == 0:
            return self.center.copy()
        r = self.radius * rng.random() ** (1.0 / self.dim)
        return self.center + (r / n) * u


@dataclass(frozen=True, eq=False)
class IndicatorSubspace(ConvexAtom):
    """Indicator of span(basis); basis columns must be orthonormal to 1e-10."""

    dim: int
    basis: np.ndarray  # shape (dim, k); k = 0 encodes the trivial subspace {0}

    def __post_init__(self):
        B = np.asarray(self.basis, dtype=float).reshape(self.dim, -1)
        k = B.shape[1]
        if k and np.max(np.abs(B.T @ B - np.eye(k))) > 1e-10:
            raise BadAtom("subspace basis is not orthonormal")
        object.__setattr__(self, "basis", B)

    is_indicator = True

    @property
    def projector(self) -> np.ndarray:
        B = self.basis
        return B @ B.T if B.shape[1] else np.zeros((self.dim, self.dim))

    def prox(self, x):
        return self.projector @ x

    def value(self, x):
        tol = MEMBERSHIP_TOL * (1.0 + np.linalg.norm(x))
        return 0.0 if np.linalg.norm(x - self.projector @ x) <= tol else INF

    def prox_affine_parts(self):
        return self.projector, np.zeros(self.dim)

    def domain_sample(self, rng):
        k = self.basis.shape[1]
        if k == 0:
            return np.zeros(self.dim)
        return self.basis @ (3.0 * rng.standard_normal(k))


@dataclass(frozen=True)
class IndicatorOrthant(ConvexAtom):
    """Indicator of the nonnegative (sign=+1) or nonpositive (sign=-1) orthant."""

    dim: int
    sign: int = 1
    is_indicator = True

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise BadAtom("orthant sign must be +1 or -1")

    def prox(self, x):
        return np.maximum(0.0, x) if self.sign == 1 else np.minimum(0.0, x)

    def value(self, x):
        tol = MEMBERSHIP_TOL * (1.0 + np.linalg.norm(x))
        ok = np.all(self.sign * x >= -tol)
        return 0.0 if ok else INF

    def domain_sample(self, rng):
        return self.sign * np.abs(3.0 * rng.standard_normal(self.dim))


@dataclass(frozen=True)
class IndicatorSOC(ConvexAtom):
    """Indicator of the second-order cone {(t, z) : ||z|| <= t} or its negation."""

    dim: int
    negated: bool = False
    is_indicator = True

    def __post_init__(self):
        if self.dim < 2:
            raise BadAtom("second-order cone needs dim >= 2")

    def prox(self, x):
        if self.negated:
            return -self._project(-np.asarray(x, float))
        return self._project(np.asarray(x, float))

    @staticmethod
    def _project(x):
        t, z = x[0], x[1:]
        nz = np.linalg.norm(z)
        scale = nz + abs(t)
        tol = SOC_BOUNDARY_TOL * (1.0 + scale)
        if nz <= t + tol:
            return x.copy()
        if nz <= -t + tol:
            return np.zeros_like(x)
        tau = 0.5 * (t + nz)
        out = np.empty_like(x)
        out[0] = tau
        out[1:] = (tau / nz) * z
        return out

    def value(self, x):
        t, z = (-x[0], -x[1:]) if self.negated else (x[0], x[1:])
        tol = MEMBERSHIP_TOL * (1.0 + np.linalg.norm(x))
        return 0.0 if np.linalg.norm(z) <= t + tol else INF

    def domain_sample(self, rng):
        z = 3.0 * rng.standard_normal(self.dim - 1)
        t = np.linalg.norm(z) + 3.0 * rng.random()
        out = np.concatenate(([t], z))
        return -out if self.negated else out


@dataclass(frozen=True, eq=False)
class IndicatorRay(ConvexAtom):
    """Indicator of the ray {lambda * direction : lambda >= 0}; direction is unit."""

    direction: np.ndarray
    is_indicator = True

    def __post_init__(self):
        d = as_vector(self.direction)
        n = np.linalg.norm(d)
        if abs(n - 1.0) > 1e-10:
            raise BadAtom("ray direction must be a unit vector")
        object.__setattr__(self, "direction", d)

    @property
    def dim(self):
        return self.direction.shape[0]

    def prox(self, x):
        return max(0.0, float(self.direction @ x)) * self.direction

    def value(self, x):
        tol = MEMBERSHIP_TOL * (1.0 + np.linalg.norm(x))
        return 0.0 if np.linalg.norm(x - self.prox(x)) <= tol else INF

    def domain_sample(self, rng):
        return (3.0 * rng.random()) * self.direction


@dataclass(frozen=True, eq=False)
class IndicatorPolarRay(ConvexAtom):
    """Indicator of {x : <direction, x> <= 0}, the polar cone of a ray."""

    direction: np.ndarray
    is_indicator = True

    def __post_init__(self):
        d = as_vector(self.direction)
        n = np.linalg.norm(d)
        if abs(n - 1.0) > 1e-10:
            raise BadAtom("ray direction must be a unit vector")
        object.__setattr__(self, "direction", d)

    @property
    def dim(self):
        return self.direction.shape[0]

    def prox(self, x):
        return x - max(0.0, float(self.direction @ x)) * self.direction

    def value(self, x):
        tol = MEMBERSHIP_TOL * (1.0 + np.linalg.norm(x))
        return 0.0 if float(self.direction @ x) <= tol else INF

    def domain_sample(self, rng):
        x = 3.0 * rng.standard_normal(self.dim)
        return x - max(0.0, float(self.direction @ x)) * self.direction


@dataclass(frozen=True, eq=False)
class Quadratic(ConvexAtom):
    """q_A(x) = 0.5 <x, A x> with A symmetric PSD."""

    A: np.ndarray

    def __post_init__(self):
        A = as_matrix(self.A)
        if not is_symmetric(A, tol=1e-10):
            raise NonPSDQuadratic("quadratic matrix must be symmetric")
        A = 0.5 * (A + A.T)
        if float(np.min(np.linalg.eigvalsh(A))) < -1e-10:
            raise NonPSDQuadratic("quadratic matrix must be PSD")
        object.__setattr__(self, "A", A)

    @property
    def dim(self):
        return self.A.shape[0]

    def prox(self, x):
        return np.linalg.solve(np.eye(self.dim) + self.A, x)

    def value(self, x):
        return 0.5 * float(x @ (self.A @ x))

    def prox_affine_parts(self):
        return np.linalg.inv(np.eye(self.dim) + self.A), np.zeros(self.dim)


@dataclass(frozen=True)
class L1Norm(ConvexAtom):
    """lam * ||x||_1; prox is the soft threshold."""

    dim: int
    lam: float

    def __post_init__(self):
        if not self.lam > 0:
            raise BadAtom("l1 weight must be positive")

    def prox(self, x):
        return np.sign(x) * np.maximum(np.abs(x) - self.lam, 0.0)

    def value(self, x):
        return self.lam * float(np.sum(np.abs(x)))


@dataclass(frozen=True)
class L2Norm(ConvexAtom):
    """lam * ||x||_2; prox is the block soft threshold."""

    dim: int
    lam: float

    def __post_init__(self):
        if not self.lam > 0:
            raise BadAtom("l2 weight must be positive")

    def prox(self, x):
        n = np.linalg.norm(x)
        if n <= self.lam:
            return np.zeros_like(np.asarray(x, float))
        return (1.0 - self.lam / n) * x

    def value(self, x):
        return self.lam * float(np.linalg.norm(x))


@dataclass(frozen=True, eq=False)
class LinearFunc(ConvexAtom):
    """f(x) = <a, x>; prox shifts by -a."""

    a: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "a", as_vector(self.a))

    @property
    def dim(self):
        return self.a.shape[0]

    def prox(self, x):
        return x - self.a

    def value(self, x):
        return float(self.a @ x)

    def prox_affine_parts(self):
        return np.eye(self.dim), -self.a.copy()


@dataclass(frozen=True, eq=False)
class Shifted(ConvexAtom):
    """g(x) = base(x - c) - <c, x> + gamma.

    This is the translate-and-tilt equivalence class move; its prox is
    c + prox_base(x), which the test suite validates against the
    brute-force oracle.
    """

    base: ConvexAtom
    c: np.ndarray
    gamma: float = 0.0

    def __post_init__(self):
        c = as_vector(self.c, self.base.dim)
        object.__setattr__(self, "c", c)

    @property
    def dim(self):
        return self.base.dim

    @property
    def is_indicator(self):
        return False

    def prox(self, x):
        return self.c + self.base.prox(np.asarray(x, float))

    def value(self, x):
        base_val = self.base.value(x - self.c)
        if base_val == INF:
            return INF
        return base_val - float(self.c @ x) + self.gamma

    def prox_affine_parts(self):
        parts = self.base.prox_affine_parts()
        if parts is None:
            return None
        M, b = parts
        return M.copy(), b + self.c

    def domain_sample(self, rng):
        return self.base.domain_sample(rng) + self.c


# ---------------------------------------------------------------------------
# Module-level operations
# ---------------------------------------------------------------------------


def prox(f: ConvexAtom, x) -> np.ndarray:
    """argmin_y f(y) + 0.5 ||x - y||^2, in closed form."""
    return f.prox(as_vector(x, f.dim))


def fn_value(f: ConvexAtom, x) -> float:
    """f(x), possibly +inf for indicators (membership tolerance 1e-9)."""
    return f.value(as_vector(x, f.dim))


def envelope(f: ConvexAtom, x) -> float:
    """Moreau envelope: f(prox_f x) + 0.5 ||x - prox_f x||^2, always finite.

    Indicators use 0.5 * dist^2 directly so boundary rounding can never
    leak +inf through fn_value.
    """
    x = as_vector(x, f.dim)
    if isinstance(f, Shifted):
        # env of the shifted atom in terms of the base envelope:
        # env_g(x) = env_f(x) - <c, x> - 0.5||c||^2 + gamma
        return (
            envelope(f.base, x)
            - float(f.c @ x)
            - 0.5 * float(f.c @ f.c)
            + f.gamma
        )
    p = f.prox(x)
    r = x - p
    if f.is_indicator:
        return 0.5 * float(r @ r)
    return f.value(p) + 0.5 * float(r @ r)


def conjugate_prox(f: ConvexAtom, x) -> np.ndarray:
    """prox of the Fenchel conjugate via Moreau decomposition: x - prox_f(x)."""
    x = as_vector(x, f.dim)
    return x - f.prox(x)


CONE_KINDS = (
    IndicatorSubspace,
    IndicatorOrthant,
    IndicatorSOC,
    IndicatorRay,
    IndicatorPolarRay,
)


def is_cone(atom: ConvexAtom) -> bool:
    """Whether the atom's indicator set (or domain) is a closed convex cone."""
    if isinstance(atom, CONE_KINDS):
        return True
    if isinstance(atom, ZeroFunction):
        return True  # full space
    if isinstance(atom, IndicatorPoint):
        return not np.any(atom.p)  # {0}
    return False


def polar(c: ConvexAtom) -> ConvexAtom:
    """Polar cone of a supported cone atom."""
    if not is_cone(c):
        raise UnsupportedCone(f"{type(c).__name__} is not a supported cone")
    if isinstance(c, IndicatorSubspace):
        return IndicatorSubspace(c.dim, _orthogonal_complement(c.basis, c.dim))
    if isinstance(c, IndicatorOrthant):
        return IndicatorOrthant(c.dim, -c.sign)
    if isinstance(c, IndicatorSOC):
        return IndicatorSOC(c.dim, not c.negated)
    if isinstance(c, IndicatorRay):
        return IndicatorPolarRay(c.direction)
    if isinstance(c, IndicatorPolarRay):
        return IndicatorRay(c.direction)
    if isinstance(c, ZeroFunction):
        return IndicatorPoint(np.zeros(c.dim))
    if isinstance(c, IndicatorPoint):
        return ZeroFunction(c.dim)
    raise UnsupportedCone(f"{type(c).__name__} has no polar here")


def _orthogonal_complement(B: np.ndarray, dim: int) -> np.ndarray:
    if B.shape[1] == 0:
        return np.eye(dim)
    # full SVD of B^T: right singular vectors past rank span the complement
    _, s, Vt = np.linalg.svd(B.T, full_matrices=True)
    rank = int(np.sum(s > 1e-10))
    return Vt[rank:].T


def conjugate_atom(f: ConvexAtom) -> Optional[ConvexAtom]:
    """The Fenchel conjugate when it happens to be in the catalog, else None.

    Used only to cross-check the Moreau decomposition; the prox of any
    conjugate is always taken as Id - prox_f.
    """
    if isinstance(f, ZeroFunction):
        return IndicatorPoint(np.zeros(f.dim))
    if isinstance(f, IndicatorPoint):
        if not np.any(f.p):
            return ZeroFunction(f.dim)
        return LinearFunc(f.p)
    if isinstance(f, LinearFunc):
        return IndicatorPoint(f.a)
    if isinstance(f, Quadratic):
        eigs = np.linalg.eigvalsh(f.A)
        if float(np.min(eigs)) > 1e-10:
            return Quadratic(np.linalg.inv(f.A))
        return None
    if isinstance(f, L2Norm):
        return IndicatorBall(np.zeros(f.dim), f.lam)
    if isinstance(f, IndicatorBall):
        if not np.any(f.center):
            return L2Norm(f.dim, f.radius)
        return None
    if is_cone(f):
        return polar(f)
    return None


def _batch_domain_samples(f: ConvexAtom, rng: np.random.Generator, n: int) -> np.ndarray:
    """n feasible points, rows of shape (n, dim); parametrizes the set directly."""
    d = f.dim
    if isinstance(f, IndicatorPoint):
        return np.tile(f.p, (n, 1))
    if isinstance(f, IndicatorBall):
        u = rng.standard_normal((n, d))
        u /= np.maximum(np.linalg.norm(u, axis=1, keepdims=True), 1e-300)
        r = f.radius * rng.random((n, 1)) ** (1.0 / d)
        return f.center + r * u
    if isinstance(f, IndicatorSubspace):
        k = f.basis.shape[1]
        if k == 0:
            return np.zeros((n, d))
        return (3.0 * rng.standard_normal((n, k))) @ f.basis.T
    if isinstance(f, IndicatorOrthant):
        return f.sign * np.abs(3.0 * rng.standard_normal((n, d)))
    if isinstance(f, IndicatorSOC):
        z = 3.0 * rng.standard_normal((n, d - 1))
        t = np.linalg.norm(z, axis=1) + 3.0 * rng.random(n)
        out = np.column_stack([t, z])
        return -out if f.negated else out
    if isinstance(f, IndicatorRay):
        return (3.0 * rng.random((n, 1))) * f.direction
    if isinstance(f, IndicatorPolarRay):
        x = 3.0 * rng.standard_normal((n, d))
        proj = np.maximum(0.0, x @ f.direction)
        return x - proj[:, None] * f.direction
    if isinstance(f, Shifted):
        return _batch_domain_samples(f.base, rng, n) + f.c
    return 3.0 * rng.standard_normal((n, d))


def _batch_values(f: ConvexAtom, Y: np.ndarray) -> np.ndarray:
    """f evaluated on the rows of Y; indicators return 0 on their set."""
    if isinstance(f, ZeroFunction):
        return np.zeros(Y.shape[0])
    if f.is_indicator:
        # rows come from the domain parametrization, hence feasible
        return np.zeros(Y.shape[0])
    if isinstance(f, Quadratic):
        return 0.5 * np.einsum("ij,ij->i", Y, Y @ f.A)
    if isinstance(f, L1Norm):
        return f.lam * np.sum(np.abs(Y), axis=1)
    if isinstance(f, L2Norm):
        return f.lam * np.linalg.norm(Y, axis=1)
    if isinstance(f, LinearFunc):
        return Y @ f.a
    if isinstance(f, Shifted):
        return _batch_values(f.base, Y - f.c) - Y @ f.c + f.gamma
    return np.array([f.value(y) for y in Y])


def brute_force_prox(
    f: ConvexAtom,
    x,
    n_points: int = 10_000,
    seed: int = 0,
    radius: Optional[float] = None,
) -> Tuple[np.ndarray, float]:
    """Randomized search for argmin_y f(y) + 0.5 ||x - y||^2.

    Independent of the closed-form prox: candidates come from the domain
    parametrization (set definition) plus free-space samples around x.
    Returns the best candidate and its objective value.
    """
    x = as_vector(x, f.dim)
    rng = np.random.default_rng(seed)
    if radius is None:
        radius = float(np.linalg.norm(x)) + 3.0

    indicator_like = f.is_indicator or (
        isinstance(f, Shifted) and f.base.is_indicator)
    if indicator_like:
        Y = _batch_domain_samples(f, rng, n_points)
    else:
        half = n_points // 2
        u = rng.standard_normal((n_points - half, f.dim))
        u /= np.maximum(np.linalg.norm(u, axis=1, keepdims=True), 1e-300)
        r = radius * rng.random((n_points - half, 1)) ** (1.0 / f.dim)
        Y = np.vstack([
            _batch_domain_samples(f, rng, half),
            x + r * u,
        ])
    vals = _batch_values(f, Y)
    obj = vals + 0.5 * np.sum((Y - x) ** 2, axis=1)
    finite = np.isfinite(obj)
    if not np.any(finite):
        raise RuntimeError("brute-force search found no feasible candidate")
    best = int(np.argmin(np.where(finite, obj, INF)))
    return Y[best], float(obj[best])
