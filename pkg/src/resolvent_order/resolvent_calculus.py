"""Resolvents of monotone matrices and the Loewner-order compatibility chain."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .certify import (
    CERTIFIED_EXACT,
    CONSTANT,
    EXACT_TOL,
    FALSIFIED,
    MONOTONE,
    Certificate,
    SamplerConfig,
    resolvent_leq,
    sample_point,
)
from .linops import (
    DimensionMismatch,
    ProxOf,
    ResolventOf,
    as_matrix,
    is_symmetric,
)
from .prox_catalog import Quadratic, envelope

COND_LIMIT = 1e14


class NotMonotone(ValueError):
    pass


class NumericalSingularity(ValueError):
    pass


class SingularMatrix(ValueError):
    pass


class NotSymmetric(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class MonotoneMatrix:
    """Square matrix whose symmetric part is PSD (up to 1e-10)."""

    A: np.ndarray
    symmetric_part_min_eig: float

    @classmethod
    def of(cls, A) -> "MonotoneMatrix":
        A = as_matrix(A)
        if A.shape[0] != A.shape[1]:
            raise DimensionMismatch("monotone matrix must be square")
        lam = float(np.min(np.linalg.eigvalsh(0.5 * (A + A.T))))
        if lam < -1e-10:
            raise NotMonotone(f"symmetric part has eigenvalue {lam:.3e} < 0")
        return cls(A, lam)

    @property
    def dim(self) -> int:
        return self.A.shape[0]


def resolvent(A: MonotoneMatrix) -> np.ndarray:
    """J_A = (I + A)^{-1}; nonsingular for monotone A."""
    IpA = np.eye(A.dim) + A.A
    if np.linalg.cond(IpA) > COND_LIMIT:
        raise NumericalSingularity("I + A is numerically singular")
    return np.linalg.inv(IpA)


def resolvent_expr(A: MonotoneMatrix) -> ResolventOf:
    return ResolventOf(A.A)


def minty_inverse_identity_check(
    A: MonotoneMatrix, cfg: Optional[SamplerConfig] = None
) -> Certificate:
    """Verify J_A + J_{A^{-1}} = Id (matrices, 1e-9 Frobenius relative)."""
    sv = np.linalg.svd(A.A, compute_uv=False)
    if A.A.size == 0 or float(sv[-1]) <= 1e-10:
        raise SingularMatrix("A must be invertible for the Minty identity")
    JA = resolvent(A)
    JAinv = resolvent(MonotoneMatrix.of(np.linalg.inv(A.A)))
    D = JA + JAinv - np.eye(A.dim)
    rel = float(np.linalg.norm(D)) / np.sqrt(A.dim)
    verdict = CERTIFIED_EXACT if rel <= 1e-9 else FALSIFIED
    return Certificate(
        verdict, CONSTANT, 1e-9, worst_margin=-rel,
        violation=None if verdict == CERTIFIED_EXACT else rel,
        witness=None if verdict == CERTIFIED_EXACT else (np.zeros(A.dim), np.zeros(A.dim)),
        detail={"frobenius_relative_error": rel},
    )


def loewner_leq(A, B) -> Certificate:
    """Certify B <=_L A, i.e. A - B is positive semidefinite.

    Falsification carries the eigenvector of the most negative eigenvalue
    as witness.
    """
    A, B = as_matrix(A), as_matrix(B)
    if A.shape != B.shape:
        raise DimensionMismatch("Loewner comparison needs equal shapes")
    if not (is_symmetric(A, 1e-10) and is_symmetric(B, 1e-10)):
        raise NotSymmetric("Loewner order is defined on symmetric matrices")
    eigvals, eigvecs = np.linalg.eigh(A - B)
    lam_min = float(eigvals[0])
    detail = {"min_eigenvalue": lam_min}
    if lam_min >= -EXACT_TOL:
        return Certificate(
            CERTIFIED_EXACT, MONOTONE, EXACT_TOL,
            worst_margin=lam_min, detail=detail,
        )
    v = eigvecs[:, 0]
    return Certificate(
        FALSIFIED, MONOTONE, EXACT_TOL, worst_margin=lam_min,
        witness=(v, np.zeros(A.shape[0])), violation=-lam_min, detail=detail,
    )


@dataclass(frozen=True)
class LoewnerChainReport:
    """Verdicts of the three equivalent statements B <=_L A, J_A <=_L J_B, J_A <= J_B."""

    loewner: bool
    resolvent_loewner: bool
    resolvent_order: bool

    @property
    def consistent(self) -> bool:
        return self.loewner == self.resolvent_loewner == self.resolvent_order


def loewner_chain_check(
    A: MonotoneMatrix, B: MonotoneMatrix, cfg: Optional[SamplerConfig] = None
) -> LoewnerChainReport:
    if A.dim != B.dim:
        raise DimensionMismatch("matrices disagree on size")
    if not (is_symmetric(A.A, 1e-10) and is_symmetric(B.A, 1e-10)):
        raise NotSymmetric("chain check needs symmetric PSD matrices")
    cfg = cfg or SamplerConfig()
    i = loewner_leq(A.A, B.A).holds
    JA, JB = resolvent(A), resolvent(B)
    ii = loewner_leq(JB, JA).holds
    iii = resolvent_leq(resolvent_expr(A), resolvent_expr(B), cfg).holds
    return LoewnerChainReport(i, ii, iii)


@dataclass(frozen=True)
class QuadraticChainReport:
    """The quadratic-form equivalence ring: pointwise, Loewner, prox order, Moreau."""

    pointwise: bool
    loewner: bool
    prox_order: bool
    moreau_envelope: bool

    @property
    def consistent(self) -> bool:
        return (
            self.pointwise == self.loewner
            == self.prox_order == self.moreau_envelope
        )


def quadratic_order_chain(
    A, B, cfg: Optional[SamplerConfig] = None
) -> QuadraticChainReport:
    """Check q_B <= q_A pointwise <=> A - B PSD <=> prox order <=> Moreau order."""
    cfg = cfg or SamplerConfig()
    A, B = as_matrix(A), as_matrix(B)
    if not (is_symmetric(A, 1e-10) and is_symmetric(B, 1e-10)):
        raise NotSymmetric("quadratic chain needs symmetric matrices")
    qA, qB = Quadratic(A), Quadratic(B)
    dim = A.shape[0]

    pointwise = True
    for i in range(cfg.n_pairs):
        x = sample_point(cfg.seed, i, dim, cfg.radius)
        if qB.value(x) > qA.value(x) + cfg.tolerance * (1.0 + x @ x):
            pointwise = False
            break

    loewner = loewner_leq(A, B).holds
    prox_order = resolvent_leq(ProxOf(qA), ProxOf(qB), cfg).holds

    # Moreau leg: env q_A - env q_B must be convex; independent midpoint test
    def h(x):
        return envelope(qA, x) - envelope(qB, x)

    moreau = True
    for i in range(cfg.n_pairs):
        rng = np.random.default_rng(int(cfg.seed) + 7_000_000 + i)
        x = cfg.radius * rng.standard_normal(dim) / np.sqrt(dim)
        y = cfg.radius * rng.standard_normal(dim) / np.sqrt(dim)
        mid = 0.5 * (x + y)
        if h(mid) > 0.5 * (h(x) + h(y)) + cfg.tolerance * (1.0 + x @ x + y @ y):
            moreau = False
            break

    return QuadraticChainReport(pointwise, loewner, prox_order, moreau)


def comparable_psd_pair(rng: np.random.Generator, n: int, scale: float = 1.0):
    """Seeded comparable pair: B PSD, A = B + (PSD increment).  Returns (A, B)."""
    GB = rng.standard_normal((n, n))
    GD = rng.standard_normal((n, n))
    B = scale * (GB @ GB.T) / n
    D = scale * (GD @ GD.T) / n
    return B + D, B
