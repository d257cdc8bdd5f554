"""Certify or falsify operator properties: exact for affine maps, sampled otherwise.

Exact certification works on spectral quantities of the linearization
(threshold 1e-9); sampling checks the defining inequality on seeded pairs
(tolerance 1e-8 by default).  A SampledPass is explicitly *not* a proof and
the Certificate verdict keeps the two apart.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional, Tuple

import numpy as np

from .linops import (
    Difference,
    DimensionMismatch,
    OperatorExpr,
    ProxOf,
    evaluate,
    linearize,
)

EXACT_TOL = 1e-9

CERTIFIED_EXACT = "certified_exact"
NOT_CERTIFIED_EXACT = "not_certified_exact"
SAMPLED_PASS = "sampled_pass"
FALSIFIED = "falsified"

FNE = "fne"
NONEXPANSIVE = "nonexpansive"
MONOTONE = "monotone"
CONSTANT = "constant"


@dataclass(frozen=True)
class SamplerConfig:
    """Seeded sampling plan: pairs drawn uniformly in the ball of given radius.

    Sample i derives from seed + i, so results do not depend on evaluation
    order.
    """

    seed: int = 42
    n_pairs: int = 1000
    radius: float = 10.0
    tolerance: float = 1e-8

    def __post_init__(self):
        if self.n_pairs < 1:
            raise ValueError("n_pairs must be >= 1")


@dataclass(frozen=True, eq=False)
class Certificate:
    verdict: str
    prop: str
    tolerance: float
    seed: Optional[int] = None
    n_pairs: Optional[int] = None
    worst_margin: Optional[float] = None
    witness: Optional[Tuple[np.ndarray, np.ndarray]] = None
    violation: Optional[float] = None
    decided_by: str = "exact"
    detail: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.verdict in (CERTIFIED_EXACT, SAMPLED_PASS)

    @property
    def exact(self) -> bool:
        # decided_by may be a composite path like "prox_monotonicity/sampled"
        return not self.decided_by.endswith("sampled")


def sample_point(seed: int, index: int, dim: int, radius: float) -> np.ndarray:
    """Point index `index` of the stream: uniform in the centered ball."""
    rng = np.random.default_rng(int(seed) + int(index))
    u = rng.standard_normal(dim)
    n = np.linalg.norm(u)
    if n == 0:
        return np.zeros(dim)
    return (radius * rng.random() ** (1.0 / dim) / n) * u


def sample_pair(cfg: SamplerConfig, index: int, dim: int):
    rng = np.random.default_rng(int(cfg.seed) + int(index))
    pts = []
    for _ in range(2):
        u = rng.standard_normal(dim)
        n = np.linalg.norm(u)
        r = cfg.radius * rng.random() ** (1.0 / dim)
        pts.append(np.zeros(dim) if n == 0 else (r / n) * u)
    return pts[0], pts[1]


# Margin conventions (pass iff margin >= -tolerance):
#   fne:          <Tx-Ty, x-y> - ||Tx-Ty||^2                  (absolute)
#   nonexpansive: (||x-y|| - ||Tx-Ty||) / max(||x-y||, eps)   (relative)
#   monotone:     <Tx-Ty, x-y> / max(||x-y||^2, eps)          (relative)
#   constant:     -||Tx-Ty||                                  (absolute)


def margin(prop: str, T: OperatorExpr, x: np.ndarray, y: np.ndarray) -> float:
    dT = evaluate(T, x) - evaluate(T, y)
    d = x - y
    if prop == FNE:
        return float(dT @ d - dT @ dT)
    if prop == NONEXPANSIVE:
        nd = float(np.linalg.norm(d))
        return (nd - float(np.linalg.norm(dT))) / max(nd, 1e-300)
    if prop == MONOTONE:
        nd2 = float(d @ d)
        return float(dT @ d) / max(nd2, 1e-300)
    if prop == CONSTANT:
        return -float(np.linalg.norm(dT))
    raise ValueError(f"unknown property {prop!r}")


def _sampled(prop: str, T: OperatorExpr, cfg: SamplerConfig) -> Certificate:
    dim = T.dim
    worst = np.inf
    worst_pair = None
    for i in range(cfg.n_pairs):
        x, y = sample_pair(cfg, i, dim)
        m = margin(prop, T, x, y)
        if m < worst:
            worst, worst_pair = m, (x, y)
    if worst >= -cfg.tolerance:
        return Certificate(
            SAMPLED_PASS, prop, cfg.tolerance, seed=cfg.seed,
            n_pairs=cfg.n_pairs, worst_margin=float(worst),
            decided_by="sampled",
        )
    x, y = worst_pair
    return Certificate(
        FALSIFIED, prop, cfg.tolerance, seed=cfg.seed, n_pairs=cfg.n_pairs,
        worst_margin=float(worst), witness=(x, y), violation=float(-worst),
        decided_by="sampled",
    )


def _exact_fne(T: OperatorExpr, M: np.ndarray) -> Certificate:
    dim = M.shape[0]
    # T is FNE iff 2T - Id is nonexpansive; constant offsets are irrelevant
    G = 2.0 * M - np.eye(dim)
    U, s, Vt = np.linalg.svd(G)
    norm = float(s[0]) if s.size else 0.0
    detail = {"norm_2T_minus_I": norm}
    if norm <= 1.0 + EXACT_TOL:
        return Certificate(
            CERTIFIED_EXACT, FNE, EXACT_TOL,
            worst_margin=1.0 - norm, detail=detail,
        )
    v = Vt[0]
    y = np.zeros(dim)
    viol = -margin(FNE, T, v, y)
    return Certificate(
        FALSIFIED, FNE, EXACT_TOL, worst_margin=1.0 - norm,
        witness=(v, y), violation=float(viol), detail=detail,
    )


def certify_fne(
    T: OperatorExpr, cfg: Optional[SamplerConfig] = None, force_sampled: bool = False
) -> Certificate:
    """Firm nonexpansiveness: exact via ||2M - I|| <= 1 when affine, else sampled."""
    cfg = cfg or SamplerConfig()
    parts = None if force_sampled else linearize(T)
    if parts is not None:
        return _exact_fne(T, parts.matrix)
    return _sampled(FNE, T, cfg)


def certify_nonexpansive(
    T: OperatorExpr, cfg: Optional[SamplerConfig] = None, force_sampled: bool = False
) -> Certificate:
    cfg = cfg or SamplerConfig()
    parts = None if force_sampled else linearize(T)
    if parts is not None:
        M = parts.matrix
        U, s, Vt = np.linalg.svd(M)
        norm = float(s[0]) if s.size else 0.0
        detail = {"operator_norm": norm}
        if norm <= 1.0 + EXACT_TOL:
            return Certificate(
                CERTIFIED_EXACT, NONEXPANSIVE, EXACT_TOL,
                worst_margin=1.0 - norm, detail=detail,
            )
        v = Vt[0]
        y = np.zeros(M.shape[0])
        viol = -margin(NONEXPANSIVE, T, v, y)
        return Certificate(
            FALSIFIED, NONEXPANSIVE, EXACT_TOL, worst_margin=1.0 - norm,
            witness=(v, y), violation=float(viol), detail=detail,
        )
    return _sampled(NONEXPANSIVE, T, cfg)


def certify_monotone(
    T: OperatorExpr, cfg: Optional[SamplerConfig] = None, force_sampled: bool = False
) -> Certificate:
    cfg = cfg or SamplerConfig()
    parts = None if force_sampled else linearize(T)
    if parts is not None:
        M = parts.matrix
        S = 0.5 * (M + M.T)
        eigvals, eigvecs = np.linalg.eigh(S)
        lam_min = float(eigvals[0])
        detail = {"min_symmetric_eigenvalue": lam_min}
        if lam_min >= -EXACT_TOL:
            return Certificate(
                CERTIFIED_EXACT, MONOTONE, EXACT_TOL,
                worst_margin=lam_min, detail=detail,
            )
        v = eigvecs[:, 0]
        y = np.zeros(M.shape[0])
        viol = -margin(MONOTONE, T, v, y)
        return Certificate(
            FALSIFIED, MONOTONE, EXACT_TOL, worst_margin=lam_min,
            witness=(v, y), violation=float(viol), detail=detail,
        )
    return _sampled(MONOTONE, T, cfg)


def certify_constant(
    T: OperatorExpr, cfg: Optional[SamplerConfig] = None, force_sampled: bool = False
) -> Certificate:
    cfg = cfg or SamplerConfig()
    parts = None if force_sampled else linearize(T)
    if parts is not None:
        M = parts.matrix
        norm = float(np.linalg.norm(M, 2)) if M.size else 0.0
        detail = {"linear_part_norm": norm}
        if norm <= EXACT_TOL:
            return Certificate(
                CERTIFIED_EXACT, CONSTANT, EXACT_TOL,
                worst_margin=-norm, detail=detail,
            )
        U, s, Vt = np.linalg.svd(M)
        v = Vt[0]
        y = np.zeros(M.shape[0])
        viol = -margin(CONSTANT, T, v, y)
        return Certificate(
            FALSIFIED, CONSTANT, EXACT_TOL, worst_margin=-norm,
            witness=(v, y), violation=float(viol), detail=detail,
        )
    return _sampled(CONSTANT, T, cfg)


_BY_PROPERTY = {
    FNE: certify_fne,
    NONEXPANSIVE: certify_nonexpansive,
    MONOTONE: certify_monotone,
    CONSTANT: certify_constant,
}


def certify(prop: str, T: OperatorExpr, cfg: Optional[SamplerConfig] = None,
            force_sampled: bool = False) -> Certificate:
    try:
        fn = _BY_PROPERTY[prop]
    except KeyError:
        raise ValueError(f"unknown property {prop!r}") from None
    return fn(T, cfg, force_sampled=force_sampled)


def resolvent_leq(
    T1: OperatorExpr,
    T2: OperatorExpr,
    cfg: Optional[SamplerConfig] = None,
    force_sampled: bool = False,
) -> Certificate:
    """T1 <= T2 in the resolvent order: T2 - T1 is firmly nonexpansive.

    For two prox operands the difference is automatically nonexpansive, so
    monotonicity of the difference suffices and is checked instead; the
    certificate records which path decided.  The relation carries its
    intended meaning only when both operands are themselves firmly
    nonexpansive; operands are not validated here.
    """
    if T1.dim != T2.dim:
        raise DimensionMismatch("operands disagree on dim")
    cfg = cfg or SamplerConfig()
    diff = Difference(T2, T1)
    if isinstance(T1, ProxOf) and isinstance(T2, ProxOf):
        cert = certify_monotone(diff, cfg, force_sampled=force_sampled)
        path = "prox_monotonicity/" + cert.decided_by
        return replace(cert, prop=FNE, decided_by=path)
    cert = certify_fne(diff, cfg, force_sampled=force_sampled)
    return replace(cert, decided_by="fne/" + cert.decided_by)


def order_reversal_check(
    T0: OperatorExpr, T1: OperatorExpr, cfg: Optional[SamplerConfig] = None
) -> bool:
    """Self-test of order reversal: T0 <= T1 iff Id-T1 <= Id-T0.

    The two differences are the identical operator, so the verdict classes
    must match.
    """
    from .linops import Identity

    if T0.dim != T1.dim:
        raise DimensionMismatch("operands disagree on dim")
    cfg = cfg or SamplerConfig()
    forward = resolvent_leq(T0, T1, cfg)
    I = Identity(T0.dim)
    reverse = resolvent_leq(Difference(I, T1), Difference(I, T0), cfg)
    return forward.holds == reverse.holds
