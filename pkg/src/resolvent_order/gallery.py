"""Executable reproductions of the named constructions and counterexamples.

Each item builds the construction at desk scale, runs the relevant
certifiers, and returns a structured pass/fail record.  Defaults use
cos(theta) = 0.6 at n = 2, comfortably inside the feasibility window so
falsification margins are O(0.1) rather than borderline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .certify import (
    Certificate,
    SamplerConfig,
    certify_constant,
    certify_fne,
    resolvent_leq,
    sample_point,
)
from .linops import (
    Constant,
    Difference,
    Identity,
    Linear,
    ProxOf,
    Rotation,
    Scale,
    Sum,
    compose_power,
    evaluate,
    linearize,
)
from .prox_catalog import IndicatorBall


class ThetaOutsideWindow(ValueError):
    """cos(theta) is outside [1/sqrt(2n), 1/sqrt(2)); reports the admissible interval."""

    def __init__(self, n: int, cos_theta: float):
        self.n = n
        self.cos_theta = cos_theta
        self.lo, self.hi = feasibility_window(n)
        super().__init__(
            f"cos(theta) = {cos_theta:.6f} outside the admissible interval "
            f"[{self.lo:.6f}, {self.hi:.6f}) for n = {n}"
        )


class PartitionInvalid(ValueError):
    pass


def feasibility_window(n: int) -> Tuple[float, float]:
    """Admissible cos(theta) interval [1/sqrt(2n), 1/sqrt(2)) for the rotator scheme."""
    return 1.0 / math.sqrt(2 * n), 1.0 / math.sqrt(2.0)


def _check_window(n: int, theta: float) -> float:
    c = math.cos(theta)
    lo, hi = feasibility_window(max(n, 1))
    if n < 2 or not (lo - 1e-12 <= c < hi):
        raise ThetaOutsideWindow(n, c)
    return c


@dataclass(frozen=True, eq=False)
class Claim:
    description: str
    expected: bool
    observed: object  # Certificate or bool

    @property
    def observed_holds(self) -> bool:
        if isinstance(self.observed, Certificate):
            return self.observed.holds
        return bool(self.observed)

    @property
    def ok(self) -> bool:
        return self.observed_holds == self.expected


@dataclass(frozen=True, eq=False)
class GalleryResult:
    name: str
    claims: Tuple[Claim, ...]
    params: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.claims)


def rotation_construction(
    n: int = 2,
    theta: Optional[float] = None,
    cfg: Optional[SamplerConfig] = None,
) -> GalleryResult:
    """Scaled rotators: alpha R_theta is FNE, n*alpha R_theta is not, and the
    2n copies sum to the identity."""
    if theta is None:
        theta = math.acos(0.6)
    c = _check_window(n, theta)
    alpha = 1.0 / (2 * n * c)
    claims: List[Claim] = []
    for sgn, tag in ((1, "+theta"), (-1, "-theta")):
        T = Scale(alpha, Rotation(sgn * theta))
        claims.append(Claim(f"alpha R_{tag} firmly nonexpansive", True,
                            certify_fne(T, cfg)))
    for sgn, tag in ((1, "+theta"), (-1, "-theta")):
        T = Scale(n * alpha, Rotation(sgn * theta))
        claims.append(Claim(f"n alpha R_{tag} firmly nonexpansive", False,
                            certify_fne(T, cfg)))
    total = Sum((Scale(n * alpha, Rotation(theta)),
                 Scale(n * alpha, Rotation(-theta))))
    parts = linearize(total)
    identity_dev = float(np.max(np.abs(parts.matrix - np.eye(2))))
    claims.append(Claim("n alpha (R_theta + R_-theta) equals Id to 1e-12",
                        True, identity_dev <= 1e-12))
    return GalleryResult(
        "rotation_construction", tuple(claims),
        params={"n": n, "cos_theta": c, "alpha": alpha,
                "identity_deviation": identity_dev},
    )


def partial_sum_failure(
    n: int = 2,
    theta: Optional[float] = None,
    cfg: Optional[SamplerConfig] = None,
) -> GalleryResult:
    """Partition of the identity by 2n scaled rotators whose first prefix of
    length n fails firm nonexpansiveness."""
    if theta is None:
        theta = math.acos(0.6)
    c = _check_window(n, theta)
    alpha = 1.0 / (2 * n * c)
    terms = [Scale(alpha, Rotation(theta))] * n + [Scale(alpha, Rotation(-theta))] * n
    claims: List[Claim] = []
    for i, T in enumerate(terms):
        claims.append(Claim(f"T_{i + 1} firmly nonexpansive", True,
                            certify_fne(T, cfg)))
    total = linearize(Sum(tuple(terms)))
    claims.append(Claim("sum of all 2n terms equals Id to 1e-12", True,
                        float(np.max(np.abs(total.matrix - np.eye(2)))) <= 1e-12))
    prefix = Scale(n * alpha, Rotation(theta))
    prefix_cert = certify_fne(prefix, cfg)
    claims.append(Claim("prefix sum T_1 + ... + T_n firmly nonexpansive",
                        False, prefix_cert))
    margin = None
    if prefix_cert.detail:
        margin = prefix_cert.detail.get("norm_2T_minus_I", 0.0) - 1.0
    return GalleryResult(
        "partial_sum_failure", tuple(claims),
        params={"n": n, "cos_theta": c, "alpha": alpha,
                "falsification_margin": margin},
    )


def transitivity_failure(cfg: Optional[SamplerConfig] = None) -> GalleryResult:
    """T1 <= T2 <= T3 with T1 not<= T3: the order is not transitive on FNE maps."""
    theta = math.acos(0.6)
    alpha = 1.0 / (4 * 0.6)  # n = 2
    R = Scale(alpha, Rotation(theta))
    S = Scale(alpha, Rotation(-theta))
    T1 = S
    T2 = Sum((R, S))
    T3 = Sum((Scale(2.0, R), S))
    claims = [
        Claim("T1 firmly nonexpansive", True, certify_fne(T1, cfg)),
        Claim("T2 firmly nonexpansive", True, certify_fne(T2, cfg)),
        Claim("T3 firmly nonexpansive", True, certify_fne(T3, cfg)),
        Claim("T1 <= T2", True, resolvent_leq(T1, T2, cfg)),
        Claim("T2 <= T3", True, resolvent_leq(T2, T3, cfg)),
        Claim("T1 <= T3", False, resolvent_leq(T1, T3, cfg)),
    ]
    two_r_two_s = linearize(Sum((Scale(2.0, R), Scale(2.0, S))))
    claims.append(Claim("2R + 2S equals Id to 1e-12", True,
                        float(np.max(np.abs(two_r_two_s.matrix - np.eye(2)))) <= 1e-12))
    mid = linearize(Difference(T2, Scale(0.5, Sum((T1, T3)))))
    claims.append(Claim("T2 equals (T1 + T3)/2 to 1e-12", True,
                        float(np.max(np.abs(mid.matrix))) <= 1e-12))
    return GalleryResult(
        "transitivity_failure", tuple(claims),
        params={"cos_theta": 0.6, "alpha": alpha},
    )


def ball_chain(n_max: int = 8, cfg: Optional[SamplerConfig] = None) -> GalleryResult:
    """Iterates of T = Id - P_ball: T^n = Id - P_{n ball}, a decreasing chain."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    cfg = cfg or SamplerConfig()
    dim = 2
    T = Difference(Identity(dim), ProxOf(IndicatorBall(np.zeros(dim), 1.0)))
    powers = [compose_power(T, n) for n in range(n_max + 1)]

    def scaled_ball_map(n: int):
        # Id - P_{nC}; n = 0 gives Id - P_{0} = Id
        if n == 0:
            return Identity(dim)
        return Difference(Identity(dim), ProxOf(IndicatorBall(np.zeros(dim), float(n))))

    claims: List[Claim] = []
    for n in range(n_max + 1):
        ref = scaled_ball_map(n)
        worst = 0.0
        for i in range(cfg.n_pairs):
            x = sample_point(cfg.seed, i, dim, cfg.radius)
            worst = max(worst, float(np.linalg.norm(
                evaluate(powers[n], x) - evaluate(ref, x))))
        claims.append(Claim(
            f"T^{n} equals Id - P_(({n})ball) on samples to 1e-9",
            True, worst <= 1e-9))
    for n in range(n_max):
        claims.append(Claim(
            f"T^{n + 1} <= T^{n}", True,
            resolvent_leq(powers[n + 1], powers[n], cfg)))
    # T^n - T^(n+1) = P_((n+1)C) - P_(nC): itself a prox difference, FNE
    for n in range(n_max):
        diff = Difference(powers[n], powers[n + 1])
        claims.append(Claim(
            f"T^{n} - T^{n + 1} firmly nonexpansive", True,
            certify_fne(diff, cfg)))
    return GalleryResult("ball_chain", tuple(claims), params={"n_max": n_max})


def prox_partition_partial_sums(
    Ms: Sequence[np.ndarray], m: Optional[int] = None,
    cfg: Optional[SamplerConfig] = None,
) -> GalleryResult:
    """Symmetric PSD partition of the identity: every prefix sum stays FNE."""
    mats = [np.asarray(M, float) for M in Ms]
    if not mats:
        raise PartitionInvalid("empty partition")
    n = mats[0].shape[0]
    total = sum(mats)
    if float(np.max(np.abs(total - np.eye(n)))) > 1e-10:
        raise PartitionInvalid("matrices do not sum to the identity")
    for i, M in enumerate(mats):
        if float(np.max(np.abs(M - M.T))) > 1e-10:
            raise PartitionInvalid(f"matrix {i} is not symmetric")
        eigs = np.linalg.eigvalsh(0.5 * (M + M.T))
        if eigs[0] < -1e-10 or eigs[-1] > 1 + 1e-10:
            raise PartitionInvalid(f"matrix {i} has eigenvalues outside [0, 1]")
    prefixes = range(1, (m or len(mats)) + 1)
    claims: List[Claim] = []
    for i, M in enumerate(mats):
        claims.append(Claim(f"M_{i + 1} firmly nonexpansive", True,
                            certify_fne(Linear(M), cfg)))
    for k in prefixes:
        P = sum(mats[:k])
        claims.append(Claim(f"prefix M_1 + ... + M_{k} firmly nonexpansive",
                            True, certify_fne(Linear(P), cfg)))
    return GalleryResult("prox_partition_partial_sums", tuple(claims),
                         params={"count": len(mats)})


def antisymmetry_failure(
    x1=(0.0, 0.0), x2=(1.0, 0.0), cfg: Optional[SamplerConfig] = None
) -> GalleryResult:
    """Two distinct constant maps ordered both ways: antisymmetry fails."""
    cfg = cfg or SamplerConfig()
    x1 = np.asarray(x1, float)
    x2 = np.asarray(x2, float)
    T1, T2 = Constant(x1), Constant(x2)
    distinct = bool(np.linalg.norm(x2 - x1) > 0)
    claims = [
        Claim("operands are distinct (else not a counterexample)", True, distinct),
        Claim("T1 <= T2", True, resolvent_leq(T1, T2, cfg)),
        Claim("T2 <= T1", True, resolvent_leq(T2, T1, cfg)),
        Claim("difference is a constant map", True,
              certify_constant(Difference(T2, T1), cfg)),
        Claim("difference firmly nonexpansive", True,
              certify_fne(Difference(T2, T1), cfg)),
    ]
    return GalleryResult("antisymmetry_failure", tuple(claims),
                         params={"x1": x1.tolist(), "x2": x2.tolist()})


def _default_partition() -> List[np.ndarray]:
    return [np.diag([0.5, 0.2]), np.diag([0.3, 0.3]), np.diag([0.2, 0.5])]


GALLERY: Dict[str, Callable[..., GalleryResult]] = {
    "rotation_construction": rotation_construction,
    "partial_sum_failure": partial_sum_failure,
    "transitivity_failure": transitivity_failure,
    "ball_chain": ball_chain,
    "prox_partition_partial_sums":
        lambda cfg=None, **kw: prox_partition_partial_sums(
            _default_partition(), cfg=cfg, **kw),
    "antisymmetry_failure": antisymmetry_failure,
}


def run_item(name: str, cfg: Optional[SamplerConfig] = None, **kwargs) -> GalleryResult:
    try:
        fn = GALLERY[name]
    except KeyError:
        raise KeyError(f"unknown gallery item {name!r}") from None
    return fn(cfg=cfg, **kwargs)
