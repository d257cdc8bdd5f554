"""Equivalence relations behind the quotient partial orders.

Maps are identified when they differ by a constant; monotone matrices when
their graphs differ by a shift (c, -c); convex functions when they differ
by a translate-and-tilt g(x) = f(x - c) - <c, x> + gamma.  Witness shifts
are supplied by the caller and verified, never fitted from data.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .certify import (
    CERTIFIED_EXACT,
    CONSTANT,
    FALSIFIED,
    SAMPLED_PASS,
    Certificate,
    SamplerConfig,
    resolvent_leq,
    sample_point,
)
from .linops import (
    DimensionMismatch,
    OperatorExpr,
    as_vector,
    evaluate,
    linearize,
)
from .prox_catalog import ConvexAtom, Shifted, brute_force_prox, fn_value, prox
from .orders import function_leq


@dataclass(frozen=True, eq=False)
class EquivalenceWitness:
    kind: str  # "constant_shift" | "graph_shift" | "function_shift"
    c: np.ndarray
    gamma: Optional[float] = None
    residual: float = 0.0


@dataclass(frozen=True, eq=False)
class NotEquivalent:
    residual: float
    worst_x: np.ndarray


def equivalent_fne(
    T1: OperatorExpr, T2: OperatorExpr, cfg: Optional[SamplerConfig] = None
) -> Union[EquivalenceWitness, NotEquivalent]:
    """Is T2 - T1 a constant map?  Exact when both linearize, else sampled.

    The constant is probed at x0 = 0 and verified on points excluding x0.
    """
    if T1.dim != T2.dim:
        raise DimensionMismatch("operands disagree on dim")
    cfg = cfg or SamplerConfig()
    dim = T1.dim

    p1, p2 = linearize(T1), linearize(T2)
    if p1 is not None and p2 is not None:
        dev = float(np.max(np.abs(p2.matrix - p1.matrix)))
        if dev <= 1e-10:
            return EquivalenceWitness(
                "constant_shift", p2.offset - p1.offset, residual=dev)
        # worst direction of the differing linear parts
        _, _, Vt = np.linalg.svd(p2.matrix - p1.matrix)
        return NotEquivalent(dev, Vt[0])

    x0 = np.zeros(dim)
    c = evaluate(T2, x0) - evaluate(T1, x0)
    worst, worst_x = 0.0, x0
    for i in range(cfg.n_pairs):
        x = sample_point(cfg.seed, i, dim, cfg.radius)
        if not np.any(x):
            continue  # verification set excludes the probe point
        dev = float(np.linalg.norm(
            evaluate(T2, x) - evaluate(T1, x) - c))
        if dev > worst:
            worst, worst_x = dev, x
    if worst <= 1e-8:
        return EquivalenceWitness("constant_shift", c, residual=worst)
    return NotEquivalent(worst, worst_x)


@dataclass(frozen=True, eq=False)
class AntisymmetryRecord:
    forward: Certificate
    backward: Certificate
    equivalence: Union[EquivalenceWitness, NotEquivalent, None]

    @property
    def both_ordered(self) -> bool:
        return self.forward.holds and self.backward.holds

    @property
    def holds(self) -> bool:
        """Antisymmetry in the quotient: mutual order forces equivalence."""
        if not self.both_ordered:
            return True  # vacuous
        return isinstance(self.equivalence, EquivalenceWitness)


def antisymmetry_in_quotient(
    T1: OperatorExpr, T2: OperatorExpr, cfg: Optional[SamplerConfig] = None
) -> AntisymmetryRecord:
    cfg = cfg or SamplerConfig()
    fwd = resolvent_leq(T1, T2, cfg)
    bwd = resolvent_leq(T2, T1, cfg)
    eq = equivalent_fne(T1, T2, cfg) if (fwd.holds and bwd.holds) else None
    return AntisymmetryRecord(fwd, bwd, eq)


def graph_shift_check(
    A, c, cfg: Optional[SamplerConfig] = None
) -> Certificate:
    """For B' : x -> -c + A(x - c), verify J_B' = c + J_A pointwise and the
    graph containment gr B' = (c, -c) + gr A, on sampled points to 1e-9."""
    from .resolvent_calculus import MonotoneMatrix, resolvent

    if not isinstance(A, MonotoneMatrix):
        A = MonotoneMatrix.of(A)
    c = as_vector(c, A.dim)
    cfg = cfg or SamplerConfig()
    JA = resolvent(A)
    IpA = np.eye(A.dim) + A.A

    worst = 0.0
    for i in range(cfg.n_pairs):
        x = sample_point(cfg.seed, i, A.dim, cfg.radius)
        # resolvent of the affine operator: solve y + B'(y) = x directly
        y = np.linalg.solve(IpA, x + c + A.A @ c)
        worst = max(worst, float(np.linalg.norm(y - (c + JA @ x))))
        # graph containment: (x, B'x) - (c, -c) must lie on gr A
        bpx = -c + A.A @ (x - c)
        worst = max(worst, float(np.linalg.norm((bpx + c) - A.A @ (x - c))))
    verdict = CERTIFIED_EXACT if worst <= 1e-9 else FALSIFIED
    return Certificate(
        verdict, CONSTANT, 1e-9, seed=cfg.seed, n_pairs=cfg.n_pairs,
        worst_margin=-worst,
        violation=None if verdict == CERTIFIED_EXACT else worst,
        witness=None if verdict == CERTIFIED_EXACT else (c, c),
        detail={"worst_deviation": worst},
    )


def function_shift_verify(
    f: ConvexAtom, c, gamma: float, cfg: Optional[SamplerConfig] = None,
    brute_force_points: int = 4000,
) -> Certificate:
    """Build g(x) = f(x - c) - <c, x> + gamma and verify the shift identities:
    values match the formula, prox shifts by the predicted constant (checked
    against the brute-force oracle), and f ~ g under the induced order."""
    c = as_vector(c, f.dim)
    cfg = cfg or SamplerConfig()
    g = Shifted(f, c, gamma)
    worst = 0.0

    for i in range(cfg.n_pairs):
        x = sample_point(cfg.seed, i, f.dim, cfg.radius)
        base_val = fn_value(f, x - c)
        if np.isfinite(base_val):
            dev = abs(fn_value(g, x) - (base_val - float(c @ x) + gamma))
            worst = max(worst, dev)
        worst = max(worst, float(np.linalg.norm(
            prox(g, x) - (prox(f, x) + c))))

    # optimality of the shifted prox against the independent search
    n_checks = min(8, cfg.n_pairs)
    for i in range(n_checks):
        x = sample_point(cfg.seed + 10_000, i, f.dim, 3.0)
        p = prox(g, x)
        obj_p = fn_value(g, p) + 0.5 * float((x - p) @ (x - p))
        _, best = brute_force_prox(g, x, n_points=brute_force_points,
                                   seed=cfg.seed + i)
        worst = max(worst, max(0.0, obj_p - best - 1e-6))

    fwd = function_leq(f, g, cfg)
    bwd = function_leq(g, f, cfg)
    ordered_both_ways = fwd.holds and bwd.holds

    ok = worst <= 1e-6 and ordered_both_ways
    verdict = (CERTIFIED_EXACT if ok and fwd.exact and bwd.exact
               else SAMPLED_PASS if ok else FALSIFIED)
    return Certificate(
        verdict, CONSTANT, 1e-6, seed=cfg.seed, n_pairs=cfg.n_pairs,
        worst_margin=-worst,
        violation=None if ok else max(worst, 1e-6),
        witness=None if ok else (c, c),
        detail={
            "worst_deviation": worst,
            "ordered_both_ways": ordered_both_ways,
        },
    )
