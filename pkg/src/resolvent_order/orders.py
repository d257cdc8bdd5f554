"""Zarantonello's order on cone projectors, Moreau's order on envelopes, and
the induced orders on monotone matrices and convex functions.

The Zarantonello verdict evaluates all four textbook characterizations; the
overall verdict is the composition test (the definition), the other three
are cross-checks that must agree on exact cone pairs.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .certify import (
    CERTIFIED_EXACT,
    CONSTANT,
    EXACT_TOL,
    FALSIFIED,
    FNE,
    MONOTONE,
    SAMPLED_PASS,
    Certificate,
    SamplerConfig,
    certify_fne,
    certify_monotone,
    resolvent_leq,
    sample_point,
)
from .linops import Difference, DimensionMismatch, ProxOf
from .prox_catalog import ConvexAtom, UnsupportedCone, is_cone
from .resolvent_calculus import MonotoneMatrix, resolvent_expr

EQUALITY_TOL = 1e-9


def _require_cone(atom: ConvexAtom):
    if not is_cone(atom):
        raise UnsupportedCone(f"{type(atom).__name__} is not a supported cone")


def _mixed_points(cfg: SamplerConfig, dim: int, push_through: ConvexAtom):
    """Half uniform in the ball, half pushed through the outer projector first.

    Composition identities are trivially true on fixed points; the pushed
    half exercises the nontrivial region.
    """
    for i in range(cfg.n_pairs):
        x = sample_point(cfg.seed, i, dim, cfg.radius)
        yield x if i % 2 == 0 else push_through.prox(x)


def _equality_cert(worst: float, witness, seed, n_pairs, decided_by="sampled") -> Certificate:
    if worst <= EQUALITY_TOL:
        return Certificate(
            SAMPLED_PASS if decided_by == "sampled" else CERTIFIED_EXACT,
            CONSTANT, EQUALITY_TOL, seed=seed, n_pairs=n_pairs,
            worst_margin=-worst, decided_by=decided_by,
        )
    return Certificate(
        FALSIFIED, CONSTANT, EQUALITY_TOL, seed=seed, n_pairs=n_pairs,
        worst_margin=-worst, witness=witness, violation=worst,
        decided_by=decided_by,
    )


@dataclass(frozen=True, eq=False)
class ZarantonelloVerdict:
    composition_holds: Certificate       # P_C o P_D = P_C
    difference_is_projector: Certificate  # idempotence + FNE of P_D - P_C
    commutation_holds: Certificate        # P_C P_D = P_D P_C
    inner_product_dominance: Certificate  # <x, P_C x> <= <x, P_D x>

    @property
    def holds(self) -> bool:
        return self.composition_holds.holds

    @property
    def consistent(self) -> bool:
        # the equivalent characterizations are: composition, difference is a
        # projector, and (commutation AND dominance) jointly; commutation
        # alone is weaker (orthogonal subspaces commute without being ordered)
        h = self.holds
        joint = self.commutation_holds.holds and self.inner_product_dominance.holds
        return self.difference_is_projector.holds == h and joint == h


def zarantonello_leq(
    C: ConvexAtom, D: ConvexAtom, cfg: Optional[SamplerConfig] = None
) -> ZarantonelloVerdict:
    """P_C <=_Z P_D, i.e. P_C P_D = P_C, with the three cross-characterizations.

    Linear projector pairs (subspaces, {0}, full space) decide exactly;
    everything else is sampled with the mixed sampler.
    """
    _require_cone(C)
    _require_cone(D)
    if C.dim != D.dim:
        raise DimensionMismatch("cones disagree on dim")
    cfg = cfg or SamplerConfig()
    dim = C.dim

    pc = C.prox_affine_parts()
    pd = D.prox_affine_parts()
    if pc is not None and pd is not None:
        PC, PD = pc[0], pd[0]
        comp = _equality_cert(
            float(np.max(np.abs(PC @ PD - PC))), None, None, None, "exact")
        comm = _equality_cert(
            float(np.max(np.abs(PC @ PD - PD @ PC))), None, None, None, "exact")
        Q = PD - PC
        idem = float(np.max(np.abs(Q @ Q - Q)))
        fne = certify_fne(Difference(ProxOf(D), ProxOf(C)))
        if idem <= EQUALITY_TOL and fne.holds:
            diff_proj = Certificate(
                CERTIFIED_EXACT, FNE, EQUALITY_TOL, worst_margin=-idem,
                detail={"idempotence_defect": idem},
            )
        else:
            diff_proj = Certificate(
                FALSIFIED, FNE, EQUALITY_TOL, worst_margin=-idem,
                witness=fne.witness or (np.zeros(dim), np.zeros(dim)),
                violation=max(idem, fne.violation or 0.0),
                detail={"idempotence_defect": idem},
            )
        lam_min = float(np.min(np.linalg.eigvalsh(0.5 * (Q + Q.T))))
        if lam_min >= -EXACT_TOL:
            dom = Certificate(CERTIFIED_EXACT, MONOTONE, EXACT_TOL,
                              worst_margin=lam_min)
        else:
            eigvals, eigvecs = np.linalg.eigh(0.5 * (Q + Q.T))
            dom = Certificate(
                FALSIFIED, MONOTONE, EXACT_TOL, worst_margin=lam_min,
                witness=(eigvecs[:, 0], np.zeros(dim)), violation=-lam_min,
            )
        return ZarantonelloVerdict(comp, diff_proj, comm, dom)

    # sampled path
    def proj_c(x):
        return C.prox(x)

    def proj_d(x):
        return D.prox(x)

    comp_worst, comp_wit = 0.0, None
    comm_worst, comm_wit = 0.0, None
    idem_worst, idem_wit = 0.0, None
    dom_worst, dom_wit = np.inf, None
    for x in _mixed_points(cfg, dim, D):
        pdx = proj_d(x)
        pcx = proj_c(x)
        dev = float(np.linalg.norm(proj_c(pdx) - pcx))
        if dev > comp_worst:
            comp_worst, comp_wit = dev, (x, pdx)
        dev = float(np.linalg.norm(proj_c(pdx) - proj_d(pcx)))
        if dev > comm_worst:
            comm_worst, comm_wit = dev, (x, x)
        qx = pdx - pcx
        qqx = proj_d(qx) - proj_c(qx)
        dev = float(np.linalg.norm(qqx - qx))
        if dev > idem_worst:
            idem_worst, idem_wit = dev, (x, qx)
        m = float(x @ pdx - x @ pcx)
        if m < dom_worst:
            dom_worst, dom_wit = m, (x, x)

    comp = _equality_cert(comp_worst, comp_wit, cfg.seed, cfg.n_pairs)
    comm = _equality_cert(comm_worst, comm_wit, cfg.seed, cfg.n_pairs)

    fne = certify_fne(Difference(ProxOf(D), ProxOf(C)), cfg)
    if idem_worst <= EQUALITY_TOL and fne.holds:
        diff_proj = Certificate(
            SAMPLED_PASS, FNE, EQUALITY_TOL, seed=cfg.seed, n_pairs=cfg.n_pairs,
            worst_margin=-idem_worst, decided_by="sampled",
            detail={"idempotence_defect": idem_worst},
        )
    else:
        diff_proj = Certificate(
            FALSIFIED, FNE, EQUALITY_TOL, seed=cfg.seed, n_pairs=cfg.n_pairs,
            worst_margin=-idem_worst,
            witness=idem_wit if idem_worst > EQUALITY_TOL else fne.witness,
            violation=max(idem_worst, fne.violation or 0.0),
            decided_by="sampled",
            detail={"idempotence_defect": idem_worst},
        )

    if dom_worst >= -cfg.tolerance:
        dom = Certificate(
            SAMPLED_PASS, MONOTONE, cfg.tolerance, seed=cfg.seed,
            n_pairs=cfg.n_pairs, worst_margin=float(dom_worst),
            decided_by="sampled",
        )
    else:
        dom = Certificate(
            FALSIFIED, MONOTONE, cfg.tolerance, seed=cfg.seed,
            n_pairs=cfg.n_pairs, worst_margin=float(dom_worst),
            witness=dom_wit, violation=float(-dom_worst), decided_by="sampled",
        )
    return ZarantonelloVerdict(comp, diff_proj, comm, dom)


@dataclass(frozen=True)
class ZarantonelloResolventReport:
    zarantonello_holds: bool
    resolvent_holds: bool

    @property
    def agree(self) -> bool:
        return self.zarantonello_holds == self.resolvent_holds


def zarantonello_vs_resolvent(
    C: ConvexAtom, D: ConvexAtom, cfg: Optional[SamplerConfig] = None
) -> ZarantonelloResolventReport:
    """Compatibility of the two orders on cone projectors: verdicts must agree."""
    cfg = cfg or SamplerConfig()
    z = zarantonello_leq(C, D, cfg)
    r = resolvent_leq(ProxOf(C), ProxOf(D), cfg)
    return ZarantonelloResolventReport(z.holds, r.holds)


def moreau_leq_envelopes(
    f: ConvexAtom, g: ConvexAtom, cfg: Optional[SamplerConfig] = None
) -> Certificate:
    """env g <=_M env f, decided via monotonicity of P_g - P_f."""
    if f.dim != g.dim:
        raise DimensionMismatch("atoms disagree on dim")
    cfg = cfg or SamplerConfig()
    cert = certify_monotone(Difference(ProxOf(g), ProxOf(f)), cfg)
    return replace(cert, decided_by="prox_difference_monotone/" + cert.decided_by)


def monotone_operator_leq(
    B: MonotoneMatrix, A: MonotoneMatrix, cfg: Optional[SamplerConfig] = None
) -> Certificate:
    """B <= A as monotone operators, i.e. J_A <= J_B in the resolvent order."""
    if B.dim != A.dim:
        raise DimensionMismatch("matrices disagree on size")
    cfg = cfg or SamplerConfig()
    return resolvent_leq(resolvent_expr(A), resolvent_expr(B), cfg)


def function_leq(
    g: ConvexAtom, f: ConvexAtom, cfg: Optional[SamplerConfig] = None
) -> Certificate:
    """g <= f on convex functions, i.e. P_f <= P_g in the resolvent order."""
    if g.dim != f.dim:
        raise DimensionMismatch("atoms disagree on dim")
    cfg = cfg or SamplerConfig()
    return resolvent_leq(ProxOf(f), ProxOf(g), cfg)
