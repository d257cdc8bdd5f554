"""Numerical toolkit for the resolvent order on firmly nonexpansive mappings.

Certifies and falsifies order relations among firmly nonexpansive maps,
proximal mappings, projectors onto convex cones, and positive semidefinite
matrices, with exact spectral paths for affine operators and seeded sampling
for everything else.
"""

__version__ = "0.1.0"

from .certify import Certificate, SamplerConfig, certify_fne, resolvent_leq
from .linops import (
    Compose,
    Constant,
    Difference,
    Identity,
    Linear,
    ProxOf,
    ResolventOf,
    Rotation,
    Scale,
    Sum,
    Zero,
    evaluate,
    linearize,
    spectrum,
)
from .prox_catalog import (
    IndicatorBall,
    IndicatorOrthant,
    IndicatorPoint,
    IndicatorPolarRay,
    IndicatorRay,
    IndicatorSOC,
    IndicatorSubspace,
    L1Norm,
    L2Norm,
    LinearFunc,
    Quadratic,
    Shifted,
    ZeroFunction,
    conjugate_prox,
    envelope,
    fn_value,
    polar,
    prox,
)
from .resolvent_calculus import MonotoneMatrix, loewner_leq, resolvent

__all__ = [name for name in dir() if not name.startswith("_")]
