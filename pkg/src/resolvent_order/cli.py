"""Command-line front end: order queries, single-operator certification, and
gallery reproductions.

Machine-readable JSON goes to stdout; human-readable tables go to stderr so
the output is pipeline-safe.  Exit codes: 0 certified/pass, 1 falsified,
2 error.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from typing import Optional

import numpy as np

from .certify import (
    Certificate,
    SamplerConfig,
    certify,
    resolvent_leq,
)
from .gallery import GALLERY, ThetaOutsideWindow, run_item
from .linops import DimensionMismatch, linearize
from .orders import (
    function_leq,
    monotone_operator_leq,
    moreau_leq_envelopes,
    zarantonello_leq,
)
from .prox_catalog import UnsupportedCone
from .quotient import EquivalenceWitness, equivalent_fne
from .report import (
    certificate_to_json,
    dumps,
    gallery_result_to_json,
    order_report,
    verdict_string,
)
from .resolvent_calculus import MonotoneMatrix, loewner_leq, NotSymmetric
from .specfile import ParseError, UnknownName, load_spec

DEFAULT_SEED = 42
RELATIONS = (
    "resolvent", "loewner", "zarantonello", "moreau",
    "monotone_op", "function", "equivalence",
)
PROPERTIES = ("fne", "nonexpansive", "monotone", "constant")


def _effective_seed(flag_seed: Optional[int]) -> int:
    if flag_seed is not None:
        return flag_seed
    env = os.environ.get("RESOLVENT_ORDER_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise SystemExit(f"RESOLVENT_ORDER_SEED is not an integer: {env!r}")
    return DEFAULT_SEED


def _config(args) -> SamplerConfig:
    return SamplerConfig(
        seed=_effective_seed(args.seed),
        n_pairs=args.pairs,
        tolerance=args.tol,
    )


def _emit(payload: dict, out: Optional[str]):
    text = dumps(payload)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    print(text)


def _matrix_operand(doc, name: str) -> np.ndarray:
    op = doc.operator(name)
    parts = linearize(op)
    if parts is None or np.any(parts.offset):
        raise NotSymmetric(f"operand {name!r} is not a linear matrix operator")
    return parts.matrix


def _run_check(args) -> int:
    cfg = _config(args)
    doc = load_spec(args.spec)
    relation, lhs, rhs = args.relation, args.lhs, args.rhs

    if relation == "resolvent":
        cert = resolvent_leq(doc.operator(lhs), doc.operator(rhs), cfg)
    elif relation == "loewner":
        cert = loewner_leq(_matrix_operand(doc, rhs), _matrix_operand(doc, lhs))
    elif relation == "zarantonello":
        verdict = zarantonello_leq(doc.function(lhs), doc.function(rhs), cfg)
        cert = verdict.composition_holds
    elif relation == "moreau":
        cert = moreau_leq_envelopes(doc.function(rhs), doc.function(lhs), cfg)
    elif relation == "monotone_op":
        cert = monotone_operator_leq(
            MonotoneMatrix.of(_matrix_operand(doc, lhs)),
            MonotoneMatrix.of(_matrix_operand(doc, rhs)),
            cfg,
        )
    elif relation == "function":
        cert = function_leq(doc.function(lhs), doc.function(rhs), cfg)
    elif relation == "equivalence":
        result = equivalent_fne(doc.operator(lhs), doc.operator(rhs), cfg)
        if isinstance(result, EquivalenceWitness):
            cert = Certificate(
                "certified_exact" if result.residual <= 1e-10 else "sampled_pass",
                "constant", 1e-8, seed=cfg.seed,
                worst_margin=-result.residual,
                detail={"shift": [float(t) for t in result.c]},
            )
        else:
            cert = Certificate(
                "falsified", "constant", 1e-8, seed=cfg.seed,
                worst_margin=-result.residual, violation=result.residual,
                witness=(result.worst_x, np.zeros_like(result.worst_x)),
            )
    else:  # pragma: no cover - argparse restricts choices
        raise SystemExit(f"unknown relation {relation!r}")

    report = order_report(relation, lhs, rhs, cert, cfg.seed)
    print(f"{relation}: {lhs} <= {rhs} -> {report['verdict']}", file=sys.stderr)
    _emit(report, args.out)
    return 0 if cert.holds else 1


def _run_certify(args) -> int:
    cfg = _config(args)
    doc = load_spec(args.spec)
    T = doc.operator(args.operator)
    cert = certify(args.property, T, cfg)
    payload = {
        "operator": args.operator,
        "property": args.property,
        "seed": cfg.seed,
        "certificate": certificate_to_json(cert),
        "verdict": verdict_string(cert),
    }
    print(f"certify {args.property}({args.operator}) -> {payload['verdict']}",
          file=sys.stderr)
    _emit(payload, args.out)
    return 0 if cert.holds else 1


def _run_reproduce(args) -> int:
    cfg = _config(args)
    names = list(GALLERY) if args.item == "all" else [args.item]
    for name in names:
        if name not in GALLERY:
            print(f"error: unknown gallery item {args.item!r}", file=sys.stderr)
            return 2
    kwargs = {}
    if args.n is not None:
        kwargs["n"] = args.n
    if args.cos_theta is not None:
        kwargs["theta"] = math.acos(args.cos_theta)
    results = []
    for name in names:
        item_kwargs = dict(kwargs)
        if name not in ("rotation_construction", "partial_sum_failure"):
            item_kwargs.pop("n", None)
            item_kwargs.pop("theta", None)
        if name == "ball_chain" and args.n_max is not None:
            item_kwargs["n_max"] = args.n_max
        results.append(run_item(name, cfg=cfg, **item_kwargs))

    for res in results:
        print(f"[{'PASS' if res.passed else 'FAIL'}] {res.name}", file=sys.stderr)
        for c in res.claims:
            mark = "ok " if c.ok else "BAD"
            print(f"  {mark} expected={c.expected!s:5} "
                  f"observed={c.observed_holds!s:5}  {c.description}",
                  file=sys.stderr)
    payload = {
        "items": [gallery_result_to_json(r) for r in results],
        "passed": all(r.passed for r in results),
        "seed": cfg.seed,
    }
    _emit(payload, args.out)
    return 0 if payload["passed"] else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="resolvent-order",
        description="Certify and falsify order relations among firmly "
                    "nonexpansive maps, proximal mappings, cone projectors, "
                    "and PSD matrices.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def sampling_flags(p):
        p.add_argument("--seed", type=int, default=None,
                       help="sampler seed (default 42; env RESOLVENT_ORDER_SEED)")
        p.add_argument("--pairs", type=int, default=1000)
        p.add_argument("--tol", type=float, default=1e-8)
        p.add_argument("--out", type=str, default=None,
                       help="also write the JSON report to this file")

    p_check = sub.add_parser("check", help="run an order query from a spec file")
    p_check.add_argument("--spec", required=True)
    p_check.add_argument("--relation", required=True, choices=RELATIONS)
    p_check.add_argument("--lhs", required=True)
    p_check.add_argument("--rhs", required=True)
    sampling_flags(p_check)

    p_cert = sub.add_parser("certify", help="certify one operator property")
    p_cert.add_argument("--spec", required=True)
    p_cert.add_argument("--operator", required=True)
    p_cert.add_argument("--property", required=True, choices=PROPERTIES)
    sampling_flags(p_cert)

    p_rep = sub.add_parser("reproduce", help="run gallery reproductions")
    p_rep.add_argument("item", help="gallery item name or 'all'")
    p_rep.add_argument("--n", type=int, default=None)
    p_rep.add_argument("--cos-theta", type=float, default=None, dest="cos_theta")
    p_rep.add_argument("--n-max", type=int, default=None, dest="n_max")
    sampling_flags(p_rep)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "check":
            return _run_check(args)
        if args.command == "certify":
            return _run_certify(args)
        return _run_reproduce(args)
    except ThetaOutsideWindow as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ParseError, UnknownName, DimensionMismatch,
            NotSymmetric, UnsupportedCone, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
