"""Loader and serializer for the JSON operator/function spec files.

Top level: {"dim": int, "operators": {name: expr}, "functions": {name: atom}}.
Expression and atom objects are tagged with a "kind" string; unknown kinds
are rejected with the path into the document.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Dict

import numpy as np

from .linops import (
    Compose,
    Constant,
    Difference,
    Identity,
    Linear,
    OperatorExpr,
    ProxOf,
    ResolventOf,
    Rotation,
    Scale,
    Sum,
    Zero,
)
from .prox_catalog import (
    ConvexAtom,
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
)


class ParseError(ValueError):
    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


class UnknownName(KeyError):
    pass


@dataclass(frozen=True, eq=False)
class SpecDocument:
    dim: int
    operators: Dict[str, OperatorExpr]
    functions: Dict[str, ConvexAtom]

    def operator(self, name: str) -> OperatorExpr:
        if name in self.operators:
            return self.operators[name]
        if name in self.functions:
            return ProxOf(self.functions[name])
        raise UnknownName(f"unknown operator {name!r}")

    def function(self, name: str) -> ConvexAtom:
        try:
            return self.functions[name]
        except KeyError:
            raise UnknownName(f"unknown function {name!r}") from None


def _need(obj: dict, key: str, path: str):
    if key not in obj:
        raise ParseError(path, f"missing field {key!r}")
    return obj[key]


def parse_atom(obj, dim: int, path: str) -> ConvexAtom:
    if not isinstance(obj, dict):
        raise ParseError(path, "atom must be an object")
    kind = _need(obj, "kind", path)
    try:
        if kind == "zero":
            return ZeroFunction(dim)
        if kind == "point":
            return IndicatorPoint(np.asarray(_need(obj, "p", path), float))
        if kind == "ball":
            return IndicatorBall(
                np.asarray(obj.get("center", [0.0] * dim), float),
                float(_need(obj, "radius", path)),
            )
        if kind == "subspace":
            basis = np.asarray(_need(obj, "basis", path), float)
            # rows of the JSON array are the basis vectors
            return IndicatorSubspace(dim, basis.reshape(-1, dim).T)
        if kind == "orthant":
            return IndicatorOrthant(dim, int(obj.get("sign", 1)))
        if kind == "soc":
            return IndicatorSOC(dim, bool(obj.get("negated", False)))
        if kind == "ray":
            return IndicatorRay(np.asarray(_need(obj, "direction", path), float))
        if kind == "polar_ray":
            return IndicatorPolarRay(np.asarray(_need(obj, "direction", path), float))
        if kind == "quadratic":
            return Quadratic(np.asarray(_need(obj, "matrix", path), float))
        if kind == "l1":
            return L1Norm(dim, float(_need(obj, "lam", path)))
        if kind == "l2":
            return L2Norm(dim, float(_need(obj, "lam", path)))
        if kind == "linear_func":
            return LinearFunc(np.asarray(_need(obj, "a", path), float))
        if kind == "shifted":
            base = parse_atom(_need(obj, "base", path), dim, path + ".base")
            return Shifted(
                base,
                np.asarray(_need(obj, "c", path), float),
                float(obj.get("gamma", 0.0)),
            )
    except ParseError:
        raise
    except Exception as exc:
        raise ParseError(path, str(exc)) from exc
    raise ParseError(path + ".kind", f"unknown atom kind {kind!r}")


def parse_expr(obj, dim: int, path: str, functions: Dict[str, ConvexAtom]) -> OperatorExpr:
    if not isinstance(obj, dict):
        raise ParseError(path, "expression must be an object")
    kind = _need(obj, "kind", path)
    try:
        if kind == "identity":
            return Identity(dim)
        if kind == "zero":
            return Zero(dim)
        if kind == "constant":
            return Constant(np.asarray(_need(obj, "c", path), float))
        if kind == "linear":
            return Linear(np.asarray(_need(obj, "matrix", path), float))
        if kind == "rotation":
            return Rotation(float(_need(obj, "theta", path)))
        if kind == "prox":
            atom = _need(obj, "atom", path)
            if isinstance(atom, str):
                if atom not in functions:
                    raise ParseError(path + ".atom", f"unknown function {atom!r}")
                return ProxOf(functions[atom])
            return ProxOf(parse_atom(atom, dim, path + ".atom"))
        if kind == "resolvent":
            return ResolventOf(np.asarray(_need(obj, "matrix", path), float))
        if kind == "scale":
            child = parse_expr(_need(obj, "child", path), dim, path + ".child", functions)
            return Scale(float(_need(obj, "alpha", path)), child)
        if kind == "sum":
            children = _need(obj, "children", path)
            return Sum(tuple(
                parse_expr(ch, dim, f"{path}.children[{i}]", functions)
                for i, ch in enumerate(children)
            ))
        if kind == "difference":
            return Difference(
                parse_expr(_need(obj, "left", path), dim, path + ".left", functions),
                parse_expr(_need(obj, "right", path), dim, path + ".right", functions),
            )
        if kind == "compose":
            return Compose(
                parse_expr(_need(obj, "outer", path), dim, path + ".outer", functions),
                parse_expr(_need(obj, "inner", path), dim, path + ".inner", functions),
            )
    except ParseError:
        raise
    except Exception as exc:
        raise ParseError(path, str(exc)) from exc
    raise ParseError(path + ".kind", f"unknown expression kind {kind!r}")


def load_spec(path: str) -> SpecDocument:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError("$", f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("$", "document must be an object")
    dim = _need(doc, "dim", "$")
    if not isinstance(dim, int) or dim < 1:
        raise ParseError("$.dim", "dim must be a positive integer")
    functions: Dict[str, ConvexAtom] = {}
    for name, obj in doc.get("functions", {}).items():
        functions[name] = parse_atom(obj, dim, f"$.functions.{name}")
    operators: Dict[str, OperatorExpr] = {}
    for name, obj in doc.get("operators", {}).items():
        operators[name] = parse_expr(obj, dim, f"$.operators.{name}", functions)
    return SpecDocument(dim, operators, functions)


# ---------------------------------------------------------------------------
# Serialization (round-trip support)
# ---------------------------------------------------------------------------


def atom_to_json(atom: ConvexAtom) -> dict:
    if isinstance(atom, ZeroFunction):
        return {"kind": "zero"}
    if isinstance(atom, IndicatorPoint):
        return {"kind": "point", "p": atom.p.tolist()}
    if isinstance(atom, IndicatorBall):
        return {"kind": "ball", "center": atom.center.tolist(),
                "radius": atom.radius}
    if isinstance(atom, IndicatorSubspace):
        return {"kind": "subspace", "basis": atom.basis.T.tolist()}
    if isinstance(atom, IndicatorOrthant):
        return {"kind": "orthant", "sign": atom.sign}
    if isinstance(atom, IndicatorSOC):
        return {"kind": "soc", "negated": atom.negated}
    if isinstance(atom, IndicatorRay):
        return {"kind": "ray", "direction": atom.direction.tolist()}
    if isinstance(atom, IndicatorPolarRay):
        return {"kind": "polar_ray", "direction": atom.direction.tolist()}
    if isinstance(atom, Quadratic):
        return {"kind": "quadratic", "matrix": atom.A.tolist()}
    if isinstance(atom, L1Norm):
        return {"kind": "l1", "lam": atom.lam}
    if isinstance(atom, L2Norm):
        return {"kind": "l2", "lam": atom.lam}
    if isinstance(atom, LinearFunc):
        return {"kind": "linear_func", "a": atom.a.tolist()}
    if isinstance(atom, Shifted):
        return {"kind": "shifted", "base": atom_to_json(atom.base),
                "c": atom.c.tolist(), "gamma": atom.gamma}
    raise TypeError(f"cannot serialize atom {type(atom).__name__}")


def expr_to_json(op: OperatorExpr) -> dict:
    if isinstance(op, Identity):
        return {"kind": "identity"}
    if isinstance(op, Zero):
        return {"kind": "zero"}
    if isinstance(op, Constant):
        return {"kind": "constant", "c": op.c.tolist()}
    if isinstance(op, Linear):
        return {"kind": "linear", "matrix": op.M.tolist()}
    if isinstance(op, Rotation):
        return {"kind": "rotation", "theta": op.theta}
    if isinstance(op, ProxOf):
        return {"kind": "prox", "atom": atom_to_json(op.atom)}
    if isinstance(op, ResolventOf):
        return {"kind": "resolvent", "matrix": op.A.tolist()}
    if isinstance(op, Scale):
        return {"kind": "scale", "alpha": op.alpha, "child": expr_to_json(op.child)}
    if isinstance(op, Sum):
        return {"kind": "sum", "children": [expr_to_json(k) for k in op.children]}
    if isinstance(op, Difference):
        return {"kind": "difference", "left": expr_to_json(op.left),
                "right": expr_to_json(op.right)}
    if isinstance(op, Compose):
        return {"kind": "compose", "outer": expr_to_json(op.outer),
                "inner": expr_to_json(op.inner)}
    raise TypeError(f"cannot serialize operator {type(op).__name__}")
