import json
import subprocess
import sys

import numpy as np
import pytest

from resolvent_order.linops import (
    Compose,
    Constant,
    Difference,
    Identity,
    Linear,
    ProxOf,
    Rotation,
    Scale,
    Sum,
    evaluate,
)
from resolvent_order.prox_catalog import IndicatorSOC, Quadratic, Shifted
from resolvent_order.specfile import (
    ParseError,
    UnknownName,
    atom_to_json,
    expr_to_json,
    load_spec,
    parse_atom,
    parse_expr,
)

SPEC = {
    "dim": 2,
    "functions": {
        "ball1": {"kind": "ball", "radius": 1.0},
        "ball2": {"kind": "ball", "radius": 2.0},
        "qA": {"kind": "quadratic", "matrix": [[2.0, 0.0], [0.0, 3.0]]},
        "qB": {"kind": "quadratic", "matrix": [[1.0, 0.0], [0.0, 1.0]]},
        "axis": {"kind": "subspace", "basis": [[1.0, 0.0]]},
        "plane": {"kind": "subspace", "basis": [[1.0, 0.0], [0.0, 1.0]]},
    },
    "operators": {
        "small": {"kind": "scale", "alpha": 0.25, "child": {"kind": "identity"}},
        "big": {"kind": "scale", "alpha": 0.75, "child": {"kind": "identity"}},
        "rotator": {
            "kind": "scale", "alpha": 0.4166666666666667,
            "child": {"kind": "rotation", "theta": 0.9272952180016122},
        },
        "shifted_small": {
            "kind": "sum",
            "children": [
                {"kind": "scale", "alpha": 0.25, "child": {"kind": "identity"}},
                {"kind": "constant", "c": [1.0, -1.0]},
            ],
        },
        "A": {"kind": "linear", "matrix": [[2.0, 0.0], [0.0, 3.0]]},
        "B": {"kind": "linear", "matrix": [[1.0, 0.0], [0.0, 1.0]]},
    },
}


@pytest.fixture
def spec_path(tmp_path):
    p = tmp_path / "spec.json"
    p.write_text(json.dumps(SPEC))
    return str(p)


def run_cli(*argv, env=None):
    import os

    full_env = dict(os.environ)
    if env:
        full_env.update(env)
    proc = subprocess.run(
        [sys.executable, "-m", "resolvent_order.cli", *argv],
        capture_output=True, text=True, env=full_env,
    )
    return proc


# --- exit-code contract ---------------------------------------------------------


def test_check_pass_exit_zero(spec_path):
    proc = run_cli("check", "--spec", spec_path, "--relation", "resolvent",
                   "--lhs", "small", "--rhs", "big")
    assert proc.returncode == 0
    payload = json.loads(proc.stdout)
    assert payload["verdict"] in ("certified_exact", "sampled_pass")
    assert payload["query"]["relation"] == "resolvent"


def test_check_falsified_exit_one(spec_path):
    proc = run_cli("check", "--spec", spec_path, "--relation", "resolvent",
                   "--lhs", "big", "--rhs", "small")
    assert proc.returncode == 1
    assert json.loads(proc.stdout)["verdict"] == "falsified"


def test_check_unknown_name_exit_two(spec_path):
    proc = run_cli("check", "--spec", spec_path, "--relation", "resolvent",
                   "--lhs", "nope", "--rhs", "big")
    assert proc.returncode == 2
    assert "error" in proc.stderr


def test_check_missing_file_exit_two():
    proc = run_cli("check", "--spec", "/nonexistent/spec.json",
                   "--relation", "resolvent", "--lhs", "a", "--rhs", "b")
    assert proc.returncode == 2


def test_check_parse_error_exit_two(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({
        "dim": 2,
        "operators": {"T": {"kind": "warp", "factor": 2}},
    }))
    proc = run_cli("check", "--spec", str(bad), "--relation", "resolvent",
                   "--lhs", "T", "--rhs", "T")
    assert proc.returncode == 2
    assert "$.operators.T.kind" in proc.stderr


def test_loewner_relation(spec_path):
    assert run_cli("check", "--spec", spec_path, "--relation", "loewner",
                   "--lhs", "B", "--rhs", "A").returncode == 0
    assert run_cli("check", "--spec", spec_path, "--relation", "loewner",
                   "--lhs", "A", "--rhs", "B").returncode == 1


def test_zarantonello_relation(spec_path):
    assert run_cli("check", "--spec", spec_path, "--relation", "zarantonello",
                   "--lhs", "axis", "--rhs", "plane").returncode == 0
    assert run_cli("check", "--spec", spec_path, "--relation", "zarantonello",
                   "--lhs", "plane", "--rhs", "axis").returncode == 1


def test_moreau_and_function_relations(spec_path):
    assert run_cli("check", "--spec", spec_path, "--relation", "moreau",
                   "--lhs", "qB", "--rhs", "qA").returncode == 0
    assert run_cli("check", "--spec", spec_path, "--relation", "function",
                   "--lhs", "qB", "--rhs", "qA").returncode == 0
    assert run_cli("check", "--spec", spec_path, "--relation", "function",
                   "--lhs", "qA", "--rhs", "qB").returncode == 1


def test_monotone_op_relation(spec_path):
    assert run_cli("check", "--spec", spec_path, "--relation", "monotone_op",
                   "--lhs", "B", "--rhs", "A").returncode == 0


def test_equivalence_relation(spec_path):
    proc = run_cli("check", "--spec", spec_path, "--relation", "equivalence",
                   "--lhs", "small", "--rhs", "shifted_small")
    assert proc.returncode == 0
    payload = json.loads(proc.stdout)
    assert payload["certificate"]["detail"]["shift"] == [1.0, -1.0]
    assert run_cli("check", "--spec", spec_path, "--relation", "equivalence",
                   "--lhs", "small", "--rhs", "big").returncode == 1


def test_certify_subcommand(spec_path):
    assert run_cli("certify", "--spec", spec_path, "--operator", "rotator",
                   "--property", "fne").returncode == 0
    assert run_cli("certify", "--spec", spec_path, "--operator", "A",
                   "--property", "nonexpansive").returncode == 1
    # prox of a named function is usable as an operator
    assert run_cli("certify", "--spec", spec_path, "--operator", "ball1",
                   "--property", "fne").returncode == 0


def test_reproduce_all_passes():
    proc = run_cli("reproduce", "all", "--pairs", "100")
    assert proc.returncode == 0
    payload = json.loads(proc.stdout)
    assert payload["passed"]
    assert len(payload["items"]) == 6
    assert "[PASS]" in proc.stderr


def test_reproduce_out_of_window_exit_two():
    proc = run_cli("reproduce", "rotation_construction", "--cos-theta", "0.9")
    assert proc.returncode == 2
    assert "admissible interval" in proc.stderr


def test_reproduce_unknown_item():
    assert run_cli("reproduce", "nonexistent").returncode == 2


# --- determinism ----------------------------------------------------------------


def test_stdout_is_byte_identical_across_runs(spec_path):
    args = ("check", "--spec", spec_path, "--relation", "resolvent",
            "--lhs", "ball1", "--rhs", "ball2", "--pairs", "300")
    a = run_cli(*args)
    b = run_cli(*args)
    assert a.returncode == b.returncode == 0
    assert a.stdout == b.stdout
    assert a.stdout.strip().startswith("{")


def test_seed_env_and_flag(spec_path):
    base = ("check", "--spec", spec_path, "--relation", "resolvent",
            "--lhs", "ball1", "--rhs", "ball2", "--pairs", "100")
    via_env = run_cli(*base, env={"RESOLVENT_ORDER_SEED": "7"})
    via_flag = run_cli(*base, "--seed", "7")
    assert via_env.stdout == via_flag.stdout
    assert json.loads(via_flag.stdout)["seed"] == 7
    # the flag wins over the environment
    flag_beats_env = run_cli(*base, "--seed", "7",
                             env={"RESOLVENT_ORDER_SEED": "99"})
    assert flag_beats_env.stdout == via_flag.stdout


def test_out_file_matches_stdout(spec_path, tmp_path):
    out = tmp_path / "report.json"
    proc = run_cli("check", "--spec", spec_path, "--relation", "resolvent",
                   "--lhs", "small", "--rhs", "big", "--out", str(out))
    assert proc.returncode == 0
    assert out.read_text() == proc.stdout


# --- spec round-trip --------------------------------------------------------------


def test_expr_round_trip(rng):
    ops = [
        Identity(2),
        Scale(0.3, Rotation(0.7)),
        Sum((Linear(np.diag([0.5, 0.5])), Constant([1.0, 2.0]))),
        Difference(Identity(2), ProxOf(Quadratic(np.eye(2)))),
        Compose(Rotation(0.2), Scale(2.0, Identity(2))),
        ProxOf(Shifted(Quadratic(np.eye(2)), np.array([1.0, 0.0]), 0.5)),
        ProxOf(IndicatorSOC(2)),
    ]
    for op in ops:
        doc = expr_to_json(op)
        rebuilt = parse_expr(doc, 2, "$", {})
        for _ in range(20):
            x = rng.uniform(-4, 4, size=2)
            assert np.allclose(evaluate(op, x), evaluate(rebuilt, x), atol=1e-12)


def test_atom_round_trip_all_kinds(rng):
    docs = [
        {"kind": "zero"},
        {"kind": "point", "p": [1.0, 2.0]},
        {"kind": "ball", "center": [0.0, 1.0], "radius": 2.0},
        {"kind": "subspace", "basis": [[1.0, 0.0]]},
        {"kind": "orthant", "sign": -1},
        {"kind": "soc"},
        {"kind": "ray", "direction": [0.0, 1.0]},
        {"kind": "polar_ray", "direction": [1.0, 0.0]},
        {"kind": "quadratic", "matrix": [[1.0, 0.0], [0.0, 2.0]]},
        {"kind": "l1", "lam": 0.5},
        {"kind": "l2", "lam": 1.5},
        {"kind": "linear_func", "a": [0.1, -0.2]},
        {"kind": "shifted", "base": {"kind": "l1", "lam": 0.5},
         "c": [1.0, 1.0], "gamma": 2.0},
    ]
    for doc in docs:
        atom = parse_atom(doc, 2, "$")
        again = parse_atom(atom_to_json(atom), 2, "$")
        for _ in range(20):
            x = rng.uniform(-3, 3, size=2)
            assert np.allclose(atom.prox(x), again.prox(x), atol=1e-12)


def test_parse_errors_carry_json_paths(tmp_path):
    with pytest.raises(ParseError) as exc:
        parse_atom({"kind": "ball"}, 2, "$.functions.b")
    assert "$.functions.b" in str(exc.value)
    with pytest.raises(ParseError) as exc:
        parse_expr({"kind": "sum", "children": [{"kind": "bogus"}]}, 2,
                   "$.operators.T", {})
    assert "$.operators.T.children[0].kind" in str(exc.value)

    p = tmp_path / "nondict.json"
    p.write_text("[1, 2, 3]")
    with pytest.raises(ParseError):
        load_spec(str(p))
    p.write_text("{not json")
    with pytest.raises(ParseError):
        load_spec(str(p))


def test_spec_document_lookup(spec_path):
    doc = load_spec(spec_path)
    assert doc.dim == 2
    assert isinstance(doc.operator("ball1"), ProxOf)  # function fallback
    with pytest.raises(UnknownName):
        doc.operator("missing")
    with pytest.raises(UnknownName):
        doc.function("small")  # operators are not functions
