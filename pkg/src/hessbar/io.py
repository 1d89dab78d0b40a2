"""Problem-file ingestion and report serialization.

The problem file is a JSON document:

    {
      "name": "simplex-lp",                # optional
      "cones": [{"type": "orthant", "dim": 3},
                {"type": "soc", "dim": 3},
                {"type": "psd", "order": 2}],
      "A": {"rows": 1, "cols": 9, "dense": [...]}      # or {"triplets": [[i, j, v], ...]}
      "b": [...],
      "objective": {"kind": "quadratic", "Q": ..., "q": [...], "c0": 0.0}
                   # or {"kind": "builtin", "name": "linear", "params": {"c": [...]}}
      "x_init": [...],
      "known_fmin": -1.0                   # optional
    }

All dimensions are cross-checked and x_init must be strictly feasible;
violations raise ValidationError with a machine-readable code.  Builtin
objectives are declarative only: "linear", "quadratic", "negative_sqnorm",
"distance_to_point".  Callable oracles never round-trip through files.
"""

from __future__ import annotations

import json
from typing import Optional

import numpy as np

from .cones import Barrier, ConeSpec, Lorentz, Orthant, Psd
from .errors import ParseError, ValidationError
from .kkt import KKTCertificate
from .metric import FeasibleSet
from .problem import ObjectiveOracle, Problem


def _as_matrix(node, rows: int, cols: int, what: str) -> np.ndarray:
    """Decode {"dense": row-major list} or {"triplets": [[i,j,v],...]}."""
    if isinstance(node, list):
        node = {"dense": node}
    if not isinstance(node, dict):
        raise ParseError(f"{what}: expected an object with 'dense' or 'triplets'")
    if "dense" in node:
        flat = np.asarray(node["dense"], dtype=float).ravel()
        if flat.size != rows * cols:
            raise ValidationError(
                "dim_mismatch",
                f"{what}: dense data has {flat.size} entries, expected {rows * cols}",
            )
        return flat.reshape(rows, cols)
    if "triplets" in node:
        mat = np.zeros((rows, cols))
        for t in node["triplets"]:
            if len(t) != 3:
                raise ParseError(f"{what}: triplet {t!r} is not [i, j, v]")
            i, jx, val = int(t[0]), int(t[1]), float(t[2])
            if not (0 <= i < rows and 0 <= jx < cols):
                raise ValidationError(
                    "dim_mismatch", f"{what}: triplet index ({i}, {jx}) out of range"
                )
            mat[i, jx] += val
        return mat
    raise ParseError(f"{what}: expected 'dense' or 'triplets'")


def _parse_cones(nodes) -> ConeSpec:
    if not isinstance(nodes, list) or not nodes:
        raise ParseError("'cones' must be a non-empty list")
    blocks = []
    for idx, node in enumerate(nodes):
        kind = node.get("type")
        if kind == "orthant":
            blocks.append(Orthant(int(node["dim"])))
        elif kind == "soc":
            blocks.append(Lorentz(int(node["dim"])))
        elif kind == "psd":
            blocks.append(Psd(int(node["order"])))
        else:
            raise ParseError(f"cones[{idx}]: unknown type {kind!r}")
    return ConeSpec(tuple(blocks))


def _parse_objective(node, n: int) -> ObjectiveOracle:
    if not isinstance(node, dict):
        raise ParseError("'objective' must be an object")
    kind = node.get("kind")
    if kind == "quadratic":
        q_mat = _as_matrix(node["Q"], n, n, "objective.Q")
        q_vec = np.asarray(node.get("q", np.zeros(n)), dtype=float)
        if q_vec.shape != (n,):
            raise ValidationError(
                "dim_mismatch", f"objective.q has length {q_vec.size}, expected {n}"
            )
        return ObjectiveOracle.quadratic(q_mat, q_vec, float(node.get("c0", 0.0)))
    if kind == "builtin":
        name = node.get("name")
        params = node.get("params", {})
        if name == "linear":
            c = np.asarray(params["c"], dtype=float)
            if c.shape != (n,):
                raise ValidationError(
                    "dim_mismatch", f"linear objective: c has length {c.size}, expected {n}"
                )
            return ObjectiveOracle.linear(c)
        if name == "quadratic":
            q_mat = _as_matrix(params["Q"], n, n, "objective.params.Q")
            q_vec = np.asarray(params.get("q", np.zeros(n)), dtype=float)
            return ObjectiveOracle.quadratic(q_mat, q_vec, float(params.get("c0", 0.0)))
        if name == "negative_sqnorm":
            return ObjectiveOracle.negative_sqnorm(n)
        if name == "distance_to_point":
            point = np.asarray(params["point"], dtype=float)
            if point.shape != (n,):
                raise ValidationError(
                    "dim_mismatch",
                    f"distance_to_point: point has length {point.size}, expected {n}",
                )
            return ObjectiveOracle.distance_to_point(point)
        raise ParseError(f"unknown builtin objective {name!r}")
    raise ParseError(f"objective.kind must be 'quadratic' or 'builtin', got {kind!r}")


def problem_from_dict(doc: dict) -> Problem:
    for key in ("cones", "b", "objective", "x_init"):
        if key not in doc:
            raise ParseError(f"missing required key {key!r}")
    spec = _parse_cones(doc["cones"])
    n = spec.dim

    b = np.asarray(doc["b"], dtype=float).ravel()
    a_node = doc.get("A")
    if a_node is None or b.size == 0:
        a = np.zeros((0, n))
        b = np.zeros(0)
    else:
        rows = int(a_node.get("rows", b.size)) if isinstance(a_node, dict) else b.size
        cols = int(a_node.get("cols", n)) if isinstance(a_node, dict) else n
        if cols != n:
            raise ValidationError(
                "dim_mismatch", f"A has {cols} columns but the cones give dimension {n}"
            )
        if rows != b.size:
            raise ValidationError(
                "dim_mismatch", f"A has {rows} rows but b has length {b.size}"
            )
        a = _as_matrix(a_node, rows, cols, "A")
    feasible = FeasibleSet.from_constraints(a, b)

    x_init = np.asarray(doc["x_init"], dtype=float).ravel()
    if x_init.shape != (n,):
        raise ValidationError(
            "dim_mismatch", f"x_init has length {x_init.size}, expected {n}"
        )

    objective = _parse_objective(doc["objective"], n)
    problem = Problem(
        objective=objective,
        feasible=feasible,
        barrier=Barrier(spec),
        x_init=x_init,
    )
    if not problem.is_strictly_feasible(x_init):
        raise ValidationError(
            "infeasible_init",
            "x_init is not strictly feasible (check Ax=b and cone interiority)",
        )
    return problem


def load_problem(path) -> Problem:
    """Read, parse, and fully validate a problem file."""
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise ParseError(f"{path}: top level must be a JSON object")
    try:
        return problem_from_dict(doc)
    except KeyError as exc:
        raise ParseError(f"{path}: missing key {exc.args[0]!r}") from exc


def report_to_dict(report) -> dict:
    """Flatten a SolveReport for the JSON report file."""
    doc = {
        "status": report.status,
        "iterations": report.iterations,
        "inner_trials": report.inner_trials_total,
        "eps": report.eps,
        "m_hat": report.m_hat,
        "f_initial": report.f_initial,
        "f_final": report.f_final,
        "certificate": None
        if report.certificate is None
        else report.certificate.to_dict(),
    }
    doc.update({k: v for k, v in report.extra.items() if _jsonable(v)})
    return doc


def _jsonable(v) -> bool:
    return isinstance(v, (int, float, str, bool, type(None)))


def write_report(path, report) -> None:
    with open(path, "w") as fh:
        json.dump(report_to_dict(report), fh, indent=2)
        fh.write("\n")


def read_report_certificate(path) -> tuple[dict, Optional[KKTCertificate]]:
    """Load a report file; return (raw document, certificate or None)."""
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    cert_node = doc.get("certificate")
    cert = None if cert_node is None else KKTCertificate.from_dict(cert_node)
    return doc, cert
