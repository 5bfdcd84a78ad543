"""JSON formats for every artifact the command line reads or writes.

Complex entries travel as [re, im] pairs; plain numbers are accepted anywhere
a complex entry is expected.  Serialization is canonical (sorted keys, fixed
indentation, trailing newline) so identical inputs produce byte-identical
artifacts.  Verification reports are serialized without their wall-clock
field for the same reason.
"""

import json

import numpy as np

from .applications import (CapacityReport, FourDimReport, QCConversionResult,
                           StinespringIsometry, isometry_from_parts)
from .linalg import BipartiteOperator
from .protocol import DiscriminationProtocol, Subspace
from .solver import DDCertificate


class MalformedInput(ValueError):
    """An input document does not have the promised structure."""


# ---------------------------------------------------------------------------
# scalars and matrices

def _encode_entry(z):
    z = complex(z)
    return [float(z.real), float(z.imag)]


def encode_matrix(M):
    M = np.atleast_2d(np.asarray(M))
    if np.iscomplexobj(M):
        return [[_encode_entry(z) for z in row] for row in M]
    return [[float(x) for x in row] for row in M]


def encode_vector(v):
    v = np.asarray(v).ravel()
    if np.iscomplexobj(v):
        return [_encode_entry(z) for z in v]
    return [float(x) for x in v]


def _decode_entry(x, what):
    if isinstance(x, (int, float)):
        return complex(x)
    if (isinstance(x, (list, tuple)) and len(x) == 2
            and all(isinstance(t, (int, float)) for t in x)):
        return complex(x[0], x[1])
    raise MalformedInput(f"{what}: entry {x!r} is neither a number nor an [re, im] pair")


def decode_matrix(obj, what="matrix"):
    if not isinstance(obj, list) or not obj or not all(isinstance(r, list) for r in obj):
        raise MalformedInput(f"{what}: expected a list of rows")
    rows = [[_decode_entry(x, what) for x in r] for r in obj]
    if len({len(r) for r in rows}) != 1:
        raise MalformedInput(f"{what}: ragged rows")
    return np.array(rows, dtype=complex)


def decode_vector(obj, what="vector"):
    if not isinstance(obj, list) or not obj:
        raise MalformedInput(f"{what}: expected a non-empty list")
    return np.array([_decode_entry(x, what) for x in obj], dtype=complex)


def pyify(obj):
    """Recursively convert numpy payloads into JSON-encodable structures."""
    if isinstance(obj, dict):
        return {str(k): pyify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [pyify(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return encode_matrix(obj) if obj.ndim > 1 else encode_vector(obj)
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.complexfloating, complex)):
        return _encode_entry(obj)
    return obj


def dumps(obj):
    return json.dumps(pyify(obj), sort_keys=True, indent=2) + "\n"


def dumps_line(obj):
    return json.dumps(pyify(obj), sort_keys=True, separators=(",", ": ")) + "\n"


def loads(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise MalformedInput(f"invalid JSON: {e}") from None


def _need(d, key, what):
    if not isinstance(d, dict) or key not in d:
        raise MalformedInput(f"{what}: missing field {key!r}")
    return d[key]


# ---------------------------------------------------------------------------
# operators, certificates, subspaces

def operator_to_json(op):
    return {"dimA": op.dimA, "dimB": op.dimB, "matrix": encode_matrix(op.matrix)}


def operator_from_json(d):
    dimA = _need(d, "dimA", "operator")
    dimB = _need(d, "dimB", "operator")
    M = decode_matrix(_need(d, "matrix", "operator"), "operator matrix")
    try:
        return BipartiteOperator.from_matrix(M, int(dimA), int(dimB))
    except (ValueError, TypeError) as e:
        raise MalformedInput(f"operator: {e}") from None


def certificate_to_json(cert):
    return {
        "U": encode_matrix(cert.U), "V": encode_matrix(cert.V),
        "residual": float(cert.residual), "startsUsed": int(cert.startsUsed),
        "objectiveTrace": [float(x) for x in cert.objectiveTrace],
        "converged": bool(cert.converged),
    }


def certificate_from_json(d):
    U = decode_matrix(_need(d, "U", "certificate"), "U")
    V = decode_matrix(_need(d, "V", "certificate"), "V")
    return DDCertificate(
        U=U, V=V, residual=float(_need(d, "residual", "certificate")),
        startsUsed=int(d.get("startsUsed", 0)),
        objectiveTrace=[float(x) for x in d.get("objectiveTrace", [])],
        converged=bool(d.get("converged", True)),
    )


def subspace_to_json(S):
    return {"dimA": S.dimA, "dimB": S.dimB, "basis": encode_matrix(S.basis)}


def subspace_from_json(d):
    basis = decode_matrix(_need(d, "basis", "subspace"), "subspace basis")
    dimB = int(d.get("dimB", basis.shape[1] // 3))
    if basis.shape != (3, 3 * dimB):
        raise MalformedInput(f"subspace: basis shape {basis.shape} does not match dimB={dimB}")
    return Subspace(3, dimB, basis)


# ---------------------------------------------------------------------------
# protocols

def protocol_to_json(p):
    return {
        "aliceBasis": encode_matrix(p.aliceBasis),
        "codewords": encode_matrix(p.codewords),
        "bobConditional": [
            {"vectors": encode_matrix(side["vectors"]),
             "completion": encode_matrix(side["completion"])}
            for side in p.bobConditional
        ],
        "residual": float(p.residual),
        "converged": bool(p.converged),
        "certificate": certificate_to_json(p.certificate) if p.certificate else None,
    }


def protocol_from_json(d):
    sides = _need(d, "bobConditional", "protocol")
    if not isinstance(sides, list) or len(sides) != 3:
        raise MalformedInput("protocol: bobConditional must list 3 outcomes")
    cond = [
        {"vectors": decode_matrix(_need(s, "vectors", "protocol"), "conditional vectors"),
         "completion": decode_matrix(_need(s, "completion", "protocol"), "completion")}
        for s in sides
    ]
    cert = certificate_from_json(d["certificate"]) if d.get("certificate") else None
    return DiscriminationProtocol(
        aliceBasis=decode_matrix(_need(d, "aliceBasis", "protocol"), "aliceBasis"),
        codewords=decode_matrix(_need(d, "codewords", "protocol"), "codewords"),
        bobConditional=cond,
        residual=float(_need(d, "residual", "protocol")),
        converged=bool(d.get("converged", True)),
        certificate=cert,
    )


# ---------------------------------------------------------------------------
# applications

def isometry_to_json(J):
    return {"dIn": J.dIn, "dEnv": J.dEnv, "dSys": J.dSys,
            "J": encode_matrix(J.J), "axisOrder": ["env", "sys"]}


def isometry_from_json(d):
    J = decode_matrix(_need(d, "J", "isometry"), "isometry matrix")
    order = d.get("axisOrder", ["env", "sys"])
    if (not isinstance(order, list) or len(order) != 2
            or set(order) != {"env", "sys"}):
        raise MalformedInput(f"isometry: bad axisOrder {order!r}")
    try:
        return isometry_from_parts(
            int(_need(d, "dIn", "isometry")), int(_need(d, "dEnv", "isometry")),
            int(_need(d, "dSys", "isometry")), J, tuple(order))
    except ValueError as e:
        raise MalformedInput(f"isometry: {e}") from None


def capacity_to_json(rep):
    return {"mode": rep.mode, "bitsPerUse": float(rep.bitsPerUse),
            "successes": [float(s) for s in rep.successes],
            "protocol": protocol_to_json(rep.protocol)}


def qc_result_to_json(res):
    return {
        "aliceBasis": encode_matrix(res.aliceBasis),
        "beta": operator_to_json(res.beta),
        "F": encode_matrix(res.F),
        "diagonals": [encode_vector(dj) for dj in res.diagonals],
        "residual": float(res.residual),
        "classicalA": bool(res.classicalA),
        "generalizedClassicalB": bool(res.generalizedClassicalB),
        "fullyClassical": bool(res.fullyClassical),
        "supportRestricted": bool(res.supportRestricted),
        "certificate": certificate_to_json(res.certificate) if res.certificate else None,
    }


def fourdim_to_json(rep):
    return {
        "dimDomain": int(rep.dimDomain), "dimTarget": int(rep.dimTarget),
        "K": operator_to_json(rep.K), "epsilon": float(rep.epsilon),
        "states": encode_matrix(rep.states), "orthonormal": bool(rep.orthonormal),
        "residualFloor": float(rep.residualFloor),
        "certifying": bool(rep.certifying),
        "note": "positive residual floor is numerical evidence, not a proof of indistinguishability",
    }


def report_to_json(r):
    # wall-clock time is intentionally left out: artifacts must be
    # reproducible byte-for-byte under a fixed seed
    return {"checkName": r.checkName, "pass": bool(r.passed),
            "observed": pyify(r.observed), "expected": pyify(r.expected),
            "tolerance": float(r.tolerance)}
