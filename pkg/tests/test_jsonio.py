import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ddlocc import jsonio
from ddlocc.jsonio import MalformedInput
from ddlocc.linalg import BipartiteOperator
from ddlocc.protocol import build_protocol, subspace_from_vectors
from ddlocc.reference import DD_ANCHOR, unique_basis_vectors
from ddlocc.solver import DDCertificate
from ddlocc.verification import verify_dimensions


@given(seed=st.integers(min_value=0, max_value=10_000))
@settings(max_examples=25, deadline=None)
def test_matrix_roundtrip_is_exact(seed):
    rng = np.random.default_rng(seed)
    M = rng.normal(size=(4, 5)) + 1j * rng.normal(size=(4, 5))
    back = jsonio.decode_matrix(json.loads(jsonio.dumps(jsonio.encode_matrix(M))))
    assert np.array_equal(back, M)  # binary64 survives the text roundtrip


def test_real_matrices_encode_as_plain_numbers():
    enc = jsonio.encode_matrix(np.array([[1.5, -2.0], [0.0, 3.0]]))
    assert enc == [[1.5, -2.0], [0.0, 3.0]]
    enc_c = jsonio.encode_matrix(np.array([[1 + 2j]]))
    assert enc_c == [[[1.0, 2.0]]]
    # decoding accepts a mix of plain numbers and [re, im] pairs
    back = jsonio.decode_vector([1.0, [0.0, -1.0], 2])
    assert np.array_equal(back, np.array([1.0, -1j, 2.0]))


@pytest.mark.parametrize("bad", [
    "{not json",
    "[1, 2",
])
def test_loads_rejects_bad_text(bad):
    with pytest.raises(MalformedInput):
        jsonio.loads(bad)


@pytest.mark.parametrize("entry", [[1.0], [1.0, 2.0, 3.0], "x", None, {"re": 1}])
def test_decode_rejects_bad_entries(entry):
    with pytest.raises(MalformedInput):
        jsonio.decode_vector([entry])


def test_decode_matrix_rejects_ragged_rows():
    with pytest.raises(MalformedInput):
        jsonio.decode_matrix([[1.0, 2.0], [3.0]])
    with pytest.raises(MalformedInput):
        jsonio.decode_matrix("nope")


def test_dumps_is_canonical():
    doc = {"b": 1, "a": [np.float64(0.5), np.int64(2), np.bool_(True)]}
    text = jsonio.dumps(doc)
    assert text == jsonio.dumps({"a": [0.5, 2, True], "b": 1})
    assert text.endswith("\n")
    assert text.index('"a"') < text.index('"b"')  # keys sorted
    line = jsonio.dumps_line(doc)
    assert "\n" not in line.rstrip("\n")


def test_operator_roundtrip():
    op = BipartiteOperator.from_matrix(DD_ANCHOR, 3, 3)
    back = jsonio.operator_from_json(json.loads(jsonio.dumps(jsonio.operator_to_json(op))))
    assert (back.dimA, back.dimB) == (3, 3)
    assert np.array_equal(back.matrix, op.matrix)
    with pytest.raises(MalformedInput):
        jsonio.operator_from_json({"dimA": 3, "dimB": 3})  # no matrix


def test_certificate_roundtrip():
    cert = DDCertificate(U=np.eye(3, dtype=complex), V=1j * np.eye(3),
                         residual=1e-12, startsUsed=4,
                         objectiveTrace=[1.0, 0.1], converged=True)
    back = jsonio.certificate_from_json(json.loads(jsonio.dumps(jsonio.certificate_to_json(cert))))
    assert np.array_equal(back.U, cert.U)
    assert np.array_equal(back.V, cert.V)
    assert back.residual == cert.residual
    assert back.startsUsed == 4
    assert back.objectiveTrace == [1.0, 0.1]
    assert back.converged is True


def test_subspace_and_protocol_roundtrip():
    S = subspace_from_vectors(unique_basis_vectors())
    S2 = jsonio.subspace_from_json(json.loads(jsonio.dumps(jsonio.subspace_to_json(S))))
    assert np.array_equal(S2.basis, S.basis)
    assert (S2.dimA, S2.dimB) == (3, 9)

    p = build_protocol(S)
    doc = json.loads(jsonio.dumps(jsonio.protocol_to_json(p)))
    p2 = jsonio.protocol_from_json(doc)
    assert np.array_equal(np.asarray(p2.aliceBasis), np.asarray(p.aliceBasis))
    assert np.array_equal(np.asarray(p2.codewords), np.asarray(p.codewords))
    for j in range(3):
        assert np.array_equal(p2.bobConditional[j]["vectors"],
                              p.bobConditional[j]["vectors"])
        assert np.array_equal(p2.bobConditional[j]["completion"],
                              p.bobConditional[j]["completion"])
    assert p2.residual == p.residual
    assert p2.converged == p.converged
    assert np.array_equal(p2.certificate.U, p.certificate.U)

    with pytest.raises(MalformedInput):
        jsonio.protocol_from_json({"aliceBasis": doc["aliceBasis"]})
    bad = dict(doc)
    bad["bobConditional"] = doc["bobConditional"][:2]
    with pytest.raises(MalformedInput):
        jsonio.protocol_from_json(bad)


def test_subspace_from_json_validates_shape():
    with pytest.raises(MalformedInput):
        jsonio.subspace_from_json({"basis": [[1.0, 0.0]] * 3, "dimB": 3})


def test_isometry_roundtrip_and_axis_order():
    from ddlocc.applications import random_isometry, StinespringIsometry
    J = StinespringIsometry(3, 3, 4, random_isometry(3, 12, np.random.default_rng(0)))
    back = jsonio.isometry_from_json(json.loads(jsonio.dumps(jsonio.isometry_to_json(J))))
    assert np.array_equal(back.J, J.J)
    assert (back.dIn, back.dEnv, back.dSys) == (3, 3, 4)
    with pytest.raises(MalformedInput):
        jsonio.isometry_from_json({"dIn": 3, "dEnv": 3, "dSys": 4,
                                   "J": jsonio.encode_matrix(J.J),
                                   "axisOrder": ["env", "env"]})
    with pytest.raises(MalformedInput):
        jsonio.isometry_from_json({"dIn": 3, "dEnv": 2, "dSys": 4,
                                   "J": jsonio.encode_matrix(J.J)})


def test_report_serialization_drops_wall_clock():
    r = verify_dimensions()
    doc = jsonio.report_to_json(r)
    assert doc["pass"] is True
    assert doc["checkName"] == "dimension-counts"
    assert "runtimeSeconds" not in doc
    assert json.loads(jsonio.dumps_line(doc))["observed"]["m00"] == 64
