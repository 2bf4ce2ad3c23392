import json

import pytest

from poscomm.certificate import load_certificate, make_certificate, verify_certificate
from poscomm.errors import VerificationError
from poscomm.exact_linalg import Matrix
from poscomm.nilpotent import construct_central_nilpotent

C = Matrix.from_rows([[0, 1, 2], [0, 0, 3], [0, 0, 0]])


def cert_obj():
    return json.loads(construct_central_nilpotent(C).dumps())


def test_round_trip():
    cert = construct_central_nilpotent(C)
    again = load_certificate(json.loads(cert.dumps()))
    assert again.A == cert.A and again.B == cert.B and again.C == cert.C
    assert again.dumps() == cert.dumps()


def test_make_certificate_rejects_wrong_pair():
    with pytest.raises(VerificationError):
        make_certificate(Matrix.identity(3), Matrix.zeros(3), C, "central_nilpotent")
    with pytest.raises(VerificationError):
        make_certificate(Matrix.diag([-1, 0, 0]), Matrix.zeros(3), Matrix.zeros(3), "jordan")
    with pytest.raises(ValueError):
        make_certificate(Matrix.zeros(3), Matrix.zeros(3), Matrix.zeros(3), "magic")


def test_float_tolerance():
    a = Matrix.diag([1.0, 0.0])
    b = Matrix.from_rows([[0.0, 1.0 + 1e-13], [0.0, 0.0]])
    c = Matrix.from_rows([[0, 1], [0, 0]])
    cert = make_certificate(a, b, c, "diagonal_quasi")
    assert not cert.exact and cert.residual_inf < 1e-12
    obj = json.loads(cert.dumps())
    assert verify_certificate(obj).ok
    assert not verify_certificate(obj, tolerance=1e-15).ok


@pytest.mark.parametrize("mutate, fragment", [
    (lambda o: o["A"]["data"][0].__setitem__(0, "-1"), "negative"),
    (lambda o: o.__setitem__("window", [9, 9]), "window"),
    (lambda o: o["attestations"].__setitem__("B_nilpotency_index", 1), "nilpotency"),
    (lambda o: o.pop("A"), "malformed"),
])
def test_verify_rejections(mutate, fragment):
    obj = cert_obj()
    mutate(obj)
    res = verify_certificate(obj)
    assert not res.ok and fragment in res.message


def test_verify_false_claims():
    obj = cert_obj()
    obj["A"] = Matrix.from_json(obj["A"]).astype("float").to_json()
    assert verify_certificate(obj).ok is False  # claims exactness with float data
    obj = cert_obj()
    assert obj["attestations"]["A_diagonal"]
    obj["A"]["data"][0][1] = "1"
    res = verify_certificate(obj)
    assert not res.ok


def test_window_restricts_check():
    a = Matrix.zeros(2)
    b = Matrix.zeros(2)
    c = Matrix.from_rows([[0, 0], [0, 5]])
    cert = make_certificate(a, b, c, "pelczynski", window=(2, 1))
    assert verify_certificate(json.loads(cert.dumps())).ok
    obj = json.loads(cert.dumps())
    obj["window"] = None
    assert not verify_certificate(obj).ok
