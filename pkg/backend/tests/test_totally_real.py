# backend/tests/test_totally_real.py

import numpy as np
import pytest

from app.core.catalog import fingerprint_match
from app.core.hermitian import skt_verdict
from app.errors import ParameterRangeError
from app.families.params import TotallyRealParams
from app.families.totally_real import gen_totally_real


def _form(*terms) -> list[list[float]]:
    """Sum of e^{ij} on R^4 from 1-based (i, j) pairs."""
    M = np.zeros((4, 4))
    for i, j in terms:
        M[i - 1, j - 1] += 1.0
        M[j - 1, i - 1] -= 1.0
    return M.tolist()


def test_affine_directions_only():
    L, H = gen_totally_real(TotallyRealParams(n=3, m=3, r=3, lambdas=[1.0, 1.0, 1.0]))
    assert fingerprint_match(L, "3aff")
    assert skt_verdict(H).verdict.is_skt


def test_central_directions_from_forms():
    nu = [_form((1, 2), (3, 4)), _form((1, 3), (2, 4)), _form((1, 2))]
    L, H = gen_totally_real(TotallyRealParams(n=5, m=3, r=0, nu=nu))
    assert fingerprint_match(L, "n37D + R^3")
    assert skt_verdict(H).verdict.is_skt


def test_central_direction_from_covector():
    L, H = gen_totally_real(TotallyRealParams(n=3, m=1, r=0, alphas=[[1.0, 0.0, 0.0, 0.0]]))
    assert fingerprint_match(L, "h3 + R^3")
    assert skt_verdict(H).verdict.is_skt


def test_twisted_affine_direction():
    L, H = gen_totally_real(TotallyRealParams(n=2, m=1, r=1, lambdas=[2.0], mu=[[1.0, 0.0]]))
    assert L.dim == 4
    assert skt_verdict(H).verdict.is_skt


@pytest.mark.parametrize("kwargs", [
    dict(n=3, m=1, r=2, lambdas=[1.0, 1.0]),
    dict(n=3, m=4, r=0),
    dict(n=2, m=1, r=1, lambdas=[0.0]),
    dict(n=3, m=1, r=0),
    dict(n=3, m=1, r=0, nu=[_form((1, 3))]),
    dict(n=3, m=1, r=0, nu=[_form((1, 2), (3, 4))]),
    dict(n=3, m=2, r=0, nu=[_form((1, 2)), _form((1, 2))]),
    dict(n=3, m=2, r=0, nu=[_form((1, 2))]),
])
def test_rejected_parameters(kwargs):
    with pytest.raises(ParameterRangeError):
        gen_totally_real(TotallyRealParams(**kwargs))
