# backend/tests/test_complex2d.py

import pytest

from app.core.catalog import fingerprint_match
from app.core.hermitian import skt_verdict
from app.core.lie import series
from app.errors import ParameterRangeError
from app.families.complex2d import WITNESSES, gen_2d_complex, two_form, witness_params
from app.families.params import TwoDimComplexParams


def test_case_i_rotates_the_ideal():
    L, H = gen_2d_complex(TwoDimComplexParams(n=2, case="i", alpha=[1.0, 0.0]))
    fp = series(L)
    assert fp.derived == (4, 2, 0)
    assert fp.lower_central == (4, 2, 2)
    assert fp.center_dim == 1
    assert skt_verdict(H).verdict.is_skt


@pytest.mark.parametrize("name", sorted(WITNESSES))
def test_witnesses_match_their_algebras(name):
    L, H = gen_2d_complex(TwoDimComplexParams(n=3, case="ii", witness=name))
    assert fingerprint_match(L, name)
    assert skt_verdict(H).verdict.is_skt


def test_witness_params_are_explicit_forms():
    p = witness_params("2h3")
    assert p.tau1 == two_form(4, [(1, 1, 2)]).tolist()
    with pytest.raises(ParameterRangeError):
        witness_params("n6_3")


@pytest.mark.parametrize("kwargs", [
    dict(n=2, case="i", alpha=[0.0, 0.0]),
    dict(n=4, case="ii", witness="n6_1"),
    dict(n=3, case="ii"),
    dict(n=3, case="ii", tau1=two_form(4, [(1, 1, 3)]).tolist()),
    dict(n=3, case="ii", tau1=two_form(4, [(1, 1, 2), (1, 3, 4)]).tolist()),
])
def test_rejected_parameters(kwargs):
    with pytest.raises(ParameterRangeError):
        gen_2d_complex(TwoDimComplexParams(**kwargs))
