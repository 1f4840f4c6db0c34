# backend/tests/test_codim2.py

import pytest

from app.core.hermitian import skt_verdict
from app.errors import ConstraintResidualError, ParameterRangeError
from app.families.codim2 import (
    constraint,
    cross_values,
    gen_codim2,
    gen_codim2_h0,
    h0_params,
    real_part_roots,
)
from app.families.params import Codim2H0Params, Codim2Params


def test_four_dim_member_solves_b1():
    L, H = gen_codim2(Codim2Params(n=2, a=1.0))
    # [JX2, X2] = b1 X1
    assert L.structure[3, 2, 0] == pytest.approx(1.0)
    assert skt_verdict(H).verdict.is_skt


def test_case_ii_seed_shifts_b1():
    p = Codim2Params(n=3, a=1.0, cases=["ii"], z=[0j], w=[1j], seeds=[0.5])
    L, H = gen_codim2(p)
    assert L.structure[5, 4, 2] == pytest.approx(1.25)
    assert skt_verdict(H).verdict.is_skt


def test_case_i_seed_solves_b1():
    p = Codim2Params(n=3, a=1.0, cases=["i"], z=[1j], w=[0j], seeds=[0.5])
    L, H = gen_codim2(p)
    # h22 = b1 (1 + i) / 4, so 2(1 - b1) - b1 / 4 = 0
    assert L.structure[5, 4, 2] == pytest.approx(8 / 9)
    assert skt_verdict(H).verdict.is_skt


def test_case_i_seed_with_wrong_b1_is_rejected():
    p = Codim2Params(n=3, a=1.0, b1=1.0, cases=["i"], z=[1j], w=[0j], seeds=[0.5])
    with pytest.raises(ConstraintResidualError):
        gen_codim2(p)
    assert constraint(1.0, 8 / 9, *cross_values("i", 1.0, 8 / 9, 0.0, 1j, 0j, 0.5)) == pytest.approx(0.0, abs=1e-12)


def test_seeded_cases_i_and_ii_are_skt(rng):
    for _ in range(200):
        cases = [str(c) for c in rng.choice(["i", "ii"], size=2)]
        z = [1j * rng.uniform(0.5, 3.0) * rng.choice([-1, 1]) if c == "i" else 0j for c in cases]
        w = [1j * rng.uniform(0.5, 3.0) * rng.choice([-1, 1]) for _ in cases]
        seeds = [complex(*rng.uniform(0.2, 1.5, 2) * rng.choice([-1, 1], 2)) for _ in cases]
        p = Codim2Params(n=4, a=float(rng.uniform(0.5, 3.0)), b2=float(rng.uniform(0.0, 2.0)),
                         cases=cases, z=z, w=w, seeds=seeds)
        _, H = gen_codim2(p)
        report = skt_verdict(H)
        assert report.verdict.is_skt, (p, report.d_torsion)


@pytest.mark.parametrize("kwargs", [
    dict(n=2, a=0.0),
    dict(n=2, a=1.0, b2=-1.0),
    dict(n=3, a=1.0, cases=[]),
    dict(n=3, a=1.0, cases=["i"], z=[0j], w=[0j]),
    dict(n=3, a=1.0, cases=["ii"], z=[1j], w=[1j]),
    dict(n=3, a=1.0, cases=["iii"], z=[complex(0.5, 1.0)], w=[0j]),
])
def test_rejected_parameters(kwargs):
    with pytest.raises(ParameterRangeError):
        gen_codim2(Codim2Params(**kwargs))


def test_case_iii_seed_must_match_solved_b1():
    # the solved b1 is about 0.85, but Re w = 0 only solves 2x^2 - b1/2 = 0 at b1 = 0
    p = Codim2Params(n=3, a=1.0, cases=["iii"], z=[complex(-0.5, 1.0)], w=[1j], seeds=[1.0])
    with pytest.raises(ParameterRangeError):
        gen_codim2(p)


def test_real_part_roots():
    plus, minus = real_part_roots(1.0, 1.0, 0.0)
    assert (plus, minus) == (pytest.approx(0.5), pytest.approx(-0.5))
    with pytest.raises(ParameterRangeError):
        real_part_roots(1.0, -1.0, 0.0)


def test_h0_normal_form():
    p = Codim2H0Params(n=5, a=1.0, blocks=(1, 2, 2), c=[0.0, 1.0, 0.3], d=[1.0, 0.5, 0.2])
    expanded = h0_params(p)
    assert expanded.cases == ["ii", "i", "iii"]
    assert expanded.w[2].real == pytest.approx(-0.5)
    _, H = gen_codim2_h0(p)
    assert skt_verdict(H).verdict.is_skt


def test_h0_blocks_must_be_ordered():
    with pytest.raises(ParameterRangeError):
        h0_params(Codim2H0Params(n=4, a=1.0, blocks=(2, 1, 2)))
