# backend/tests/test_low_dim.py
"""Generators instantiated in real dimension 4 against the known list."""

import numpy as np
import pytest

from app.core.catalog import catalog, expand_target
from app.core.hermitian import skt_verdict
from app.core.lie import series
from app.families.almost_abelian import ad_matrix, decide_almost_abelian
from app.families.params import AlmostAbelianParams, TotallyRealParams
from app.families.registry import generate

INSTANCES = [
    ("R^4", AlmostAbelianParams(n=2, z=[0j])),
    ("aff + R^2", TotallyRealParams(n=2, m=1, r=1, lambdas=[1.0])),
    ("2aff", TotallyRealParams(n=2, m=2, r=2, lambdas=[1.0, -2.0])),
    ("h3 + R", AlmostAbelianParams(n=2, z=[0j], w=[1.0])),
    ("r3p(λ=0) + R", AlmostAbelianParams(n=2, a=0.0, z=[1j])),
]


@pytest.mark.parametrize("target, params", INSTANCES, ids=[t for t, _ in INSTANCES])
def test_four_dim_instances_hit_their_targets(target, params):
    L, H = generate(params)
    assert L.dim == 4
    assert series(L) == series(expand_target(target))
    assert skt_verdict(H).verdict.is_skt


@pytest.mark.parametrize("a, z", [(1.0, -0.5 + 2j), (2.0, 1.5j), (1.0, -0.5 + 0j)])
def test_r4_type_ad_matrices_are_accepted(a, z):
    report = decide_almost_abelian(ad_matrix(a, [z], [0j]))
    assert report.admissible
    assert report.case == "i"


@pytest.mark.parametrize("params", [{"μ": 1.0, "λ": -0.5}, {"μ": 2.0, "λ": 0.0}])
def test_catalog_r4p_members_are_accepted(params):
    L = catalog("r4p", params)
    e1 = np.eye(4)[0]
    assert decide_almost_abelian(L.ad(e1)[1:, 1:]).admissible


def test_catalog_r4_with_distinct_real_eigenvalues_is_rejected():
    L = catalog("r4", {"μ": 0.5, "λ": -0.25})
    e1 = np.eye(4)[0]
    assert not decide_almost_abelian(L.ad(e1)[1:, 1:]).admissible
