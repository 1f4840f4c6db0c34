# backend/tests/test_catalog.py

import pytest

from app.core.catalog import ENTRIES, catalog, expand_target, fingerprint_match
from app.core.lie import is_two_step_solvable, jacobi_residual, series
from app.errors import ParameterRangeError, UnboundParameterError, UnknownAlgebraError

SAMPLE_PARAMS = {
    "r3p": {"λ": 0.7},
    "r4": {"μ": 0.5, "λ": -0.25},
    "r4p": {"μ": 2.0, "λ": 0.3},
    "g5_14": {"α": 0.0},
    "g5_17": {"α": 0.5, "β": 1.0, "γ": 2.0},
    "g6_1": {"α": 0.9, "β": 0.5, "γ": -0.4, "δ": 0.1},
    "g6_8": {"α": 2.0, "β": 1.0, "γ": 0.5, "δ": 0.3},
    "g6_11": {"α": 1.0, "β": 0.2, "γ": -0.4, "δ": 1.5},
}


@pytest.mark.parametrize("name", sorted(ENTRIES))
def test_entries_are_two_step_solvable_lie_algebras(name):
    L = catalog(name, SAMPLE_PARAMS.get(name, {}))
    assert jacobi_residual(L) < 1e-12
    assert is_two_step_solvable(L).solvable


def test_abelian_and_heisenberg_names():
    assert catalog("R^4").dim == 4
    assert catalog("R").dim == 1
    assert catalog("h5").dim == 5
    assert series(catalog("h5")).center_dim == 1
    with pytest.raises(UnknownAlgebraError):
        catalog("h4")


def test_parameter_conditions():
    with pytest.raises(ParameterRangeError):
        catalog("r3p", {"lam": -1.0})
    with pytest.raises(ParameterRangeError):
        catalog("r4", {"mu": 0.5, "lam": 0.8})
    with pytest.raises(UnboundParameterError):
        catalog("g5_14")
    with pytest.raises(UnknownAlgebraError):
        catalog("g7_99")


def test_aliases():
    assert catalog("37D").dim == 7
    assert catalog("r3'", {"λ": 0.0}).name == "r3p"


def test_expand_target_multiplicities_and_inline_args():
    L = expand_target("2aff + h3 + R^1")
    assert L.dim == 8
    M = expand_target("g5_14(alpha=0) + R")
    assert M.dim == 6
    shared = expand_target("r3p + R^3", {"lambda": 0.0})
    assert series(shared) == series(expand_target("r3p(λ=0) + R^3"))


def test_expand_target_errors():
    with pytest.raises(UnknownAlgebraError):
        expand_target(" + ")
    with pytest.raises(UnknownAlgebraError):
        expand_target("aff + nonsense")


def test_fingerprint_match():
    L = expand_target("h3 + R^3")
    assert fingerprint_match(L, "h3 + R^3")
    assert not fingerprint_match(L, "aff + R^4")
    assert not fingerprint_match(L, "h3 + R^2")
    assert fingerprint_match(catalog("n37D"), "(37D)")
