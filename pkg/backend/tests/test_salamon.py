# backend/tests/test_salamon.py

import numpy as np
import pytest

from app.core.catalog import heisenberg
from app.core.salamon import parse_entries, parse_salamon, print_salamon
from app.errors import JacobiViolationError, SalamonSyntaxError, UnboundParameterError


def test_h3_bracket_orientation():
    L = parse_salamon("(0,0,21)")
    assert L.dim == 3
    assert L.entries() == [(1, 2, 3, 1.0)]
    assert np.allclose(L.structure, heisenberg(1).structure)


def test_print_is_inverse_of_parse():
    L = parse_salamon("(0,0,21)")
    text = print_salamon(L)
    assert text == "(0,0,-12)"
    assert np.allclose(parse_salamon(text).structure, L.structure)


def test_coefficients_and_signs():
    L = parse_salamon("(0, 2.21, -21 + 3.5.31)")
    # de2 = 2 e21  ->  [e2, e1] = -2 e2
    assert L.structure[1, 0, 1] == pytest.approx(-2.0)
    assert L.structure[0, 1, 1] == pytest.approx(2.0)
    assert L.structure[1, 0, 2] == pytest.approx(1.0)
    assert L.structure[2, 0, 2] == pytest.approx(-3.5)


def test_unicode_minus_and_named_parameters():
    L = parse_salamon("(0,λ.21+31,−21+λ.31)", {"lambda": 0.5})
    assert L.structure[1, 0, 1] == pytest.approx(-0.5)
    assert L.structure[1, 0, 2] == pytest.approx(1.0)


def test_unbound_parameter():
    with pytest.raises(UnboundParameterError):
        parse_salamon("(0,λ.21)")


def test_syntax_error_reports_position():
    with pytest.raises(SalamonSyntaxError) as excinfo:
        parse_salamon("(0,0,2x)")
    assert excinfo.value.position == 5
    assert "position 5" in str(excinfo.value)


@pytest.mark.parametrize("text", ["0,0,21)", "(0,0,21", "(0,0,21) x", "(0,,21)"])
def test_malformed_tuples(text):
    with pytest.raises(SalamonSyntaxError):
        parse_entries(text)


def test_index_outside_dimension():
    with pytest.raises(SalamonSyntaxError):
        parse_salamon("(0,0,41)")
    with pytest.raises(SalamonSyntaxError):
        parse_salamon("(0,0,11)")


def test_jacobi_violation():
    with pytest.raises(JacobiViolationError):
        parse_salamon("(0,0,12,34)")


def test_print_rejects_dimension_ten():
    L = parse_salamon("(" + ",".join(["0"] * 10) + ")")
    with pytest.raises(SalamonSyntaxError):
        print_salamon(L)
