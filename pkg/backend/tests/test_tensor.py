# backend/tests/test_tensor.py

import numpy as np
import pytest

from app.core.tensor import (
    AltForm,
    Subspace,
    antisymmetrize,
    basis_form,
    check_complex_structure,
    check_metric,
    covector,
    from_coefficients,
    from_complex,
    pullback_J,
    split_complex_real,
    standard_structure,
    to_complex,
    wedge,
)
from app.errors import ComplexStructureError, InputError, MetricError, UnsupportedArityError

E = np.eye(4)


def test_wedge_normalisation():
    form = wedge(covector(E[0]), covector(E[1]))
    assert form.degree == 2
    assert form.evaluate(E[0], E[1]) == pytest.approx(1.0)
    assert form.evaluate(E[1], E[0]) == pytest.approx(-1.0)


def test_wedge_of_one_forms_is_antisymmetric(rng):
    a, b = covector(rng.standard_normal(4)), covector(rng.standard_normal(4))
    assert np.allclose(wedge(a, b).tensor, -wedge(b, a).tensor)
    assert wedge(a, a).norm() == pytest.approx(0.0, abs=1e-14)


def test_four_form_volume():
    vol = wedge(basis_form(4, (0, 1)), basis_form(4, (2, 3)))
    assert vol.evaluate(*E) == pytest.approx(1.0)
    assert np.allclose(vol.tensor, basis_form(4, (0, 1, 2, 3)).tensor)


def test_antisymmetrize_rejects_arity_five():
    with pytest.raises(UnsupportedArityError):
        antisymmetrize(np.zeros((2,) * 5))


def test_wedge_rejects_degree_above_four():
    with pytest.raises(UnsupportedArityError):
        wedge(basis_form(6, (0, 1, 2)), basis_form(6, (3, 4)))


def test_coefficients_inverse():
    coeffs = np.arange(1.0, 7.0)
    form = from_coefficients(4, 2, coeffs)
    assert np.allclose(form.coefficients, coeffs)
    assert form.evaluate(E[1], E[0]) == pytest.approx(-1.0)


def test_non_finite_form_rejected():
    with pytest.raises(InputError):
        AltForm(np.array([[0.0, np.nan], [-np.nan, 0.0]]), 2)


def test_standard_structure_conventions():
    g, J, sigma = standard_structure(2)
    assert J[1, 0] == 1.0 and J[0, 1] == -1.0
    assert np.allclose(J @ J, -np.eye(4))
    assert np.allclose(g, np.eye(4))
    assert sigma.evaluate(E[0], E[1]) == pytest.approx(1.0)
    assert np.allclose(pullback_J(sigma, J).tensor, sigma.tensor)


def test_metric_and_complex_structure_checks():
    with pytest.raises(MetricError):
        check_metric(np.diag([1.0, -1.0]))
    with pytest.raises(MetricError):
        check_metric(np.array([[1.0, 0.5], [0.0, 1.0]]))
    with pytest.raises(ComplexStructureError):
        check_complex_structure(np.eye(2))
    with pytest.raises(ComplexStructureError):
        check_complex_structure(np.eye(3))


def test_subspace_span_drops_dependent_vectors():
    V = Subspace.span(np.column_stack([E[0], 2 * E[0], E[0] + E[1]]))
    assert V.dim == 2
    assert V.contains(E[1])
    assert not V.contains(E[2])


def test_split_complex_real():
    g, J, _ = standard_structure(3)
    V = Subspace.span(np.eye(6)[:, :3], g)
    V_J, V_r = split_complex_real(V, J)
    assert (V_J.dim, V_r.dim) == (2, 1)
    assert V_J.is_invariant(J)
    assert np.allclose(V_r.basis.T @ V_J.basis, 0.0)


def test_complex_coordinates(rng):
    Z = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    M = from_complex(Z)
    _, J, _ = standard_structure(2)
    assert np.allclose(M @ J, J @ M)
    assert np.allclose(to_complex(M), Z)
