# backend/tests/test_io.py

import numpy as np
import pytest

from app.core.catalog import heisenberg
from app.core.random_data import random_pre_shear
from app.errors import DimensionMismatchError, InputError, SchemaValidationError
from app.io import (
    algebra_from_doc,
    algebra_to_doc,
    dumps,
    family_from_doc,
    load_algebra,
    load_matrix,
    loads_json,
    matrix_from_doc,
    shear_from_doc,
    shear_to_doc,
)


def test_algebra_document_round_trip(write_json):
    path = write_json("h3.json", algebra_to_doc(heisenberg(1)))
    L, H = load_algebra(path)
    assert H is None
    assert np.allclose(L.structure, heisenberg(1).structure)


def test_hermitian_pair_defaults_to_standard():
    doc = {"dim": 4, "structure": [], "J": [[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]]}
    _, H = algebra_from_doc(doc)
    assert np.allclose(H.metric, np.eye(4))


@pytest.mark.parametrize("doc", [
    {"dim": 3, "structure": [], "J": [[0.0]]},
    {"dim": 2, "structure": [], "metric": [[1.0, 0.0]]},
])
def test_hermitian_shapes_checked(doc):
    with pytest.raises(DimensionMismatchError):
        algebra_from_doc(doc)


def test_schema_error_names_the_json_path():
    doc = {"dim": 3, "structure": [{"i": 0, "j": 2, "k": 3, "c": 1.0}]}
    with pytest.raises(SchemaValidationError, match=r"\$\.structure\[0\]\.i"):
        algebra_from_doc(doc)


def test_malformed_and_missing_files(tmp_path):
    with pytest.raises(InputError, match="malformed JSON"):
        loads_json('{"dim": 3', "cut.json")
    with pytest.raises(InputError, match="not found"):
        load_algebra(tmp_path / "nowhere.json")


def test_shear_document_checks_vector_lengths():
    doc = {"n": 2, "a_basis": [[1.0, 0.0, 0.0]], "omega": []}
    with pytest.raises(DimensionMismatchError):
        shear_from_doc(doc)
    doc = {"n": 1, "a_basis": [[1.0, 0.0]], "omega": [{"i": 1, "j": 2, "value": [1.0]}]}
    with pytest.raises(DimensionMismatchError):
        shear_from_doc(doc)


def test_shear_document_round_trip(rng):
    data = random_pre_shear(3, 1, 1, rng, integrable=True)
    again = shear_from_doc(shear_to_doc(data))
    assert np.allclose(again.omega, data.omega)
    assert np.allclose(again.a.projector, data.a.projector)


def test_matrix_documents(write_json):
    assert load_matrix(write_json("m.json", {"matrix": [[1.0, 2.0], [3.0, 4.0]]})).shape == (2, 2)
    assert matrix_from_doc([[5.0]])[0, 0] == 5.0
    with pytest.raises(DimensionMismatchError):
        matrix_from_doc([[1.0, 2.0], [3.0]])
    with pytest.raises(SchemaValidationError):
        matrix_from_doc({"rows": [[1.0]]})


def test_unknown_family_rejected():
    with pytest.raises(SchemaValidationError):
        family_from_doc({"family": "nope"})


def test_dumps_is_key_order_independent():
    assert dumps({"b": 1, "a": [1, 2]}) == dumps({"a": [1, 2], "b": 1})
