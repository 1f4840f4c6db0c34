# backend/app/families/registry.py

from typing import Callable

from app.config import DEFAULT_TOL
from app.core.hermitian import HermitianStructure
from app.core.lie import LieAlgebra
from app.errors import UnknownAlgebraError
from app.families.almost_abelian import gen_almost_abelian
from app.families.codim2 import gen_codim2, gen_codim2_h0
from app.families.complex2d import gen_2d_complex
from app.families.params import parse_family_params
from app.families.six_dim import gen_4d_complex, gen_6d_3comm
from app.families.totally_real import gen_totally_real

Generator = Callable[..., tuple[LieAlgebra, HermitianStructure]]

GENERATORS: dict[str, Generator] = {
    "almost_abelian": gen_almost_abelian,
    "codim2": gen_codim2,
    "codim2_h0": gen_codim2_h0,
    "totally_real": gen_totally_real,
    "two_dim_complex": gen_2d_complex,
    "six_dim_3comm": gen_6d_3comm,
    "four_dim_complex": gen_4d_complex,
}


def generate(params, tol: float = DEFAULT_TOL) -> tuple[LieAlgebra, HermitianStructure]:
    """Dispatch on the "family" tag; params may be a model or a plain mapping."""
    if isinstance(params, dict):
        params = parse_family_params(params)
    generator = GENERATORS.get(params.family)
    if generator is None:
        raise UnknownAlgebraError(f"unknown family '{params.family}'")
    return generator(params, tol)
