# backend/app/families/params.py
"""
Parameter models for the family generators, one per family, tagged by
the "family" field. Complex numbers are read as [re, im] pairs, plain
numbers or strings like "1-2j", and written back as [re, im].
"""

from typing import Annotated, Literal, Union

from pydantic import BaseModel, ConfigDict, Field, PlainSerializer, PlainValidator, TypeAdapter, ValidationError

from app.errors import SchemaValidationError


def _to_complex(value) -> complex:
    if isinstance(value, complex):
        return value
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ValueError("complex numbers are written as [re, im]")
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, str):
        return complex(value.replace(" ", "").replace("i", "j"))
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    raise ValueError(f"cannot read {value!r} as a complex number")


Complex = Annotated[
    complex,
    PlainValidator(_to_complex),
    PlainSerializer(lambda z: [z.real, z.imag], return_type=list),
]

Matrix = list[list[float]]


class _Params(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class AlmostAbelianParams(_Params):
    """
    Either z (and optionally w) directly, or the normal form given by a
    split index m and imaginary parts b: z_j = -a/2 + i b_j for j < m,
    z_k = i b_k otherwise.
    """
    family: Literal["almost_abelian"] = "almost_abelian"
    n: int = Field(ge=1)
    a: float = 0.0
    z: list[Complex] | None = None
    w: list[Complex] | None = None
    m: int | None = None
    b: list[float] | None = None


class Codim2Params(_Params):
    """
    cases[i] in {"i", "ii", "iii"} per complex direction Y_i; seeds[i] is
    h^i(X1, X1) for cases (i) and (iii) and h^i(X1, X2) for case (ii).
    b1 may be left out; it is then solved from the constraint.
    """
    family: Literal["codim2"] = "codim2"
    n: int = Field(ge=2)
    a: float
    b1: float | None = None
    b2: float = 0.0
    cases: list[Literal["i", "ii", "iii"]] = []
    z: list[Complex] = []
    w: list[Complex] = []
    seeds: list[Complex] | None = None


class Codim2H0Params(_Params):
    """h = 0 normal form: blocks (r1, r2, r3) split the n - 2 directions."""
    family: Literal["codim2_h0"] = "codim2_h0"
    n: int = Field(ge=2)
    a: float
    b: float = 0.0
    blocks: tuple[int, int, int]
    c: list[float] = []
    d: list[float] = []


class TotallyRealParams(_Params):
    """
    m = dim g', r of the X_i carry [JX_i, X_i] = λ_i X_i. The remaining
    m - r directions come from 2-forms nu on U_J, or from covectors
    alphas through α ∧ J*α.
    """
    family: Literal["totally_real"] = "totally_real"
    n: int = Field(ge=1)
    m: int = Field(ge=0)
    r: int = Field(ge=0)
    lambdas: list[float] = []
    mu: list[list[float]] | None = None
    nu: list[Matrix] | None = None
    alphas: list[list[float]] | None = None


class TwoDimComplexParams(_Params):
    family: Literal["two_dim_complex"] = "two_dim_complex"
    n: int = Field(ge=2)
    case: Literal["i", "ii"]
    alpha: list[float] | None = None
    tau1: Matrix | None = None
    tau2: Matrix | None = None
    theta_re: Matrix | None = None
    theta_im: Matrix | None = None
    witness: Literal["n6_1", "n6_2", "2h3"] | None = None


class SixDim3CommParams(_Params):
    """
    variant i:   b, h, q
    variant ii:  a, u, c, c1, c2, b1, b2, h  (h a = b1^2 + b2^2)
    variant iii: a, u, c, c1, c2, b2         (h and q are derived)
    """
    family: Literal["six_dim_3comm"] = "six_dim_3comm"
    variant: Literal["i", "ii", "iii"]
    a: float = 0.0
    u: float = 0.0
    b: float = 0.0
    c: float = 0.0
    c1: float = 0.0
    c2: float = 0.0
    b1: float = 0.0
    b2: float = 0.0
    h: float = 0.0
    q: Complex = 0j


class FourDimComplexParams(_Params):
    family: Literal["four_dim_complex"] = "four_dim_complex"
    A1: Matrix
    A2: Matrix
    X: list[float] = [0.0, 0.0, 0.0, 0.0]


FamilyParams = Annotated[
    Union[
        AlmostAbelianParams,
        Codim2Params,
        Codim2H0Params,
        TotallyRealParams,
        TwoDimComplexParams,
        SixDim3CommParams,
        FourDimComplexParams,
    ],
    Field(discriminator="family"),
]

FAMILY_ADAPTER: TypeAdapter = TypeAdapter(FamilyParams)

FAMILY_NAMES = (
    "almost_abelian",
    "codim2",
    "codim2_h0",
    "totally_real",
    "two_dim_complex",
    "six_dim_3comm",
    "four_dim_complex",
)


def parse_family_params(data: dict):
    """Validate a mapping into the matching parameter model."""
    try:
        return FAMILY_ADAPTER.validate_python(data)
    except ValidationError as exc:
        raise SchemaValidationError(f"invalid family parameters: {exc}") from exc
