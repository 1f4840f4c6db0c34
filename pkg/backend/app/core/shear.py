# backend/app/core/shear.py
"""
Two-step shear data (a, ω) on the flat Kähler space R^{2n} and the sheared
algebra with bracket [X, Y] := ω(X, Y).

Coordinates: the adapted frame Q = [a_J | a_r | U_J | U_r] with
  a_J  complex part of a (pairs v, Jv),   a_r  its orthogonal complement in a,
  U_J  (a + Ja)^⊥ (pairs),                U_r  = J a_r.
a ⊕ U is direct but a_r and U_r need not be orthogonal. Values of ω are
written in the g-orthonormal basis [a_J | a_r] of a.
"""

from dataclasses import dataclass, field, replace

import numpy as np
from pydantic import BaseModel

from app.config import DEFAULT_RANK_TOL, DEFAULT_TOL
from app.core.hermitian import HermitianStructure
from app.core.lie import LieAlgebra
from app.core.normal_forms import simultaneous_diagonalize
from app.core.tensor import (
    AltForm,
    Subspace,
    antisymmetrize,
    check_complex_structure,
    check_metric,
    commutator,
    complex_frame,
    max_abs,
    split_complex_real,
    standard_structure,
    to_complex,
)
from app.errors import DiagonalizationError, DimensionMismatchError, MetricError, PreconditionError, ShearDataError
from app.logs import get_logger

logger = get_logger(__name__)


# --- Data ---

@dataclass(frozen=True)
class PreShearData:
    n: int
    a: Subspace
    omega: np.ndarray          # W[i, j, :] = ω(e_i, e_j)
    J: np.ndarray

    @property
    def N(self) -> int:
        return 2 * self.n

    @property
    def metric(self) -> np.ndarray:
        return self.a.metric

    def scale(self) -> float:
        return max(1.0, max_abs(self.omega))

    @classmethod
    def build(cls, n: int, a_vectors, omega, metric=None, J=None,
              tol: float = DEFAULT_TOL, rank_tol: float = DEFAULT_RANK_TOL) -> "PreShearData":
        """
        a_vectors: N x d array whose columns span a.
        omega: N x N x N array, antisymmetric in the first two slots.
        Values are projected onto a; a projection defect above sqrt(tol)
        or a non-zero restriction to a x a is an error.
        """
        N = 2 * n
        g0, J0, _ = standard_structure(n)
        metric = g0 if metric is None else np.asarray(metric, dtype=float)
        J = J0 if J is None else np.asarray(J, dtype=float)
        check_metric(metric, tol)
        check_complex_structure(J, tol)
        if max_abs(J.T @ metric @ J - metric) > tol * max(1.0, max_abs(metric)):
            raise MetricError("metric is not J-invariant")
        a = Subspace.span(np.asarray(a_vectors, dtype=float).reshape(N, -1), metric, rank_tol)
        W = np.asarray(omega, dtype=float)
        if W.shape != (N, N, N):
            raise ShearDataError(f"ω must have shape {(N, N, N)}, got {W.shape}")
        scale = max(1.0, max_abs(W))
        if max_abs(W + W.transpose(1, 0, 2)) > tol * scale:
            raise ShearDataError("ω is not antisymmetric")
        projected = np.einsum("ijk,lk->ijl", W, a.projector)
        defect = max_abs(W - projected)
        if defect > np.sqrt(tol) * scale:
            raise ShearDataError(f"ω takes values outside a (defect {defect:.3e})")
        on_a = np.einsum("ia,jb,ijk->abk", a.basis, a.basis, projected)
        if max_abs(on_a) > np.sqrt(tol) * scale:
            raise ShearDataError(f"ω does not vanish on a x a (residual {max_abs(on_a):.3e})")
        return cls(n=n, a=a, omega=projected, J=J)

    @classmethod
    def from_entries(cls, n: int, a_basis, entries, metric=None, J=None,
                     tol: float = DEFAULT_TOL) -> "PreShearData":
        """a_basis: list of N-vectors; entries: 1-based (i, j, value) with i < j."""
        N = 2 * n
        W = np.zeros((N, N, N))
        for i, j, value in entries:
            if not (1 <= i < j <= N):
                raise ShearDataError(f"invalid ω entry ({i}, {j})")
            W[i - 1, j - 1] += np.asarray(value, dtype=float)
            W[j - 1, i - 1] -= np.asarray(value, dtype=float)
        vectors = np.asarray(a_basis, dtype=float).reshape(-1, N).T
        return cls.build(n, vectors, W, metric, J, tol)


@dataclass(frozen=True)
class ShearDecomposition:
    a_J: Subspace
    a_r: Subspace
    U_J: Subspace
    U_r: Subspace
    frame: np.ndarray                   # Q
    value_basis: np.ndarray             # [a_J | a_r] frame of a
    omega_q: np.ndarray                 # ω(Q_a, Q_b) in value coordinates
    J_q: np.ndarray                     # Q^-1 J Q
    components: dict[str, np.ndarray] = field(repr=False)
    reassembly_residual: float = 0.0

    @property
    def sizes(self) -> dict[str, int]:
        return {"aJ": self.a_J.dim, "ar": self.a_r.dim, "UJ": self.U_J.dim, "Ur": self.U_r.dim}

    def index(self, block: str) -> np.ndarray:
        """Frame indices of a block: aJ, ar, UJ, Ur, a (= aJ + ar), U (= UJ + Ur)."""
        p, q, s = self.a_J.dim, self.a_r.dim, self.U_J.dim
        ranges = {
            "aJ": range(0, p),
            "ar": range(p, p + q),
            "UJ": range(p + q, p + q + s),
            "Ur": range(p + q + s, p + 2 * q + s),
            "a": range(0, p + q),
            "U": range(p + q, p + 2 * q + s),
        }
        return np.array(ranges[block], dtype=int)

    def value_index(self, block: str) -> np.ndarray:
        p, q = self.a_J.dim, self.a_r.dim
        return np.array({"J": range(0, p), "r": range(p, p + q)}[block], dtype=int)

    def block(self, first: str, second: str, value: str) -> np.ndarray:
        return self.omega_q[np.ix_(self.index(first), self.index(second), self.value_index(value))]


def decompose(data: PreShearData, tol: float = DEFAULT_TOL,
              rank_tol: float = DEFAULT_RANK_TOL) -> ShearDecomposition:
    """Split a and its complement and express ω in the adapted frame."""
    g, J = data.metric, data.J
    a_J, a_r = split_complex_real(data.a, J, g, tol, rank_tol)
    B_aJ = complex_frame(a_J, J)
    B_ar = a_r.basis
    a_plus = data.a.plus(data.a.image(J, rank_tol), rank_tol)
    B_UJ = complex_frame(a_plus.orthogonal_complement(rank_tol=rank_tol), J)
    Q = np.hstack([B_aJ, B_ar, B_UJ, J @ B_ar])
    if Q.shape[1] != data.N or abs(np.linalg.det(Q)) < rank_tol:
        raise ShearDataError("adapted frame is singular; a is not a subspace of R^2n")
    A = np.hstack([B_aJ, B_ar])
    Q_inv = np.linalg.inv(Q)
    dec = ShearDecomposition(
        a_J=Subspace(B_aJ, g), a_r=a_r, U_J=Subspace(B_UJ, g), U_r=Subspace(J @ B_ar, g),
        frame=Q, value_basis=A,
        omega_q=np.einsum("ia,jb,ijk,kl,lc->abc", Q, Q, data.omega, g, A),
        J_q=Q_inv @ J @ Q,
        components={},
    )

    components = {}
    for u in "Jr":
        for v in "Jr":
            for c in "Jr":
                components[f"omega0_{u}{v}^{c}"] = dec.block("U" + u, "a" + v, c)
    for u, v in ("JJ", "Jr", "rr"):
        for c in "Jr":
            components[f"omega1_{u}{v}^{c}"] = dec.block("U" + u, "U" + v, c)

    # rebuild ω from the components alone
    rebuilt = np.zeros_like(dec.omega_q)
    for key, value in components.items():
        kind, rest = key.split("_")
        args, c = rest.split("^")
        first = dec.index("U" + args[0])
        second = dec.index(("a" if kind == "omega0" else "U") + args[1])
        vals = dec.value_index(c)
        rebuilt[np.ix_(first, second, vals)] = value
        rebuilt[np.ix_(second, first, vals)] = -value.transpose(1, 0, 2)
    W_back = np.einsum("ai,bj,abc,kc->ijk", Q_inv, Q_inv, rebuilt, A)
    residual = max_abs(W_back - data.omega)
    logger.debug("decompose: sizes %s, reassembly residual %.2e", dec.sizes, residual)
    return replace(dec, components=components, reassembly_residual=residual)


# --- Reports ---

class ConditionReport(BaseModel):
    name: str
    passed: bool
    residual: float
    threshold: float


class BreakdownReport(BaseModel):
    passed: bool
    flags: dict[str, ConditionReport]

    def failing(self) -> list[str]:
        return [name for name, flag in self.flags.items() if not flag.passed]


class FKReport(BaseModel):
    passed: bool
    commuting_K: float
    commuting_F: float
    mixed_KH: float
    skew_K: float
    threshold: float


def _report(name: str, residual: float, threshold: float) -> ConditionReport:
    return ConditionReport(name=name, passed=residual <= threshold, residual=residual, threshold=threshold)


# --- Condition checks ---

def shear_jacobi_tensor(W: np.ndarray) -> np.ndarray:
    """Cyclic sum ω(ω(X,Y),Z) + ω(ω(Y,Z),X) + ω(ω(Z,X),Y) = 3 Alt(ω(ω(.,.),.))."""
    D = np.einsum("abk,kcl->abcl", W, W)
    return 3.0 * antisymmetrize(D, 3).tensor


def check_shear_data(data: PreShearData, tol: float = DEFAULT_TOL) -> ConditionReport:
    residual = max_abs(shear_jacobi_tensor(data.omega))
    return _report("shear data Alt(ω(ω(·,·),·)) = 0", residual, tol * data.scale() ** 2)


def integrability_tensor(W: np.ndarray, J: np.ndarray) -> np.ndarray:
    """ω(JX,JY) - ω(X,Y) - Jω(JX,Y) - Jω(X,JY), i.e. J*ω - ω + J(J.ω)."""
    both = np.einsum("ia,jb,ijk->abk", J, J, W)
    left = np.einsum("ia,ijk->ajk", J, W)
    right = np.einsum("jb,ijk->ibk", J, W)
    return both - W - np.einsum("lk,abk->abl", J, left + right)


def check_integrability(data: PreShearData, tol: float = DEFAULT_TOL) -> ConditionReport:
    residual = max_abs(integrability_tensor(data.omega, data.J))
    return _report("integrability J*ω = ω - J∘J.ω", residual, tol * data.scale())


def integrability_breakdown(data: PreShearData, dec: ShearDecomposition | None = None,
                            tol: float = DEFAULT_TOL) -> BreakdownReport:
    """
    The integrability equation split by argument and value types. With
    X, W in a_r, Y in U_J and A_X = -ω(JX, ·)|a the nine parts are:
      (i)    G_X = 0
      (ii)   [J, K_X] = 0
      (iii)  f symmetric
      (iv)   P_r ω(JX, JW) = 0
      (v)    P_J ω(JX, JW) + J(h(X,W) - h(W,X)) = 0
      (vi)   ω^r(Y, X) = ω^r(JY, JX)
      (vii)  ω^J(JY,JX) - Jω^J(Y,JX) = ω^J(Y,X) + Jω^J(JY,X)
      (viii) ω on U_J x a_J: type (1,1) real part and the J-part relation
      (ix)   the same for ω on U_J x U_J
    """
    dec = dec or decompose(data, tol)
    threshold = tol * data.scale()
    Jq = dec.J_q
    Jp = Jq[np.ix_(dec.index("aJ"), dec.index("aJ"))]
    Js = Jq[np.ix_(dec.index("UJ"), dec.index("UJ"))]
    ops = _a_operators(dec)
    K, G, H, F = ops["K"], ops["G"], ops["H"], ops["F"]
    q = dec.a_r.dim

    f = _bilinear(F, q, q)
    h = _bilinear(H, q, dec.a_J.dim)

    def on_values(M, T):
        return np.einsum("dc,...c->...d", M, T)

    def twist(T):
        # Y -> JY in the U_J slot (first axis)
        return np.einsum("ba,b...->a...", Js, T)

    res: dict[str, float] = {}
    res["i"] = max((max_abs(Gk) for Gk in G), default=0.0)
    res["ii"] = max((max_abs(commutator(Jp, Kk)) for Kk in K), default=0.0)
    res["iii"] = max_abs(f - f.transpose(1, 0, 2))
    res["iv"] = max_abs(dec.block("Ur", "Ur", "r"))
    res["v"] = max_abs(dec.block("Ur", "Ur", "J") + on_values(Jp, h - h.transpose(1, 0, 2)))

    w_UJ_ar = dec.block("UJ", "ar", "r")
    w_UJ_Ur = dec.block("UJ", "Ur", "r")
    res["vi"] = max_abs(w_UJ_ar - twist(w_UJ_Ur))

    wJ_UJ_Ur = dec.block("UJ", "Ur", "J")
    wJ_UJ_ar = dec.block("UJ", "ar", "J")
    res["vii"] = max_abs(
        twist(wJ_UJ_Ur) - on_values(Jp, wJ_UJ_Ur) - wJ_UJ_ar - on_values(Jp, twist(wJ_UJ_ar))
    )

    def type_11(T_r, T_J, J_second):
        def twist2(T):
            return np.einsum("dx,adc->axc", J_second, T)

        real = max_abs(twist(twist2(T_r)) - T_r)
        cplx = max_abs(
            twist(twist2(T_J)) - T_J - on_values(Jp, twist(T_J)) - on_values(Jp, twist2(T_J))
        )
        return max(real, cplx)

    res["viii"] = type_11(dec.block("UJ", "aJ", "r"), dec.block("UJ", "aJ", "J"), Jp)
    res["ix"] = type_11(dec.block("UJ", "UJ", "r"), dec.block("UJ", "UJ", "J"), Js)

    labels = {
        "i": "G_X = 0",
        "ii": "[J, K_X] = 0",
        "iii": "f symmetric",
        "iv": "(ω1)_rr^r = 0",
        "v": "(ω1)_rr^J = -2J∘Alt(h)",
        "vi": "(ω0)_Jr^r = J*(ω1)_Jr^r",
        "vii": "mixed (ω0)/(ω1) J-value relation",
        "viii": "(ω0)_JJ type (1,1)",
        "ix": "(ω1)_JJ type (1,1)",
    }
    flags = {key: _report(labels[key], value, threshold) for key, value in res.items()}
    return BreakdownReport(passed=all(flag.passed for flag in flags.values()), flags=flags)


# --- ν = ν1 + 2ν2 ---

@dataclass(frozen=True)
class NuForms:
    nu1: AltForm
    nu2: AltForm

    @property
    def nu(self) -> AltForm:
        return self.nu1 + 2.0 * self.nu2


def compute_nu(data: PreShearData) -> NuForms:
    """ν1 = Alt(g(J*ω(·,·), ω(·,·))), ν2 = Alt(g(J*ω(ω(·,·),·),·))."""
    W, J, g = data.omega, data.J, data.metric
    JW = np.einsum("ia,jb,ijk->abk", J, J, W)
    nu1 = antisymmetrize(np.einsum("abk,kl,cdl->abcd", JW, g, W))
    J_vals = np.einsum("mk,abk->abm", J, W)
    nu2 = antisymmetrize(np.einsum("abm,nc,mnl,ld->abcd", J_vals, J, W, g))
    return NuForms(nu1=nu1, nu2=nu2)


def restrict_residual(form: AltForm, *bases: np.ndarray) -> float:
    """
    Largest value of the form on tuples whose k-th entry lies in bases[k].
    A single basis stands for Λ^k of its span.
    """
    if len(bases) == 1:
        if bases[0].shape[1] < form.degree:
            return 0.0
        return max_abs(form.restrict(bases[0]))
    if len(bases) != form.degree:
        raise DimensionMismatchError(f"need 1 or {form.degree} bases, got {len(bases)}")
    if any(B.shape[1] == 0 for B in bases):
        return 0.0
    out = form.tensor
    for axis, B in enumerate(bases):
        out = np.moveaxis(np.tensordot(B.T, out, axes=([1], [axis])), 0, axis)
    return max_abs(out)


def check_nu(data: PreShearData, tol: float = DEFAULT_TOL) -> ConditionReport:
    residual = compute_nu(data).nu.norm()
    return _report("SKT four-form ν = ν1 + 2ν2 = 0", residual, tol * data.scale() ** 2)


# --- A_X = F_X + G_X + H_X + K_X ---

def _a_operators(dec: ShearDecomposition) -> dict[str, list[np.ndarray]]:
    a_idx = dec.index("a")
    vJ, vr = dec.value_index("J"), dec.value_index("r")
    p = dec.a_J.dim
    out: dict[str, list[np.ndarray]] = {"A": [], "K": [], "G": [], "H": [], "F": []}
    for k in dec.index("Ur"):
        A = -dec.omega_q[k][a_idx].T          # rows: value coords, cols: argument in a
        out["A"].append(A)
        out["K"].append(A[np.ix_(vJ, np.arange(p))])
        out["G"].append(A[np.ix_(vr, np.arange(p))])
        out["H"].append(A[np.ix_(vJ, np.arange(p, A.shape[1]))])
        out["F"].append(A[np.ix_(vr, np.arange(p, A.shape[1]))])
    return out


def _bilinear(blocks: list[np.ndarray], q: int, width: int) -> np.ndarray:
    """out[i, j, :] = blocks[i][:, j]"""
    out = np.zeros((q, q, width))
    for i, M in enumerate(blocks):
        out[i] = M.T
    return out


@dataclass(frozen=True)
class AOperators:
    A: list[np.ndarray]
    F: list[np.ndarray]
    G: list[np.ndarray]
    H: list[np.ndarray]
    K: list[np.ndarray]
    f: np.ndarray              # f[i, j, :] = F_{X_i}(X_j)
    h: np.ndarray              # h[i, j, :] = H_{X_i}(X_j)
    eigenbasis: np.ndarray | None = None   # columns: unitary basis Y_i of (a_J, J) in complex coordinates
    alpha: np.ndarray | None = None        # alpha[i, k] = α_i(X_k)

    def K_of(self, x: np.ndarray) -> np.ndarray:
        """K for the a_r vector with coordinates x."""
        if not self.K:
            return np.zeros((0, 0))
        return np.tensordot(np.asarray(x, dtype=float), np.array(self.K), axes=(0, 0))


def extract_A(data: PreShearData, dec: ShearDecomposition | None = None,
              tol: float = DEFAULT_TOL) -> AOperators:
    """Blocks of A_X = -ω0(JX, ·) along a = a_J ⊕ a_r for an orthonormal basis X_k of a_r."""
    dec = dec or decompose(data, tol)
    ops = _a_operators(dec)
    q, p = dec.a_r.dim, dec.a_J.dim
    f = _bilinear(ops["F"], q, q)
    h = _bilinear(ops["H"], q, p)
    eigenbasis = alpha = None
    if p and q:
        Jp = dec.J_q[np.ix_(dec.index("aJ"), dec.index("aJ"))]
        scale = data.scale()
        if all(max_abs(commutator(Jp, K)) <= tol * scale for K in ops["K"]):
            try:
                U, alpha = simultaneous_diagonalize([to_complex(K) for K in ops["K"]], tol=tol)
                eigenbasis = U
            except (DiagonalizationError, PreconditionError) as exc:
                logger.debug("no common eigenbasis for K_X: %s", exc)
    return AOperators(A=ops["A"], F=ops["F"], G=ops["G"], H=ops["H"], K=ops["K"],
                      f=f, h=h, eigenbasis=eigenbasis, alpha=alpha)


def check_FK(data: PreShearData, ops: AOperators | None = None,
             tol: float = DEFAULT_TOL) -> FKReport:
    """
    [K_X, K_W] = 0, [F_X, F_W] = 0, K_X H_W + H_X F_W symmetric in (X, W),
    and K_X^T K_W + K_X K_W + K_{f(X,W)} skew.
    """
    ops = ops or extract_A(data, tol=tol)
    q = len(ops.K)
    r = {"commuting_K": 0.0, "commuting_F": 0.0, "mixed_KH": 0.0, "skew_K": 0.0}
    for i in range(q):
        for j in range(q):
            Ki, Kj, Fi, Fj, Hi, Hj = ops.K[i], ops.K[j], ops.F[i], ops.F[j], ops.H[i], ops.H[j]
            r["commuting_K"] = max(r["commuting_K"], max_abs(commutator(Ki, Kj)))
            r["commuting_F"] = max(r["commuting_F"], max_abs(commutator(Fi, Fj)))
            mixed = Ki @ Hj + Hi @ Fj - (Kj @ Hi + Hj @ Fi)
            r["mixed_KH"] = max(r["mixed_KH"], max_abs(mixed))
            S = Ki.T @ Kj + Ki @ Kj + ops.K_of(ops.f[i, j])
            r["skew_K"] = max(r["skew_K"], max_abs(S + S.T))
    threshold = tol * data.scale() ** 2
    return FKReport(passed=all(v <= threshold for v in r.values()), threshold=threshold, **r)


# --- Construction ---

def construct_shear(data: PreShearData, tol: float = DEFAULT_TOL) -> tuple[LieAlgebra, HermitianStructure]:
    """Bracket [X, Y] := ω(X, Y) on R^{2n} with the flat (g, J) attached unchanged."""
    report = check_shear_data(data, tol)
    if not report.passed:
        raise ShearDataError(f"not shear data: {report.name} (residual {report.residual:.3e})")
    L = LieAlgebra(data.omega, name="shear")
    return L, HermitianStructure(L, data.metric, data.J)
