# backend/app/families/scan.py
"""
Seeded sweep over the six-dimensional families.

Every sample i draws its family, stratum and parameters from
default_rng([seed, i]), so results do not depend on worker count or
order. Each instance runs through Jacobi, Nijenhuis, the SKT verdict and
the fingerprint; fingerprints are bucketed and compared with the named
algebras of the six-dimensional classification.
"""

import json
from concurrent.futures import ProcessPoolExecutor
from typing import Callable

import numpy as np
from pydantic import BaseModel
from tqdm import tqdm

from app.config import DEFAULT_RANK_TOL, DEFAULT_TOL, SCHEMA_VERSION
from app.core.catalog import expand_target
from app.core.hermitian import skt_verdict
from app.core.lie import Fingerprint, jacobi_residual, series
from app.errors import SKTError
from app.families.complex2d import witness_params
from app.families.params import (
    AlmostAbelianParams,
    Codim2H0Params,
    Codim2Params,
    FourDimComplexParams,
    SixDim3CommParams,
    TotallyRealParams,
    TwoDimComplexParams,
)
from app.families.registry import generate
from app.families.six_dim import random_4d_complex_pair
from app.logs import get_logger

logger = get_logger(__name__)

# name -> direct-sum target
COVERAGE_TARGETS: dict[str, str] = {
    "R^6": "R^6",
    "aff+R^4": "aff + R^4",
    "h3+R^3": "h3 + R^3",
    "2aff+R^2": "2aff + R^2",
    "3aff": "3aff",
    "aff+h3+R": "aff + h3 + R",
    "2h3": "2h3",
    "r3p0+R^3": "r3p(λ=0) + R^3",
    "g5_14^0+R": "g5_14(α=0) + R",
    "n6_1": "n6_1",
    "n6_2": "n6_2",
}


# --- Parameter draws ---

def _mag(rng: np.random.Generator) -> float:
    """Log-uniform in [0.1, 10]."""
    return float(10.0 ** rng.uniform(-1.0, 1.0))


def _signed(rng: np.random.Generator) -> float:
    return _mag(rng) * float(rng.choice([-1.0, 1.0]))


def _phase(rng: np.random.Generator) -> complex:
    return complex(np.exp(2j * np.pi * rng.uniform()))


def _almost_abelian(rng):
    stratum = str(rng.choice(["flat", "aff", "heisenberg", "rotation", "jordan", "generic"]))
    a, z, w = 0.0, [0j, 0j], [0j, 0j]
    if stratum == "aff":
        a = _mag(rng)
    elif stratum == "heisenberg":
        w = [_mag(rng) * _phase(rng), 0j]
    elif stratum == "rotation":
        z = [1j * _signed(rng), 0j]
    elif stratum == "jordan":
        z = [0j, 1j * _signed(rng)]
        w = [_mag(rng) * _phase(rng), _mag(rng) * _phase(rng)]
    elif stratum == "generic":
        a = _mag(rng)
        split = int(rng.integers(0, 3))
        z = [complex(-a / 2 if j < split else 0.0, _signed(rng)) for j in range(2)]
        w = [_mag(rng) * _phase(rng) for _ in range(2)]
    return stratum, AlmostAbelianParams(n=3, a=a, z=z, w=w)


def _codim2(rng):
    stratum = str(rng.choice(["ii", "i", "iii+", "iii-", "seeded_i", "seeded_ii"]))
    if stratum.startswith("seeded"):
        case = stratum.split("_")[1]
        z = 1j * _signed(rng) if case == "i" else 0j
        return stratum, Codim2Params(n=3, a=_mag(rng), b2=_mag(rng) * float(rng.integers(0, 2)),
                                     cases=[case], z=[z], w=[1j * _signed(rng)],
                                     seeds=[_mag(rng) * _phase(rng)])
    blocks = {"ii": (1, 1, 1), "i": (0, 1, 1), "iii+": (0, 0, 1), "iii-": (0, 0, 0)}[stratum]
    return stratum, Codim2H0Params(n=3, a=_mag(rng), b=_mag(rng) * float(rng.integers(0, 2)),
                                   blocks=blocks, c=[_signed(rng)], d=[_signed(rng)])


def _totally_real(rng):
    stratum = str(rng.choice(["aff1", "aff2", "aff3", "central", "mixed"]))
    if stratum.startswith("aff"):
        m = int(stratum[-1])
        size = 2 * (3 - m)
        mu = [list(rng.standard_normal(size) * float(rng.integers(0, 2))) for _ in range(m)]
        return stratum, TotallyRealParams(n=3, m=m, r=m, lambdas=[_signed(rng) for _ in range(m)], mu=mu)
    if stratum == "central":
        return stratum, TotallyRealParams(n=3, m=1, r=0, alphas=[list(rng.standard_normal(4))])
    return stratum, TotallyRealParams(n=3, m=2, r=1, lambdas=[_signed(rng)],
                                      mu=[list(rng.standard_normal(2))],
                                      alphas=[list(rng.standard_normal(2))])


def _two_dim_complex(rng):
    stratum = str(rng.choice(["i", "n6_1", "n6_2", "2h3"]))
    if stratum == "i":
        return stratum, TwoDimComplexParams(n=3, case="i", alpha=list(rng.standard_normal(4)))
    base = witness_params(stratum)
    s = _mag(rng)
    scaled = {key: (np.asarray(getattr(base, key)) * s).tolist()
              for key in ("tau1", "tau2", "theta_re", "theta_im")}
    return stratum, TwoDimComplexParams(n=3, case="ii", **scaled)


def _six_dim_3comm(rng):
    variant = str(rng.choice(["i", "ii", "iii"]))
    u = _mag(rng) * float(rng.integers(0, 2))
    if variant == "i":
        q = _mag(rng) * _phase(rng) * float(rng.integers(0, 2))
        return variant, SixDim3CommParams(variant="i", b=_signed(rng), h=_signed(rng), q=q)
    if variant == "ii":
        a, b1, b2 = _mag(rng), _signed(rng), _signed(rng)
        return variant, SixDim3CommParams(variant="ii", a=a, b1=b1, b2=b2, h=(b1 ** 2 + b2 ** 2) / a,
                                          c=_signed(rng), c1=_signed(rng), c2=_signed(rng), u=u)
    return variant, SixDim3CommParams(variant="iii", a=_signed(rng), b2=_signed(rng), c=_signed(rng),
                                      c1=_signed(rng), c2=_signed(rng), u=u)


def _four_dim_complex(rng):
    A1, A2 = random_4d_complex_pair(rng, scale=_mag(rng))
    return "skew", FourDimComplexParams(A1=A1.tolist(), A2=A2.tolist(), X=list(rng.standard_normal(4)))


SAMPLERS: dict[str, Callable] = {
    "almost_abelian": _almost_abelian,
    "codim2": _codim2,
    "totally_real": _totally_real,
    "two_dim_complex": _two_dim_complex,
    "six_dim_3comm": _six_dim_3comm,
    "four_dim_complex": _four_dim_complex,
}


def draw(seed: int, index: int):
    """(family, stratum, params) for sample `index`."""
    rng = np.random.default_rng([seed, index])
    family = str(rng.choice(list(SAMPLERS)))
    stratum, params = SAMPLERS[family](rng)
    return family, stratum, params


# --- Records ---

class ScanRecord(BaseModel):
    index: int
    family: str
    stratum: str
    params: dict
    verdict: str
    residuals: dict[str, float] = {}
    fingerprint: dict | None = None
    matches: list[str] = []
    error: str | None = None


class Bucket(BaseModel):
    fingerprint: dict
    count: int
    names: list[str]
    families: list[str]


class ScanSummary(BaseModel):
    schema_version: str = SCHEMA_VERSION
    samples: int
    seed: int
    verdicts: dict[str, int]
    families: dict[str, int]
    failures: int
    buckets: list[Bucket]
    coverage: dict[str, bool]


class ScanReport(BaseModel):
    records: list[ScanRecord]
    summary: ScanSummary

    def json_lines(self) -> str:
        lines = [json.dumps(r.model_dump(mode="json"), sort_keys=True) for r in self.records]
        lines.append(json.dumps({"summary": self.summary.model_dump(mode="json")}, sort_keys=True))
        return "\n".join(lines)


_TARGET_CACHE: dict[str, Fingerprint] = {}


def target_fingerprints(tol: float = DEFAULT_TOL, rank_tol: float = DEFAULT_RANK_TOL) -> dict[str, Fingerprint]:
    if not _TARGET_CACHE:
        for name, target in COVERAGE_TARGETS.items():
            _TARGET_CACHE[name] = series(expand_target(target, tol=tol), tol, rank_tol)
    return _TARGET_CACHE


def run_sample(seed: int, index: int, tol: float = DEFAULT_TOL,
               rank_tol: float = DEFAULT_RANK_TOL) -> ScanRecord:
    family, stratum, params = draw(seed, index)
    base = dict(index=index, family=family, stratum=stratum, params=params.model_dump(mode="json"))
    try:
        L, H = generate(params, tol)
        report = skt_verdict(H, tol)
        fp = series(L, tol, rank_tol)
    except SKTError as exc:
        logger.warning("sample %d (%s/%s) failed: %s", index, family, stratum, exc)
        return ScanRecord(verdict="error", error=str(exc), **base)
    residuals = {
        "jacobi": jacobi_residual(L),
        "nijenhuis": report.nijenhuis,
        "d_torsion": report.d_torsion,
        "scale": report.scale,
    }
    matches = [name for name, target in target_fingerprints(tol, rank_tol).items() if target == fp]
    return ScanRecord(verdict=report.verdict.value, residuals=residuals,
                      fingerprint=fp.as_dict(), matches=matches, **base)


def _run_pair(args: tuple[int, int, float, float]) -> ScanRecord:
    return run_sample(*args)


def summarize(records: list[ScanRecord], samples: int, seed: int) -> ScanSummary:
    verdicts: dict[str, int] = {}
    families: dict[str, int] = {}
    buckets: dict[str, Bucket] = {}
    for r in records:
        verdicts[r.verdict] = verdicts.get(r.verdict, 0) + 1
        families[r.family] = families.get(r.family, 0) + 1
        if r.fingerprint is None:
            continue
        key = json.dumps(r.fingerprint, sort_keys=True)
        if key not in buckets:
            buckets[key] = Bucket(fingerprint=r.fingerprint, count=0, names=list(r.matches), families=[])
        bucket = buckets[key]
        bucket.count += 1
        if r.family not in bucket.families:
            bucket.families.append(r.family)
    hit = {name for r in records for name in r.matches}
    failures = sum(1 for r in records if r.verdict not in ("kahler", "skt_strict"))
    ordered = sorted(buckets.values(), key=lambda b: (-b.count, json.dumps(b.fingerprint, sort_keys=True)))
    for b in ordered:
        b.families.sort()
    return ScanSummary(
        samples=samples,
        seed=seed,
        verdicts=dict(sorted(verdicts.items())),
        families=dict(sorted(families.items())),
        failures=failures,
        buckets=ordered,
        coverage={name: name in hit for name in COVERAGE_TARGETS},
    )


def scan_6d(samples: int, seed: int = 0, tol: float = DEFAULT_TOL, rank_tol: float = DEFAULT_RANK_TOL,
            workers: int = 1, progress: bool = False) -> ScanReport:
    if samples <= 0:
        return ScanReport(records=[], summary=summarize([], 0, seed))
    jobs = [(seed, i, tol, rank_tol) for i in range(samples)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(tqdm(pool.map(_run_pair, jobs, chunksize=16), total=samples,
                                desc="scan6d", disable=not progress))
    else:
        records = [_run_pair(job) for job in tqdm(jobs, desc="scan6d", disable=not progress)]
    summary = summarize(records, samples, seed)
    logger.info("scan6d: %d samples, %d failures, %d buckets", samples, summary.failures, len(summary.buckets))
    return ScanReport(records=records, summary=summary)
