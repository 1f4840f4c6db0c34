# backend/app/pipeline.py

from pathlib import Path

from pydantic import BaseModel

from app.config import DEFAULT_TOL, SCHEMA_VERSION
from app.core.hermitian import SKTReport, skt_verdict
from app.core.shear import (
    ConditionReport,
    PreShearData,
    check_integrability,
    check_nu,
    check_shear_data,
    construct_shear,
    integrability_breakdown,
)
from app.errors import CheckFailure
from app.io import algebra_to_doc, load_shear
from app.logs import get_logger

logger = get_logger(__name__)


class ShearRun(BaseModel):
    schema_version: str = SCHEMA_VERSION
    conditions: list[ConditionReport]
    failing_flags: list[str] = []
    verdict: SKTReport | None = None
    algebra: dict | None = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.conditions) and self.verdict is not None and self.verdict.verdict.is_skt

    def failing(self) -> list[str]:
        return [c.name for c in self.conditions if not c.passed]


def run_shear(data: PreShearData, tol: float = DEFAULT_TOL) -> ShearRun:
    """
    2) shear-data condition Alt(ω(ω(·,·),·)) = 0
    3) integrability, split into its nine flags when it fails
    4) SKT four-form ν
    5) sheared algebra with (g, J) attached and its SKT verdict

    Step 1 (loading) lives in run_shear_file. Conditions are reported, not
    raised; the algebra is only built when step 2 passes.
    """
    logger.info("Step 2/5: Checking the shear-data condition...")
    shear = check_shear_data(data, tol)
    logger.info("Step 3/5: Checking integrability...")
    integrable = check_integrability(data, tol)
    flags: list[str] = []
    if not integrable.passed:
        try:
            flags = integrability_breakdown(data, tol=tol).failing()
        except CheckFailure as exc:
            logger.warning("integrability breakdown skipped: %s", exc)
    logger.info("Step 4/5: Checking the SKT four-form...")
    nu = check_nu(data, tol)
    conditions = [shear, integrable, nu]

    if not shear.passed:
        logger.info("Step 5/5: skipped, ω is not shear data")
        return ShearRun(conditions=conditions, failing_flags=flags)
    logger.info("Step 5/5: Constructing the sheared algebra...")
    L, H = construct_shear(data, tol)
    report = skt_verdict(H, tol)
    logger.info("Shear pipeline finished: verdict %s", report.verdict.value)
    return ShearRun(conditions=conditions, failing_flags=flags, verdict=report,
                    algebra=algebra_to_doc(L, H, tol=0.0))


def run_shear_file(path: Path, tol: float = DEFAULT_TOL) -> ShearRun:
    logger.info("Step 1/5: Loading shear data from %s...", path)
    data = load_shear(path, tol)
    return run_shear(data, tol)
