from datetime import datetime, timezone
from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field

SCHEMA_VERSION = 1


class Status(str, Enum):
    ANISOTROPIC = "ANISOTROPIC"
    NOT_ANISOTROPIC = "NOT_ANISOTROPIC"
    INCONCLUSIVE = "INCONCLUSIVE"


class Record(BaseModel):
    """Base of every wire record; ``v`` versions the schema."""

    v: int = SCHEMA_VERSION

    def to_dict(self) -> dict:
        return self.model_dump(mode="json")


class RunConfig(Record):
    seed: int = 0
    char: int = 2
    field_bits: int = 20
    trials: int = 100
    budget: int = 10000
    format: str = "json"


class ComplexRecord(Record):
    m: int
    facets: List[List[int]]


class InspectReport(Record):
    complex: str
    m: int
    vertices: int
    d: int
    pure: bool
    f: List[int]
    h: List[int]


class HomologyReport(Record):
    complex: str
    char: int
    reduced_betti: List[int]
    homology_sphere: bool
    homology_ball: bool


class Certificate(Record):
    complex: str
    char: int = 2
    degree: int
    status: Status
    basis: List[List[int]] = Field(default_factory=list)
    multipliers: List[List[int]] = Field(default_factory=list)
    witness: Dict[str, Any] = Field(default_factory=dict)
    seed: int = 0
    error_bound_log2: int = 0
    lsop: Dict[str, Any] = Field(default_factory=dict)


class ProbeReport(Record):
    complex: str
    char: int
    degree: int
    trials: int
    seed: int
    status: Status
    counterexample: Optional[Dict[str, Any]] = None
    message: str = ""


class LefschetzReport(Record):
    complex: str
    char: int
    seed: int
    omega: Dict[str, Any] = Field(default_factory=dict)
    ranks: List[int] = Field(default_factory=list)
    points: int = 0
    expected: List[int] = Field(default_factory=list)
    verdict: str = "inconclusive"
    error_bound_log2: int = 0


class MoveStep(Record):
    move: Optional[Dict[str, List[int]]] = None
    complex: str
    status: Status
    h: List[int]


class MoveInvarianceReport(Record):
    start: str
    seed: int
    steps: List[MoveStep] = Field(default_factory=list)
    constant: bool = True


class DiffopReport(Record):
    complex: str
    n: int
    q: int
    basis: List[List[int]]
    fact_c: bool
    distinguished_nonzero: bool
    others_vanish: bool
    values: Dict[str, Any] = Field(default_factory=dict)


class DegreeEntry(Record):
    kind: str
    rows: List[int]
    cols: List[int]
    degree: Optional[int] = None  # None for the zero function
    leading_matches: Optional[bool] = None


class DegreeArgumentReport(Record):
    complex: str
    n: int
    pinned: List[int]
    sign: int = 1
    entries: List[DegreeEntry] = Field(default_factory=list)
    passed: bool = False
    cone_isomorphism: Optional[bool] = None


class IdentityResult(Record):
    name: str
    passed: bool
    sign: Optional[int] = None
    detail: str = ""


class IdentityReport(Record):
    results: List[IdentityResult] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)


class SuiteEntry(Record):
    name: str
    check: str
    status: str
    seconds: float = 0.0
    detail: Dict[str, Any] = Field(default_factory=dict)


class SuiteSummary(Record):
    started_at: str = Field(default_factory=lambda: datetime.now(timezone.utc).isoformat())
    entries: List[SuiteEntry] = Field(default_factory=list)
    passed: int = 0
    failed: int = 0
    inconclusive: int = 0


class CheckReport(Record):
    check: str
    complex: Optional[str] = None
    passed: bool = False
    detail: Dict[str, Any] = Field(default_factory=dict)
