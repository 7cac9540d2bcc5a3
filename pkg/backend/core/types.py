import os
from dataclasses import dataclass
from typing import Optional, List, Dict, Literal

from dotenv import load_dotenv
from pydantic import BaseModel, Field, model_validator

FamilyTag = Literal["N6A", "N6B", "N6C", "N6D", "N6E", "N6F"]
AmbientTag = Literal["S3xT2", "S3xS3", "SU3"]
Su3BlockKind = Literal["S_U2U1", "SU2SU1_Zn", "Zn_diagonal"]
OutputFormat = Literal["table", "jsonl"]
OracleKind = Literal["euler", "loop", "isotropy", "intersect"]

FAMILY_TAGS: List[str] = ["N6A", "N6B", "N6C", "N6D", "N6E", "N6F"]
ORACLE_KINDS: List[str] = ["euler", "loop", "isotropy", "intersect"]

SIGN_CONVENTION = "euler class defined up to a global sign"


@dataclass
class Settings:
    sweep_max: int = 50
    seed: int = 0
    rank_tolerance: float = 1e-8
    min_gap: float = 1e6
    samples: int = 200
    lift_start: int = 256
    lift_cap: int = 2 ** 20
    log_level: str = "WARNING"

    @classmethod
    def from_env(cls) -> "Settings":
        load_dotenv()
        return cls(
            sweep_max=int(os.getenv("COHOM1_SWEEP_MAX", cls.sweep_max)),
            seed=int(os.getenv("COHOM1_SEED", cls.seed)),
            rank_tolerance=float(os.getenv("COHOM1_RANK_TOLERANCE", cls.rank_tolerance)),
            min_gap=float(os.getenv("COHOM1_MIN_GAP", cls.min_gap)),
            samples=int(os.getenv("COHOM1_SAMPLES", cls.samples)),
            lift_start=int(os.getenv("COHOM1_LIFT_START", cls.lift_start)),
            lift_cap=int(os.getenv("COHOM1_LIFT_CAP", cls.lift_cap)),
            log_level=os.getenv("COHOM1_LOG_LEVEL", cls.log_level),
        )


default_settings = Settings()


class VerdictPayload(BaseModel):
    kind: str
    description: str
    trivial: Optional[bool] = None
    euler: Optional[List[int]] = None


class VerdictRecord(BaseModel):
    family: FamilyTag
    params: Dict[str, int]
    valid: bool
    violations: List[str] = Field(default_factory=list)
    verdict: Optional[VerdictPayload] = None
    euler: Optional[List[int]] = None
    pi1_P: Optional[str] = None
    sign_convention: str = SIGN_CONVENTION

    @model_validator(mode="after")
    def verdict_matches_validity(self) -> "VerdictRecord":
        if self.valid != (self.verdict is not None):
            raise ValueError("verdict must be present exactly when the instance is valid")
        return self
