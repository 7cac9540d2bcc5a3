import itertools
import logging
from typing import Iterator, List, Optional

import numpy as np

from core.errors import SweepCapExceeded
from core.types import FAMILY_TAGS, Settings, VerdictRecord, default_settings
from topology.diagram import FamilyInstance
from workflow import run_records

logger = logging.getLogger(__name__)


class SweepService:
    def __init__(self, settings: Optional[Settings] = None):
        self.settings = settings or default_settings

    def _check_bound(self, bound: int):
        if bound <= 0:
            raise SweepCapExceeded(f"sweep bound must be positive, got {bound}")
        if bound > self.settings.sweep_max:
            raise SweepCapExceeded(f"sweep bound {bound} exceeds the cap {self.settings.sweep_max}")

    def instances(self, tag: str, bound: int) -> Iterator[FamilyInstance]:
        """All parameter tuples of the family within the bound, in lexicographic order."""
        if tag not in FAMILY_TAGS:
            raise ValueError(f"unknown family {tag}")
        self._check_bound(bound)
        signed = range(-bound, bound + 1)
        positive = range(1, bound + 1)

        if tag == "N6A":
            for r, s, bm, cm, bp, cp, mm, mp in itertools.product(
                signed, signed, signed, signed, signed, signed, positive, positive
            ):
                yield FamilyInstance("N6A", {
                    "r": r, "s": s,
                    "a_minus": r * bm + s * cm, "b_minus": bm, "c_minus": cm,
                    "a_plus": r * bp + s * cp, "b_plus": bp, "c_plus": cp,
                    "m_minus": mm, "m_plus": mp,
                })
        elif tag == "N6B":
            for p, q, n in itertools.product(signed, signed, positive):
                yield FamilyInstance("N6B", {"p": p, "q": q, "n": n})
        elif tag in ("N6D", "N6E"):
            for p in positive:
                yield FamilyInstance(tag, {"p": p})
        else:
            for n in positive:
                yield FamilyInstance(tag, {"n": n})

    def run(self, tag: str, bound: int) -> List[VerdictRecord]:
        state = run_records(self.instances(tag, bound), origin=f"sweep {tag} <= {bound}")
        logger.info("sweep %s <= %d: %d records", tag, bound, len(state.records))
        return state.records

    def random_n6a(self, count: int, bound: int = 6, seed: Optional[int] = None) -> List[FamilyInstance]:
        """Valid N6A instances: the multiplicities are chosen so K⁻₀∩K⁺₀ lies in H."""
        rng = np.random.default_rng(self.settings.seed if seed is None else seed)
        out = []
        while len(out) < count:
            r, s, bm, cm, bp, cp = (int(v) for v in rng.integers(-bound, bound + 1, size=6))
            n_minus, n_plus = (int(v) for v in rng.integers(1, bound + 1, size=2))
            D = abs(bm * cp - cm * bp)
            if D == 0 or np.gcd(bm, cm) != 1 or np.gcd(bp, cp) != 1:
                continue
            out.append(FamilyInstance("N6A", {
                "r": r, "s": s,
                "a_minus": r * bm + s * cm, "b_minus": bm, "c_minus": cm,
                "a_plus": r * bp + s * cp, "b_plus": bp, "c_plus": cp,
                "m_minus": n_plus * D, "m_plus": n_minus * D,
            }))
        return out
