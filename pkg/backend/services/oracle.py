import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

from core.errors import Cohom1Error, UnknownOracle, WrongFamily
from core.types import ORACLE_KINDS, Settings, default_settings
from oracles.isotropy import ActionParams, arc_scan, diagram_from_action, isotropy_scan, singular_loci
from oracles.lifting import block_loop, lift_loop
from oracles.spectral import euler_from_weights, presentation_from_weights
from topology.classify import euler_class, nonprimitivity_data
from topology.diagram import FamilyInstance, family_diagram, recognize_family
from topology.liegroup import LoopSpec, intersect as intersect_subgroups, loop_class, so

logger = logging.getLogger(__name__)


@dataclass
class OracleReport:
    kind: str
    agree: bool
    lines: List[str] = field(default_factory=list)

    def __str__(self) -> str:
        return "\n".join(self.lines)


def _verdict(agree: bool) -> str:
    return "AGREE" if agree else "DISAGREE"


class OracleService:
    def __init__(self, settings: Optional[Settings] = None):
        self.settings = settings or default_settings

    def run(self, kind: str, **kwargs) -> OracleReport:
        if kind not in ORACLE_KINDS:
            raise UnknownOracle(f"unknown oracle {kind!r}, expected one of {', '.join(ORACLE_KINDS)}")
        return getattr(self, kind)(**kwargs)

    def euler(self, family: FamilyInstance) -> OracleReport:
        """Closed-form Euler class against the weight recipe."""
        if family.tag not in ("N6B", "N6F"):
            raise WrongFamily(f"{family.tag} has no Euler class")
        data = nonprimitivity_data(family)
        (weights,) = data.structure_hom_weights
        closed = euler_class(family)
        recipe = euler_from_weights(presentation_from_weights(weights, len(weights)))
        agree = closed == recipe
        return OracleReport("euler", agree, [f"closed-form {closed}; recipe {recipe}; {_verdict(agree)}"])

    def loop(self, k: int, blocks: Sequence[int]) -> OracleReport:
        """Quaternion lift parity against the exact loop class in SO(k)."""
        loop = LoopSpec(so(k), tuple(blocks))
        cls = loop_class(loop)
        lift = lift_loop(block_loop(loop), self.settings.lift_start, self.settings.lift_cap)
        agree = lift.parity == cls.coordinates[0] % 2
        return OracleReport("loop", agree, [
            f"loop in SO({k}) with block weights {tuple(blocks)}",
            f"lift parity {lift.parity} after {lift.samples} samples; loop class {cls.coordinates[0]}; {_verdict(agree)}",
        ])

    def isotropy(self, params: ActionParams, samples: Optional[int] = None) -> OracleReport:
        """Numeric orbit dimensions against the exact diagram of the action."""
        samples = samples or self.settings.samples
        tol = self.settings.rank_tolerance
        reports = isotropy_scan(params, samples, self.settings.seed, tol)
        principal = sum(1 for rep in reports if rep.orbit_dimension == 5)
        arc = arc_scan(params, tolerance=tol)
        loci = singular_loci(arc)
        gap = min(rep.gap for rep in reports + arc)
        lines = [
            f"{principal}/{samples} samples on principal orbits",
            f"{len(loci)} singular loci along the arc",
            f"smallest singular value gap {gap:.3g}",
        ]
        try:
            f = recognize_family(diagram_from_action(params))
            lines.append(f"diagram recovered: {f}")
            recovered = True
        except Cohom1Error as e:
            lines.append(f"diagram not recovered: {e}")
            recovered = False
        agree = principal >= 0.95 * samples and len(loci) == 2 and gap >= self.settings.min_gap and recovered
        lines.append(_verdict(agree))
        return OracleReport("isotropy", agree, lines)

    def intersect(self, family: FamilyInstance) -> OracleReport:
        d = family_diagram(family)
        confirmed = intersect_subgroups(d.Kminus, d.Kplus) == d.H
        return OracleReport("intersect", confirmed, [f"H = K⁻∩K⁺: {'CONFIRMED' if confirmed else 'REFUTED'}"])
