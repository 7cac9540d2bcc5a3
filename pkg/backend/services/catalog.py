import logging
from functools import reduce
from typing import Dict, List

import pandas as pd
import sympy

from core.types import FAMILY_TAGS
from topology.classify import classify, euler_coordinates, nonprimitivity_data, structure_loop
from topology.diagram import FAMILY_CONDITIONS, FamilyInstance, family_diagram

logger = logging.getLogger(__name__)

MINUS = "−"

SAMPLES: Dict[str, Dict[str, int]] = {
    "N6A": {"r": 0, "s": 0, "a_minus": 0, "b_minus": 1, "c_minus": 0,
            "a_plus": 0, "b_plus": 0, "c_plus": 1, "m_minus": 1, "m_plus": 1},
    "N6B": {"p": 1, "q": 0, "n": 1},
    "N6C": {"n": 1},
    "N6D": {"p": 1},
    "N6E": {"p": 1},
    "N6F": {"n": 1},
}


def _text(expr) -> str:
    return str(expr).replace("-", MINUS).replace("*", "")


def euler_formula(tag: str) -> str:
    """e_P from the closed form evaluated on symbols, with the common factor pulled out."""
    n, p, q = sympy.symbols("n p q", integer=True)
    coords = euler_coordinates(tag, {"n": n, "p": p, "q": q})
    g = reduce(sympy.gcd, coords)
    if len(coords) == 1:
        return f"e_P=±{_text(coords[0])}"
    inner = ",".join(_text(sympy.simplify(c / g)) for c in coords)
    return f"e_P=±{_text(g)}({inner})"


def loop_formula(tag: str) -> str:
    """Triviality rule from the symbolic loop class of the pi_1(L) generator."""
    name = "n" if tag == "N6C" else "p"
    sym = sympy.Symbol(name, integer=True)
    loop = structure_loop(tag, {name: sym})
    modulus = loop.target.fundamental_group.torsion[0]
    slope = int(sympy.diff(loop.raw_class(), sym)) % modulus
    data = nonprimitivity_data(FamilyInstance(tag, SAMPLES[tag]))
    if slope == 0:
        return f"M ≅ {data.fiber}×{data.base}"
    # the bundle is trivial exactly when the loop class vanishes
    if modulus == 2:
        return f"bundle trivial if and only if {name} even"
    return f"bundle trivial if and only if {name} ≡ 0 mod {modulus}"


def verdict_formula(tag: str) -> str:
    if tag in ("N6B", "N6F"):
        return euler_formula(tag)
    if tag in ("N6C", "N6D", "N6E"):
        return loop_formula(tag)
    return f"M ≅ {classify(FamilyInstance(tag, SAMPLES[tag])).describe()}"


class CatalogService:
    def rows(self) -> List[Dict[str, str]]:
        rows = []
        for tag in FAMILY_TAGS:
            sample = FamilyInstance(tag, SAMPLES[tag])
            data = nonprimitivity_data(sample)
            rows.append({
                "family": tag,
                "G": str(family_diagram(sample).G),
                "base": data.base,
                "fiber": data.fiber,
                "structure group": data.structure_group,
                "conditions": ", ".join(FAMILY_CONDITIONS[tag]) or "none",
                "verdict": verdict_formula(tag),
            })
        logger.debug("catalog of %d families", len(rows))
        return rows

    def table(self) -> pd.DataFrame:
        return pd.DataFrame(self.rows())
