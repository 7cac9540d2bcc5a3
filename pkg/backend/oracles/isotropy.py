"""Numeric isotropy of the S3 x T2 action on S3 x S3.

(g, z, w) acts on (x, y) in S3 x S3, S3 in H for x and in C^2 for y, by

    x  -> g x conj(z)^r conj(w)^s
    y1 -> (z^c- conj(w)^b-)^n- y1
    y2 -> (z^c+ conj(w)^b+)^n+ y2

Tangent vectors of the five one-parameter subgroups are written in the R^8
coordinates (x0, x1, x2, x3, Re y1, Im y1, Re y2, Im y2); the rank of the 5x8
matrix is the orbit dimension.
"""

import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from core.errors import InvalidFamily
from topology.diagram import FamilyInstance, GroupDiagram
from topology.liegroup import S3_T2, SubgroupSpec
from utils.intlin import hermite_rows

logger = logging.getLogger(__name__)

GROUP_DIMENSION = 5


@dataclass(frozen=True)
class ActionParams:
    r: int
    s: int
    b_minus: int
    c_minus: int
    b_plus: int
    c_plus: int
    n_minus: int = 1
    n_plus: int = 1

    @classmethod
    def from_family(cls, f: FamilyInstance) -> "ActionParams":
        """The explicit action realizing a valid N6A instance."""
        if f.tag != "N6A":
            raise InvalidFamily([f"{f.tag} has no explicit S3xT2 action"])
        D = abs(f["b_minus"] * f["c_plus"] - f["b_plus"] * f["c_minus"])
        if D == 0 or f["m_minus"] % D or f["m_plus"] % D:
            raise InvalidFamily(["K⁻₀∩K⁺₀⊂H"])
        return cls(
            f["r"], f["s"],
            f["b_minus"], f["c_minus"], f["b_plus"], f["c_plus"],
            n_minus=f["m_plus"] // D, n_plus=f["m_minus"] // D,
        )

    @property
    def singular_slopes(self) -> Tuple[Tuple[int, int, int], Tuple[int, int, int]]:
        r, s = self.r, self.s
        return (
            (r * self.b_minus + s * self.c_minus, self.b_minus, self.c_minus),
            (r * self.b_plus + s * self.c_plus, self.b_plus, self.c_plus),
        )


@dataclass(frozen=True)
class IsotropyReport:
    sample_point: Tuple[float, ...]
    orbit_dimension: int
    isotropy_dimension: int
    residual: float
    gap: float


def _left(u: np.ndarray, x: np.ndarray) -> np.ndarray:
    a, b, c, d = u
    w, i, j, k = x
    return np.array([
        a * w - b * i - c * j - d * k,
        a * i + b * w + c * k - d * j,
        a * j - b * k + c * w + d * i,
        a * k + b * j - c * i + d * w,
    ])


_I = np.array([0.0, 1.0, 0.0, 0.0])


def action_jacobian(params: ActionParams, x: Sequence[float], y: Sequence[complex]) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    y1, y2 = complex(y[0]), complex(y[1])
    x_times_i = _left(x, _I)

    def row(dx, dy1, dy2):
        return np.concatenate([dx, [dy1.real, dy1.imag, dy2.real, dy2.imag]])

    zero = 0j
    rows = [row(_left(e, x), zero, zero) for e in np.eye(4)[1:]]
    rows.append(row(
        -params.r * x_times_i,
        1j * params.n_minus * params.c_minus * y1,
        1j * params.n_plus * params.c_plus * y2,
    ))
    rows.append(row(
        -params.s * x_times_i,
        -1j * params.n_minus * params.b_minus * y1,
        -1j * params.n_plus * params.b_plus * y2,
    ))
    return np.array(rows)


def _report(params: ActionParams, x, y, tolerance: float) -> IsotropyReport:
    sv = np.linalg.svd(action_jacobian(params, x, y), compute_uv=False)
    cut = tolerance * sv[0]
    kept = sv[sv > cut]
    dropped = sv[sv <= cut]
    residual = float(kept[-1]) if kept.size else 0.0
    if dropped.size == 0:
        gap = float("inf")
    else:
        gap = residual / max(float(dropped[0]), np.finfo(np.float64).tiny)
    point = tuple(float(v) for v in x) + (y[0].real, y[0].imag, y[1].real, y[1].imag)
    return IsotropyReport(point, int(kept.size), GROUP_DIMENSION - int(kept.size), residual, gap)


def _random_sphere(rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(4)
    return v / np.linalg.norm(v)


def isotropy_scan(params: ActionParams, samples: int = 200, seed: int = 0, tolerance: float = 1e-8) -> List[IsotropyReport]:
    """Orbit and isotropy dimensions at random points of S3 x S3."""
    if samples < 1:
        raise ValueError("isotropy_scan needs at least one sample")
    rng = np.random.default_rng(seed)
    reports = []
    for _ in range(samples):
        x = _random_sphere(rng)
        v = _random_sphere(rng)
        reports.append(_report(params, x, (complex(v[0], v[1]), complex(v[2], v[3])), tolerance))
    principal = sum(1 for rep in reports if rep.orbit_dimension == GROUP_DIMENSION)
    logger.info("isotropy scan: %d of %d samples on principal orbits", principal, samples)
    return reports


def arc_scan(params: ActionParams, steps: int = 65, tolerance: float = 1e-8) -> List[IsotropyReport]:
    """Reports along x = 1, y = (cos t, sin t), t from 0 to pi/2."""
    x = np.array([1.0, 0.0, 0.0, 0.0])
    return [
        _report(params, x, (complex(np.cos(t)), complex(np.sin(t))), tolerance)
        for t in np.linspace(0.0, np.pi / 2, steps)
    ]


def singular_loci(reports: Sequence[IsotropyReport]) -> List[int]:
    """Indices of the reports lying on singular orbits."""
    return [k for k, rep in enumerate(reports) if rep.orbit_dimension < GROUP_DIMENSION]


def singular_isotropy_slope(params: ActionParams, t: float = 0.0, tolerance: float = 1e-8) -> np.ndarray:
    """Numeric direction of the isotropy circle at a point of the arc, in (S3 circle, z, w) coordinates."""
    J = action_jacobian(params, [1.0, 0.0, 0.0, 0.0], (complex(np.cos(t)), complex(np.sin(t))))
    _, sv, vt = np.linalg.svd(J.T)
    null = vt[-1]
    if sv[-1] > tolerance * sv[0]:
        logger.warning("no isotropy at t=%.6f, smallest singular value %.3g", t, sv[-1])
    return np.array([null[0], null[3], null[4]])


def diagram_from_action(params: ActionParams) -> GroupDiagram:
    """Exact isotropy groups of the points y = (1, 0), (0, 1) and a principal point."""
    base = (1, -params.r, -params.s)
    minus = (0, params.n_minus * params.c_minus, -params.n_minus * params.b_minus)
    plus = (0, params.n_plus * params.c_plus, -params.n_plus * params.b_plus)
    k_minus = SubgroupSpec(S3_T2, frozenset(), hermite_rows([base, minus], 3))
    k_plus = SubgroupSpec(S3_T2, frozenset(), hermite_rows([base, plus], 3))
    h = SubgroupSpec(S3_T2, frozenset(), hermite_rows([base, minus, plus], 3))
    return GroupDiagram(S3_T2, k_minus, k_plus, h)
