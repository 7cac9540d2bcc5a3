import logging
from dataclasses import dataclass
from typing import Callable, List

import numpy as np

from core.errors import LiftAmbiguous
from oracles.quaternion import so3_preimage, so4_preimage
from topology.liegroup import LoopSpec

logger = logging.getLogger(__name__)

STEP_BOUND = 0.5

Path = Callable[[float], np.ndarray]


@dataclass(frozen=True)
class LiftReport:
    parity: int
    samples: int
    max_step: float


def rotation(angle: float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s], [s, c]])


def block_loop(loop: LoopSpec) -> Path:
    """The loop as a path in SO(3) (one block) or SO(4) (two blocks).

    Both include into SO(k) isomorphically on pi_1 for k >= 3, so the parity
    is that of the loop in its own target.
    """
    if loop.target.kind != "SO":
        raise ValueError(f"cannot lift a loop in {loop.target} through a quaternion cover")
    weights = [int(w) for w in loop.block_weights]
    if len(weights) == 1:
        (w,) = weights

        def path(t: float) -> np.ndarray:
            m = np.eye(3)
            m[1:, 1:] = rotation(2 * np.pi * w * t)
            return m

        return path
    if len(weights) == 2:
        a, b = weights

        def path(t: float) -> np.ndarray:
            m = np.zeros((4, 4))
            m[:2, :2] = rotation(2 * np.pi * a * t)
            m[2:, 2:] = rotation(2 * np.pi * b * t)
            return m

        return path
    raise ValueError(f"{len(weights)} rotation blocks are beyond the quaternion covers")


def _preimage(mat: np.ndarray) -> np.ndarray:
    if mat.shape == (3, 3):
        return so3_preimage(mat).to_array()
    p, q = so4_preimage(mat)
    return np.concatenate([p.to_array(), q.to_array()])


def _lift(path: Path, samples: int):
    lifted: List[np.ndarray] = [_preimage(path(0.0))]
    max_step = 0.0
    for k in range(1, samples + 1):
        v = _preimage(path(k / samples))
        # the fiber is {v, -v}; continuity picks the nearer one
        if np.linalg.norm(v - lifted[-1]) > np.linalg.norm(v + lifted[-1]):
            v = -v
        max_step = max(max_step, float(np.linalg.norm(v - lifted[-1])))
        lifted.append(v)
    return lifted, max_step


def lift_loop(path: Path, start: int = 256, cap: int = 2 ** 20) -> LiftReport:
    samples = start
    while samples <= cap:
        lifted, max_step = _lift(path, samples)
        if max_step < STEP_BOUND:
            parity = 0 if float(np.dot(lifted[0], lifted[-1])) > 0 else 1
            return LiftReport(parity, samples, max_step)
        logger.debug("lift step %.3f at %d samples, refining", max_step, samples)
        samples *= 2
    raise LiftAmbiguous(f"step bound {STEP_BOUND} not reached within {cap} samples")


def lift_loop_parity(path: Path, start: int = 256, cap: int = 2 ** 20) -> int:
    """0 if the loop lifts to a closed loop through the double cover, 1 otherwise."""
    return lift_loop(path, start, cap).parity
