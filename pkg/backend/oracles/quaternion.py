"""Unit quaternions and the double covers S3 -> SO(3), S3 x S3 -> SO(4).

Quaternions are stored w, x, y, z (scalar first). SO(4) acts on H with basis
order (1, i, j, k) through (p, q) . x = p x conj(q).
"""

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from core.errors import NormalizationError

UNIT_TOLERANCE = 1e-9


@dataclass(frozen=True)
class Quaternion:
    w: float
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    @classmethod
    def from_array(cls, values: Sequence[float]) -> "Quaternion":
        w, x, y, z = (float(v) for v in values)
        return cls(w, x, y, z)

    @classmethod
    def from_axis_angle(cls, axis: Sequence[float], angle: float) -> "Quaternion":
        axis = np.asarray(axis, dtype=np.float64)
        axis = axis / np.linalg.norm(axis)
        s = np.sin(angle / 2.0)
        return cls(float(np.cos(angle / 2.0)), *(float(a * s) for a in axis))

    def to_array(self) -> np.ndarray:
        return np.array([self.w, self.x, self.y, self.z], dtype=np.float64)

    def __mul__(self, other: "Quaternion") -> "Quaternion":
        a1, b1, c1, d1 = self.w, self.x, self.y, self.z
        a2, b2, c2, d2 = other.w, other.x, other.y, other.z
        return Quaternion(
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )

    def __neg__(self) -> "Quaternion":
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def conjugate(self) -> "Quaternion":
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm(self) -> float:
        return float(np.linalg.norm(self.to_array()))

    def normalized(self) -> "Quaternion":
        n = self.norm()
        if n == 0.0:
            raise NormalizationError("cannot normalize the zero quaternion")
        return Quaternion.from_array(self.to_array() / n)

    def is_unit(self, tolerance: float = UNIT_TOLERANCE) -> bool:
        return abs(self.norm() - 1.0) <= tolerance


def _require_unit(q: Quaternion):
    if not q.is_unit():
        raise NormalizationError(f"|q| = {q.norm():.12g}, expected a unit quaternion")


def so3_cover(q: Quaternion) -> np.ndarray:
    """Conjugation x -> q x conj(q) on the imaginary quaternions."""
    _require_unit(q)
    w, x, y, z = q.w, q.x, q.y, q.z
    return np.array([
        [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z), 2.0 * (x * z + w * y)],
        [2.0 * (x * y + w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x)],
        [2.0 * (x * z - w * y), 2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y)],
    ])


def so3_preimage(mat: np.ndarray) -> Quaternion:
    """One of the two unit quaternions over a rotation matrix, by the symmetric eigenvector method."""
    mat = np.asarray(mat, dtype=np.float64)
    if mat.shape != (3, 3):
        raise NormalizationError(f"expected a 3x3 rotation, got shape {mat.shape}")
    Qxx, Qyx, Qzx = mat[0, 0], mat[0, 1], mat[0, 2]
    Qxy, Qyy, Qzy = mat[1, 0], mat[1, 1], mat[1, 2]
    Qxz, Qyz, Qzz = mat[2, 0], mat[2, 1], mat[2, 2]
    # lower half of the symmetric matrix is enough for eigh
    K = np.zeros((4, 4), dtype=np.float64)
    K[0, 0] = Qxx - Qyy - Qzz
    K[1, 0] = Qyx + Qxy
    K[1, 1] = Qyy - Qxx - Qzz
    K[2, 0] = Qzx + Qxz
    K[2, 1] = Qzy + Qyz
    K[2, 2] = Qzz - Qxx - Qyy
    K[3, 0] = Qyz - Qzy
    K[3, 1] = Qzx - Qxz
    K[3, 2] = Qxy - Qyx
    K[3, 3] = Qxx + Qyy + Qzz
    K /= 3.0
    vals, vecs = np.linalg.eigh(K)
    return Quaternion.from_array(vecs[[3, 0, 1, 2], np.argmax(vals)]).normalized()


def _basis() -> Tuple[Quaternion, ...]:
    return (Quaternion(1.0), Quaternion(0.0, 1.0), Quaternion(0.0, 0.0, 1.0), Quaternion(0.0, 0.0, 0.0, 1.0))


def so4_cover(p: Quaternion, q: Quaternion) -> np.ndarray:
    _require_unit(p)
    _require_unit(q)
    qbar = q.conjugate()
    return np.column_stack([(p * e * qbar).to_array() for e in _basis()])


def so4_preimage(mat: np.ndarray) -> Tuple[Quaternion, Quaternion]:
    """(p, q) with so4_cover(p, q) = mat, up to the joint sign."""
    mat = np.asarray(mat, dtype=np.float64)
    if mat.shape != (4, 4):
        raise NormalizationError(f"expected a 4x4 rotation, got shape {mat.shape}")
    columns = [Quaternion.from_array(mat[:, c]) for c in range(4)]
    one_bar = columns[0].conjugate()
    # x -> M(x) conj(M(1)) is conjugation by p
    conj_p = np.column_stack([(columns[c] * one_bar).to_array()[1:] for c in range(1, 4)])
    p = so3_preimage(conj_p)
    return p, (one_bar * p).normalized()
