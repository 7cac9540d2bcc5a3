"""Euler class of a principal circle bundle from its torus weight data.

For a structure homomorphism phi: L -> SO(2) the bundle P = G x_L SO(2) is the
quotient of G x T by the graph F of phi, T = L_ab x SO(2). In the spectral
sequence of the T/F bundle over G/L, H^1(T/F) pulls back to the character of T
vanishing on F, and the model differential sends the L_ab characters to the
base classes. The transgression of the pulled back generator is e_P.
"""

import logging
from dataclasses import dataclass
from typing import Sequence

from core.errors import MalformedPresentation
from topology.classify import EulerClass
from utils.intlin import IntMatrix, hermite_rows, kernel_basis, rank

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WeightPresentation:
    torus_rank: int
    base_H2_rank: int
    pullback_map: IntMatrix
    d2bar_matrix: IntMatrix


def presentation_from_weights(weights: Sequence[int], base_rank: int) -> WeightPresentation:
    """Presentation for phi(l) = rotation by <weights, l> on an L_ab of rank base_rank."""
    k = base_rank
    if len(weights) != k:
        raise MalformedPresentation(f"{len(weights)} weights for a torus of rank {k}")
    # graph of phi inside T = L_ab x SO(2), columns are its coordinates
    graph = IntMatrix.from_rows([[-1 if i == j else 0 for j in range(k)] for i in range(k)] + [list(weights)], k)
    pullback = kernel_basis(graph.transpose())
    d2bar = IntMatrix.identity(k).hstack(IntMatrix.zeros(k, 1))
    return WeightPresentation(k + 1, k, pullback, d2bar)


def euler_from_weights(wp: WeightPresentation) -> EulerClass:
    if wp.pullback_map.rows != wp.torus_rank:
        raise MalformedPresentation(
            f"pullback map has {wp.pullback_map.rows} rows for a torus of rank {wp.torus_rank}"
        )
    if wp.d2bar_matrix.rows != wp.base_H2_rank or wp.d2bar_matrix.cols != wp.torus_rank:
        raise MalformedPresentation(
            f"d2bar is {wp.d2bar_matrix.rows}x{wp.d2bar_matrix.cols}, "
            f"expected {wp.base_H2_rank}x{wp.torus_rank}"
        )

    transgression = wp.d2bar_matrix @ wp.pullback_map
    if transgression.cols > 1 and rank(transgression) > 1:
        raise MalformedPresentation("transgression image has rank above one")

    image = hermite_rows(transgression.columns(), wp.base_H2_rank)
    if not image:
        return EulerClass((0,) * wp.base_H2_rank)
    logger.debug("transgression image %s", image)
    return EulerClass(image[0])
