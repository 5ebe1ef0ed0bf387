"""Hankel rearrangement of per-position frequency columns.

A length 2M-1 frequency response rearranges into an M x M Hankel matrix
whose rank equals the number of point targets; the N matrices form the
diagonal blocks of a logical MN x MN block-diagonal matrix that is never
materialized dense.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DimensionError
from .forward import DataCube
from .geometry import AcquisitionGeometry


@dataclass(frozen=True)
class PronyBlocks:
    """The N Hankel blocks, stored densely as an (N, M, M) array."""

    blocks: np.ndarray
    geometry: AcquisitionGeometry


def pronyfy(column) -> np.ndarray:
    """Rearrange a length 2M-1 vector into the M x M Hankel matrix.

    Entry (i, j) is column[i + j] (0-based), so the first column is the
    first M entries and the last row is the last M entries.
    """
    col = np.asarray(column)
    if col.ndim != 1:
        raise DimensionError("pronyfy expects a 1-D vector")
    if col.size < 3 or col.size % 2 == 0:
        raise DimensionError(
            f"pronyfy expects an odd length 2M-1 with M >= 2, got {col.size}"
        )
    m = (col.size + 1) // 2
    return scipy.linalg.hankel(col[:m], col[m - 1 :])


def assemble_blocks(cube: DataCube) -> PronyBlocks:
    """Hankel block per cube column, in position order."""
    geom = cube.geometry
    m = geom.num_freq_M
    n = geom.num_positions_N
    if cube.values.shape != (2 * m - 1, n):
        raise DimensionError(
            f"cube shape {cube.values.shape} inconsistent with geometry "
            f"({2 * m - 1}, {n})"
        )
    blocks = np.empty((n, m, m), dtype=complex)
    for j in range(n):
        blocks[j] = pronyfy(cube.values[:, j])
    return PronyBlocks(blocks=blocks, geometry=geom)
