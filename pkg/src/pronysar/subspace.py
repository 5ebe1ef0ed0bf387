"""Per-block SVDs, signal-rank detection and the regularized inverse spectrum.

The inverse spectrum of a block with singular values s_1 >= ... >= s_M
keeps the Moore-Penrose reciprocals on the detected signal subspace and
replaces the noise-subspace reciprocals with a fixed regularized value:

    diag(1/s_1, ..., 1/s_P, 1/(eps*s_1), ..., 1/(eps*s_1))

with P the detected signal rank and eps a user-chosen regularizer.  For a
single target (P = 1) this is exactly (1/s_1)*diag(1, 1/eps, ..., 1/eps).
Quantitative multi-target recovery requires the true reciprocals 1/s_j on
the signal entries; weighting them by (s_j/s_1)^2 instead biases each
block's contribution by that factor squared.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, NumericalError
from .prony import PronyBlocks


@dataclass(frozen=True)
class BlockSVD:
    """Full SVD factors of every block: D_n = U_n diag(s_n) V_n^*."""

    u: np.ndarray  # (N, M, M)
    singular_values: np.ndarray  # (N, M), nonincreasing
    vh: np.ndarray  # (N, M, M)
    geometry: object


@dataclass(frozen=True)
class RegularizedSpectrum:
    """Per-block inverse-spectrum entries plus detection parameters."""

    inverse: np.ndarray  # (N, M)
    ranks: np.ndarray  # (N,) detected signal ranks
    epsilon: float
    tau_gap: float


def block_svd(blocks: PronyBlocks) -> BlockSVD:
    """Full SVD of every Hankel block."""
    try:
        u, s, vh = np.linalg.svd(blocks.blocks)
    except np.linalg.LinAlgError:
        # batched call failed; redo per block to name the offender
        for idx in range(blocks.blocks.shape[0]):
            try:
                np.linalg.svd(blocks.blocks[idx])
            except np.linalg.LinAlgError as exc:
                raise NumericalError(f"SVD did not converge for block {idx}") from exc
        raise NumericalError("SVD did not converge")
    return BlockSVD(u=u, singular_values=s, vh=vh, geometry=blocks.geometry)


def regularize_spectrum(
    svd: BlockSVD, epsilon, tau_gap=0.01, rank_override=None
) -> RegularizedSpectrum:
    """Detect the signal rank and build the regularized inverse spectrum.

    The detected rank is the count of singular values at or above
    tau_gap * s_1 unless ``rank_override`` pins it.  An all-zero block gets
    an all-zero spectrum and rank 0.
    """
    if not epsilon > 0:
        raise ConfigError("epsilon must be positive")
    if not 0 < tau_gap < 1:
        raise ConfigError("tau_gap must lie in (0, 1)")
    s = svd.singular_values
    n, m = s.shape
    if rank_override is not None:
        if not 1 <= rank_override <= m:
            raise ConfigError("rank_override must lie in 1..M")
        ranks = np.full(n, int(rank_override))
    else:
        ranks = np.count_nonzero(s >= tau_gap * s[:, :1], axis=1)
    inverse = np.zeros_like(s)
    for i in range(n):
        s1 = s[i, 0]
        if s1 == 0:
            ranks[i] = 0
            continue
        p = ranks[i]
        inverse[i, :p] = 1 / s[i, :p]
        inverse[i, p:] = 1 / (epsilon * s1)
    return RegularizedSpectrum(
        inverse=inverse, ranks=ranks, epsilon=float(epsilon), tau_gap=float(tau_gap)
    )


def spectrum_rows(svd: BlockSVD, epsilon, tau_gap=0.01):
    """(block, index, sigma, thresholded) rows for spectrum dumps.

    The thresholded value keeps sigma_j when sigma_j >= tau_gap * sigma_1
    and replaces it with epsilon * sigma_1 otherwise.
    """
    rows = []
    for i, s in enumerate(svd.singular_values):
        s1 = s[0]
        for j, sj in enumerate(s):
            thresholded = sj if sj >= tau_gap * s1 else epsilon * s1
            rows.append((i, j + 1, float(sj), float(thresholded)))
    return rows
