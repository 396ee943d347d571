"""Monte Carlo estimation of the normalising constant for any graph.

Write K = Phi^T Phi with Phi upper triangular, factor the inverse scale as
D^-1 = R^T R (R upper triangular, positive diagonal) and set Psi = Phi A
with A = R^-1, so that tr(K D) = sum of squares of the entries of Psi.  The free coordinates of the cone are the
diagonal and edge positions of Phi; the zero constraints of K determine
every other entry of Phi from earlier rows.  Changing variables and
normalising the diagonal and free Gaussian factors leaves

    C_G(delta, D) = prefactor * E[ exp(-(1/2) sum of psi_ij^2 over
                                       constrained positions (i, j)) ]

with the expectation over independent draws psi_ii = sqrt(chi2(delta +
nu_i)) and psi_ij ~ N(0, 1) at free off-diagonal positions, where nu_i
counts free positions to the right of the diagonal in row i.  With col_j
the count of free positions above the diagonal in column j and m the edge
count, the prefactor is

    2^n * prod_i r_ii^(delta + nu_i + col_i)
        * prod_i 2^((delta + nu_i)/2 - 1) Gamma((delta + nu_i)/2)
        * (2 pi)^(m/2).

On a complete graph every position is free, no term enters the exponent and
the estimator is exact with zero variance; the prefactor then collapses to
the closed-form constant, which the tests assert.

Sampling uses numpy's Philox counter-based bit generator: replicate streams
for different seeds are independent by construction and every estimate is
reproducible from (seed, samples, ordering) alone.  Draws happen in a fixed
documented order: the n chi-square diagonals first (ascending), then the
free normals row by row.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import gammaln

from .graphs import Graph
from .symmat import check_symmetric, is_positive_definite

LOG2 = math.log(2.0)
LOG2PI = math.log(2.0 * math.pi)


class DegenerateSampleError(RuntimeError):
    """A draw produced a non-finite weight (never silently clamped)."""


@dataclass(frozen=True)
class McEstimate:
    """One Monte Carlo run: the log estimate and its delta-method error.

    std_error approximates the standard deviation of log_value.  It is zero
    exactly when every reconstructed entry vanishes for every draw and the
    estimator degenerates to the closed form: always on complete graphs, and
    also e.g. at identity scale on graphs where no missing pair has an
    earlier common neighbour in the ordering.
    """

    log_value: float
    std_error: float
    samples: int
    seed: int


def _free_pattern(g: Graph, positions: dict[int, int]) -> np.ndarray:
    n = g.n
    free = np.zeros((n, n), dtype=bool)
    np.fill_diagonal(free, True)
    for mu, nu in g.edges:
        i, j = positions[mu], positions[nu]
        if i > j:
            i, j = j, i
        free[i, j] = True
    return free


def mc_constant(g: Graph, delta: float, scale: np.ndarray, samples: int,
                seed: int, ordering: Sequence[int] | None = None) -> McEstimate:
    """Estimate C_G(delta, D) from `samples` draws of the Philox stream `seed`.

    ordering optionally permutes the vertices before the triangular
    construction; estimates for different orderings agree in distribution
    but not draw for draw.
    """
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta}")
    if samples < 2:
        raise ValueError(f"need at least 2 samples for an error bar, got {samples}")
    if seed < 0:
        raise ValueError(f"seed must be nonnegative, got {seed}")
    scale = check_symmetric(scale, name="scale")
    if scale.shape[0] != g.n:
        raise ValueError(f"scale has order {scale.shape[0]}, graph has n={g.n}")
    if not is_positive_definite(scale):
        raise ValueError("scale matrix must be positive definite")
    n = g.n
    if ordering is None:
        ordering = list(g.vertices)
    else:
        ordering = [int(v) for v in ordering]
        if sorted(ordering) != list(g.vertices):
            raise ValueError("ordering must list every vertex exactly once")

    positions = {v: i for i, v in enumerate(ordering)}
    sel = [v - 1 for v in ordering]
    d = scale[np.ix_(sel, sel)]
    free = _free_pattern(g, positions)
    nu = np.array([int(free[i, i + 1:].sum()) for i in range(n)])
    col = np.array([int(free[:j, j].sum()) for j in range(n)])

    d_inv = np.linalg.inv(d)
    r = np.linalg.cholesky((d_inv + d_inv.T) / 2.0).T
    a = np.linalg.inv(r)

    log_pre = n * LOG2 + g.m / 2.0 * LOG2PI
    for i in range(n):
        half = (delta + nu[i]) / 2.0
        log_pre += (delta + nu[i] + col[i]) * math.log(r[i, i])
        log_pre += (half - 1.0) * LOG2 + float(gammaln(half))

    rng = np.random.Generator(np.random.Philox(key=seed))
    psi_diag = np.empty((n, samples))
    for i in range(n):
        psi_diag[i] = np.sqrt(rng.chisquare(delta + nu[i], size=samples))
    psi_free = {}
    for i in range(n):
        for j in range(i + 1, n):
            if free[i, j]:
                psi_free[(i, j)] = rng.standard_normal(samples)

    phi = np.zeros((samples, n, n))
    ss = np.zeros(samples)
    for i in range(n):
        phi[:, i, i] = psi_diag[i] / a[i, i]
        for j in range(i + 1, n):
            if free[i, j]:
                partial = phi[:, i, i:j] @ a[i:j, j]
                phi[:, i, j] = (psi_free[(i, j)] - partial) / a[j, j]
            else:
                # K[i, j] = 0 pins phi_ij from earlier rows; its psi image
                # is then a constrained coordinate feeding the weight.
                phi[:, i, j] = -(phi[:, :i, i] * phi[:, :i, j]).sum(axis=1) \
                    / phi[:, i, i]
                psi_ij = phi[:, i, i:j + 1] @ a[i:j + 1, j]
                ss += psi_ij ** 2

    log_weights = -ss / 2.0
    if not np.all(np.isfinite(log_weights)):
        bad = int(np.sum(~np.isfinite(log_weights)))
        raise DegenerateSampleError(f"{bad} of {samples} draws gave non-finite weights")
    shift = float(np.max(log_weights))
    w = np.exp(log_weights - shift)
    mean = float(np.mean(w))
    log_value = float(log_pre) + shift + math.log(mean)
    std_error = float(np.std(w, ddof=1)) / (mean * math.sqrt(samples))
    return McEstimate(log_value=log_value, std_error=float(std_error),
                      samples=samples, seed=seed)


def mc_replicates(g: Graph, delta: float, scale: np.ndarray, samples: int,
                  seeds: Sequence[int]) -> list[McEstimate]:
    """Independent estimates, one Philox stream per seed."""
    seeds = [int(s) for s in seeds]
    if len(set(seeds)) != len(seeds):
        raise ValueError("replicate seeds must be distinct")
    return [mc_constant(g, delta, scale, samples, s) for s in seeds]
