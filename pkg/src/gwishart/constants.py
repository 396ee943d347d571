"""Normalising constants of the G-Wishart law.

For a graph G on n vertices, delta > 0 and a positive definite scale D, the
constant is

    C_G(delta, D) = integral over K positive definite with zeros on
                    non-edges of det(K)^((delta - 2)/2) exp(-tr(K D) / 2) dK,

the integral running over the free entries of K (diagonal plus edges).  For
complete graphs it is a known Wishart integral; for chordal graphs it
factorises over a clique decomposition; this module also provides the
conjectured closed-form estimate built on the completed scale and its
Isserlis matrix, and the exact small-graph formulas used to test it.

All values are returned as LogScalar since the magnitudes overflow floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln, multigammaln

from .completion import isserlis, isserlis_complement_block, pd_complete
from .graphs import Graph, NotChordalError, clique_decomposition, is_chordal
from .symmat import (LogScalar, PerturbationEdge, check_symmetric, complex_logdet,
                     is_positive_definite, logdet, principal_submatrix)

LOG2 = math.log(2.0)
LOGPI = math.log(math.pi)


def multivariate_gammaln(p: int, a: float) -> float:
    """log of the multivariate gamma function Gamma_p(a); Gamma_0 is 1."""
    if p < 0:
        raise ValueError(f"dimension must be nonnegative, got {p}")
    if p == 0:
        return 0.0
    if not a > (p - 1) / 2.0:
        raise ValueError(f"Gamma_{p} needs a > (p - 1)/2, got a={a}")
    return float(multigammaln(a, p))


def _validate(delta: float, scale: np.ndarray, n: int) -> np.ndarray:
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta}")
    scale = check_symmetric(scale, name="scale")
    if scale.shape[0] != n:
        raise ValueError(f"scale has order {scale.shape[0]}, graph has n={n}")
    if not is_positive_definite(scale):
        raise ValueError("scale matrix must be positive definite")
    return scale


def _complete_log(p: int, delta: float, scale_block: np.ndarray) -> float:
    """log C for a complete graph on p vertices (p = 0 gives log 1)."""
    if p == 0:
        return 0.0
    a = (delta + p - 1) / 2.0
    return p * a * LOG2 + multivariate_gammaln(p, a) - a * logdet(scale_block)


def complete_constant(p: int, delta: float, scale: np.ndarray) -> LogScalar:
    """C for the complete graph on p vertices:

        2^(p a) Gamma_p(a) det(D)^(-a)   with a = (delta + p - 1)/2.
    """
    if p < 1:
        raise ValueError(f"need at least one vertex, got p={p}")
    scale = _validate(delta, scale, p)
    return LogScalar(_complete_log(p, delta, scale))


def chordal_constant(g: Graph, delta: float, scale: np.ndarray,
                     peo=None) -> LogScalar:
    """C for a chordal graph via the clique factorisation.

    The constant is the product of complete-graph constants over the maximal
    cliques divided by the product over the separators, each taken at the
    corresponding principal block of the scale.
    """
    scale = _validate(delta, scale, g.n)
    decomp = clique_decomposition(g, peo)
    log_val = 0.0
    for c in decomp.cliques:
        log_val += _complete_log(len(c), delta, principal_submatrix(scale, c))
    for s in decomp.separators:
        log_val -= _complete_log(len(s), delta, principal_submatrix(scale, s))
    return LogScalar(log_val)


def complex_chordal_constant(g: Graph, delta: float, scale: np.ndarray,
                             perturbation: PerturbationEdge) -> LogScalar:
    """Analytic continuation of chordal_constant to the scale D + i t E.

    The perturbed edge must be an edge of g, so both endpoints fall in one
    clique of the decomposition; every clique or separator block containing
    both endpoints picks up the imaginary perturbation and contributes a
    complex log-determinant on the branch that is continuous in t from 0.
    The phase of the result is that unwrapped branch.
    """
    scale = _validate(delta, scale, g.n)
    mu, nu = perturbation.edge
    if not g.adjacent(mu, nu):
        raise ValueError(f"perturbed position {perturbation.edge} must be an edge of the graph")
    decomp = clique_decomposition(g)
    log_mag = 0.0
    phase = 0.0

    def block_logdet(vertices: frozenset[int]) -> tuple[float, float]:
        sub = principal_submatrix(scale, vertices)
        if mu in vertices and nu in vertices:
            ordered = sorted(vertices)
            local = PerturbationEdge((ordered.index(mu) + 1, ordered.index(nu) + 1),
                                     perturbation.t)
            ld = complex_logdet(sub, local)
            return ld.log_magnitude, ld.phase
        return logdet(sub), 0.0

    for group, sign in ((decomp.cliques, 1.0), (decomp.separators, -1.0)):
        for vertices in group:
            p = len(vertices)
            if p == 0:
                continue
            a = (delta + p - 1) / 2.0
            lm, ph = block_logdet(vertices)
            log_mag += sign * (p * a * LOG2 + multivariate_gammaln(p, a) - a * lm)
            phase += sign * (-a * ph)
    return LogScalar(log_mag, phase)


def path4_identity(delta: float) -> LogScalar:
    """C at identity scale for the path 1-2-3-4:

        2^(2 delta + 3) pi^(3/2) Gamma((delta + 1)/2)^3 Gamma(delta/2).
    """
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta}")
    log_val = ((2.0 * delta + 3.0) * LOG2 + 1.5 * LOGPI
               + 3.0 * gammaln((delta + 1.0) / 2.0) + gammaln(delta / 2.0))
    return LogScalar(log_val)


def cycle4_identity(delta: float) -> LogScalar:
    """C at identity scale for the 4-cycle 1-2-3-4-1:

        2^(2 delta + 4) pi^2 Gamma(delta/2) Gamma((delta + 1)/2)
            Gamma((delta + 2)/2)^3 / Gamma((delta + 3)/2).
    """
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta}")
    log_val = ((2.0 * delta + 4.0) * LOG2 + 2.0 * LOGPI
               + gammaln(delta / 2.0) + gammaln((delta + 1.0) / 2.0)
               + 3.0 * gammaln((delta + 2.0) / 2.0) - gammaln((delta + 3.0) / 2.0))
    return LogScalar(log_val)


def true_ratio_c4(delta: float) -> float:
    """Exact ratio of the path-1-2-3-4 constant to the 4-cycle constant at
    identity scale:

        Gamma((delta+1)/2)^2 Gamma((delta+3)/2)
            / (2 sqrt(pi) Gamma((delta+2)/2)^3).

    At delta = 1 this is 4/pi^2, not the 1/2 the closed-form estimate gives.
    """
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta}")
    return math.exp(2.0 * gammaln((delta + 1.0) / 2.0) + gammaln((delta + 3.0) / 2.0)
                    - LOG2 - 0.5 * LOGPI - 3.0 * gammaln((delta + 2.0) / 2.0))


def approx_ratio(delta: float, s: int) -> float:
    """The estimate of the same ratio when the joining pair has s common
    neighbours: Gamma((delta+s)/2) / (2 sqrt(pi) Gamma((delta+s+1)/2)).
    """
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta}")
    if s < 0:
        raise ValueError(f"s must be nonnegative, got {s}")
    return math.exp(gammaln((delta + s) / 2.0)
                    - LOG2 - 0.5 * LOGPI - gammaln((delta + s + 1.0) / 2.0))


def stirling_rel_error(delta: float) -> float:
    """Relative overestimate (approx - true)/true of the ratio at the 4-cycle,
    exactly  Gamma((delta+2)/2)^3 Gamma(delta/2)
             / (Gamma((delta+1)/2)^3 Gamma((delta+3)/2)) - 1,
    which behaves like 1/(2 delta^2) for large delta.
    """
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta}")
    return math.expm1(3.0 * gammaln((delta + 2.0) / 2.0) + gammaln(delta / 2.0)
                      - 3.0 * gammaln((delta + 1.0) / 2.0) - gammaln((delta + 3.0) / 2.0))


def roverato_estimate(g: Graph, delta: float, scale: np.ndarray,
                      c_identity: LogScalar) -> LogScalar:
    """Closed-form estimate of C_G(delta, D) from the completed scale:

        2^(n/2) det(Iss_G(DG))^(-1/2) det(DG)^(-(delta-2)/2) C_G(delta, I)

    where DG is the positive definite completion of D over G and Iss_G is
    the Isserlis matrix restricted to diagonal and edge pairs.  c_identity
    must be the identity-scale constant C_G(delta, I), supplied by whichever
    exact route is available for g.
    """
    scale = _validate(delta, scale, g.n)
    dg = pd_complete(scale, g).completed
    log_val = (g.n / 2.0) * LOG2 - 0.5 * logdet(isserlis(dg, g)) \
        - ((delta - 2.0) / 2.0) * logdet(dg)
    return LogScalar(log_val) * c_identity


def roverato_estimate_eq2(g: Graph, delta: float, scale: np.ndarray,
                          c_identity: LogScalar) -> LogScalar:
    """The same estimate written through the non-edge block of the Isserlis
    matrix of the completed inverse:

        det(Iss((DG)^-1)[non-edges])^(-1/2)
            det(DG)^(-(delta-2)/2 - (n+1)/2) C_G(delta, I).

    Agrees with roverato_estimate except for roundoff; defined only when g
    has at least one non-edge (for complete graphs both reduce to the exact
    complete-graph constant and this function just delegates).
    """
    scale = _validate(delta, scale, g.n)
    if g.is_complete():
        return roverato_estimate(g, delta, scale, c_identity)
    dg = pd_complete(scale, g).completed
    dg_inv = np.linalg.inv(dg)
    dg_inv = (dg_inv + dg_inv.T) / 2.0
    block = isserlis_complement_block(dg_inv, g)
    log_val = -0.5 * logdet(block) \
        - ((delta - 2.0) / 2.0 + (g.n + 1.0) / 2.0) * logdet(dg)
    return LogScalar(log_val) * c_identity


@dataclass(frozen=True)
class WishartParams:
    """A delta and scale pair, e.g. a prior or posterior for a precision law."""

    delta: float
    scale: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        if not self.delta > 0:
            raise ValueError(f"delta must be positive, got {self.delta}")
        object.__setattr__(self, "scale", check_symmetric(self.scale, name="scale"))

    def posterior(self, scatter: np.ndarray, n_obs: int) -> "WishartParams":
        """Conjugate update: delta + n_obs and scale + scatter."""
        if n_obs < 0:
            raise ValueError(f"n_obs must be nonnegative, got {n_obs}")
        scatter = check_symmetric(scatter, name="scatter")
        return WishartParams(self.delta + n_obs, self.scale + scatter)
