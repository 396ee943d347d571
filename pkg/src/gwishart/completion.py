"""Positive definite completion and Isserlis covariance matrices.

A symmetric scale matrix enters the normalising constant only through its
diagonal and edge entries.  pd_complete fills in the remaining entries by
iterative proportional scaling so that the inverse of the completed matrix
vanishes on non-edges, which is the canonical completion the closed-form
estimate is built on.

The Isserlis matrix of d, indexed by unordered pairs, has entries

    iss[(mu, nu), (mu', nu')] = d[mu, mu'] d[nu, nu'] + d[mu, nu'] d[mu', nu].

Pairs are ordered canonically: the n diagonal pairs (v, v) first, then edge
pairs in lexicographic order, then (for the full variant) non-edge pairs in
lexicographic order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graphs import Edge, Graph, maximal_cliques
from .symmat import check_symmetric, is_positive_definite

IPS_TOL = 1e-10
IPS_MAX_ITER = 10000


class CompletionError(RuntimeError):
    """Iterative proportional scaling failed to converge."""

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


@dataclass(frozen=True)
class CompletionResult:
    completed: np.ndarray
    iterations: int
    residual: float


def isserlis_pairs(g: Graph) -> list[Edge]:
    """Diagonal pairs then edges, the index order of the Isserlis matrix."""
    return [(v, v) for v in g.vertices] + g.edge_list


def _sym_input(a: np.ndarray, name: str = "matrix") -> np.ndarray:
    """Like check_symmetric but keeps a complex dtype intact."""
    a = np.asarray(a)
    if not np.iscomplexobj(a):
        return check_symmetric(a, name=name)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"{name} must be square, got shape {a.shape}")
    scale = max(1.0, float(np.max(np.abs(a)))) if a.size else 1.0
    if float(np.max(np.abs(a - a.T), initial=0.0)) > 1e-12 * scale:
        raise ValueError(f"{name} is not symmetric")
    return a


def isserlis_for_pairs(d: np.ndarray, pairs: list[Edge]) -> np.ndarray:
    d = np.asarray(d)
    mu = np.array([p[0] - 1 for p in pairs], dtype=int)
    nu = np.array([p[1] - 1 for p in pairs], dtype=int)
    return (d[np.ix_(mu, mu)] * d[np.ix_(nu, nu)]
            + d[np.ix_(mu, nu)] * d[np.ix_(nu, mu)])


def isserlis(d: np.ndarray, g: Graph) -> np.ndarray:
    """Isserlis matrix restricted to diagonal and edge pairs of g."""
    d = _sym_input(d)
    if d.shape[0] != g.n:
        raise ValueError(f"matrix order {d.shape[0]} does not match n={g.n}")
    return isserlis_for_pairs(d, isserlis_pairs(g))


def isserlis_full(d: np.ndarray, g: Graph) -> np.ndarray:
    """Isserlis matrix over all pairs: diagonal, edges, then non-edges."""
    d = _sym_input(d)
    if d.shape[0] != g.n:
        raise ValueError(f"matrix order {d.shape[0]} does not match n={g.n}")
    return isserlis_for_pairs(d, isserlis_pairs(g) + g.non_edges())


def isserlis_complement_block(dinv: np.ndarray, g: Graph) -> np.ndarray:
    """Principal block of the full Isserlis matrix of dinv on non-edge pairs.

    dinv may be real or complex symmetric; the dtype is preserved.
    """
    dinv = _sym_input(dinv)
    if dinv.shape[0] != g.n:
        raise ValueError(f"matrix order {dinv.shape[0]} does not match n={g.n}")
    missing = g.non_edges()
    if not missing:
        raise ValueError("graph is complete; there is no non-edge block")
    return isserlis_for_pairs(dinv, missing)


def _sym_inv(a: np.ndarray) -> np.ndarray:
    out = np.linalg.inv(a)
    return (out + out.T) / 2.0


def pd_complete(d: np.ndarray, g: Graph, tol: float = IPS_TOL,
                max_iter: int = IPS_MAX_ITER) -> CompletionResult:
    """Complete d over the non-edges of g by iterative proportional scaling.

    Starting from the concentration K = diag(d)^-1, each sweep updates, for
    every maximal clique C,

        K[C, C] += d[C, C]^-1 - (K^-1)[C, C]^-1,

    which matches K^-1 to d on the block C.  Convergence is declared when
    every clique block of K^-1 agrees with d entrywise within tol; the check
    runs before the first sweep, so an input needing no work reports zero
    iterations.  The completed matrix is K^-1 at convergence: it agrees with
    d on the diagonal and edges of g and its inverse vanishes on non-edges.
    """
    d = check_symmetric(d)
    if d.shape[0] != g.n:
        raise ValueError(f"matrix order {d.shape[0]} does not match n={g.n}")
    if not is_positive_definite(d):
        raise ValueError("scale matrix must be positive definite")

    cliques = [np.array(sorted(c)) - 1 for c in maximal_cliques(g)]
    k = np.diag(1.0 / np.diag(d))
    iteration = 0
    while True:
        sigma = _sym_inv(k)
        residual = max(float(np.max(np.abs(sigma[np.ix_(c, c)] - d[np.ix_(c, c)])))
                       for c in cliques)
        if residual < tol:
            return CompletionResult(completed=(sigma + sigma.T) / 2.0,
                                    iterations=iteration, residual=residual)
        if iteration >= max_iter:
            raise CompletionError(
                f"no convergence after {max_iter} sweeps (residual {residual:.3e})",
                residual)
        for c in cliques:
            block = np.ix_(c, c)
            sigma_cc = _sym_inv(k)[block]
            k[block] += _sym_inv(d[block]) - _sym_inv(sigma_cc)
        iteration += 1
