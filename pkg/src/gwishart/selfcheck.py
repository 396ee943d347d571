"""Quick identity and property checks runnable from the CLI.

Each check prints one PASS/FAIL line; the suite is a fast subset of the
test battery meant for sanity-checking an installation, not a replacement
for the tests.
"""

from __future__ import annotations

import math
from typing import Callable, TextIO

import numpy as np

from .completion import isserlis_full, pd_complete
from .constants import (chordal_constant, complete_constant, cycle4_identity,
                        path4_identity, roverato_estimate, true_ratio_c4)
from .fourier import beta_integral_check, fourier_constant
from .graphs import Graph, clique_decomposition, is_chordal
from .montecarlo import mc_constant
from .symmat import logdet


def _random_pd(n: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((n, n))
    return a @ a.T + n * np.eye(n)


def run_selfcheck(out: TextIO) -> bool:
    checks: list[tuple[str, Callable[[], bool]]] = []

    def check(name: str):
        def wrap(fn):
            checks.append((name, fn))
            return fn
        return wrap

    @check("chordal factorisation reproduces the path-4 closed form")
    def _() -> bool:
        got = chordal_constant(Graph.path(4), 3.0, np.eye(4)).log_magnitude
        return math.isclose(got, path4_identity(3.0).log_magnitude, rel_tol=1e-12)

    @check("fourier integral reproduces the 4-cycle closed form")
    def _() -> bool:
        gstar = Graph.cycle(4).add_edge(1, 3)
        got = fourier_constant(gstar, (1, 3), 3.0, np.eye(4)).log_magnitude
        return math.isclose(got, cycle4_identity(3.0).log_magnitude, rel_tol=1e-9)

    @check("both chords of the 4-cycle give one fourier value")
    def _() -> bool:
        d = _random_pd(4, 7)
        c4 = Graph.cycle(4)
        v13 = fourier_constant(c4.add_edge(1, 3), (1, 3), 2.5, d).log_magnitude
        v24 = fourier_constant(c4.add_edge(2, 4), (2, 4), 2.5, d).log_magnitude
        return math.isclose(v13, v24, rel_tol=1e-8)

    @check("tail integral matches its closed form")
    def _() -> bool:
        return all(abs(beta_integral_check(d, s) - 1.0) < 1e-8
                   for d, s in [(1.0, 0), (3.0, 1), (5.5, 2)])

    @check("completion leaves clique blocks fixed and zeroes non-edge precision")
    def _() -> bool:
        d = _random_pd(4, 11)
        g = Graph.cycle(4)
        sigma = pd_complete(d, g).completed
        k = np.linalg.inv(sigma)
        edges_ok = all(math.isclose(sigma[m - 1, n - 1], d[m - 1, n - 1],
                                    abs_tol=1e-8) for m, n in g.edge_list)
        zeros_ok = all(abs(k[m - 1, n - 1]) < 1e-8 for m, n in g.non_edges())
        return edges_ok and zeros_ok

    @check("full Isserlis determinant identity det = 2^n det(D)^(n+1)")
    def _() -> bool:
        d = _random_pd(4, 13)
        lhs = logdet(isserlis_full(d, Graph(4)))
        rhs = 4.0 * math.log(2.0) + 5.0 * logdet(d)
        return math.isclose(lhs, rhs, rel_tol=1e-10)

    @check("conjecture estimate is exact on a chordal graph")
    def _() -> bool:
        d = _random_pd(4, 17)
        g = Graph.path(4)
        exact = chordal_constant(g, 3.0, d).log_magnitude
        est = roverato_estimate(g, 3.0, d, path4_identity(3.0)).log_magnitude
        return math.isclose(est, exact, rel_tol=1e-6)

    @check("conjecture fails on the 4-cycle at delta = 1 (the counterexample)")
    def _() -> bool:
        return abs(true_ratio_c4(1.0) - 0.5) > 0.09

    @check("monte carlo is exact on complete graphs")
    def _() -> bool:
        d = _random_pd(3, 19)
        est = mc_constant(Graph.complete(3), 3.0, d, 100, seed=1)
        exact = complete_constant(3, 3.0, d).log_magnitude
        return est.std_error == 0.0 and math.isclose(est.log_value, exact, rel_tol=1e-12)

    @check("monte carlo brackets the path-4 constant within 3 std errors")
    def _() -> bool:
        est = mc_constant(Graph.path(4), 3.0, np.eye(4), 10000, seed=2)
        return abs(est.log_value - path4_identity(3.0).log_magnitude) \
            <= 3.0 * est.std_error

    @check("clique decomposition of the path-4 graph is the textbook one")
    def _() -> bool:
        d = clique_decomposition(Graph.path(4))
        return ([sorted(c) for c in d.cliques] == [[1, 2], [2, 3], [3, 4]]
                and [sorted(s) for s in d.separators] == [[2], [3]]
                and not is_chordal(Graph.cycle(4))[0])

    all_ok = True
    for name, fn in checks:
        try:
            ok = fn()
        except Exception as exc:  # a crash is a failure, never a skip
            ok = False
            name = f"{name} (raised {type(exc).__name__}: {exc})"
        all_ok &= ok
        out.write(f"{'PASS' if ok else 'FAIL'}  {name}\n")
    out.write(f"{'all checks passed' if all_ok else 'SELFCHECK FAILED'}\n")
    return all_ok
