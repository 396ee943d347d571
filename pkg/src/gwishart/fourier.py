"""Exact constants for one-edge-short-of-chordal graphs via a Fourier integral.

If G* is chordal and G = G* minus one edge e, then

    C_G(delta, D) = (1/2pi) * integral over t of C_G*(delta, D + i t E_e) dt

with E_e the symmetric unit matrix at e.  The identity holds for any value
of the scale entry at e: the perturbed entry enters only through exp(-i t
k_e), whose t-integral pins k_e to zero, and the trace then never sees d_e.

Integrating along the real axis is hopeless for strongly correlated scales:
the oscillation cancels the integrand down by factors like e^-30, far below
double precision.  But the integrand is analytic in z = t on the strip

    { z : D - Im(z) E_e  is positive definite },

and z bar maps to the conjugate value, so sigma -> log C_G*(delta, D -
sigma E_e) is real and, being a log-Laplace transform along a line, convex;
it blows up at both ends of the strip, so it has a unique interior minimum
sigma*.  That point is a saddle of the integrand, and by Cauchy's theorem
the line Im z = sigma* gives the same integral with the oscillation turned
off at the origin: the contour shift replaces the scale by the real
positive definite matrix D - sigma* E_e and costs nothing else.  Any sigma
inside the strip is exact; sigma* just makes the quadrature cheap.

On the shifted line the integrand is a gently oscillating bump of width
1/sqrt(g''(sigma*)), so x is mapped to (-pi/2, pi/2) by x = c tan(theta)
with c that width, and integrated by composite Gauss-Legendre panels,
doubling the panel count until the value settles.  Everything is
accumulated in log scale with the largest magnitude factored out, since the
integrand's magnitude is astronomically large while its shape is tame.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh
from scipy.optimize import minimize_scalar

from .constants import _validate, chordal_constant, complex_chordal_constant
from .graphs import Graph, classify_pair, is_chordal, normalize_edge
from .symmat import LogScalar, PerturbationEdge

_GL_ORDER = 16
_START_PANELS = 4

# Below this effective decay exponent the integrand's tails die so slowly
# that the quadrature degrades; the identity itself still holds.
_SLOW_DECAY_THRESHOLD = 0.5

# Conjugate symmetry of the integrand makes the imaginary part cancel; this
# much relative residue indicates a broken branch or an asymmetric grid.
_IMAG_RATIO_LIMIT = 1e-10


class QuadratureError(RuntimeError):
    """The adaptive panel ladder ran out before the integral settled."""


@dataclass(frozen=True)
class QuadratureConfig:
    """Controls for the adaptive tangent-substitution quadrature.

    The substitution is fixed (t = tan theta); rel_tol is the relative change
    between consecutive panel doublings at which the ladder stops, and
    max_panels caps the ladder.
    """

    rel_tol: float = 1e-10
    max_panels: int = 4096


@dataclass(frozen=True)
class FourierDiagnostics:
    panels: int
    rel_change: float
    imag_ratio: float


@lru_cache(maxsize=None)
def _gl_nodes(order: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(order)


def _perturbation_matrix(n: int, e: tuple[int, int]) -> np.ndarray:
    mu, nu = e
    out = np.zeros((n, n))
    out[mu - 1, nu - 1] = out[nu - 1, mu - 1] = 1.0
    return out


def _saddle_contour(g_star: Graph, e: tuple[int, int], delta: float,
                    scale: np.ndarray) -> tuple[np.ndarray, float]:
    """Shift the contour to the saddle: returns (scale - sigma* E, width).

    sigma* minimises the convex map sigma -> log C_G*(delta, D - sigma E)
    over the interval keeping D - sigma E positive definite; the quadrature
    width is the curvature scale 1 / sqrt(g''(sigma*)).
    """
    ee = _perturbation_matrix(g_star.n, e)
    lams = eigh(ee, scale, eigvals_only=True)
    lo, hi = 1.0 / float(lams[0]), 1.0 / float(lams[-1])
    # keep a margin from the boundary, where clique blocks degenerate
    lo, hi = 0.999 * lo, 0.999 * hi

    def g(sigma: float) -> float:
        return chordal_constant(g_star, delta, scale - sigma * ee).log_magnitude

    res = minimize_scalar(g, bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-8 * (hi - lo)})
    sigma = float(res.x)
    h = 1e-4 * (hi - lo)
    if not (lo < sigma - h and sigma + h < hi):
        sigma = min(max(sigma, lo + h), hi - h)
    curv = (g(sigma + h) - 2.0 * g(sigma) + g(sigma - h)) / (h * h)
    mu, nu = e
    fallback = math.sqrt(scale[mu - 1, mu - 1] * scale[nu - 1, nu - 1])
    width = 1.0 / math.sqrt(curv) if curv > 0 else fallback
    return scale - sigma * ee, width


def _integral_pieces(g_star: Graph, e: tuple[int, int], delta: float,
                     shifted: np.ndarray, width: float, panels: int
                     ) -> tuple[float, complex]:
    """One composite pass: returns (M, S) with the integral equal to e^M * S.

    panels is even so theta = 0 is a panel boundary and the grid is exactly
    symmetric; node t values then come in sign pairs and the conjugate
    symmetry of the integrand cancels the imaginary part to roundoff.
    """
    nodes, weights = _gl_nodes(_GL_ORDER)
    edges = np.linspace(-math.pi / 2.0, math.pi / 2.0, panels + 1)
    log_mags = []
    phases = []
    wts = []
    for left, right in zip(edges[:-1], edges[1:]):
        half = (right - left) / 2.0
        mid = (right + left) / 2.0
        for x, w in zip(nodes, weights):
            theta = mid + half * x
            t = width * math.tan(theta)
            # dt = width * d theta / cos^2 theta
            jac = width / math.cos(theta) ** 2
            val = complex_chordal_constant(g_star, delta, shifted,
                                           PerturbationEdge(e, t))
            log_mags.append(val.log_magnitude + math.log(jac))
            phases.append(val.phase)
            wts.append(w * half)
    log_mags = np.array(log_mags)
    m = float(np.max(log_mags))
    s = complex(np.sum(np.array(wts) * np.exp(log_mags - m)
                       * np.exp(1j * np.array(phases))))
    return m, s


def fourier_constant_info(g_star: Graph, e: tuple[int, int], delta: float,
                          scale: np.ndarray, config: QuadratureConfig = QuadratureConfig()
                          ) -> tuple[LogScalar, FourierDiagnostics]:
    """C_G(delta, D) for G = G* minus e, with quadrature diagnostics."""
    e = normalize_edge(*e)
    if e not in g_star.edges:
        raise ValueError(f"{e} is not an edge of the chordal graph")
    ok, _ = is_chordal(g_star)
    if not ok:
        raise ValueError("g_star must be chordal")
    scale = _validate(delta, scale, g_star.n)
    g = g_star.remove_edge(*e)
    pair = classify_pair(g, *e)
    if delta + pair.s < _SLOW_DECAY_THRESHOLD:
        warnings.warn(
            f"integrand decays as (1+t^2)^(-(delta+s+1)/2) with delta+s = "
            f"{delta + pair.s}; the tails converge too slowly for reliable "
            f"quadrature", RuntimeWarning, stacklevel=2)

    shifted, width = _saddle_contour(g_star, e, delta, scale)
    prev_log: float | None = None
    panels = _START_PANELS
    while True:
        m, s = _integral_pieces(g_star, e, delta, shifted, width, panels)
        if s.real > 0.0:
            log_val = m + math.log(s.real) - math.log(2.0 * math.pi)
            imag_ratio = abs(s.imag) / s.real
            if prev_log is not None:
                rel_change = abs(math.expm1(prev_log - log_val))
                if rel_change <= config.rel_tol:
                    if imag_ratio > _IMAG_RATIO_LIMIT:
                        raise QuadratureError(
                            f"imaginary residue {imag_ratio:.3e} exceeds "
                            f"{_IMAG_RATIO_LIMIT:.0e}; integrand symmetry is broken")
                    return (LogScalar(log_val),
                            FourierDiagnostics(panels, rel_change, imag_ratio))
            prev_log = log_val
        else:
            prev_log = None  # coarse grid cancelled to a nonpositive value
        if panels >= config.max_panels:
            raise QuadratureError(
                f"no convergence with {panels} panels (rel_tol {config.rel_tol:g})")
        panels *= 2


def fourier_constant(g_star: Graph, e: tuple[int, int], delta: float,
                     scale: np.ndarray, config: QuadratureConfig = QuadratureConfig()
                     ) -> LogScalar:
    """C_G(delta, D) for G = the chordal g_star with the edge e removed."""
    value, _ = fourier_constant_info(g_star, e, delta, scale, config)
    return value


def beta_integral_check(delta: float, s: int) -> float:
    """Ratio of numerically integrated to closed-form tail integral.

    integral over t of (1 + t^2)^(-(delta+s+1)/2) dt
        = sqrt(pi) Gamma((delta+s)/2) / Gamma((delta+s+1)/2),

    the scalar skeleton of the Fourier integrand at identity scale.  Uses an
    independent general-purpose integrator, so a value near 1 cross-checks
    the package quadrature's geometry.
    """
    from scipy.integrate import quad
    from scipy.special import gammaln

    if not delta + s > 1e-2:
        raise ValueError("delta + s too small for a convergent tail")
    a = (delta + s + 1.0) / 2.0
    numeric, _ = quad(lambda t: (1.0 + t * t) ** (-a), -np.inf, np.inf)
    closed = math.exp(0.5 * math.log(math.pi)
                      + gammaln((delta + s) / 2.0) - gammaln((delta + s + 1.0) / 2.0))
    return numeric / closed
