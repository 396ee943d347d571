"""Dense symmetric-matrix numerics and log-domain scalars.

Matrices are plain float numpy arrays indexed 0-based internally; every
public function that takes vertex indices takes them 1-based to match the
graph conventions.  Values of normalising constants overflow double
precision quickly, so they are carried as LogScalar: a log-magnitude plus a
phase, exact for the real positive case and able to represent the complex
values met along the Fourier path.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

# Relative pivot floor for the positive definiteness test: a pivot of the
# (outer-product form) Cholesky must exceed this times the largest diagonal
# entry of the input.
PD_PIVOT_RTOL = 1e-12

# Largest admissible asymmetry |a - a^T| in matrices read from CSV files.
CSV_SYMMETRY_TOL = 1e-9


class NotPositiveDefiniteError(ValueError):
    """Raised when a computation requires a positive definite matrix."""


def _wrap_phase(phi: float) -> float:
    """Reduce to the principal interval (-pi, pi]."""
    out = math.remainder(phi, 2.0 * math.pi)
    if out <= -math.pi:
        out += 2.0 * math.pi
    return out


@dataclass(frozen=True)
class LogScalar:
    """A nonzero scalar stored as log magnitude and phase.

    The value represented is exp(log_magnitude) * exp(1j * phase).  Canonical
    constructors and arithmetic keep the phase in (-pi, pi]; the complex
    log-determinant routines instead return the continuous (unwrapped) branch
    accumulated from the real starting point, which is the same value with a
    phase that may lie outside the principal interval.
    """

    log_magnitude: float
    phase: float = 0.0

    @classmethod
    def from_real(cls, x: float) -> "LogScalar":
        if x == 0:
            raise ValueError("LogScalar cannot represent zero")
        return cls(math.log(abs(x)), 0.0 if x > 0 else math.pi)

    @classmethod
    def from_complex(cls, z: complex) -> "LogScalar":
        if z == 0:
            raise ValueError("LogScalar cannot represent zero")
        return cls(math.log(abs(z)), _wrap_phase(cmath.phase(z)))

    @property
    def complex_value(self) -> complex:
        return cmath.exp(complex(self.log_magnitude, self.phase))

    @property
    def is_real(self) -> bool:
        return abs(math.sin(self.phase)) < 1e-12

    @property
    def real_value(self) -> float:
        """The represented value, requiring the phase to be 0 or pi (mod 2pi)."""
        if not self.is_real:
            raise ValueError(f"value has non-real phase {self.phase}")
        sign = 1.0 if math.cos(self.phase) > 0 else -1.0
        return sign * math.exp(self.log_magnitude)

    def canonical(self) -> "LogScalar":
        return LogScalar(self.log_magnitude, _wrap_phase(self.phase))

    def __mul__(self, other: "LogScalar") -> "LogScalar":
        return LogScalar(self.log_magnitude + other.log_magnitude,
                         _wrap_phase(self.phase + other.phase))

    def __truediv__(self, other: "LogScalar") -> "LogScalar":
        return LogScalar(self.log_magnitude - other.log_magnitude,
                         _wrap_phase(self.phase - other.phase))

    def power(self, a: float) -> "LogScalar":
        """Raise to a real power along the branch fixed by the stored phase."""
        return LogScalar(a * self.log_magnitude, _wrap_phase(a * self.phase))

    def conjugate(self) -> "LogScalar":
        return LogScalar(self.log_magnitude, _wrap_phase(-self.phase))


@dataclass(frozen=True)
class PerturbationEdge:
    """An off-diagonal position (mu, nu) and the imaginary amount t added there."""

    edge: tuple[int, int]
    t: float

    def __post_init__(self) -> None:
        mu, nu = self.edge
        if mu == nu:
            raise ValueError("perturbation must sit off the diagonal")
        if mu > nu:
            object.__setattr__(self, "edge", (nu, mu))


def check_symmetric(a: np.ndarray, tol: float = 1e-12, name: str = "matrix") -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"{name} must be square, got shape {a.shape}")
    scale = max(1.0, float(np.max(np.abs(a)))) if a.size else 1.0
    if float(np.max(np.abs(a - a.T), initial=0.0)) > tol * scale:
        raise ValueError(f"{name} is not symmetric")
    return a


def cholesky_pivots(a: np.ndarray) -> np.ndarray | None:
    """Pivots d_j = a_jj - sum_k l_jk^2 of the Cholesky factorisation.

    Returns None as soon as a pivot falls below PD_PIVOT_RTOL times the
    largest diagonal entry, which is the package-wide definition of "not
    positive definite".
    """
    a = np.asarray(a, dtype=float)
    n = a.shape[0]
    if n == 0:
        return np.empty(0)
    floor = PD_PIVOT_RTOL * float(np.max(np.diag(a)))
    L = np.zeros_like(a)
    pivots = np.empty(n)
    for j in range(n):
        v = a[j, j] - float(L[j, :j] @ L[j, :j])
        if not v > floor:
            return None
        pivots[j] = v
        L[j, j] = math.sqrt(v)
        if j + 1 < n:
            L[j + 1:, j] = (a[j + 1:, j] - L[j + 1:, :j] @ L[j, :j]) / L[j, j]
    return pivots


def is_positive_definite(a: np.ndarray) -> bool:
    a = check_symmetric(a)
    if a.shape[0] and np.max(np.diag(a)) <= 0:
        return False
    return cholesky_pivots(a) is not None


def logdet(a: np.ndarray) -> float:
    """log det of a symmetric positive definite matrix."""
    a = check_symmetric(a)
    if a.shape[0] == 0:
        return 0.0
    pivots = cholesky_pivots(a) if np.max(np.diag(a)) > 0 else None
    if pivots is None:
        raise NotPositiveDefiniteError("matrix is not positive definite")
    return float(np.sum(np.log(pivots)))


def complex_logdet(d: np.ndarray, perturbation: PerturbationEdge) -> LogScalar:
    """log det of d + i t E, tracking the continuous branch of the argument.

    d must be symmetric positive definite and E is the symmetric unit
    perturbation at the given edge.  Elimination without pivoting is valid
    here: a complex symmetric matrix with positive definite real part keeps
    that property under Schur complements, so every pivot has positive real
    part and contributes an argument in (-pi/2, pi/2).  Their sum is the
    branch of arg det reached by continuity from t = 0, where it is 0.
    """
    d = check_symmetric(d)
    n = d.shape[0]
    mu, nu = perturbation.edge
    if not 1 <= mu < nu <= n:
        raise ValueError(f"edge {perturbation.edge} out of range for n={n}")
    if not is_positive_definite(d):
        raise NotPositiveDefiniteError("real part is not positive definite")
    if perturbation.t == 0.0:
        return LogScalar(logdet(d), 0.0)

    a = d.astype(complex)
    a[mu - 1, nu - 1] += 1j * perturbation.t
    a[nu - 1, mu - 1] += 1j * perturbation.t
    log_mag = 0.0
    phase = 0.0
    for k in range(n):
        piv = a[k, k]
        if not piv.real > 0.0:
            raise NotPositiveDefiniteError("elimination pivot lost its positive real part")
        log_mag += math.log(abs(piv))
        phase += math.atan2(piv.imag, piv.real)
        if k + 1 < n:
            a[k + 1:, k + 1:] -= np.outer(a[k + 1:, k], a[k, k + 1:]) / piv
    return LogScalar(log_mag, phase)


def principal_submatrix(a: np.ndarray, vertices: Iterable[int]) -> np.ndarray:
    """Rows and columns of a restricted to the given 1-based vertex set."""
    a = np.asarray(a)
    idx = sorted(set(int(v) for v in vertices))
    if not idx:
        return a[:0, :0]
    if idx[0] < 1 or idx[-1] > a.shape[0]:
        raise ValueError(f"vertex set {idx} out of range for n={a.shape[0]}")
    sel = [v - 1 for v in idx]
    return a[np.ix_(sel, sel)]


def scatter_matrix(rows: np.ndarray, centered: bool) -> np.ndarray:
    """Sum of outer products of the data rows, optionally about their mean."""
    x = np.asarray(rows, dtype=float)
    if x.ndim != 2 or x.shape[0] < 1:
        raise ValueError(f"need a non-empty 2-d data array, got shape {x.shape}")
    if centered:
        x = x - x.mean(axis=0)
    u = x.T @ x
    return (u + u.T) / 2.0


def save_matrix_csv(path, a: np.ndarray) -> None:
    a = check_symmetric(a)
    with open(path, "w", newline="") as f:
        for row in a:
            f.write(",".join(repr(float(v)) for v in row) + "\n")


def load_matrix_csv(path) -> np.ndarray:
    """Read a square symmetric matrix written as n rows of n values.

    Lines starting with '#' are skipped.  Asymmetry up to CSV_SYMMETRY_TOL is
    repaired by averaging; anything larger is an error.
    """
    rows = []
    with open(path) as f:
        for ln in f:
            ln = ln.strip()
            if not ln or ln.startswith("#"):
                continue
            rows.append([float(v) for v in ln.split(",")])
    if not rows:
        raise ValueError(f"no matrix rows in {path}")
    a = np.array(rows, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"matrix in {path} is not square: shape {a.shape}")
    if float(np.max(np.abs(a - a.T))) > CSV_SYMMETRY_TOL:
        raise ValueError(f"matrix in {path} is not symmetric within {CSV_SYMMETRY_TOL}")
    return (a + a.T) / 2.0


def load_table_csv(path, expected_columns: Sequence[str] | None = None) -> np.ndarray:
    """Read a plain CSV data table with a one-line header."""
    with open(path) as f:
        header = [h.strip() for h in f.readline().strip().split(",")]
        data = np.loadtxt(f, delimiter=",", ndmin=2)
    if expected_columns is not None and header != list(expected_columns):
        raise ValueError(f"expected columns {list(expected_columns)}, got {header}")
    if data.shape[1] != len(header):
        raise ValueError(f"{path}: {data.shape[1]} columns of data under {len(header)} headers")
    return data
