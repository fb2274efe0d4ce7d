"""Haar-random orthonormal bases of one eigenspace and their fourth-power statistics.

A basis of the degree-k eigenspace is held as a CoefficientBasis: a
(2k+1) x (2k+1) complex matrix whose row j expands basis element j over the
standard harmonics, orders m = -k..k.  Applying a Haar-random unitary to the
identity rows gives the random orthonormal bases studied here.

Normalization note for the averaged functional.  lambda4 integrates fourth
powers against the geometric area element (total mass 4 pi).  The asymptotic
benchmark "2(2k+1)" for the Haar average is stated for the unit-mass
normalization of the sphere; converting to the geometric element divides it
by 4 pi, so the comparison value used by ``monte_carlo_lambda4`` is
(2k+1) / (2 pi).
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .harmonics import signed_order_table
from .quadrature import GridResolutionError, QuadratureGrid, build_grid

__all__ = [
    "trial_rng",
    "sample_haar_unitary",
    "CoefficientBasis",
    "lambda4",
    "basis_square_sum",
    "MONTE_CARLO_COLUMNS",
    "MonteCarloLambda4",
    "monte_carlo_lambda4",
    "entry_moment",
    "GaussianMomentReport",
    "gaussian_limit_check",
]

MONTE_CARLO_COLUMNS = ("trial", "k", "lambda4", "seed")


def trial_rng(master_seed: int, trial: int) -> np.random.Generator:
    """Independent generator for one trial, stable under any execution order.

    Derives the stream from (master seed, trial index) so parallel or
    reordered trials reproduce bitwise.
    """
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=(int(trial),)))


def _as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def sample_haar_unitary(n: int, seed) -> np.ndarray:
    """Haar-distributed n x n unitary from QR of a complex Ginibre matrix.

    The raw QR factor is only unitary up to a diagonal phase ambiguity; the
    correction multiplies column j by the phase of R_jj, which reconstructs
    the factor with positive-diagonal R and that factor is exactly Haar.
    """
    n = int(n)
    if n < 1:
        raise ValueError("need n >= 1")
    rng = _as_rng(seed)
    ginibre = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2.0)
    q, r = np.linalg.qr(ginibre)
    d = np.diagonal(r)
    return q * (d / np.abs(d))[None, :]


class CoefficientBasis:
    """Orthonormal (or partial) family in coefficient space over {Y_km}.

    Row j of ``matrix`` holds basis element j; column i is the order m = i - k.
    Rows are checked orthonormal within ``tol`` on construction.
    """

    __slots__ = ("k", "matrix")

    def __init__(self, k: int, matrix, tol: float = 1e-10, validate: bool = True):
        self.k = int(k)
        matrix = np.asarray(matrix, dtype=complex)
        n = 2 * self.k + 1
        if matrix.ndim != 2 or matrix.shape[1] != n:
            raise ValueError(f"expected coefficient rows of length {n}")
        self.matrix = matrix
        if validate:
            gram = matrix @ matrix.conj().T
            dev = float(np.abs(gram - np.eye(matrix.shape[0])).max())
            if dev > tol:
                raise ValueError(f"rows are not orthonormal: max Gram deviation {dev:.3e}")

    @classmethod
    def identity(cls, k: int) -> "CoefficientBasis":
        """The standard basis itself."""
        n = 2 * int(k) + 1
        return cls(k, np.eye(n, dtype=complex), validate=False)

    @classmethod
    def from_unitary(cls, k: int, unitary) -> "CoefficientBasis":
        """Basis obtained by applying a unitary to the standard basis rows."""
        return cls(k, np.asarray(unitary, dtype=complex))

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    def __repr__(self):
        return f"CoefficientBasis(k={self.k}, rows={self.size})"


def _check_quartic_grid(k: int, grid: QuadratureGrid):
    if grid.cos_degree_exact < 4 * k or grid.trig_degree_exact < 4 * k:
        raise GridResolutionError(
            f"grid exact to cos-degree {grid.cos_degree_exact} / trig {grid.trig_degree_exact}, "
            f"but quartic degree-{k} integrands need {4 * k}"
        )


def lambda4(basis: CoefficientBasis, grid: QuadratureGrid) -> float:
    """Sum over basis elements of the fourth power of their L4 norm.

    Synthesis walks the grid ring by ring: one matrix product per ring gives
    every element's values there, so the whole functional costs one pass.
    Requires every row to be unit L2 (within 1e-6) and the grid to be exact
    for quartic degree-k integrands.
    """
    k = basis.k
    _check_quartic_grid(k, grid)
    row_norms = np.sqrt((np.abs(basis.matrix) ** 2).sum(axis=1))
    worst = float(np.abs(row_norms - 1.0).max())
    if worst > 1e-6:
        raise ValueError(f"basis rows deviate from unit L2 by {worst:.3e}")
    table = signed_order_table(k, grid.t)
    m = np.arange(-k, k + 1)
    phases = np.exp(1j * np.outer(m, grid.theta))
    per_element = np.zeros(basis.size)
    for i in range(grid.n_phi):
        ring_values = (basis.matrix * table[i][None, :]) @ phases
        per_element += grid.ring_weight[i] * (np.abs(ring_values) ** 4).sum(axis=1)
    return float(per_element.sum())


def basis_square_sum(basis: CoefficientBasis, grid: QuadratureGrid) -> np.ndarray:
    """Pointwise sum over elements of |phi_j(x)|^2, shape (n_phi, n_theta).

    For any full orthonormal basis this equals the constant (2k+1)/4pi, the
    degree-k kernel on the diagonal; computing it from synthesized values
    exercises that invariance.
    """
    k = basis.k
    table = signed_order_table(k, grid.t)
    m = np.arange(-k, k + 1)
    phases = np.exp(1j * np.outer(m, grid.theta))
    out = np.empty((grid.n_phi, grid.n_theta))
    for i in range(grid.n_phi):
        ring_values = (basis.matrix * table[i][None, :]) @ phases
        out[i] = (np.abs(ring_values) ** 2).sum(axis=0)
    return out


@dataclass
class MonteCarloLambda4:
    """Sample statistics of the fourth-power functional over Haar bases.

    ``mean`` and ``stderr`` are in the geometric normalization of lambda4;
    ``benchmark`` is the asymptotic prediction (2k+1)/(2 pi) in that same
    normalization, and ``ratio`` = mean / benchmark is the quantity expected
    to drift toward 1 as k grows.
    """

    k: int
    trials: int
    seed: int
    values: np.ndarray
    mean: float
    stderr: float
    benchmark: float
    ratio: float
    ratio_stderr: float

    def rows(self):
        """Per-trial rows (trial, k, lambda4, seed) for CSV export."""
        return [
            {"trial": i, "k": self.k, "lambda4": float(v), "seed": self.seed}
            for i, v in enumerate(self.values)
        ]


def monte_carlo_lambda4(
    k: int,
    trials: int,
    seed: int,
    grid: QuadratureGrid = None,
    oversample: float = 1.0,
) -> MonteCarloLambda4:
    """Monte Carlo estimate of the Haar average of the lambda4 functional.

    Each trial applies an independent Haar unitary to the standard basis and
    evaluates lambda4 on the (shared) quartic-exact grid.  Trials draw from
    per-trial streams, so the per-value output is bitwise reproducible for a
    fixed master seed under any execution order.
    """
    k = int(k)
    trials = int(trials)
    if trials < 2:
        raise ValueError("need at least 2 trials for a standard error")
    if grid is None:
        grid = build_grid(k, oversample)
    n = 2 * k + 1
    values = np.empty(trials)
    for trial in range(trials):
        u = sample_haar_unitary(n, trial_rng(seed, trial))
        basis = CoefficientBasis.from_unitary(k, u)
        values[trial] = lambda4(basis, grid)
    mean = float(values.mean())
    stderr = float(values.std(ddof=1) / math.sqrt(trials))
    benchmark = (2 * k + 1) / (2.0 * math.pi)
    return MonteCarloLambda4(
        k=k,
        trials=trials,
        seed=int(seed),
        values=values,
        mean=mean,
        stderr=stderr,
        benchmark=benchmark,
        ratio=mean / benchmark,
        ratio_stderr=stderr / benchmark,
    )


_PATTERNS = ("|u|^2", "|u|^4", "|u|^2|u'|^2")


def entry_moment(n: int, pattern: str, samples: int, seed, return_stderr: bool = False):
    """Monte Carlo moment of Haar-unitary entries.

    Patterns: "|u|^2" and "|u|^4" use the (1,1) entry; "|u|^2|u'|^2" pairs
    the (1,1) and (1,2) entries of the same row.  These are the two index
    pairings that dominate fourth-moment averages at large n, where the
    scaled entries sqrt(n) U_1j approach independent complex Gaussians.
    """
    n = int(n)
    if pattern not in _PATTERNS:
        raise ValueError(f"unknown pattern {pattern!r}; choose from {_PATTERNS}")
    if pattern == "|u|^2|u'|^2" and n < 2:
        raise ValueError("the pairing pattern needs n >= 2")
    samples = int(samples)
    if samples < 2:
        raise ValueError("need at least 2 samples")
    total = 0.0
    total_sq = 0.0
    for i in range(samples):
        u = sample_haar_unitary(n, trial_rng(seed, i))
        a2 = abs(u[0, 0]) ** 2
        if pattern == "|u|^2":
            x = a2
        elif pattern == "|u|^4":
            x = a2 * a2
        else:
            x = a2 * abs(u[0, 1]) ** 2
        total += x
        total_sq += x * x
    mean = total / samples
    var = max(0.0, total_sq / samples - mean * mean)
    stderr = math.sqrt(var / (samples - 1))
    if return_stderr:
        return mean, stderr
    return mean


@dataclass
class GaussianMomentReport:
    """Moments of the scaled entry sqrt(2k+1) U_11 against the Gaussian limit (1, 2)."""

    k: int
    samples: int
    seed: int
    second_moment: float
    second_stderr: float
    fourth_moment: float
    fourth_stderr: float
    distance: float = field(init=False)

    def __post_init__(self):
        self.distance = math.hypot(self.second_moment - 1.0, self.fourth_moment - 2.0)

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "samples": self.samples,
            "seed": self.seed,
            "second_moment": self.second_moment,
            "second_stderr": self.second_stderr,
            "fourth_moment": self.fourth_moment,
            "fourth_stderr": self.fourth_stderr,
            "distance": self.distance,
        }


def gaussian_limit_check(k: int, samples: int, seed) -> GaussianMomentReport:
    """Empirical second and fourth moments of sqrt(2k+1) U_11.

    The second moment equals 1 exactly at every dimension (unitarity); the
    fourth moment approaches the complex-Gaussian value 2 as k grows, so the
    report's distance from (1, 2) should shrink along a k-sweep.
    """
    k = int(k)
    if k < 8:
        raise ValueError("the Gaussian comparison is quoted for k >= 8")
    n = 2 * k + 1
    samples = int(samples)
    m2_total = m2_sq = 0.0
    m4_total = m4_sq = 0.0
    for i in range(samples):
        u = sample_haar_unitary(n, trial_rng(seed, i))
        z2 = n * abs(u[0, 0]) ** 2
        z4 = z2 * z2
        m2_total += z2
        m2_sq += z2 * z2
        m4_total += z4
        m4_sq += z4 * z4
    m2 = m2_total / samples
    m4 = m4_total / samples
    se2 = math.sqrt(max(0.0, m2_sq / samples - m2 * m2) / (samples - 1))
    se4 = math.sqrt(max(0.0, m4_sq / samples - m4 * m4) / (samples - 1))
    return GaussianMomentReport(
        k=k,
        samples=samples,
        seed=int(seed) if not isinstance(seed, np.random.Generator) else -1,
        second_moment=m2,
        second_stderr=se2,
        fourth_moment=m4,
        fourth_stderr=se4,
    )
