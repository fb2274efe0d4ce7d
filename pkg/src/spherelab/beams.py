"""Gaussian-beam partial bases: separated axes, overlaps, orthonormalization, retention.

A beam is the highest weight harmonic rebuilt around an arbitrary great
circle; it concentrates in a k^(-1/2) tube around that circle.  Families of
beams along well-separated circles are nearly orthogonal (the overlap decays
like cos^{2k} of half the axis angle), so orthonormalizing them should barely
disturb their large L4 norms.  How many beams survive with their L4 mass
intact is the experiment; nothing here asserts an answer.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import null_space

from .harmonics import beam_field, coefficient_field, signed_order_table
from .quadrature import GridResolutionError, QuadratureGrid, build_grid, lp_norm
from .random_bases import CoefficientBasis
from .sphere import circle_angle, fibonacci_axes

__all__ = [
    "PackingInfeasibleError",
    "RankDeficiencyError",
    "BeamFamily",
    "OrthonormalizationReport",
    "beam_coefficients",
    "beam_overlap",
    "packing_bound",
    "place_separated_axes",
    "orthonormalize",
    "complete_basis",
    "beam_experiment",
    "BEAM_EXPERIMENT_COLUMNS",
]


class PackingInfeasibleError(Exception):
    """Requested more separated great circles than the packing bound allows."""


class RankDeficiencyError(Exception):
    """Gram matrix of the family is numerically singular (eigenvalue floor 1e-10)."""


_GRAM_EIGENVALUE_FLOOR = 1e-10


def beam_coefficients(k: int, axis, grid: QuadratureGrid = None) -> np.ndarray:
    """Expansion of the beam with the given axis over {Y_km}, orders m = -k..k.

    Projects the directly evaluated beam field onto every basis element with
    one quadrature pass (the grid must be exact for degree-2k products; the
    default build_grid(k) is).  The result must come out unit-norm; if it
    does not, the grid was too coarse and a GridResolutionError is raised.
    """
    k = int(k)
    if grid is None:
        grid = build_grid(k)
    if grid.cos_degree_exact < 2 * k or grid.trig_degree_exact < 2 * k:
        raise GridResolutionError(
            f"projection needs exactness to degree {2 * k}, grid gives "
            f"{grid.cos_degree_exact}/{grid.trig_degree_exact}"
        )
    field = beam_field(k, axis, grid)
    table = signed_order_table(k, grid.t)
    m = np.arange(-k, k + 1)
    conj_phases = np.exp(-1j * np.outer(grid.theta, m))
    ring_dft = field.values @ conj_phases
    coeffs = ((grid.ring_weight[:, None] * table) * ring_dft).sum(axis=0)
    norm = float(np.linalg.norm(coeffs))
    if abs(norm - 1.0) > 1e-10:
        raise GridResolutionError(
            f"projected beam norm {norm!r} deviates from 1; grid under-resolves the beam"
        )
    return coeffs


def beam_overlap(k: int, axis1, axis2, grid: QuadratureGrid = None) -> complex:
    """Hermitian inner product of two beams; |overlap| depends only on the axis angle."""
    if grid is None:
        grid = build_grid(int(k))
    c1 = beam_coefficients(k, axis1, grid)
    c2 = beam_coefficients(k, axis2, grid)
    return complex(np.vdot(c2, c1))


def packing_bound(delta: float) -> int:
    """Largest number of axes any placement could separate at circle-angle delta.

    Spherical caps of radius delta/2 around the axes are disjoint on the
    projective hemisphere, so J <= 1/(1 - cos(delta/2)), about 8/delta^2 for
    small delta.
    """
    delta = float(delta)
    if delta <= 0.0 or delta > np.pi / 2 + 1e-12:
        raise ValueError("separation must lie in (0, pi/2]")
    return int(math.floor(1.0 / (1.0 - math.cos(delta / 2.0))))


_CANONICAL_AXES = np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])


def _greedy_select(candidates: np.ndarray, j: int, delta: float) -> np.ndarray:
    chosen = []
    for cand in candidates:
        ok = True
        for c in chosen:
            if circle_angle(cand, c) < delta - 1e-12:
                ok = False
                break
        if ok:
            chosen.append(cand)
            if len(chosen) == j:
                break
    return np.array(chosen)


def place_separated_axes(j: int, delta: float, seed: int = 0) -> np.ndarray:
    """J great-circle axes with pairwise circle-angle >= delta, shape (J, 3).

    Deterministic given the seed: the candidate pool is the north pole, a
    Fibonacci lattice folded to the upper hemisphere (axes +-a describe the
    same circle), and the two canonical equator axes; greedy selection takes
    the first J compatible candidates.  If the greedy pass falls short the
    pool is re-drawn under seeded random rotations before giving up.
    """
    j = int(j)
    if j < 1:
        raise ValueError("need at least one axis")
    bound = packing_bound(delta)
    if j > bound:
        raise PackingInfeasibleError(
            f"J = {j} exceeds the cap-packing bound {bound} for separation {delta}"
        )
    if j == 1:
        return np.array([[0.0, 0.0, 1.0]])
    n_lattice = max(256, 8 * j, int(math.ceil(32.0 / (delta * delta))))
    lattice = fibonacci_axes(n_lattice)
    lattice = lattice * np.where(lattice[:, 2] < 0.0, -1.0, 1.0)[:, None]
    order = np.argsort(-lattice[:, 2], kind="stable")
    pool = np.vstack([[[0.0, 0.0, 1.0]], lattice[order], _CANONICAL_AXES])
    chosen = _greedy_select(pool, j, delta)
    if chosen.shape[0] == j:
        return chosen
    rng = np.random.default_rng(seed)
    for _ in range(20):
        rot = _random_rotation(rng)
        chosen = _greedy_select(pool @ rot.T, j, delta)
        if chosen.shape[0] == j:
            return chosen
    raise PackingInfeasibleError(
        f"could not place {j} axes at separation {delta} "
        f"(packing bound {bound}; greedy search exhausted)"
    )


def _random_rotation(rng: np.random.Generator) -> np.ndarray:
    """Uniform random rotation via QR of a Gaussian matrix, det fixed to +1."""
    q, r = np.linalg.qr(rng.standard_normal((3, 3)))
    q = q * np.sign(np.diagonal(r))[None, :]
    if np.linalg.det(q) < 0.0:
        q[:, 2] = -q[:, 2]
    return q


@dataclass
class BeamFamily:
    """Beams along a set of circle axes, held in coefficient space."""

    k: int
    axes: np.ndarray
    matrix: np.ndarray
    delta: float

    @classmethod
    def build(cls, k: int, axes, grid: QuadratureGrid = None) -> "BeamFamily":
        k = int(k)
        axes = np.atleast_2d(np.asarray(axes, dtype=float))
        if grid is None:
            grid = build_grid(k)
        rows = np.array([beam_coefficients(k, a, grid) for a in axes])
        if axes.shape[0] > 1:
            delta = min(
                circle_angle(axes[i], axes[jj])
                for i in range(axes.shape[0])
                for jj in range(i + 1, axes.shape[0])
            )
        else:
            # A single circle has no pair; pi/2 is the largest possible angle.
            delta = math.pi / 2.0
        return cls(k=k, axes=axes, matrix=rows, delta=float(delta))

    @property
    def size(self) -> int:
        return self.matrix.shape[0]


@dataclass
class OrthonormalizationReport:
    """What orthonormalization did to a family's fourth-power norms."""

    method: str
    gram_condition: float
    l44_before: np.ndarray
    l44_after: np.ndarray

    @property
    def retention(self) -> np.ndarray:
        return self.l44_after / self.l44_before

    @property
    def min_retention(self) -> float:
        return float(self.retention.min())

    @property
    def mean_retention(self) -> float:
        return float(self.retention.mean())

    @property
    def max_retention(self) -> float:
        return float(self.retention.max())


def _family_l44(k: int, matrix: np.ndarray, grid: QuadratureGrid) -> np.ndarray:
    out = np.empty(matrix.shape[0])
    for i, row in enumerate(matrix):
        field = coefficient_field(k, row, grid)
        out[i] = lp_norm(field, 4.0) ** 4
    return out


def orthonormalize(
    family: BeamFamily,
    method: str = "symmetric",
    grid: QuadratureGrid = None,
):
    """Orthonormalize a beam family; returns (fragment, report).

    method "symmetric" applies the inverse-square-root of the Gram matrix,
    the orthonormal family closest to the original in least squares and
    equivariant under relabeling.  method "sequential" is Gram-Schmidt in the
    given order with one reorthogonalization pass; earlier rows are preserved
    at the expense of later ones.  Raises RankDeficiencyError when the Gram
    spectrum touches the 1e-10 floor (duplicate or near-duplicate axes).
    """
    if method not in ("symmetric", "sequential"):
        raise ValueError("method must be 'symmetric' or 'sequential'")
    k = family.k
    if grid is None:
        grid = build_grid(k)
    m = family.matrix
    gram = m @ m.conj().T
    eigvals = np.linalg.eigvalsh(gram)
    if float(eigvals.min()) <= _GRAM_EIGENVALUE_FLOOR:
        raise RankDeficiencyError(
            f"Gram eigenvalue {eigvals.min():.3e} at or below the 1e-10 floor"
        )
    condition = float(eigvals.max() / eigvals.min())
    if method == "symmetric":
        w, v = np.linalg.eigh(gram)
        inv_sqrt = (v * (1.0 / np.sqrt(w))[None, :]) @ v.conj().T
        out = inv_sqrt @ m
    else:
        out = np.array(m, dtype=complex)
        for i in range(out.shape[0]):
            v_i = out[i]
            for _ in range(2):
                for p in range(i):
                    v_i = v_i - np.vdot(out[p], v_i) * out[p]
            out[i] = v_i / np.linalg.norm(v_i)
    l44_before = _family_l44(k, m, grid)
    l44_after = _family_l44(k, out, grid)
    fragment = CoefficientBasis(k, out, tol=1e-9)
    report = OrthonormalizationReport(
        method=method,
        gram_condition=condition,
        l44_before=l44_before,
        l44_after=l44_after,
    )
    return fragment, report


def complete_basis(fragment: CoefficientBasis) -> CoefficientBasis:
    """Extend an orthonormal fragment to a full basis of the eigenspace.

    The new rows span the Hermitian orthocomplement of the fragment; they
    carry no distinguished geometry, they just complete the unitary.
    """
    k = fragment.k
    n = 2 * k + 1
    j = fragment.matrix.shape[0]
    if j > n:
        raise ValueError("fragment already larger than the space")
    if j == n:
        return fragment
    kernel = null_space(fragment.matrix.conj())
    full = np.vstack([fragment.matrix, kernel.T])
    return CoefficientBasis(k, full)


BEAM_EXPERIMENT_COLUMNS = (
    "k",
    "J",
    "delta",
    "method",
    "seed",
    "min_ret",
    "mean_ret",
    "gram_cond",
    "sum_l4",
)


def beam_count_rule(exponent: float):
    """The beam-count rule J = floor(k^(1 - exponent)), clamped to at least 1."""
    exponent = float(exponent)
    if not 0.0 <= exponent <= 1.0:
        raise ValueError("beam-count exponent must lie in [0, 1]")

    def rule(k: int, delta: float) -> int:
        return max(1, int(math.floor(k ** (1.0 - exponent))))

    return rule


def beam_experiment(
    k: int,
    deltas,
    j_rule=None,
    method: str = "symmetric",
    seed: int = 0,
    grid: QuadratureGrid = None,
) -> list:
    """Retention sweep over separation values; returns one row dict per delta.

    ``j_rule`` may be an integer (fixed beam count), a callable (k, delta) ->
    count, or None for the default count sqrt(k) capped at half the packing
    bound.  Requested counts are clamped to what the packing bound allows.
    Row columns follow BEAM_EXPERIMENT_COLUMNS; sum_l4 is the family total of
    fourth-power norms after orthonormalization, to be read against the
    k log k growth of the standard full basis.
    """
    k = int(k)
    if grid is None:
        grid = build_grid(k)
    rows = []
    for idx, delta in enumerate(deltas):
        delta = float(delta)
        bound = packing_bound(delta)
        if j_rule is None:
            j_req = max(1, int(math.isqrt(k)))
        elif callable(j_rule):
            j_req = int(j_rule(k, delta))
        else:
            j_req = int(j_rule)
        j = max(1, min(j_req, max(1, bound // 2)))
        config_seed = int(seed) + idx
        axes = place_separated_axes(j, delta, seed=config_seed)
        family = BeamFamily.build(k, axes, grid)
        if family.size == 1:
            l44 = _family_l44(k, family.matrix, grid)
            row = {
                "k": k,
                "J": 1,
                "delta": delta,
                "method": method,
                "seed": config_seed,
                "min_ret": 1.0,
                "mean_ret": 1.0,
                "gram_cond": 1.0,
                "sum_l4": float(l44.sum()),
            }
        else:
            _, report = orthonormalize(family, method=method, grid=grid)
            row = {
                "k": k,
                "J": j,
                "delta": delta,
                "method": method,
                "seed": config_seed,
                "min_ret": report.min_retention,
                "mean_ret": report.mean_retention,
                "gram_cond": report.gram_condition,
                "sum_l4": float(report.l44_after.sum()),
            }
        rows.append(row)
    _warn_on_nonmonotone(rows)
    return rows


def _warn_on_nonmonotone(rows):
    """Smoke check: at fixed (k, J), retention should not fall as delta grows."""
    groups = {}
    for row in rows:
        groups.setdefault((row["k"], row["J"]), []).append(row)
    for key, group in groups.items():
        group = sorted(group, key=lambda r: r["delta"])
        for a, b in zip(group, group[1:]):
            if b["min_ret"] < a["min_ret"] - 1e-9:
                warnings.warn(
                    f"retention fell from {a['min_ret']:.6f} to {b['min_ret']:.6f} "
                    f"between delta {a['delta']} and {b['delta']} at (k, J) = {key}",
                    UserWarning,
                )
