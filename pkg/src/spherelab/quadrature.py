"""Product quadrature on the sphere, sampled fields, Lp norms, tube and superlevel measures.

The grid is Gauss-Legendre in t = cos(phi) crossed with uniform longitudes.
With n_phi nodes and n_theta longitudes it integrates exactly any integrand
that is a polynomial of degree <= 2*n_phi - 1 in cos(phi) times a
trigonometric polynomial of degree <= n_theta - 1 in theta.  All integrals in
the package go through ``QuadratureGrid.integrate`` so that norm claims can
cite one exactness certificate.
"""

import json
import warnings

import numpy as np

__all__ = [
    "GridResolutionError",
    "TubeResolutionWarning",
    "QuadratureGrid",
    "build_grid",
    "HarmonicField",
    "lp_norm",
    "tube_mask",
    "tube_mass",
    "arc_tube_masses",
    "superlevel_measure",
    "field_to_csv",
]

DEFAULT_MAX_POINTS = 50_000_000


class GridResolutionError(Exception):
    """Raised when a grid is too small (or too large) for the requested task."""


class TubeResolutionWarning(UserWarning):
    """Fewer than 8 colatitude rings intersect a tube; its mass is under-resolved."""


class QuadratureGrid:
    """Gauss-Legendre x uniform-longitude product grid.

    Attributes
    ----------
    band : int
        The parameter k the grid was built for.
    t, ring_weight : arrays of shape (n_phi,)
        Gauss-Legendre nodes in cos(phi) and the per-point weight
        w_i * (2 pi / n_theta); summing ring_weight * n_theta gives 4 pi.
    theta : array of shape (n_theta,)
        Uniform longitudes 2 pi j / n_theta.
    """

    def __init__(self, band: int, oversample: float, t, gl_weight, n_theta: int):
        self.band = int(band)
        self.oversample = float(oversample)
        self.t = np.asarray(t, dtype=float)
        self.n_phi = self.t.size
        self.n_theta = int(n_theta)
        self.theta = 2.0 * np.pi * np.arange(self.n_theta) / self.n_theta
        self.ring_weight = np.asarray(gl_weight, dtype=float) * (2.0 * np.pi / self.n_theta)
        self._xyz = None

    @property
    def phi(self) -> np.ndarray:
        return np.arccos(np.clip(self.t, -1.0, 1.0))

    @property
    def sin_phi(self) -> np.ndarray:
        return np.sqrt(np.maximum(0.0, 1.0 - self.t * self.t))

    @property
    def n_points(self) -> int:
        return self.n_phi * self.n_theta

    @property
    def shape(self):
        return (self.n_phi, self.n_theta)

    @property
    def cos_degree_exact(self) -> int:
        """Largest polynomial degree in cos(phi) integrated exactly."""
        return 2 * self.n_phi - 1

    @property
    def trig_degree_exact(self) -> int:
        """Largest trigonometric degree in theta integrated exactly."""
        return self.n_theta - 1

    def points(self) -> np.ndarray:
        """Cartesian coordinates of all nodes, shape (n_phi, n_theta, 3)."""
        if self._xyz is None:
            s = self.sin_phi
            ct = np.cos(self.theta)
            st = np.sin(self.theta)
            xyz = np.empty((self.n_phi, self.n_theta, 3))
            xyz[:, :, 0] = s[:, None] * ct[None, :]
            xyz[:, :, 1] = s[:, None] * st[None, :]
            xyz[:, :, 2] = np.broadcast_to(self.t[:, None], (self.n_phi, self.n_theta))
            self._xyz = xyz
        return self._xyz

    def integrate(self, values) -> complex:
        """Integral over the sphere of a sampled integrand, shape (n_phi, n_theta).

        The reduction order (sum over theta per ring, then the weighted ring
        sum) is fixed, so repeated calls are bitwise reproducible.
        """
        values = np.asarray(values)
        if values.shape != self.shape:
            raise ValueError(f"expected values of shape {self.shape}, got {values.shape}")
        ring_sums = values.sum(axis=1)
        total = self.ring_weight @ ring_sums
        if np.iscomplexobj(values):
            return complex(total)
        return float(total)

    def integrate_profile(self, profile) -> float:
        """Integral of a longitude-independent real integrand given per ring."""
        profile = np.asarray(profile, dtype=float)
        if profile.shape != (self.n_phi,):
            raise ValueError(f"expected profile of shape ({self.n_phi},)")
        return float((self.ring_weight * self.n_theta) @ profile)

    def describe(self) -> dict:
        return {
            "type": "gauss_legendre_x_uniform",
            "band": self.band,
            "oversample": self.oversample,
            "n_phi": self.n_phi,
            "n_theta": self.n_theta,
            "n_points": self.n_points,
            "cos_degree_exact": self.cos_degree_exact,
            "trig_degree_exact": self.trig_degree_exact,
        }

    def to_json(self) -> str:
        return json.dumps(self.describe(), sort_keys=True)

    def __repr__(self):
        return f"QuadratureGrid(band={self.band}, n_phi={self.n_phi}, n_theta={self.n_theta})"


def build_grid(k: int, oversample: float = 1.0, max_points: int = DEFAULT_MAX_POINTS) -> QuadratureGrid:
    """Grid exact for products of up to four degree-k harmonics.

    n_phi = ceil(oversample * (2k+1)) Gauss-Legendre nodes and
    n_theta = ceil(oversample * (4k+1)) uniform longitudes.  At oversample 1
    this integrates cos(phi)-polynomials of degree 4k+1 and trigonometric
    polynomials of degree 4k exactly, which covers |f|^4 for any degree-k
    field f.  For ||f||_q with even q build the grid with band ceil(q*k/4).
    """
    k = int(k)
    if k < 0:
        raise ValueError("band parameter must be >= 0")
    if oversample < 1.0:
        raise ValueError("oversample must be >= 1")
    n_phi = int(np.ceil(oversample * (2 * k + 1)))
    n_theta = int(np.ceil(oversample * (4 * k + 1)))
    if n_phi * n_theta > max_points:
        raise GridResolutionError(
            f"grid would need {n_phi * n_theta} points, cap is {max_points}"
        )
    t, w = np.polynomial.legendre.leggauss(n_phi)
    return QuadratureGrid(k, oversample, t, w, n_theta)


class HarmonicField:
    """Complex values of one function sampled on a grid, plus a label."""

    __slots__ = ("grid", "values", "label", "k")

    def __init__(self, grid: QuadratureGrid, values, label: str = "", k: int | None = None):
        values = np.asarray(values)
        if values.shape != grid.shape:
            raise ValueError(f"values shape {values.shape} does not match grid {grid.shape}")
        self.grid = grid
        self.values = values.astype(np.complex128, copy=False)
        self.label = label
        self.k = k

    def l2_norm(self) -> float:
        return lp_norm(self, 2.0)

    def __repr__(self):
        return f"HarmonicField({self.label!r}, grid={self.grid!r})"


def lp_norm(field: HarmonicField, p) -> float:
    """(integral |f|^p dV)^(1/p); p = inf returns the max of |f| over the nodes.

    The grid max under-estimates a true sup that falls between nodes, which is
    fine for the slope experiments here (the offset is a constant factor), but
    quote sup norms with that caveat.
    """
    if p == np.inf or p == float("inf"):
        return float(np.abs(field.values).max())
    p = float(p)
    if p < 1.0:
        raise ValueError("lp_norm requires p >= 1")
    absval = np.abs(field.values)
    integral = field.grid.integrate(absval**p)
    return float(integral ** (1.0 / p))


def tube_mask(grid: QuadratureGrid, circle, width: float) -> np.ndarray:
    """Boolean mask of grid points within angular distance width of the circle.

    Membership is |arcsin(x . a)| <= width decided at the node center, with no
    partial-cell weighting.
    """
    from .sphere import GreatCircle

    if not isinstance(circle, GreatCircle):
        circle = GreatCircle(circle)
    width = float(width)
    if width <= 0.0:
        raise ValueError("tube width must be positive")
    xyz = grid.points()
    dot = np.abs(xyz @ circle.axis)
    threshold = 1.0 if width >= np.pi / 2 else np.sin(width)
    return dot <= threshold


def tube_mass(field: HarmonicField, circle, width: float) -> float:
    """L2 mass of a unit field inside the tube of the given half-width.

    The field must be L2-normalized within 1e-6 (checked; this functional is
    only quoted for unit fields).  Emits ``TubeResolutionWarning`` when fewer
    than 8 colatitude rings meet the tube.
    """
    l2 = field.l2_norm()
    if abs(l2 - 1.0) > 1e-6:
        raise ValueError(f"tube_mass expects a unit field, got L2 norm {l2!r}")
    mask = tube_mask(field.grid, circle, width)
    rings = int(mask.any(axis=1).sum())
    if rings < 8:
        warnings.warn(
            f"only {rings} colatitude rings intersect the tube; mass is under-resolved",
            TubeResolutionWarning,
        )
    dens = np.abs(field.values) ** 2
    weighted = field.grid.ring_weight[:, None] * dens
    return float(weighted[mask].sum())


def arc_tube_masses(
    field: HarmonicField,
    circle,
    width: float,
    arc_length: float = 1.0,
    n_arcs: int = 8,
) -> np.ndarray:
    """L2 masses over arc segments of the tube around a great circle.

    The tube is cut into ``n_arcs`` overlapping unit-length pieces: segment j
    keeps the points whose arc parameter lies within arc_length/2 of the
    center 2 pi j / n_arcs.  Returns the n_arcs masses; their max is a lower
    bound for the sup over all unit arcs on that circle.
    """
    from .sphere import GreatCircle

    if not isinstance(circle, GreatCircle):
        circle = GreatCircle(circle)
    mask = tube_mask(field.grid, circle, width)
    u, v = circle.frame()
    xyz = field.grid.points()
    ang = np.arctan2(xyz @ v, xyz @ u)
    dens = field.grid.ring_weight[:, None] * np.abs(field.values) ** 2
    centers = 2.0 * np.pi * np.arange(n_arcs) / n_arcs
    out = np.empty(n_arcs)
    half = 0.5 * float(arc_length)
    for j, c in enumerate(centers):
        delta = np.abs((ang - c + np.pi) % (2.0 * np.pi) - np.pi)
        sel = mask & (delta <= half)
        out[j] = float(dens[sel].sum())
    return out


def superlevel_measure(field: HarmonicField, threshold: float) -> float:
    """Measure of the set where |f| >= threshold, by the grid weights."""
    threshold = float(threshold)
    if threshold < 0.0:
        raise ValueError("threshold must be >= 0")
    mask = np.abs(field.values) >= threshold
    weighted = np.broadcast_to(field.grid.ring_weight[:, None], field.grid.shape)
    return float(weighted[mask].sum())


def field_to_csv(field: HarmonicField, path) -> None:
    """Write the sampled field as CSV rows (phi, theta, re, im)."""
    phi = field.grid.phi
    theta = field.grid.theta
    with open(path, "w") as fh:
        fh.write("phi,theta,re,im\n")
        for i in range(field.grid.n_phi):
            row = field.values[i]
            p = repr(float(phi[i]))
            for j in range(field.grid.n_theta):
                re_part = repr(float(row[j].real))
                im_part = repr(float(row[j].imag))
                fh.write(f"{p},{repr(float(theta[j]))},{re_part},{im_part}\n")
