"""Spectral cut-off indicator and the normalized imaging functional W(z).

For a sampling point z the probe b_z is the Poisson kernel on the boundary
nodes, and the regularized quadratic form is

    sum_j phi(s_j; alpha)**2 / s_j * |<u_j, b_z>|**2,   phi = 1 if s_j**2 >= alpha else 0

over the SVD (s_j, u_j) of the data matrix. It stays bounded for z inside the
defect and blows up outside, so its reciprocal images the defect.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .data import SvdFactors
from .errors import EmptySpectrumError, ValidationError

logger = logging.getLogger(__name__)

#: Indicator values are clamped here before taking reciprocals.
UNDERFLOW_FLOOR = 1e-300

DEFAULT_GRID = 128
DEFAULT_RMAX = 0.95
MIN_GRID = 8


@dataclass(frozen=True)
class SamplePoint:
    x: float
    y: float

    def __post_init__(self):
        if not math.hypot(self.x, self.y) < 1.0:
            raise ValidationError(f"sampling point ({self.x}, {self.y}) is not inside the unit disk")

    @property
    def r(self) -> float:
        return math.hypot(self.x, self.y)

    @property
    def theta(self) -> float:
        # atan2(0, 0) == 0, which is the convention needed at the origin
        return math.atan2(self.y, self.x)


@dataclass(frozen=True)
class FilterSpec:
    """Spectral cut-off: keep singular values with ``s**2 >= alpha``."""

    alpha: float
    kind: str = "spectral-cutoff"

    def __post_init__(self):
        if not float(self.alpha) > 0:
            raise ValidationError(f"alpha must be > 0, got {self.alpha}")
        if self.kind != "spectral-cutoff":
            raise ValidationError(f"unsupported filter kind {self.kind!r}")

    def factors(self, s: np.ndarray) -> np.ndarray:
        return (np.asarray(s) ** 2 >= self.alpha).astype(float)


def _nodes(m_grid: int) -> np.ndarray:
    return 2.0 * np.pi * np.arange(m_grid) / m_grid


def probe_matrix(x, y, m_grid: int) -> np.ndarray:
    """Probe vectors for many points at once, one row per point."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    y = np.atleast_1d(np.asarray(y, dtype=float))
    r = np.hypot(x, y)
    if np.any(r >= 1.0):
        raise ValidationError("sampling points must satisfy |z| < 1")
    th_z = np.arctan2(y, x)
    r = r[:, None]
    denom = r * r + 1.0 - 2.0 * r * np.cos(_nodes(m_grid)[None, :] - th_z[:, None])
    return -(1.0 - r * r) / denom / (2.0 * np.pi)


def probe(z: SamplePoint, m_grid: int) -> np.ndarray:
    """Poisson kernel (normal derivative of the disk Green's function) on the M nodes."""
    return probe_matrix(z.x, z.y, m_grid)[0].astype(complex)


def _quadratic_forms(svd: SvdFactors, probes: np.ndarray, filt: FilterSpec) -> np.ndarray:
    keep = filt.factors(svd.singular_values) > 0
    if not keep.any():
        return np.zeros(probes.shape[0])
    s = svd.singular_values[keep]
    coeff = probes @ svd.left_vectors[:, keep].conj()
    return (np.abs(coeff) ** 2 / s).sum(axis=1)


def indicator(svd: SvdFactors, b: np.ndarray, filt: FilterSpec) -> float:
    """Regularized quadratic form for one probe; 0.0 when the filter removes everything."""
    if not filt.factors(svd.singular_values).any():
        logger.warning("empty spectrum: alpha=%g exceeds every squared singular value", filt.alpha)
        return 0.0
    return float(_quadratic_forms(svd, np.asarray(b)[None, :], filt)[0])


def w_reg(svd: SvdFactors, x, y, filt: FilterSpec) -> np.ndarray:
    """Unnormalized imaging functional (reciprocal indicator) at arbitrary points."""
    if not filt.factors(svd.singular_values).any():
        raise EmptySpectrumError(
            f"alpha={filt.alpha:g} exceeds the whole spectrum "
            f"(largest squared singular value {svd.singular_values[0] ** 2:.3e})"
        )
    m_grid = svd.left_vectors.shape[0]
    forms = _quadratic_forms(svd, probe_matrix(x, y, m_grid), filt)
    return 1.0 / np.maximum(forms, UNDERFLOW_FLOOR)


@dataclass
class IndicatorField:
    """Imaging functional on a cell-centred ``grid_n x grid_n`` lattice over [-1, 1]^2.

    Arrays are indexed ``[row, col]`` with row 0 at y = +1 (image order). Points
    outside ``|z| <= r_max`` are absent and hold NaN.
    """

    x: np.ndarray
    y: np.ndarray
    w_raw: np.ndarray
    w: np.ndarray
    p: float
    r_max: float = DEFAULT_RMAX

    @property
    def grid_n(self) -> int:
        return self.x.size

    @property
    def present(self) -> np.ndarray:
        return ~np.isnan(self.w)

    @property
    def spacing(self) -> float:
        return 2.0 / self.grid_n

    @property
    def radius(self) -> np.ndarray:
        xx, yy = np.meshgrid(self.x, self.y)
        return np.hypot(xx, yy)

    def normalize(self, raw) -> np.ndarray:
        """Apply this field's sup-norm normalization and exponent to other raw values."""
        return np.abs(np.asarray(raw) / np.nanmax(self.w_raw)) ** self.p

    @classmethod
    def from_raw(cls, x, y, w_raw, p, r_max=DEFAULT_RMAX) -> "IndicatorField":
        w_raw = np.asarray(w_raw, dtype=float)
        if np.all(np.isnan(w_raw)):
            raise ValidationError("indicator field has no present points")
        w = np.abs(w_raw / np.nanmax(w_raw)) ** p
        return cls(np.asarray(x, float), np.asarray(y, float), w_raw, w, float(p), float(r_max))


def lattice(grid_n: int) -> np.ndarray:
    h = 2.0 / grid_n
    return -1.0 + h * (np.arange(grid_n) + 0.5)


def scan(
    svd: SvdFactors,
    filt: FilterSpec,
    p: float = 1.0,
    grid_n: int = DEFAULT_GRID,
    r_max: float = DEFAULT_RMAX,
) -> IndicatorField:
    """Evaluate and normalize W over the lattice points with ``|z| <= r_max``."""
    if int(grid_n) < MIN_GRID:
        raise ValidationError(f"grid_n must be >= {MIN_GRID}, got {grid_n}")
    if not 0.0 < r_max <= 1.0:
        raise ValidationError(f"r_max must lie in (0, 1], got {r_max}")
    if not p > 0:
        raise ValidationError(f"decay exponent p must be > 0, got {p}")
    x = lattice(int(grid_n))
    y = x[::-1].copy()
    xx, yy = np.meshgrid(x, y)
    rr = np.hypot(xx, yy)
    inside = (rr <= r_max) & (rr < 1.0)
    if not inside.any():
        raise ValidationError(f"no lattice point within r_max={r_max}")
    w_raw = np.full(xx.shape, np.nan)
    w_raw[inside] = w_reg(svd, xx[inside], yy[inside], filt)
    return IndicatorField.from_raw(x, y, w_raw, p, r_max)


@dataclass(frozen=True)
class LevelSet:
    mask: np.ndarray
    points: np.ndarray
    r_est: float


def level_set(field: IndicatorField, threshold: float) -> LevelSet:
    """Lattice points with ``w >= threshold`` and their equivalent-area radius."""
    if not 0.0 < threshold <= 1.0:
        raise ValidationError(f"threshold must lie in (0, 1], got {threshold}")
    w = np.where(field.present, field.w, -np.inf)
    mask = w >= threshold
    xx, yy = np.meshgrid(field.x, field.y)
    points = np.column_stack([xx[mask], yy[mask]])
    area = mask.sum() * field.spacing**2
    return LevelSet(mask, points, math.sqrt(area / math.pi))


def separation_ratio(
    field: IndicatorField,
    rho: float,
    gap: float = 0.3,
    outer: float = 0.9,
) -> float:
    """Mean W over ``|z| <= rho/2`` divided by mean W over the outer band.

    The outer band is ``min(rho + gap, outer) <= |z| <= outer``, widened by half a
    lattice spacing on both sides so it still holds lattice points when it
    collapses onto the circle ``|z| = outer``.
    """
    r = field.radius
    ok = field.present
    half = 0.5 * field.spacing
    inner = ok & (r <= rho / 2)
    lo = min(rho + gap, outer)
    band = ok & (r >= lo - half) & (r <= outer + half)
    if not inner.any() or not band.any():
        raise ValidationError("separation regions contain no lattice points; refine the grid")
    return float(field.w[inner].mean() / field.w[band].mean())
