"""Box-counting and correlation (Grassberger-Procaccia) dimension estimates."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree


@dataclass(frozen=True, eq=False)
class DimensionFit:
    dimension: float
    intercept: float
    x: np.ndarray          # log(1/scale) for box counting, log(r) for correlation sums
    y: np.ndarray          # log(count) or log(C(r))
    residuals: np.ndarray
    r_squared: float
    region: tuple = (0, 0)  # [start, stop) of the points used in the fit

    def to_json(self) -> dict:
        return {
            "dimension": self.dimension,
            "intercept": self.intercept,
            "r_squared": self.r_squared,
            "max_abs_residual": float(np.max(np.abs(self.residuals))) if self.residuals.size else 0.0,
            "region": list(self.region),
            "log_x": self.x.tolist(),
            "log_y": self.y.tolist(),
        }


def _linear_fit(x, y):
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid ** 2)) / ss_tot if ss_tot > 0 else 1.0
    return float(slope), float(intercept), resid, r2


def _as_points(points) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.ndim != 2 or len(pts) == 0:
        raise ValueError("points must be a non-empty (n,) or (n, d) array")
    return pts


def box_counts(points, scales, origin=None) -> np.ndarray:
    pts = _as_points(points)
    origin = pts.min(axis=0) if origin is None else np.broadcast_to(np.asarray(origin, float), pts.shape[1:])
    shifted = pts - origin
    counts = []
    for eps in scales:
        cells = np.floor(shifted / eps).astype(np.int64)
        cells -= cells.min(axis=0)
        # pack each cell into one integer key; unique over 1-D is much faster
        span = cells.max(axis=0) + 1
        if np.prod(span.astype(float)) < 2.0 ** 62:
            key = np.zeros(len(cells), dtype=np.int64)
            for k in range(cells.shape[1]):
                key = key * span[k] + cells[:, k]
            counts.append(len(np.unique(key)))
        else:
            counts.append(len(np.unique(cells, axis=0)))
    return np.array(counts)


def box_counting_dimension(points, scales, origin=None) -> DimensionFit:
    """Least-squares slope of ``log N(eps)`` against ``log(1/eps)``.

    ``origin`` anchors the grid (defaults to the coordinate-wise minimum).
    """
    scales = np.asarray(scales, dtype=float)
    if scales.size < 3:
        raise ValueError("need at least 3 scales")
    if np.any(scales <= 0):
        raise ValueError("scales must be positive")
    counts = box_counts(points, scales, origin)
    x, y = np.log(1.0 / scales), np.log(counts)
    slope, intercept, resid, r2 = _linear_fit(x, y)
    return DimensionFit(slope, intercept, x, y, resid, r2, (0, len(scales)))


def correlation_sum(points, radii) -> np.ndarray:
    """``C(r)``: fraction of distinct point pairs closer than ``r``."""
    pts = _as_points(points)
    n = len(pts)
    tree = cKDTree(pts)
    counted = tree.count_neighbors(tree, np.asarray(radii, dtype=float))
    # count_neighbors counts ordered pairs and self-pairs
    return (counted - n) / (n * (n - 1.0))


def default_radii(points, n: int = 32) -> np.ndarray:
    pts = _as_points(points)
    extent = float(np.max(pts.max(axis=0) - pts.min(axis=0)))
    return np.geomspace(extent * 1e-3, extent * 0.1, n)


def _best_region(x, y, min_len, r2_floor):
    best = None
    for i in range(len(x)):
        for j in range(i + min_len, len(x) + 1):
            slope, intercept, resid, r2 = _linear_fit(x[i:j], y[i:j])
            key = (r2 >= r2_floor, j - i if r2 >= r2_floor else 0, r2)
            if best is None or key > best[0]:
                best = (key, (i, j), slope, intercept, resid, r2)
    return best[1:]


def correlation_dimension(points, radii=None, min_points: int = 5000, r2_floor: float = 0.999,
                          min_region: int | None = None) -> DimensionFit:
    """Grassberger-Procaccia estimate over an automatically chosen scaling region.

    The region is the longest run of consecutive radii whose log-log fit
    reaches ``r2_floor``; if none does, the best-fitting run of the minimum
    length is used.
    """
    pts = _as_points(points)
    if len(pts) < min_points:
        raise ValueError(f"need at least {min_points} points, got {len(pts)}")
    if np.all(pts == pts[0]):
        raise ValueError("degenerate point set: all points identical")
    radii = default_radii(pts) if radii is None else np.asarray(radii, dtype=float)
    c = correlation_sum(pts, radii)
    ok = c > 0
    x, y = np.log(radii[ok]), np.log(c[ok])
    if x.size < 3:
        raise ValueError("fewer than 3 radii with a non-zero correlation sum")
    min_len = min_region or max(4, x.size // 3)
    min_len = min(min_len, x.size)
    (i, j), slope, intercept, resid, r2 = _best_region(x, y, min_len, r2_floor)
    return DimensionFit(slope, intercept, x, y, resid, r2, (i, j))
