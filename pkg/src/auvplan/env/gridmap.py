"""Binary occupancy grid built by clustering a grayscale raster.

The raster is a depth/brightness image of the operating area; scalar
k-means with k=2 splits it into a dark cluster (land, forbidden) and a
light cluster (water, allowed).  World queries resolve to cells by floor
division, and anything outside the map rectangle counts as forbidden so a
stray trajectory is penalized instead of crashing the planner.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..rng import DOMAIN_KMEANS, DOMAIN_MAP, substream


class DegenerateClusteringError(ValueError):
    """Raster has fewer distinct intensities than requested clusters."""


@dataclass(frozen=True)
class GridMap:
    """Occupancy raster with metric cell size; ``True`` cells are forbidden.

    ``occupancy`` is indexed ``[iy, ix]``; cell (0, 0) has its corner at
    ``origin`` and spans ``cell_size`` meters per side.
    """

    occupancy: np.ndarray
    cell_size: float
    origin: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        occ = np.asarray(self.occupancy, dtype=bool)
        if occ.ndim != 2 or occ.size == 0:
            raise ValueError("occupancy must be a nonempty 2-D array")
        if not self.cell_size > 0:
            raise ValueError("cell_size must be positive")
        occ.setflags(write=False)
        object.__setattr__(self, "occupancy", occ)

    @property
    def height(self) -> int:
        return self.occupancy.shape[0]

    @property
    def width(self) -> int:
        return self.occupancy.shape[1]

    @property
    def extent(self) -> tuple[float, float, float, float]:
        """(x_min, x_max, y_min, y_max) of the map rectangle in meters."""
        ox, oy = self.origin
        return (ox, ox + self.width * self.cell_size, oy, oy + self.height * self.cell_size)

    def cell_index(self, points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Cell indices (ix, iy) for world points (N, 2); may be out of range."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        ix = np.floor((pts[:, 0] - self.origin[0]) / self.cell_size).astype(np.int64)
        iy = np.floor((pts[:, 1] - self.origin[1]) / self.cell_size).astype(np.int64)
        return ix, iy

    def forbidden_mask(self, points: np.ndarray) -> np.ndarray:
        """Vectorized forbidden test for world points of shape (N, 2)."""
        ix, iy = self.cell_index(points)
        out = (ix < 0) | (ix >= self.width) | (iy < 0) | (iy >= self.height)
        mask = np.ones(ix.shape, dtype=bool)
        inside = ~out
        mask[inside] = self.occupancy[iy[inside], ix[inside]]
        return mask

    def allowed_cell_centers(self) -> np.ndarray:
        """World coordinates (N, 2) of the centers of all allowed cells."""
        iy, ix = np.nonzero(~self.occupancy)
        ox, oy = self.origin
        xs = ox + (ix + 0.5) * self.cell_size
        ys = oy + (iy + 0.5) * self.cell_size
        return np.column_stack([xs, ys])


def is_forbidden(gmap: GridMap, p) -> bool:
    """True iff ``p = (x, y)`` is outside the map or in an occupied cell.

    Points exactly on a shared cell edge belong to the higher-index cell.
    """
    return bool(gmap.forbidden_mask(np.asarray(p, dtype=float).reshape(1, 2))[0])


def kmeans_1d(values: np.ndarray, k: int, max_iters: int, seed: int):
    """Lloyd's algorithm on scalar samples.

    Initial centroids are ``k`` distinct values drawn from the sample's
    unique values with a seeded stream; assignment ties break toward the
    lower-index centroid.  Returns ``(centroids, labels)``.
    """
    vals = np.asarray(values, dtype=float).ravel()
    if vals.size == 0:
        raise ValueError("cannot cluster an empty sample")
    if k < 1:
        raise ValueError("k must be >= 1")
    if max_iters < 1:
        raise ValueError("max_iters must be >= 1")
    unique = np.unique(vals)
    if unique.size < k:
        raise DegenerateClusteringError(
            f"raster has {unique.size} distinct intensities, cannot form {k} clusters"
        )
    rng = substream(seed, DOMAIN_KMEANS)
    centroids = rng.choice(unique, size=k, replace=False).astype(float)

    labels = None
    for _ in range(max_iters):
        # argmin returns the first (lowest-index) centroid on ties
        dist = np.abs(vals[:, None] - centroids[None, :])
        new_labels = np.argmin(dist, axis=1)
        if labels is not None and np.array_equal(new_labels, labels):
            break
        labels = new_labels
        for j in range(k):
            member = labels == j
            if member.any():  # empty clusters keep their previous centroid
                centroids[j] = vals[member].mean()
    return centroids, labels


def cluster_map(
    raster: np.ndarray,
    k: int = 2,
    max_iters: int = 50,
    seed: int = 0,
    *,
    cell_size: float = 10.0,
    origin: tuple[float, float] = (0.0, 0.0),
) -> GridMap:
    """Cluster grayscale intensities and label the darker cluster forbidden.

    With k=2 this separates land (dark) from water (light); every cluster
    darker than the lightest one is marked forbidden, so k=1 yields an
    all-water map.
    """
    img = np.asarray(raster, dtype=float)
    if img.ndim != 2 or img.size == 0:
        raise ValueError("raster must be a nonempty 2-D array")
    centroids, labels = kmeans_1d(img, k, max_iters, seed)
    lightest = int(np.argmax(centroids))
    forbidden_clusters = np.array([j != lightest for j in range(k)])
    occupancy = forbidden_clusters[labels].reshape(img.shape)
    return GridMap(occupancy=occupancy, cell_size=cell_size, origin=origin)


def read_pgm(path) -> np.ndarray:
    """Read a binary (P5) 8-bit grayscale PGM into a uint8 array."""
    with open(path, "rb") as fh:
        data = fh.read()
    if not data.startswith(b"P5"):
        raise ValueError(f"{path}: not a binary PGM (P5) file")

    # header tokens: magic, width, height, maxval; '#' starts a comment
    tokens: list[bytes] = []
    pos = 2
    while len(tokens) < 3 and pos < len(data):
        ch = data[pos : pos + 1]
        if ch == b"#":
            pos = data.index(b"\n", pos) + 1
        elif ch.isspace():
            pos += 1
        else:
            end = pos
            while end < len(data) and not data[end : end + 1].isspace():
                end += 1
            tokens.append(data[pos:end])
            pos = end
    pos += 1  # single whitespace after maxval
    try:
        width, height, maxval = (int(t) for t in tokens)
    except (ValueError, TypeError) as exc:
        raise ValueError(f"{path}: malformed PGM header") from exc
    if maxval > 255:
        raise ValueError(f"{path}: 16-bit PGM not supported (maxval {maxval})")
    pixels = np.frombuffer(data, dtype=np.uint8, count=width * height, offset=pos)
    if pixels.size != width * height:
        raise ValueError(f"{path}: truncated pixel data")
    return pixels.reshape(height, width).copy()


def write_pgm(path, raster: np.ndarray) -> None:
    """Write a uint8 grayscale array as a binary (P5) PGM."""
    img = np.asarray(raster)
    if img.dtype != np.uint8:
        img = np.clip(np.round(img), 0, 255).astype(np.uint8)
    height, width = img.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{width} {height}\n255\n".encode())
        fh.write(img.tobytes())


def synthetic_raster(
    width: int,
    height: int,
    n_blobs: int,
    radius_cells: tuple[float, float],
    seed: int,
    *,
    water_level: int = 210,
    land_level: int = 45,
    noise: int = 12,
) -> np.ndarray:
    """Generate a grayscale raster of light water with dark land blobs.

    Blob centers and radii are drawn from a seeded stream; edges are
    softened over 20% of the radius so clustering sees a realistic (but
    still bimodal) intensity distribution.
    """
    if width < 1 or height < 1:
        raise ValueError("raster dimensions must be positive")
    if n_blobs < 0:
        raise ValueError("n_blobs must be >= 0")
    lo, hi = radius_cells
    if not 0 < lo <= hi:
        raise ValueError("radius_cells must satisfy 0 < lo <= hi")
    rng = substream(seed, DOMAIN_MAP)
    ys, xs = np.mgrid[0:height, 0:width]
    img = np.full((height, width), float(water_level))
    img += rng.uniform(-noise, noise, size=img.shape)
    for _ in range(n_blobs):
        cx = rng.uniform(0, width)
        cy = rng.uniform(0, height)
        r = rng.uniform(lo, hi)
        d = np.hypot(xs - cx, ys - cy)
        # 1 inside the blob, smooth ramp to 0 across [r, 1.2 r]
        blend = np.clip((1.2 * r - d) / (0.2 * r), 0.0, 1.0)
        img = img * (1 - blend) + (land_level + rng.uniform(-noise, noise)) * blend
    return np.clip(np.round(img), 0, 255).astype(np.uint8)
