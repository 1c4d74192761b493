"""Time series synthesis, noise, delay embedding, windowing and downsampling."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """Uniformly sampled, possibly multichannel series; ``samples`` has shape (n, channels)."""

    t0: float
    dt: float
    samples: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=float)
        if s.ndim == 1:
            s = s[:, None]
        if s.ndim != 2 or s.shape[0] == 0 or s.shape[1] == 0:
            raise ValueError("a time series needs at least one sample and one channel")
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if not np.all(np.isfinite(s)):
            raise ValueError("time series contains non-finite samples")
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)

    @property
    def channels(self) -> int:
        return self.samples.shape[1]

    def __len__(self) -> int:
        return self.samples.shape[0]

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(len(self))

    def channel(self, c: int) -> "TimeSeries":
        return TimeSeries(self.t0, self.dt, self.samples[:, c : c + 1])


@dataclass(frozen=True, eq=False)
class PointCloud:
    points: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.points, dtype=float)
        if p.ndim == 1:
            p = p[:, None] if p.size else p.reshape(0, 1)
        if p.ndim != 2:
            raise ValueError("points must be a 2-d array (n, dim)")
        if not np.all(np.isfinite(p)):
            raise ValueError("point cloud contains non-finite coordinates")
        p.setflags(write=False)
        object.__setattr__(self, "points", p)

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return self.points.shape[0]


@dataclass(frozen=True, eq=False)
class WindowedClouds:
    windows: tuple[PointCloud, ...] = field(default_factory=tuple)

    def __post_init__(self):
        w = tuple(self.windows)
        if not w:
            raise ValueError("need at least one window")
        if len({pc.dim for pc in w}) != 1:
            raise ValueError("all windows must share the point dimension")
        object.__setattr__(self, "windows", w)

    def __len__(self) -> int:
        return len(self.windows)

    def __iter__(self):
        return iter(self.windows)

    def __getitem__(self, i: int) -> PointCloud:
        return self.windows[i]


# -- synthesis ----------------------------------------------------------------

def _grid(t0: float, t1: float, rate: float) -> np.ndarray:
    if not t1 > t0:
        raise ValueError("t1 must exceed t0")
    if not rate > 0:
        raise ValueError("sampling rate must be positive")
    n = int(math.floor((t1 - t0) * rate + 1e-9)) + 1
    return t0 + np.arange(n) / rate


def gen_sine(t0: float, t1: float, rate: float, freq: float, offset: float = 0.0) -> TimeSeries:
    """``sin(2 pi freq t) + offset`` sampled at ``rate`` Hz on [t0, t1], both ends included."""
    if not freq > 0:
        raise ValueError("frequency must be positive")
    t = _grid(t0, t1, rate)
    return TimeSeries(float(t0), 1.0 / rate, np.sin(2 * np.pi * freq * t) + offset)


def gen_sine_jump(
    t0: float,
    t1: float,
    rate: float,
    freq: float,
    offset_before: float = -2.0,
    offset_after: float = 2.0,
) -> TimeSeries:
    """Sine with a level jump at t = 0; samples with t >= 0 carry ``offset_after``."""
    if not (t0 < 0 < t1):
        raise ValueError("the jump at t=0 needs t0 < 0 < t1")
    if not freq > 0:
        raise ValueError("frequency must be positive")
    t = _grid(t0, t1, rate)
    offset = np.where(t < 0, offset_before, offset_after)
    return TimeSeries(float(t0), 1.0 / rate, np.sin(2 * np.pi * freq * t) + offset)


def selkov_field(x: float, y: float, a: float, b: float) -> tuple[float, float]:
    x2y = x * x * y
    return -x + a * y + x2y, b - a * y - x2y


def gen_selkov(
    b: float,
    a: float = 0.1,
    x0: float = 1.0,
    y0: float = 1.0,
    t_end: float = 500.0,
    dt: float = 0.01,
) -> TimeSeries:
    """Classical RK4 trajectory of the Sel'kov glycolysis model.

    Channel 0 is x, channel 1 is y, sampled every ``dt`` from t = 0 to ``t_end``.
    """
    if not dt > 0 or not t_end > 0:
        raise ValueError("dt and t_end must be positive")
    n = int(round(t_end / dt))
    out = np.empty((n + 1, 2))
    x, y = float(x0), float(y0)
    out[0] = x, y
    h2 = dt / 2
    h6 = dt / 6
    for i in range(1, n + 1):
        # inlined field evaluations; this loop dominates data generation
        q = x * x * y
        k1x, k1y = -x + a * y + q, b - a * y - q
        xa, ya = x + h2 * k1x, y + h2 * k1y
        q = xa * xa * ya
        k2x, k2y = -xa + a * ya + q, b - a * ya - q
        xa, ya = x + h2 * k2x, y + h2 * k2y
        q = xa * xa * ya
        k3x, k3y = -xa + a * ya + q, b - a * ya - q
        xa, ya = x + dt * k3x, y + dt * k3y
        q = xa * xa * ya
        k4x, k4y = -xa + a * ya + q, b - a * ya - q
        x += h6 * (k1x + 2 * k2x + 2 * k3x + k4x)
        y += h6 * (k1y + 2 * k2y + 2 * k3y + k4y)
        if not (math.isfinite(x) and math.isfinite(y)):
            raise FloatingPointError(f"Sel'kov integration diverged at step {i}")
        out[i] = x, y
    return TimeSeries(0.0, dt, out)


def add_awgn(ts: TimeSeries, snr_db: float, seed: int) -> TimeSeries:
    """Add white Gaussian noise at ``snr_db`` relative to each channel's mean-square power.

    ``snr_db = inf`` means no noise and returns ``ts`` itself.
    """
    if math.isinf(snr_db) and snr_db > 0:
        return ts
    if len(ts) < 2:
        raise ValueError("need at least two samples to estimate signal power")
    rng = np.random.default_rng(seed)
    power = np.mean(ts.samples**2, axis=0)
    sigma = np.sqrt(power / 10 ** (snr_db / 10))
    noise = rng.standard_normal(ts.samples.shape) * sigma
    return TimeSeries(ts.t0, ts.dt, ts.samples + noise)


# -- embedding and windowing --------------------------------------------------

def delay_embed(ts: TimeSeries, d: int, tau: int) -> PointCloud:
    """Points ``(x_i, x_{i+tau}, ..., x_{i+(d-1)tau})``.

    Multichannel input embeds each channel and concatenates the coordinates
    channel by channel.
    """
    if d < 1 or tau < 1:
        raise ValueError("embedding dimension and delay must be at least 1")
    n = len(ts)
    span = (d - 1) * tau
    if n < span + 1:
        raise ValueError(f"series of length {n} is too short for d={d}, tau={tau}")
    count = n - span
    cols = [ts.samples[j * tau : j * tau + count, c] for c in range(ts.channels) for j in range(d)]
    return PointCloud(np.stack(cols, axis=1))


def segment_windows(pc: PointCloud, t_windows: int) -> WindowedClouds:
    """Split ordered points into contiguous blocks; earlier blocks take the remainder."""
    if t_windows < 1:
        raise ValueError("need at least one window")
    n = len(pc)
    if n < t_windows:
        raise ValueError(f"{n} points cannot fill {t_windows} windows")
    base, extra = divmod(n, t_windows)
    out = []
    start = 0
    for i in range(t_windows):
        size = base + (1 if i < extra else 0)
        out.append(PointCloud(pc.points[start : start + size]))
        start += size
    return WindowedClouds(tuple(out))


def _sq_dists(points: np.ndarray, centers: np.ndarray) -> np.ndarray:
    d2 = np.zeros((points.shape[0], centers.shape[0]))
    for k in range(points.shape[1]):
        diff = points[:, k, None] - centers[None, :, k]
        d2 += diff * diff
    return d2


def kmeans_downsample(
    pc: PointCloud, m: int, seed: int, max_iter: int = 100, tol: float = 1e-9
) -> PointCloud:
    """Replace the cloud by ``m`` Lloyd centroids with seeded k-means++ initialisation.

    Clouds with at most ``m`` points come back unchanged.  Clouds with fewer
    than ``m`` distinct points come back as their distinct points.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    if len(pc) == 0:
        raise ValueError("cannot downsample an empty cloud")
    if len(pc) <= m:
        return pc
    pts = pc.points
    _, first = np.unique(pts, axis=0, return_index=True)
    if len(first) <= m:
        return PointCloud(pts[np.sort(first)])

    rng = np.random.default_rng(seed)
    n = pts.shape[0]
    centers = np.empty((m, pts.shape[1]))
    centers[0] = pts[rng.integers(n)]
    closest = _sq_dists(pts, centers[:1])[:, 0]
    for c in range(1, m):
        total = closest.sum()
        # total > 0 is guaranteed by the distinct-point check above
        idx = int(np.searchsorted(np.cumsum(closest), rng.random() * total, side="right"))
        idx = min(idx, n - 1)
        while closest[idx] == 0.0:
            idx = (idx + 1) % n
        centers[c] = pts[idx]
        closest = np.minimum(closest, _sq_dists(pts, centers[c : c + 1])[:, 0])

    for _ in range(max_iter):
        # argmin returns the first minimum, so ties go to the lowest centroid index
        labels = np.argmin(_sq_dists(pts, centers), axis=1)
        new = centers.copy()
        for c in range(m):
            members = pts[labels == c]
            if len(members):
                new[c] = members.mean(axis=0)
        shift = float(np.max(np.abs(new - centers)))
        centers = new
        if shift < tol:
            break
    return PointCloud(centers)


# -- CSV ingestion ------------------------------------------------------------

def read_csv(path: str | Path, time_column: bool = False, dt: float = 1.0) -> TimeSeries:
    """Header-free CSV, one sample per row; optionally the first column is time."""
    data = np.loadtxt(path, delimiter=",", ndmin=2, dtype=float)
    if data.size == 0:
        raise ValueError(f"{path}: no samples")
    if time_column:
        if data.shape[1] < 2:
            raise ValueError(f"{path}: time column requested but only one column present")
        t = data[:, 0]
        step = float(t[1] - t[0]) if len(t) > 1 else dt
        return TimeSeries(float(t[0]), step, data[:, 1:])
    return TimeSeries(0.0, dt, data)


def write_csv(ts: TimeSeries, path: str | Path, time_column: bool = False) -> None:
    lines = []
    times = ts.times
    for i, row in enumerate(ts.samples):
        vals = [repr(float(v)) for v in row]
        if time_column:
            vals.insert(0, repr(float(times[i])))
        lines.append(",".join(vals))
    Path(path).write_text("\n".join(lines) + "\n")
