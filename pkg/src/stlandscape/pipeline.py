"""End-to-end runs: time series to point-cloud windows to grid to landscape."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields
from typing import Sequence

import numpy as np

from .complex import pairwise_distances
from .grid import BifiltrationGrid, build_grid
from .landscape import Landscape, compute_landscape
from .signals import (
    TimeSeries,
    WindowedClouds,
    add_awgn,
    delay_embed,
    gen_selkov,
    gen_sine,
    gen_sine_jump,
    kmeans_downsample,
    segment_windows,
)

# sine defaults: about 14 periods per window at 16 windows over [-250, 250]
SINE_RATE = 2.0
SINE_FREQ = 0.46
SINE_SPAN = (-250.0, 250.0)
JUMP_OFFSETS = (-2.0, 2.0)

SELKOV_A = 0.1
SELKOV_BS = tuple(round(0.35 + 0.05 * i, 2) for i in range(12))
SELKOV_DT = 0.01
SELKOV_T_END = 500.0
SELKOV_STRIDE = 50  # keep every 50th integration step, i.e. 0.5 time units


@dataclass
class PipelineConfig:
    windows: int = 16
    points_per_window: int = 40
    embed_dim: int = 2
    delay: int = 1
    epsilons: str | Sequence[float] = "auto:15"
    hom_dim: int = 1
    k_max: int = 3
    seed: int = 0
    threads: int = 1

    def __post_init__(self):
        for name in ("windows", "points_per_window", "embed_dim", "delay", "k_max", "threads"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or v < 1:
                raise ValueError(f"{name} must be a positive integer, got {v!r}")
        if not isinstance(self.hom_dim, (int, np.integer)) or self.hom_dim < 0:
            raise ValueError(f"hom_dim must be a non-negative integer, got {self.hom_dim!r}")
        self.epsilons = parse_epsilons(self.epsilons)

    @classmethod
    def field_names(cls) -> list[str]:
        return [f.name for f in fields(cls)]


def parse_epsilons(value) -> str | tuple[float, ...]:
    """``"auto:N"`` stays symbolic; anything else becomes an ascending tuple."""
    if isinstance(value, str):
        s = value.strip()
        if s.startswith("auto"):
            _, _, n = s.partition(":")
            try:
                count = int(n) if n else 15
            except ValueError:
                raise ValueError(f"bad epsilon value {value!r}") from None
            if count < 1:
                raise ValueError("auto epsilons need a positive count")
            return f"auto:{count}"
        try:
            value = [float(x) for x in s.split(",") if x.strip()]
        except ValueError:
            raise ValueError(f"bad epsilon list {value!r}") from None
    eps = tuple(float(e) for e in value)
    if not eps:
        raise ValueError("epsilon list is empty")
    if any(not math.isfinite(e) or e < 0 for e in eps):
        raise ValueError("epsilons must be finite and non-negative")
    if any(b <= a for a, b in zip(eps, eps[1:])):
        raise ValueError("epsilons must be strictly ascending")
    return eps


def auto_epsilons(wc: WindowedClouds, count: int) -> tuple[float, ...]:
    """``count`` scales from 0 to half the diameter of all points together."""
    pts = np.concatenate([w.points for w in wc], axis=0)
    diam = float(pairwise_distances(pts).max()) if len(pts) > 1 else 0.0
    if count == 1:
        return (0.0,)
    if diam == 0.0:
        # a single distinct point; any increasing grid gives the same answer
        return tuple(float(i) for i in range(count))
    return tuple(float(e) for e in np.linspace(0.0, diam / 2, count))


def prepare_windows(ts: TimeSeries, cfg: PipelineConfig) -> WindowedClouds:
    pc = delay_embed(ts, cfg.embed_dim, cfg.delay)
    wc = segment_windows(pc, cfg.windows)
    return WindowedClouds(
        tuple(kmeans_downsample(w, cfg.points_per_window, seed=cfg.seed + i) for i, w in enumerate(wc))
    )


def run(ts: TimeSeries, cfg: PipelineConfig) -> tuple[Landscape, BifiltrationGrid]:
    wc = prepare_windows(ts, cfg)
    if isinstance(cfg.epsilons, str):
        eps = auto_epsilons(wc, int(cfg.epsilons.split(":")[1]))
    else:
        eps = cfg.epsilons
    g = build_grid(wc, eps, cfg.hom_dim)
    return compute_landscape(g, cfg.k_max, threads=cfg.threads), g


# -- synthetic data -----------------------------------------------------------

def sine_series(jump: bool = False, snr_db: float = math.inf, seed: int = 0, **kw) -> TimeSeries:
    t0, t1 = kw.get("t0", SINE_SPAN[0]), kw.get("t1", SINE_SPAN[1])
    rate, freq = kw.get("rate", SINE_RATE), kw.get("freq", SINE_FREQ)
    if jump:
        before, after = kw.get("offset_before", JUMP_OFFSETS[0]), kw.get("offset_after", JUMP_OFFSETS[1])
        ts = gen_sine_jump(t0, t1, rate, freq, before, after)
    else:
        ts = gen_sine(t0, t1, rate, freq, kw.get("offset", 0.0))
    return add_awgn(ts, snr_db, seed)


_selkov_cache: dict = {}


def selkov_clean(
    bs: Sequence[float] = SELKOV_BS,
    a: float = SELKOV_A,
    t_end: float = SELKOV_T_END,
    dt: float = SELKOV_DT,
    stride: int = SELKOV_STRIDE,
) -> TimeSeries:
    """x-coordinate of the Sel'kov model, one equal-length segment per b.

    Each segment is the second half of a trajectory started at (1, 1),
    subsampled every ``stride`` steps.
    """
    key = (tuple(bs), a, t_end, dt, stride)
    if key not in _selkov_cache:
        parts = []
        for b in bs:
            traj = gen_selkov(b, a, 1.0, 1.0, t_end, dt)
            keep = traj.times >= t_end / 2 - 1e-9
            parts.append(traj.samples[keep, 0][::stride])
        _selkov_cache[key] = np.concatenate(parts)[:, None]
    return TimeSeries(0.0, dt * stride, _selkov_cache[key].copy())


def selkov_series(snr_db: float = math.inf, seed: int = 0, **kw) -> TimeSeries:
    return add_awgn(selkov_clean(**kw), snr_db, seed)


SINE_CONFIG = dict(windows=16, points_per_window=40, embed_dim=2, delay=1, hom_dim=1)
SELKOV_CONFIG = dict(windows=len(SELKOV_BS), points_per_window=40, embed_dim=2, delay=5, hom_dim=1)
