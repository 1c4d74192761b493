import numpy as np

from stlandscape.grid import build_grid
from stlandscape.signals import PointCloud, WindowedClouds


def random_clouds(rng, t_windows, lo=4, hi=8, spread=1.0):
    """Noisy circles and blobs so that H1 is sometimes nontrivial."""
    windows = []
    for _ in range(t_windows):
        n = int(rng.integers(lo, hi + 1))
        if rng.random() < 0.6:
            ang = np.sort(rng.uniform(0, 2 * np.pi, n))
            pts = np.column_stack([np.cos(ang), np.sin(ang)]) + rng.normal(scale=0.15, size=(n, 2))
            pts += rng.normal(scale=0.4, size=2)
        else:
            pts = rng.normal(scale=spread, size=(n, 2))
        windows.append(PointCloud(pts))
    return WindowedClouds(tuple(windows))


def random_grid(rng, t_windows, n_rows, p=1, lo=4, hi=8):
    wc = random_clouds(rng, t_windows, lo, hi)
    top = float(rng.uniform(1.2, 2.5))
    eps = np.sort(rng.uniform(0, top, n_rows))
    eps[0] = min(eps[0], 0.2)
    return build_grid(wc, np.unique(eps), p)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n])
