"""Spatiotemporal persistence landscapes of time series.

Windows of a delay-embedded series and the unions of neighbouring windows
form a zigzag in time; Rips scales add a second, monotone direction.  The
landscape records, at every node of that grid, the largest square around it
on which k homology classes persist jointly.
"""

from .grid import BifiltrationGrid, GridPoint, SquareRegion, boundary_path, build_grid, region_ranks
from .landscape import Landscape, MeanLandscape, compute_landscape, distance_p, mean, read_landscape
from .pipeline import PipelineConfig, run
from .zigzag import Barcode, ZigzagModule

__version__ = "0.1.0"

__all__ = [
    "BifiltrationGrid",
    "GridPoint",
    "SquareRegion",
    "boundary_path",
    "build_grid",
    "region_ranks",
    "Landscape",
    "MeanLandscape",
    "compute_landscape",
    "distance_p",
    "mean",
    "read_landscape",
    "PipelineConfig",
    "run",
    "Barcode",
    "ZigzagModule",
]
