"""Heatmaps of one landscape layer: hand-written SVG, PGM, or matplotlib."""

from __future__ import annotations

from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

from .landscape import Landscape

CELL = 16
LEFT, TOP, RIGHT, BOTTOM = 96, 28, 88, 44
BACKGROUND = "#ffffff"
LOW = (255, 255, 255)
HIGH = (8, 48, 107)


def _color(v: float, vmax: float) -> str:
    if vmax <= 0 or v <= 0:
        return BACKGROUND
    t = min(v / vmax, 1.0)
    rgb = [round(lo + t * (hi - lo)) for lo, hi in zip(LOW, HIGH)]
    return "#{:02x}{:02x}{:02x}".format(*rgb)


def _fmt(x: float) -> str:
    return f"{x:.4g}"


def layer_svg(l: Landscape, k: int, title: str | None = None) -> str:
    """SVG heatmap of λ_k: columns left to right, ε rows bottom to top."""
    z = l.layer(k)
    rows, cols = z.shape
    vmax = float(z.max()) if z.size else 0.0
    w = LEFT + cols * CELL + RIGHT
    h = TOP + rows * CELL + BOTTOM
    title = title or f"lambda_{k} (H{l.hom_dim})"
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">',
        f'<rect x="0" y="0" width="{w}" height="{h}" fill="{BACKGROUND}"/>',
        f'<text x="{LEFT}" y="{TOP - 10}" font-family="sans-serif" font-size="12">{escape(title)}</text>',
        '<g id="cells" stroke="none">',
    ]
    for r in range(rows):
        y = TOP + (rows - 1 - r) * CELL
        for c in range(cols):
            v = float(z[r, c])
            out.append(
                f'<rect x="{LEFT + c * CELL}" y="{y}" width="{CELL}" height="{CELL}" '
                f'fill="{_color(v, vmax)}"><title>col {c}, row {r}: {_fmt(v)}</title></rect>'
            )
    out.append("</g>")
    # axes
    x0, y0, x1, y1 = LEFT, TOP, LEFT + cols * CELL, TOP + rows * CELL
    out.append(f'<rect x="{x0}" y="{y0}" width="{x1 - x0}" height="{y1 - y0}" fill="none" stroke="#000000"/>')
    out.append('<g font-family="sans-serif" font-size="9" text-anchor="middle">')
    for c in range(cols):
        if c % 2 == 0 or cols <= 16:
            out.append(f'<text x="{LEFT + c * CELL + CELL // 2}" y="{y1 + 12}">{c}</text>')
    out.append(f'<text x="{(x0 + x1) // 2}" y="{y1 + 30}" font-size="11">zigzag column</text>')
    out.append("</g>")
    out.append('<g font-family="sans-serif" font-size="9" text-anchor="end">')
    for r in range(rows):
        y = TOP + (rows - 1 - r) * CELL + CELL // 2 + 3
        out.append(f'<text x="{LEFT - 6}" y="{y}">{r}: eps={_fmt(l.epsilons[r])}</text>')
    out.append("</g>")
    # colour legend
    lx = x1 + 16
    steps = 5
    out.append('<g id="legend" font-family="sans-serif" font-size="9">')
    for i in range(steps + 1):
        v = vmax * (steps - i) / steps
        y = TOP + i * CELL
        out.append(f'<rect x="{lx}" y="{y}" width="{CELL}" height="{CELL}" fill="{_color(v, vmax)}" stroke="#000000"/>')
        out.append(f'<text x="{lx + CELL + 4}" y="{y + CELL // 2 + 3}">{_fmt(v)}</text>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def layer_pgm(l: Landscape, k: int, scale: int = 8) -> bytes:
    """Binary PGM: one ``scale`` x ``scale`` block per cell, darker is larger."""
    z = l.layer(k).astype(float)
    vmax = float(z.max()) if z.size else 0.0
    grey = np.full(z.shape, 255, dtype=np.uint8)
    if vmax > 0:
        grey = np.round(255 * (1 - z / vmax)).astype(np.uint8)
    img = np.kron(grey[::-1], np.ones((scale, scale), dtype=np.uint8))
    head = f"P5\n{img.shape[1]} {img.shape[0]}\n255\n".encode()
    return head + img.tobytes()


def layer_figure(l: Landscape, k: int, path, title: str | None = None) -> None:
    """Raster or PDF figure through matplotlib (format from the suffix)."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    z = l.layer(k)
    fig, ax = plt.subplots(figsize=(max(4.0, 0.25 * l.cols + 2), max(3.0, 0.25 * l.rows + 1.5)))
    im = ax.imshow(z, origin="lower", cmap="Blues", aspect="equal", vmin=0, interpolation="nearest")
    ax.set_xlabel("zigzag column")
    ax.set_ylabel("eps")
    ticks = list(range(0, l.rows, max(1, l.rows // 8)))
    ax.set_yticks(ticks)
    ax.set_yticklabels([_fmt(l.epsilons[r]) for r in ticks])
    ax.set_title(title or f"$\\lambda_{k}$ (H{l.hom_dim})")
    fig.colorbar(im, ax=ax, shrink=0.8)
    fig.tight_layout()
    # fixed metadata keeps repeated renders identical
    meta = {"Software": None} if str(path).lower().endswith(".png") else {"Creator": None, "Producer": None, "CreationDate": None}
    fig.savefig(path, dpi=120, metadata=meta)
    plt.close(fig)


def write_layer(l: Landscape, k: int, path, fmt: str | None = None) -> str:
    """Write λ_k to ``path``; ``fmt`` is svg, pgm, png or pdf (default: suffix, else svg)."""
    fmt = (fmt or Path(path).suffix.lstrip(".") or "svg").lower()
    if fmt == "svg":
        Path(path).write_text(layer_svg(l, k))
    elif fmt == "pgm":
        Path(path).write_bytes(layer_pgm(l, k))
    elif fmt in ("png", "pdf"):
        layer_figure(l, k, path)
    else:
        raise ValueError(f"unsupported plot format {fmt!r}")
    return fmt
