"""
SVG rendering of curves, squares and continuation frames.

Figures are drawn with matplotlib on the Agg backend and saved as SVG.
Output is a function of the inputs only: text stays text, the id salt is
fixed and no date is written.
"""

from pathlib import Path
from typing import List, Optional, Sequence, Union
import io
import logging

import matplotlib as mpl
mpl.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
from matplotlib.patches import Polygon

from config.config import RENDER_CONFIG
from continuation.homotopy import Homotopy
from continuation.tracker import TraceSample
from curves.base import BaseCurve
from curves.polyline import PolylineCurve
from squares.candidate import SquareCandidate

logger = logging.getLogger(__name__)

SVG_RC = {
    "svg.fonttype": "none",
    "svg.hashsalt": RENDER_CONFIG["hashsalt"],
    "font.size": RENDER_CONFIG["font_size"],
}


def _curve_points(curve: BaseCurve) -> np.ndarray:
    if isinstance(curve, PolylineCurve):
        points = np.asarray(curve.vertices)
    else:
        points = np.asarray(curve.samples(RENDER_CONFIG["curve_samples"]))
    return np.vstack([points, points[:1]])


def render_svg(
    curves: Union[BaseCurve, Sequence[BaseCurve]],
    squares: Sequence[SquareCandidate] = (),
    annotations: Sequence[str] = (),
    sizes: Optional[Sequence[float]] = None,
) -> str:
    """
    Render curves and squares as an SVG document.

    Every drawn artist carries an id: ``curve-<i>``, ``square-<i>``,
    ``label-<i>`` and ``annotation-<i>``.

    Args:
        curves: One curve or several
        squares: Squares drawn as polygons
        annotations: Text lines written in the top-left corner
        sizes: Optional size per square, added to its label

    Returns:
        SVG text
    """
    curves = [curves] if isinstance(curves, BaseCurve) else list(curves)
    inches = RENDER_CONFIG["canvas"] / RENDER_CONFIG["dpi"]
    width = RENDER_CONFIG["line_width"]

    with plt.rc_context(SVG_RC):
        fig, ax = plt.subplots(figsize=(inches, inches), dpi=RENDER_CONFIG["dpi"])
        try:
            for index, curve in enumerate(curves):
                outline = _curve_points(curve)
                ax.plot(outline[:, 0], outline[:, 1], color=RENDER_CONFIG["curve_color"], linewidth=width,
                        gid=f"curve-{index}")

            for index, square in enumerate(squares):
                ax.add_patch(Polygon(square.vertices, closed=True, fill=False,
                                     edgecolor=RENDER_CONFIG["square_color"], linewidth=width,
                                     gid=f"square-{index}"))
                label = f"side {square.sidelength:.6f}"
                if sizes is not None:
                    label += f", size {sizes[index]:.6f}"
                cx, cy = square.center
                ax.text(cx, cy, label, ha="center", va="center", gid=f"label-{index}")

            for line, annotation in enumerate(annotations):
                ax.text(0.01, 0.99 - 0.04 * line, annotation, transform=ax.transAxes,
                        ha="left", va="top", gid=f"annotation-{line}")

            ax.set_aspect("equal", adjustable="datalim")
            ax.autoscale_view()
            ax.set_axis_off()

            buffer = io.StringIO()
            fig.savefig(buffer, format="svg", metadata={"Date": None})
        finally:
            plt.close(fig)

    return buffer.getvalue()


def write_svg(path: Union[str, Path], *args, **kwargs) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(render_svg(*args, **kwargs), encoding="utf-8")
    return path


def write_frames(
    homotopy: Homotopy,
    samples: Sequence[TraceSample],
    out_dir: Union[str, Path],
    prefix: str = "frame",
) -> List[Path]:
    """
    One SVG per continuation sample: the slice at the sample's t, its
    square and the size with respect to P.

    Returns:
        Paths in sample order (``<prefix>_0000.svg``, ...)
    """
    out_dir = Path(out_dir)
    paths = []
    for index, sample in enumerate(samples):
        annotation = f"t = {sample.t:.6f}"
        paths.append(write_svg(
            out_dir / f"{prefix}_{index:04d}.svg",
            homotopy.curve_at(sample.t),
            [sample.square],
            [annotation],
            [sample.size_wrt_p],
        ))
    logger.info(f"Wrote {len(paths)} frames to {out_dir}")
    return paths
