"""Figure regeneration for the SAR imaging toolkit's CSV outputs."""

__version__ = "0.1.0"

from .readers import FigureInputError, read_image, read_sidecar, read_table
from .render import (
    RENDERERS,
    infer_kind,
    render_contour,
    render_loglog,
    render_slices,
    render_spectrum,
    render_stability,
)
