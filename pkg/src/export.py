"""Write run results: CSV tables, the run manifest and optional HTML figures."""

import json
import platform
import time
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional

import numpy as np
import pandas as pd
import plotly.graph_objects as go
import scipy
import tenacity

try:
    from .config import ensure_output_dir, logger
    from .utils import config_hash
    from .version import __version__
except ImportError:
    from src.config import ensure_output_dir, logger
    from src.utils import config_hash
    from src.version import __version__

FLOAT_FORMAT = "%.9g"


@tenacity.retry(
    wait=tenacity.wait_exponential(min=1, max=10),
    stop=tenacity.stop_after_attempt(3),
    retry=tenacity.retry_if_exception_type(OSError),
    reraise=True,
)
def write_text(path: Path, text: str) -> None:
    """Write a UTF-8 text file, retrying transient OS errors."""
    Path(path).write_text(text, encoding="utf-8")


class ResultWriter:
    """Collects the files written by one CLI run and emits its manifest."""

    def __init__(self, out_dir: Optional[str] = None, subcommand: str = "", seed: Optional[int] = None):
        self.out_dir = ensure_output_dir(out_dir)
        self.subcommand = subcommand
        self.seed = seed
        self.files: List[str] = []
        self._started = time.perf_counter()

    def write_csv(self, frame: pd.DataFrame, name: str) -> Path:
        """
        Write a DataFrame as CSV with 9 significant digits.

        Args:
            frame: Table to write
            name: File name inside the output directory

        Returns:
            Path of the written file
        """
        path = self.out_dir / name
        write_text(path, frame.to_csv(index=False, float_format=FLOAT_FORMAT))
        self.files.append(name)
        logger.info(f"Saved {len(frame)} rows to {path}")
        return path

    def write_json(self, payload: Mapping[str, Any], name: str) -> Path:
        path = self.out_dir / name
        write_text(path, json.dumps(payload, indent=2, sort_keys=True, default=_jsonable))
        self.files.append(name)
        logger.info(f"Saved {path}")
        return path

    def write_figure(self, figure, name: str) -> Path:
        """Write a plotly figure as a standalone HTML page."""
        path = self.out_dir / name
        write_text(path, figure.to_html(include_plotlyjs="cdn", full_html=True))
        self.files.append(name)
        logger.info(f"Saved figure to {path}")
        return path

    def write_manifest(self, config: Mapping[str, Any]) -> Path:
        """Write manifest.json describing this run."""
        manifest = {
            "subcommand": self.subcommand,
            "config_hash": config_hash(config),
            "version": __version__,
            "python": platform.python_version(),
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "pandas": pd.__version__,
            "seed": self.seed,
            "wall_time_s": round(time.perf_counter() - self._started, 3),
            "files": list(self.files),
        }
        path = self.out_dir / "manifest.json"
        write_text(path, json.dumps(manifest, indent=2, sort_keys=True))
        logger.info(f"Saved manifest with {len(self.files)} file(s) to {path}")
        return path


def _jsonable(value: Any) -> Any:
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, complex):
        return [value.real, value.imag]
    raise TypeError(f"{type(value).__name__} is not JSON serializable")


def grid_figure(
    frame: pd.DataFrame,
    title: str,
    y: str = "doppler_hz",
    value: str = "value_db",
    y_title: str = "Doppler (Hz)",
):
    """Heatmap of a long-format table over azimuth and a second axis."""
    table = frame.pivot(index=y, columns="azimuth_deg", values=value)
    fig = go.Figure(data=go.Heatmap(
        x=table.columns.to_numpy(),
        y=table.index.to_numpy(),
        z=table.to_numpy(),
        colorscale="Viridis",
        colorbar={"title": "dB"},
    ))
    fig.update_layout(title=title, xaxis_title="Azimuth (deg)", yaxis_title=y_title)
    return fig


def line_figure(frame: pd.DataFrame, x: str, ys: Dict[str, str], title: str, y_title: str = "dB"):
    """Line chart with one trace per (label -> column) entry."""
    fig = go.Figure()
    for label, column in ys.items():
        fig.add_trace(go.Scatter(x=frame[x], y=frame[column], mode="lines", name=label))
    fig.update_layout(title=title, xaxis_title=x, yaxis_title=y_title)
    return fig
