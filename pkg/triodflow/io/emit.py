"""Run outputs: the CSV time series, JSON-lines snapshots and SVG frames."""
import csv
import json
import logging
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
from matplotlib.figure import Figure  # noqa: E402

import numpy as np  # noqa: E402

from ..anisotropy import Anisotropy, wulff_boundary  # noqa: E402
from ..diagnostics import CSV_HEADER, DiagnosticsRecord  # noqa: E402
from ..errors import IoError, ParseError  # noqa: E402
from .config import OutputConfig  # noqa: E402

logger = logging.getLogger(__name__)

matplotlib.rcParams["svg.hashsalt"] = "triodflow"
WULFF_POINTS = 256


def format_value(v):
    return format(float(v), ".17g")


class RunEmitter:
    """Callable sink for :func:`triodflow.flow.run` that writes all outputs.

    Use as a context manager: ``start`` before the run, ``finish`` with the
    stop reason afterwards.
    """

    def __init__(self, output: OutputConfig, anisotropy: Anisotropy, base_dir=None):
        self.output = output
        self.anisotropy = anisotropy
        self.csv_path, self.snapshot_path, self.svg_dir = output.paths(base_dir)
        self._csv_file = None
        self._writer = None
        self._snapshots = None
        self._viewport = None
        self._wulff = None
        self.rows = 0
        self.snapshot_count = 0
        self.frame_count = 0

    def __enter__(self):
        try:
            self.csv_path.parent.mkdir(parents=True, exist_ok=True)
            self._csv_file = open(self.csv_path, "w", newline="")
            self._writer = csv.writer(self._csv_file, lineterminator="\n")
            if self.snapshot_path is not None:
                self.snapshot_path.parent.mkdir(parents=True, exist_ok=True)
                self._snapshots = open(self.snapshot_path, "w")
            if self.output.svg_every:
                self.svg_dir.mkdir(parents=True, exist_ok=True)
        except OSError as err:
            self.close()
            raise IoError(f"cannot open outputs: {err}") from err
        return self

    def __exit__(self, exc_type, exc, tb):
        self.close()
        return False

    def close(self):
        for f in (self._csv_file, self._snapshots):
            if f is not None and not f.closed:
                f.close()

    def start(self, state, record: DiagnosticsRecord):
        try:
            self._writer.writerow(CSV_HEADER)
        except OSError as err:
            raise IoError(f"cannot write {self.csv_path}: {err}") from err
        nodes = np.vstack([c.nodes for c in state.net.curves])
        lo, hi = nodes.min(axis=0), nodes.max(axis=0)
        half = 0.6 * max(float((hi - lo).max()), 1e-12)
        center = 0.5 * (lo + hi)
        self._viewport = (center - half, center + half)
        if self.output.svg_every:
            self._wulff = wulff_boundary(self.anisotropy, WULFF_POINTS)
        self._snapshot(state, record)
        self._frame(state)
        logger.info("Writing run outputs to %s", self.csv_path)

    def __call__(self, state, record: DiagnosticsRecord):
        try:
            self._writer.writerow([format_value(v) for v in record.csv_values()])
        except OSError as err:
            raise IoError(f"cannot write {self.csv_path}: {err}") from err
        self.rows += 1
        if state.step_index % self.output.snapshot_every == 0:
            self._snapshot(state, record)
        if self.output.svg_every and state.step_index % self.output.svg_every == 0:
            self._frame(state)

    def finish(self, stop):
        try:
            self._csv_file.write(f"# stop_reason={stop}\n")
            self._csv_file.flush()
            if self._snapshots is not None:
                self._snapshots.flush()
        except OSError as err:
            raise IoError(f"cannot write {self.csv_path}: {err}") from err
        logger.info("Wrote %d rows, %d snapshots, %d frames", self.rows, self.snapshot_count, self.frame_count)

    def _snapshot(self, state, record):
        if self._snapshots is None:
            return
        entry = {
            "t": state.t,
            "step": state.step_index,
            "curves": state.net.to_lists(),
            "diagnostics": record.to_dict(),
        }
        try:
            self._snapshots.write(json.dumps(entry) + "\n")
        except OSError as err:
            raise IoError(f"cannot write {self.snapshot_path}: {err}") from err
        self.snapshot_count += 1

    def _frame(self, state):
        if not self.output.svg_every:
            return
        path = Path(self.svg_dir) / f"frame_{state.step_index:06d}.svg"
        try:
            render_frame(state, self._viewport, self._wulff, path)
        except OSError as err:
            raise IoError(f"cannot write {path}: {err}") from err
        self.frame_count += 1


def render_frame(state, viewport, wulff, path):
    fig = Figure(figsize=(6, 6))
    ax = fig.add_axes([0.08, 0.08, 0.88, 0.88])
    for c in state.net.curves:
        ax.plot(c.nodes[:, 0], c.nodes[:, 1], color="black", linewidth=1.2)
    ax.plot(*state.net.endpoints.T, "o", color="tab:blue", markersize=4)
    ax.plot(*state.net.junction, "o", color="tab:red", markersize=4)
    ax.set_xlim(viewport[0][0], viewport[1][0])
    ax.set_ylim(viewport[0][1], viewport[1][1])
    ax.set_aspect("equal")
    ax.set_title(f"t = {state.t:.6g}")

    inset = fig.add_axes([0.72, 0.72, 0.22, 0.22])
    closed = np.vstack([wulff, wulff[:1]])
    inset.plot(closed[:, 0], closed[:, 1], color="tab:green", linewidth=1.0)
    inset.set_aspect("equal")
    inset.set_xticks([])
    inset.set_yticks([])
    fig.savefig(path, format="svg", metadata={"Date": None})


def read_series(path):
    """(t, y) pairs of a run CSV; y is kphi_l2sq, or the second column of a two-column file."""
    try:
        with open(path, newline="") as f:
            lines = [line for line in f if line.strip() and not line.startswith("#")]
    except OSError as err:
        raise IoError(f"cannot read {path}: {err}") from err
    rows = list(csv.reader(lines))
    if not rows:
        raise ParseError(f"{path} holds no data", line=1)
    header, body = rows[0], rows[1:]
    if "kphi_l2sq" in header and "t" in header:
        ti, yi = header.index("t"), header.index("kphi_l2sq")
    elif len(header) == 2:
        ti, yi = 0, 1
    else:
        raise ParseError(f"{path} has neither a kphi_l2sq column nor exactly two columns", line=1)
    series = []
    for n, row in enumerate(body, start=2):
        try:
            series.append([float(row[ti]), float(row[yi])])
        except (ValueError, IndexError) as err:
            raise ParseError(f"bad value in row {n}: {err}", line=n, field=header[yi]) from err
    return series
