"""Plain-text persistence: field snapshots, trajectory CSV, JSON documents.

Snapshot format: one header line

    torus n=<n> axes=<p1,...,p2n> periods=<L1,...,L2n>

followed by the node values in row-major order, one per line with 17
significant digits (enough to round-trip float64 bit-exactly).
"""

import json

import numpy as np

from .errors import ConfigError
from .torus import ScalarField, make_grid

TRAJECTORY_COLUMNS = (
    "t", "E", "u_min", "u_max", "dudt_sup", "residual_sup",
    "dissipation_mismatch", "dt",
)


def _fmt(x):
    return f"{x:.17g}"


def write_snapshot(field, path):
    g = field.grid
    axes = ",".join(str(p) for p in g.points_per_axis)
    periods = ",".join(_fmt(L) for L in g.periods)
    lines = [f"torus n={g.complex_dim} axes={axes} periods={periods}"]
    lines.extend(_fmt(v) for v in field.values.ravel())
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_snapshot(path):
    with open(path) as fh:
        header = fh.readline().strip()
        parts = header.split()
        if len(parts) != 4 or parts[0] != "torus":
            raise ConfigError(f"not a field snapshot: bad header {header!r}")
        try:
            n = int(parts[1].removeprefix("n="))
            axes = [int(s) for s in parts[2].removeprefix("axes=").split(",")]
            periods = [float(s) for s in parts[3].removeprefix("periods=").split(",")]
        except ValueError as exc:
            raise ConfigError(f"bad snapshot header {header!r}: {exc}") from exc
        grid = make_grid(n, axes, periods)
        values = np.loadtxt(fh, dtype=np.float64, ndmin=1)
    if values.size != grid.node_count:
        raise ConfigError(
            f"snapshot has {values.size} values, grid needs {grid.node_count}")
    return ScalarField(grid, values.reshape(grid.shape))


def write_trajectory_csv(trajectory, path):
    rows = [",".join(TRAJECTORY_COLUMNS)]
    for r in trajectory.records:
        rows.append(",".join(_fmt(x) for x in (
            r.t, r.energy, r.u_min, r.u_max, r.dudt_sup, r.residual_sup,
            r.dissipation_mismatch, r.dt)))
    with open(path, "w") as fh:
        fh.write("\n".join(rows) + "\n")


def dump_json(document, path):
    """Write a JSON document with stable key order and a trailing newline."""
    text = json.dumps(document, indent=2, allow_nan=True)
    with open(path, "w") as fh:
        fh.write(text + "\n")
    return text
