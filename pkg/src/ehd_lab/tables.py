"""Plain-text tables: sampled fields, monitor curves and polylines.

Field tables start with ``#``-prefixed ``key = value`` metadata lines and
then hold one row per grid node.  Polar fields use rows ``i j u phase`` with
header keys ``N_r``, ``N_theta``, ``dr``; Cartesian solver fields use rows
``i j u phase`` with ``N_1``, ``N_2``, ``h``, ``x1_min``, ``x2_min``.
Indices are 0-based.  Numbers are written with 17 significant digits so a
round trip is exact.
"""

from __future__ import annotations

import io

import numpy as np

from .errors import ValidationError
from .fields import FreeBoundaryCurve, MeridianField, MonitorCurve

FMT = "%.17g"


def _header(meta: dict) -> str:
    return "\n".join(f"{k} = {v}" for k, v in meta.items())


def _read_meta(lines) -> dict:
    meta = {}
    for line in lines:
        if line.startswith("#") and "=" in line:
            key, value = line[1:].split("=", 1)
            meta[key.strip()] = value.strip()
    return meta


def _rows(values, phase):
    n1, n2 = values.shape
    ii, jj = np.meshgrid(np.arange(n1), np.arange(n2), indexing="ij")
    return np.column_stack((ii.ravel(), jj.ravel(), values.ravel(), phase.ravel()))


def write_field(path, field, extra: dict | None = None) -> None:
    """Write a :class:`MeridianField` or a solver ``CartesianField``."""
    meta = {"format": "ehd-lab field table"}
    meta.update(extra or {})
    if isinstance(field, MeridianField):
        meta.update(
            grid="polar",
            N_r=field.n_r,
            N_theta=field.n_theta,
            dr=FMT % field.dr,
            center=",".join(FMT % c for c in field.center),
            full_circle=int(field.full_circle),
            provenance=field.provenance,
        )
    else:
        meta.update(
            grid="cartesian",
            N_1=len(field.x1),
            N_2=len(field.x2),
            h=FMT % field.h,
            x1_min=FMT % field.x1[0],
            x2_min=FMT % field.x2[0],
        )
    meta["columns"] = "i j u phase"
    np.savetxt(path, _rows(field.values, field.phase), fmt=["%d", "%d", FMT, "%d"], header=_header(meta), comments="# ")


def read_field(path):
    """Read a field table back (polar -> MeridianField, cartesian -> CartesianField)."""
    with open(path) as fh:
        text = fh.read()
    meta = _read_meta(text.splitlines())
    try:
        data = np.loadtxt(io.StringIO(text), comments="#", ndmin=2)
    except ValueError as exc:
        raise ValidationError(f"malformed field table {path}: {exc}") from None
    grid = meta.get("grid", "polar")
    if grid == "polar":
        shape = (int(meta["N_r"]), int(meta["N_theta"]))
    elif grid == "cartesian":
        shape = (int(meta["N_1"]), int(meta["N_2"]))
    else:
        raise ValidationError(f"unknown grid type {grid!r}")
    if data.shape[0] != shape[0] * shape[1] or data.shape[1] < 3:
        raise ValidationError(f"field table {path} has {data.shape[0]} rows, expected {shape[0] * shape[1]}")
    values = np.zeros(shape)
    values[data[:, 0].astype(int), data[:, 1].astype(int)] = data[:, 2]
    phase = None
    if data.shape[1] >= 4:
        phase = np.zeros(shape, dtype=np.int8)
        phase[data[:, 0].astype(int), data[:, 1].astype(int)] = data[:, 3].astype(np.int8)
    if grid == "polar":
        center = tuple(float(c) for c in meta.get("center", "0,0").split(","))
        return MeridianField(
            values,
            float(meta["dr"]),
            phase,
            center,
            bool(int(meta.get("full_circle", "0"))),
            meta.get("provenance", ""),
        )
    from .solver import CartesianField

    h = float(meta["h"])
    x1 = float(meta["x1_min"]) + h * np.arange(shape[0])
    x2 = float(meta["x2_min"]) + h * np.arange(shape[1])
    if phase is None:
        phase = np.sign(values).astype(np.int8)
    return CartesianField(x1, x2, values, phase)


def write_monitor(path_or_buf, curve: MonitorCurve, header_lines=()) -> None:
    """Two-column CSV ``r,value`` with optional ``#`` header lines."""
    head = "\n".join(header_lines)
    np.savetxt(
        path_or_buf,
        np.column_stack((curve.radii, curve.values)),
        fmt=FMT,
        delimiter=",",
        header=(head + "\n" if head else "") + "r,value",
        comments="",
    )


def write_curve(path_or_buf, curve: FreeBoundaryCurve, header_lines=()) -> None:
    head = "\n".join(header_lines)
    np.savetxt(
        path_or_buf,
        curve.points,
        fmt=FMT,
        delimiter=",",
        header=(head + "\n" if head else "") + "x1,x2",
        comments="",
    )


def read_curve(path) -> FreeBoundaryCurve:
    """Read an ``x1,x2`` CSV polyline (``#`` comments and a header row allowed)."""
    with open(path) as fh:
        lines = [ln for ln in fh if ln.strip() and not ln.startswith("#")]
    if lines and not _is_numeric(lines[0]):
        lines = lines[1:]
    if not lines:
        return FreeBoundaryCurve(np.zeros((0, 2)))
    try:
        pts = np.loadtxt(io.StringIO("".join(lines)), delimiter=",", ndmin=2)
    except ValueError as exc:
        raise ValidationError(f"malformed curve file {path}: {exc}") from None
    if pts.shape[1] != 2:
        raise ValidationError(f"curve file {path} must have two columns")
    return FreeBoundaryCurve(pts)


def _is_numeric(line: str) -> bool:
    try:
        [float(x) for x in line.split(",")]
    except ValueError:
        return False
    return True


__all__ = ["read_curve", "read_field", "write_curve", "write_field", "write_monitor"]
