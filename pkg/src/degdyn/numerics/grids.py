"""Rectangular evaluation grids and their PGM / CSV exports."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Grid:
    """``nx`` by ``ny`` nodes spanning ``[xmin, xmax] x [ymin, ymax]`` (inclusive)."""

    xmin: float
    xmax: float
    ymin: float
    ymax: float
    nx: int
    ny: int

    @classmethod
    def parse(cls, spec: str) -> "Grid":
        """``"xmin:xmax:ymin:ymax:n"`` (n columns, rows chosen for square pixels)
        or ``"xmin:xmax:ymin:ymax:nx:ny"``."""
        parts = spec.split(":")
        if len(parts) not in (5, 6):
            raise ValueError(f"grid spec {spec!r} must be xmin:xmax:ymin:ymax:n[:ny]")
        try:
            xmin, xmax, ymin, ymax = (float(v) for v in parts[:4])
            nx = int(parts[4])
            ny = int(parts[5]) if len(parts) == 6 else None
        except ValueError as exc:
            raise ValueError(f"bad number in grid spec {spec!r}") from exc
        if not (xmax > xmin and ymax > ymin) or nx < 2:
            raise ValueError(f"degenerate grid {spec!r}")
        if ny is None:
            ny = max(2, round(nx * (ymax - ymin) / (xmax - xmin)))
        return cls(xmin, xmax, ymin, ymax, nx, ny)

    @property
    def xs(self) -> np.ndarray:
        return np.linspace(self.xmin, self.xmax, self.nx)

    @property
    def ys(self) -> np.ndarray:
        return np.linspace(self.ymin, self.ymax, self.ny)

    @property
    def spacing(self) -> tuple[float, float]:
        return (self.xmax - self.xmin) / (self.nx - 1), (self.ymax - self.ymin) / (self.ny - 1)

    def points(self) -> np.ndarray:
        """Complex nodes as an ``(ny, nx)`` array; row 0 is ``ymax`` (image order)."""
        X, Y = np.meshgrid(self.xs, self.ys[::-1])
        return X + 1j * Y

    def to_dict(self) -> dict:
        return {"xmin": self.xmin, "xmax": self.xmax, "ymin": self.ymin, "ymax": self.ymax,
                "nx": self.nx, "ny": self.ny}


def write_pgm(path, values: np.ndarray, vmin: float | None = None, vmax: float | None = None) -> dict:
    """Write a 16-bit binary PGM and a sidecar ``<path>.json`` with the value mapping.

    Pixel ``k`` stands for ``offset + scale * k``.
    """
    v = np.asarray(values, dtype=float)
    finite = v[np.isfinite(v)]
    lo = float(finite.min()) if vmin is None else vmin
    hi = float(finite.max()) if vmax is None else vmax
    if hi <= lo:
        hi = lo + 1.0
    scale = (hi - lo) / 65535.0
    pix = np.clip(np.round((np.nan_to_num(v, nan=lo, posinf=hi, neginf=lo) - lo) / scale), 0, 65535)
    pix = pix.astype(">u2")
    ny, nx = pix.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{nx} {ny}\n65535\n".encode("ascii"))
        fh.write(pix.tobytes())
    meta = {"format": "PGM P5 16-bit big-endian", "width": nx, "height": ny,
            "mapping": "value = offset + scale * pixel", "offset": lo, "scale": scale,
            "row0": "top (largest imaginary part)"}
    with open(f"{path}.json", "w") as fh:
        json.dump(meta, fh, indent=2)
    return meta


def read_pgm(path) -> tuple[np.ndarray, dict]:
    """Inverse of :func:`write_pgm`; returns decoded values and the sidecar mapping."""
    with open(path, "rb") as fh:
        data = fh.read()
    header = []
    pos = 0
    while len(header) < 4:
        while data[pos:pos + 1].isspace():
            pos += 1
        start = pos
        while not data[pos:pos + 1].isspace():
            pos += 1
        header.append(data[start:pos].decode("ascii"))
    pos += 1
    if header[0] != "P5":
        raise ValueError("not a binary PGM")
    nx, ny, maxval = int(header[1]), int(header[2]), int(header[3])
    pix = np.frombuffer(data[pos:pos + 2 * nx * ny], dtype=">u2").reshape(ny, nx)
    with open(f"{path}.json") as fh:
        meta = json.load(fh)
    return meta["offset"] + meta["scale"] * pix.astype(float), meta


def write_grid_csv(path, grid: Grid, values: np.ndarray, name: str = "value",
                   xname: str = "re", yname: str = "im") -> None:
    pts = grid.points()
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow([xname, yname, name])
        for z, val in zip(pts.ravel(), np.asarray(values).ravel()):
            w.writerow([repr(float(z.real)), repr(float(z.imag)), repr(float(val))])
