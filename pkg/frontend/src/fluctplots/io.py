"""Parsers for the fluctlab interchange formats.

Sample CSV: header ``replica,raw,rescaled``.
Classification sweep CSV: header ``gamma,pi,eta,regime,exponent,law``.
CDF table: ``# family order x_min x_max n`` then tab-separated x, F(x).
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np


class FormatError(ValueError):
    """An input file does not follow its documented schema."""


REGION_COLUMNS = ("gamma", "pi", "eta", "regime", "exponent", "law")


@dataclass
class RegionGrid:
    gamma: float
    pi: np.ndarray
    eta: np.ndarray
    regime: np.ndarray
    exponent: np.ndarray
    law: np.ndarray


def read_regions(path) -> RegionGrid:
    lines = Path(path).read_text().strip().splitlines()
    if not lines:
        raise FormatError(f"{path} is empty")
    header = tuple(lines[0].split(","))
    if header != REGION_COLUMNS:
        missing = set(REGION_COLUMNS) - set(header)
        raise FormatError(f"{path}: missing columns {sorted(missing)}")
    rows = [ln.split(",") for ln in lines[1:]]
    if not rows:
        raise FormatError(f"{path} has no data rows")
    gammas = {r[0] for r in rows}
    if len(gammas) != 1:
        raise FormatError(f"{path} mixes gamma values {sorted(gammas)}")
    return RegionGrid(
        gamma=float(rows[0][0]),
        pi=np.array([float(r[1]) for r in rows]),
        eta=np.array([float(r[2]) for r in rows]),
        regime=np.array([r[3] for r in rows]),
        exponent=np.array([float(r[4]) for r in rows]),
        law=np.array([r[5] for r in rows]),
    )


def read_samples(path) -> np.ndarray:
    """Rescaled sample column of a simulate CSV."""
    lines = Path(path).read_text().strip().splitlines()
    if not lines or lines[0] != "replica,raw,rescaled":
        raise FormatError(f"{path}: expected header replica,raw,rescaled")
    if len(lines) < 2:
        raise FormatError(f"{path} has no samples")
    return np.array([float(ln.split(",")[2]) for ln in lines[1:]])


@dataclass
class CdfTableFile:
    family: str
    order: int
    xs: np.ndarray
    fs: np.ndarray

    @classmethod
    def load(cls, path) -> "CdfTableFile":
        lines = Path(path).read_text().strip().splitlines()
        if not lines or not lines[0].startswith("#"):
            raise FormatError(f"{path}: missing table header")
        head = lines[0].lstrip("# ").split()
        if len(head) != 5:
            raise FormatError(f"{path}: bad header {lines[0]!r}")
        family, order, n = head[0], int(head[1]), int(head[4])
        rows = [ln.split("\t") for ln in lines[1:]]
        if len(rows) != n:
            raise FormatError(f"{path}: expected {n} rows, found {len(rows)}")
        xs = np.array([float(r[0]) for r in rows])
        fs = np.array([float(r[1]) for r in rows])
        if np.any(np.diff(xs) <= 0) or np.any(np.diff(fs) < -1e-12):
            raise FormatError(f"{path}: table must be increasing in x and monotone in F")
        return cls(family=family, order=order, xs=xs, fs=fs)

    def cdf(self, x: np.ndarray) -> np.ndarray:
        return np.interp(x, self.xs, self.fs, left=self.fs[0], right=self.fs[-1])
