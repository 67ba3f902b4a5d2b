"""Periodic 2D scalar fields and the discrete stencil operators built on them.

Fields are stored as C-contiguous float64 arrays of shape (nx, ny): the first
index is x, the second (fast) index is y.  All operators wrap periodically.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

PAPER_CODE = "paper_code"
CENTERED = "centered"
DIVISOR_MODES = (PAPER_CODE, CENTERED)


@dataclass
class Field:
    """Scalar values on a periodic nx-by-ny lattice with cell spacing (dx, dy)."""

    nx: int
    ny: int
    dx: float
    dy: float
    data: np.ndarray

    def __post_init__(self):
        if self.nx < 3 or self.ny < 3:
            raise ValueError(f"grid extents must be >= 3, got {self.nx}x{self.ny}")
        if self.dx <= 0.0 or self.dy <= 0.0:
            raise ValueError(f"cell spacing must be positive, got dx={self.dx}, dy={self.dy}")
        self.data = np.ascontiguousarray(self.data, dtype=np.float64)
        if self.data.shape != (self.nx, self.ny):
            raise ValueError(
                f"data shape {self.data.shape} does not match extents {self.nx}x{self.ny}"
            )

    @classmethod
    def zeros(cls, nx: int, ny: int, dx: float, dy: float | None = None) -> "Field":
        dy = dx if dy is None else dy
        return cls(nx, ny, dx, dy, np.zeros((nx, ny)))

    @classmethod
    def from_array(cls, data, dx: float, dy: float | None = None) -> "Field":
        data = np.asarray(data, dtype=np.float64)
        dy = dx if dy is None else dy
        return cls(data.shape[0], data.shape[1], dx, dy, data)

    def copy(self) -> "Field":
        return Field(self.nx, self.ny, self.dx, self.dy, self.data.copy())


def wrap_index(i: int, n: int) -> int:
    """Map an integer index onto [0, n) by periodic wrap (-1 -> n-1, n -> 0)."""
    return i % n


def shifted(a: np.ndarray, di: int, dj: int) -> np.ndarray:
    """Array of values at (i+di, j+dj), wrapping periodically."""
    out = a
    if di:
        out = np.roll(out, -di, axis=0)
    if dj:
        out = np.roll(out, -dj, axis=1)
    return out


def divisors(dx: float, dy: float, mode: str) -> tuple[float, float]:
    """Denominators of the central x/y differences for the given divisor mode.

    paper_code divides f(i+1) - f(i-1) by the bare spacing, which doubles the
    usual centered estimate; centered divides by twice the spacing.
    """
    if mode == PAPER_CODE:
        return dx, dy
    if mode == CENTERED:
        return 2.0 * dx, 2.0 * dy
    raise ValueError(f"unknown divisor_mode {mode!r}, expected one of {DIVISOR_MODES}")


def gradient_arrays(a: np.ndarray, dx: float, dy: float, mode: str) -> tuple[np.ndarray, np.ndarray]:
    """Periodic central differences (df/dx, df/dy) on a raw array."""
    xdiv, ydiv = divisors(dx, dy, mode)
    gx = (shifted(a, 1, 0) - shifted(a, -1, 0)) / xdiv
    gy = (shifted(a, 0, 1) - shifted(a, 0, -1)) / ydiv
    return gx, gy


def central_gradient(f: Field, mode: str = PAPER_CODE) -> tuple[Field, Field]:
    """Gradient of a Field with periodic wrap; see `divisors` for the two modes."""
    gx, gy = gradient_arrays(f.data, f.dx, f.dy, mode)
    return Field.from_array(gx, f.dx, f.dy), Field.from_array(gy, f.dx, f.dy)


def laplacian9_arrays(a: np.ndarray, dx: float, dy: float) -> np.ndarray:
    """Nine-point Laplacian [edges 2, diagonals 1, center -12] / (3 dx^2).

    Requires square cells.  Neighbor contributions are accumulated in
    opposite-pair order, which keeps the stencil bitwise equivariant under the
    square's symmetries (pair sums only swap or commute under D4).
    """
    if dx != dy:
        raise ValueError(f"nine-point Laplacian requires square cells, got dx={dx}, dy={dy}")
    xp = shifted(a, 1, 0)
    xm = shifted(a, -1, 0)
    yp = shifted(a, 0, 1)
    ym = shifted(a, 0, -1)
    pp = shifted(a, 1, 1)
    mm = shifted(a, -1, -1)
    pm = shifted(a, 1, -1)
    mp = shifted(a, -1, 1)
    return (2.0 * ((xp + xm) + (yp + ym)) + ((pp + mm) + (pm + mp)) - 12.0 * a) / (3.0 * dx * dx)


def nine_point_laplacian(f: Field) -> Field:
    return Field.from_array(laplacian9_arrays(f.data, f.dx, f.dy), f.dx, f.dy)


def lattice_sum(f: Field) -> float:
    """Sum of all cells times the cell area.

    Accumulation order is fixed: numpy's pairwise summation over the raveled
    row-major array, so the result is reproducible run to run.
    """
    return float(np.sum(f.data)) * f.dx * f.dy
