"""Fixed 41-cell bit layout of the radius-4 ball around the origin.

Cell ``i`` is the ``i``-th point of ``B_4(0, 0)`` in row-major order. Every
rule pattern and every I-set needed by the verifier fits in this window,
so a constellation is one 64-bit word and the hot loops are AND/popcount.
"""
from __future__ import annotations

from typing import Iterable

import numpy as np

from .codeset import CodeWindow
from .lattice import GridPoint, as_point, square_ball

WINDOW_RADIUS = 4
CELLS: tuple[GridPoint, ...] = tuple(square_ball(WINDOW_RADIUS))
INDEX: dict[tuple[int, int], int] = {tuple(p): i for i, p in enumerate(CELLS)}
NCELLS = len(CELLS)
FULL = (1 << NCELLS) - 1


def mask_of(points: Iterable) -> int:
    """Bit mask of offsets; raises ``KeyError`` for offsets outside ``B_4``."""
    m = 0
    for p in points:
        m |= 1 << INDEX[(int(p[0]), int(p[1]))]
    return m


def points_of(mask: int) -> list[GridPoint]:
    return [CELLS[i] for i in range(NCELLS) if (mask >> i) & 1]


def ring_cells(inner: int, outer: int) -> list[GridPoint]:
    """Cells with ``inner < |x| + |y| <= outer``, in row-major order."""
    return [p for p in CELLS if inner < abs(p.x) + abs(p.y) <= outer]


def ball_mask(r: int, center=(0, 0)) -> int:
    """``B_r(center) & B_4(origin)`` as a mask."""
    c = as_point(center)
    return mask_of(p for p in CELLS if abs(p.x - c.x) + abs(p.y - c.y) <= r)


def window_mask(code: CodeWindow, c) -> int:
    """Codewords of ``code`` in ``B_4(c)``, as offsets from ``c``."""
    c = as_point(c)
    code.require(square_ball(WINDOW_RADIUS, c))
    m = 0
    cw = code.codewords
    for i, p in enumerate(CELLS):
        if (c.x + p.x, c.y + p.y) in cw:
            m |= 1 << i
    return m


def popcount(a: np.ndarray) -> np.ndarray:
    return np.bitwise_count(a)


def spread(subsets: np.ndarray, cells: list) -> np.ndarray:
    """Map integer subset indices over ``cells`` to window masks."""
    subsets = np.asarray(subsets, dtype=np.uint64)
    out = np.zeros(subsets.shape, dtype=np.uint64)
    for j, p in enumerate(cells):
        bit = np.uint64(1 << INDEX[tuple(p)])
        out |= np.where((subsets >> np.uint64(j)) & np.uint64(1), bit, np.uint64(0))
    return out
