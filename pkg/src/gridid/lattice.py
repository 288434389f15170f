"""Square-grid geometry: points, bit-matrix regions, balls and the D4 symmetry group.

A :class:`Region` stores membership as a single Python integer used as a bit
matrix over its bounding box, row-major with ``y`` selecting the row. Set
algebra therefore runs word-parallel inside the interpreter's bignum code.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, NamedTuple

from .errors import ParameterError

MAX_COORD = 2**20
MAX_RADIUS = 16

MANHATTAN = "manhattan"
CHEBYSHEV = "chebyshev"
METRICS = (MANHATTAN, CHEBYSHEV)


class GridPoint(NamedTuple):
    x: int
    y: int

    def __add__(self, other):  # type: ignore[override]
        return GridPoint(self.x + other[0], self.y + other[1])

    def __sub__(self, other):
        return GridPoint(self.x - other[0], self.y - other[1])


def as_point(p) -> GridPoint:
    """Coerce a pair to a :class:`GridPoint`, enforcing the coordinate bound."""
    x, y = int(p[0]), int(p[1])
    if abs(x) > MAX_COORD or abs(y) > MAX_COORD:
        raise ParameterError(f"point {(x, y)} outside the supported range |x|,|y| <= 2^20")
    return GridPoint(x, y)


def manhattan(p, q) -> int:
    return abs(p[0] - q[0]) + abs(p[1] - q[1])


def chebyshev(p, q) -> int:
    return max(abs(p[0] - q[0]), abs(p[1] - q[1]))


def distance(metric: str, p, q) -> int:
    if metric == MANHATTAN:
        return manhattan(p, q)
    if metric == CHEBYSHEV:
        return chebyshev(p, q)
    raise ParameterError(f"unknown metric {metric!r}")


@dataclass(frozen=True, eq=False)
class Region:
    """Finite set of grid points held as a bit matrix over a bounding box.

    Bit ``(y - y0) * width + (x - x0)`` is set iff ``(x, y)`` is a member.
    Equality and hashing are set-theoretic: two regions with different
    bounding boxes but the same members compare equal.
    """

    x0: int = 0
    y0: int = 0
    width: int = 0
    height: int = 0
    bits: int = 0

    def __post_init__(self):
        if self.width < 0 or self.height < 0:
            raise ParameterError("negative bounding box")
        if self.bits < 0 or self.bits.bit_length() > self.width * self.height:
            raise ParameterError("membership bits exceed the bounding box")

    @classmethod
    def empty(cls) -> Region:
        return cls()

    @classmethod
    def from_points(cls, points: Iterable) -> Region:
        pts = [as_point(p) for p in points]
        if not pts:
            return cls()
        xs = [p.x for p in pts]
        ys = [p.y for p in pts]
        x0, y0 = min(xs), min(ys)
        w = max(xs) - x0 + 1
        h = max(ys) - y0 + 1
        bits = 0
        for p in pts:
            bits |= 1 << ((p.y - y0) * w + (p.x - x0))
        return cls(x0, y0, w, h, bits)

    @classmethod
    def rectangle(cls, x0: int, y0: int, width: int, height: int) -> Region:
        """The full ``width x height`` box with lower-left corner ``(x0, y0)``."""
        as_point((x0, y0))
        as_point((x0 + width - 1, y0 + height - 1))
        return cls(x0, y0, width, height, (1 << (width * height)) - 1)

    # -- membership -------------------------------------------------------

    def _index(self, x: int, y: int) -> int:
        dx, dy = x - self.x0, y - self.y0
        if 0 <= dx < self.width and 0 <= dy < self.height:
            return dy * self.width + dx
        return -1

    def __contains__(self, p) -> bool:
        i = self._index(p[0], p[1])
        return i >= 0 and (self.bits >> i) & 1 == 1

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __bool__(self) -> bool:
        return self.bits != 0

    def __iter__(self) -> Iterator[GridPoint]:
        """Members in row-major order (increasing y, then increasing x)."""
        bits, w = self.bits, self.width
        while bits:
            low = bits & -bits
            i = low.bit_length() - 1
            yield GridPoint(self.x0 + i % w, self.y0 + i // w)
            bits ^= low

    def points(self) -> list[GridPoint]:
        return list(self)

    # -- bounding-box plumbing -------------------------------------------

    def _bits_in(self, x0: int, y0: int, w: int, h: int) -> int:
        """Membership bits re-embedded in a larger box that contains ours."""
        if not self.bits:
            return 0
        if (x0, y0, w) == (self.x0, self.y0, self.width):
            return self.bits
        row_mask = (1 << self.width) - 1
        out = 0
        dx = self.x0 - x0
        for r in range(self.height):
            row = (self.bits >> (r * self.width)) & row_mask
            if row:
                out |= row << ((self.y0 + r - y0) * w + dx)
        return out

    def _restrict_bits(self, x0: int, y0: int, w: int, h: int) -> int:
        """Membership bits of ``self`` clipped to an arbitrary box."""
        if not self.bits:
            return 0
        out = 0
        for y in range(max(y0, self.y0), min(y0 + h, self.y0 + self.height)):
            lo = max(x0, self.x0)
            hi = min(x0 + w, self.x0 + self.width)
            if lo >= hi:
                break
            r = y - self.y0
            row = (self.bits >> (r * self.width + lo - self.x0)) & ((1 << (hi - lo)) - 1)
            if row:
                out |= row << ((y - y0) * w + lo - x0)
        return out

    @cached_property
    def canonical(self) -> Region:
        """The same point set on its tight bounding box."""
        if not self.bits:
            return Region()
        w = self.width
        row_mask = (1 << w) - 1
        rows = [(self.bits >> (r * w)) & row_mask for r in range(self.height)]
        nz = [r for r, row in enumerate(rows) if row]
        cols = 0
        for row in rows:
            cols |= row
        lo = (cols & -cols).bit_length() - 1
        hi = cols.bit_length() - 1
        x0, y0 = self.x0 + lo, self.y0 + nz[0]
        nw, nh = hi - lo + 1, nz[-1] - nz[0] + 1
        if (x0, y0, nw, nh) == (self.x0, self.y0, self.width, self.height):
            return self
        return Region(x0, y0, nw, nh, self._restrict_bits(x0, y0, nw, nh))

    @property
    def key(self) -> tuple[int, int, int, int, int]:
        """Canonical sort/hash key: tight bounding box plus bit pattern."""
        c = self.canonical
        return (c.x0, c.y0, c.width, c.height, c.bits)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Region):
            return NotImplemented
        return self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __lt__(self, other: Region) -> bool:
        return self.key < other.key

    def __repr__(self) -> str:
        return f"Region({sorted(self)!r})"

    # -- set algebra -------------------------------------------------------

    def _joint_box(self, other: Region) -> tuple[int, int, int, int]:
        boxes = [r for r in (self, other) if r.width and r.height]
        if not boxes:
            return (0, 0, 0, 0)
        x0 = min(r.x0 for r in boxes)
        y0 = min(r.y0 for r in boxes)
        x1 = max(r.x0 + r.width for r in boxes)
        y1 = max(r.y0 + r.height for r in boxes)
        return (x0, y0, x1 - x0, y1 - y0)

    def _binary(self, other: Region, op) -> Region:
        box = self._joint_box(other)
        a = self._bits_in(*box)
        b = other._bits_in(*box)
        return Region(*box, op(a, b))

    def __or__(self, other: Region) -> Region:
        return self._binary(other, lambda a, b: a | b)

    def __and__(self, other: Region) -> Region:
        return self._binary(other, lambda a, b: a & b)

    def __sub__(self, other: Region) -> Region:
        return self._binary(other, lambda a, b: a & ~b)

    def __xor__(self, other: Region) -> Region:
        return self._binary(other, lambda a, b: a ^ b)

    def intersection_size(self, other: Region) -> int:
        """``len(self & other)`` without materialising the result."""
        clipped = other._restrict_bits(self.x0, self.y0, self.width, self.height)
        return (clipped & self.bits).bit_count()

    def within(self, box: Region) -> Region:
        """``self & box`` expressed on ``box``'s bounding box."""
        bits = self._restrict_bits(box.x0, box.y0, box.width, box.height) & box.bits
        return Region(box.x0, box.y0, box.width, box.height, bits)

    def covers(self, other: Region) -> bool:
        """True iff every member of ``other`` is a member of ``self``."""
        return self.intersection_size(other) == len(other)

    def issubset(self, other: Region) -> bool:
        return not (self - other)

    def translate(self, dx: int, dy: int) -> Region:
        if not (self.width and self.height):
            return self
        as_point((self.x0 + dx, self.y0 + dy))
        as_point((self.x0 + dx + self.width - 1, self.y0 + dy + self.height - 1))
        return Region(self.x0 + dx, self.y0 + dy, self.width, self.height, self.bits)


def region_algebra(a: Region, b: Region, op: str) -> Region:
    """Apply ``union``, ``intersect`` or ``diff`` to two regions."""
    if op == "union":
        return a | b
    if op == "intersect":
        return a & b
    if op == "diff":
        return a - b
    raise ParameterError(f"unknown region operation {op!r}")


@lru_cache(maxsize=4096)
def _ball_at(metric: str, r: int, cx: int, cy: int) -> Region:
    side = 2 * r + 1
    bits = 0
    for j in range(side):
        for i in range(side):
            if metric == CHEBYSHEV or abs(i - r) + abs(j - r) <= r:
                bits |= 1 << (j * side + i)
    return Region(cx - r, cy - r, side, side, bits)


def ball(metric: str, r: int, center=(0, 0)) -> Region:
    """All points within distance ``r`` of ``center`` under ``metric``."""
    if metric not in METRICS:
        raise ParameterError(f"unknown metric {metric!r}")
    if not 0 <= r <= MAX_RADIUS:
        raise ParameterError(f"radius {r} outside 0..{MAX_RADIUS}")
    c = as_point(center)
    as_point((c.x - r, c.y - r))
    as_point((c.x + r, c.y + r))
    return _ball_at(metric, r, c.x, c.y)


def square_ball(r: int, center=(0, 0)) -> Region:
    return ball(MANHATTAN, r, center)


def king_ball(r: int, center=(0, 0)) -> Region:
    return ball(CHEBYSHEV, r, center)


@dataclass(frozen=True)
class SymmetryOp:
    """A grid isometry: optional reflection ``x -> -x``, then a rotation by
    ``rotation * 90`` degrees counter-clockwise, then a translation."""

    rotation: int = 0
    reflect: bool = False
    offset: tuple[int, int] = (0, 0)

    def __post_init__(self):
        if self.rotation not in (0, 1, 2, 3):
            raise ParameterError("rotation must be 0..3 quarter turns")

    def linear(self, x: int, y: int) -> tuple[int, int]:
        if self.reflect:
            x = -x
        for _ in range(self.rotation):
            x, y = -y, x
        return x, y

    def __call__(self, p) -> GridPoint:
        x, y = self.linear(p[0], p[1])
        return GridPoint(x + self.offset[0], y + self.offset[1])

    def compose(self, other: SymmetryOp) -> SymmetryOp:
        """``self`` after ``other``."""
        # R_a S_a o R_b S_b: S R_b = R_b^{-1} S, so reflections flip the rotation.
        rot = (self.rotation - other.rotation if self.reflect else self.rotation + other.rotation) % 4
        off = self(other.offset)
        return SymmetryOp(rot, self.reflect != other.reflect, (off.x, off.y))

    def inverse(self) -> SymmetryOp:
        lin = SymmetryOp(self.rotation, self.reflect)
        if self.reflect:
            inv_lin = lin
        else:
            inv_lin = SymmetryOp((-self.rotation) % 4, False)
        ox, oy = inv_lin.linear(*self.offset)
        return SymmetryOp(inv_lin.rotation, inv_lin.reflect, (-ox, -oy))

    @property
    def name(self) -> str:
        s = f"rot{90 * self.rotation}"
        if self.reflect:
            s += "+flip"
        if self.offset != (0, 0):
            s += f"+t{self.offset}"
        return s

    def to_json(self) -> dict:
        return {"rotation": self.rotation, "reflect": self.reflect, "offset": list(self.offset)}


IDENTITY = SymmetryOp()
ROT90 = SymmetryOp(1)
FLIP = SymmetryOp(0, True)
D4 = tuple(SymmetryOp(k, f) for f in (False, True) for k in range(4))


def transform(p, op: SymmetryOp) -> GridPoint:
    return op(p)


def transform_region(region: Region, op: SymmetryOp) -> Region:
    return Region.from_points(op(p) for p in region)
