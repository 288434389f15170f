"""Codes as vertex sets: I-sets, separation, identification checks, periodic codes."""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

import numpy as np

from .errors import InsufficientWindowError, ParameterError, PatternParseError
from .lattice import MAX_RADIUS, GridPoint, Region, as_point, square_ball


@dataclass(frozen=True)
class CodeWindow:
    """A finite constellation: ``codewords`` inside a ``support`` window.

    Every vertex of ``support`` is known to be either a codeword or a
    non-codeword; vertices outside it are unknown; queries that need them
    raise :class:`InsufficientWindowError`.
    """

    codewords: Region
    support: Region

    def __post_init__(self):
        if not self.codewords.issubset(self.support):
            raise ParameterError("codewords must lie inside the support window")

    @classmethod
    def from_points(cls, points: Iterable, support: Optional[Region] = None,
                    support_radius: int = 4, center=(0, 0)) -> CodeWindow:
        """Build a window whose support is ``support`` or, by default, the
        Manhattan ball of ``support_radius`` around ``center``."""
        cw = Region.from_points(points)
        if support is None:
            support = square_ball(support_radius, center)
        return cls(cw, support)

    def __contains__(self, p) -> bool:
        return p in self.codewords

    def require(self, region: Region) -> None:
        if not self.support.covers(region):
            missing = next(iter(region - self.support))
            raise InsufficientWindowError(
                f"vertex {tuple(missing)} is outside the support window")

    def restricted(self, region: Region) -> CodeWindow:
        """The same code seen through a smaller window."""
        return CodeWindow(self.codewords & region, self.support & region)

    def with_codewords(self, points: Iterable) -> CodeWindow:
        return CodeWindow(Region.from_points(points), self.support)


@dataclass(frozen=True)
class IdVerdict:
    ok: bool
    uncovered: Optional[GridPoint] = None
    pair: Optional[tuple[GridPoint, GridPoint]] = None

    def __post_init__(self):
        if self.ok != (self.uncovered is None and self.pair is None):
            raise ParameterError("a verdict carries a witness iff it is negative")

    @property
    def witness(self):
        return self.uncovered if self.uncovered is not None else self.pair

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        out: dict = {"ok": self.ok}
        if self.uncovered is not None:
            out["uncovered"] = list(self.uncovered)
        if self.pair is not None:
            out["pair"] = [list(self.pair[0]), list(self.pair[1])]
        return out


def iset(code: CodeWindow, u, r: int) -> Region:
    """``B_r(u) & C``; the ball must lie inside the support window."""
    b = square_ball(r, u)
    code.require(b)
    return code.codewords.within(b)


def separated(code: CodeWindow, u, v, r: int) -> bool:
    if tuple(u) == tuple(v):
        return False
    return iset(code, u, r) != iset(code, v, r)


def is_identifying_on(code: CodeWindow, targets: Region, r: int) -> IdVerdict:
    """Check coverage and pairwise-distinct I-sets over ``targets``.

    Targets are scanned in row-major order and the first failure is
    reported: an empty I-set, or a target whose I-set repeats an earlier one.
    """
    seen: dict[Region, GridPoint] = {}
    for u in targets:
        s = iset(code, u, r)
        if not s:
            return IdVerdict(False, uncovered=u)
        prev = seen.get(s)
        if prev is not None:
            return IdVerdict(False, pair=(prev, u))
        seen[s] = u
    return IdVerdict(True)


# ---------------------------------------------------------------------------
# periodic codes


@dataclass(frozen=True, eq=False)
class PeriodicCode:
    """The code ``{(x, y) : domain[x mod W, y mod H]}``."""

    domain: np.ndarray = field(repr=False)

    def __post_init__(self):
        d = np.array(self.domain, dtype=bool)
        if d.ndim != 2 or d.shape[0] < 1 or d.shape[1] < 1:
            raise ParameterError("domain must be a non-empty W x H boolean matrix")
        d.setflags(write=False)
        object.__setattr__(self, "domain", d)

    @classmethod
    def from_rows(cls, rows: list[str]) -> PeriodicCode:
        """Rows are indexed by y; ``#`` marks a codeword."""
        return cls(np.array([[ch == "#" for ch in row] for row in rows], dtype=bool).T)

    @classmethod
    def from_points(cls, width: int, height: int, points: Iterable) -> PeriodicCode:
        d = np.zeros((width, height), dtype=bool)
        for x, y in points:
            d[x % width, y % height] = True
        return cls(d)

    @property
    def width(self) -> int:
        return self.domain.shape[0]

    @property
    def height(self) -> int:
        return self.domain.shape[1]

    def __eq__(self, other) -> bool:
        return isinstance(other, PeriodicCode) and np.array_equal(self.domain, other.domain)

    def __repr__(self) -> str:
        return f"PeriodicCode({self.width}x{self.height}, {int(self.domain.sum())} codewords)"

    def is_codeword(self, p) -> bool:
        return bool(self.domain[p[0] % self.width, p[1] % self.height])

    def codeword_classes(self) -> list[GridPoint]:
        """Codewords of the fundamental domain in row-major order."""
        return [GridPoint(x, y) for y in range(self.height) for x in range(self.width)
                if self.domain[x, y]]

    def window(self, support: Region) -> CodeWindow:
        return CodeWindow(
            Region.from_points(p for p in support if self.is_codeword(p)), support)

    def window_around(self, center, radius: int) -> CodeWindow:
        c = as_point(center)
        box = Region.rectangle(c.x - radius, c.y - radius, 2 * radius + 1, 2 * radius + 1)
        return self.window(box)

    def rows(self) -> list[str]:
        return ["".join("#" if self.domain[x, y] else "." for x in range(self.width))
                for y in range(self.height)]


def verify_periodic(code: PeriodicCode, r: int) -> IdVerdict:
    """Decide whether the infinite periodic code is ``r``-identifying.

    Reduction: every pair of distinct vertices can be translated by a period
    so that the first lies in the fundamental domain. If the two vertices are
    more than ``2r`` apart their balls are disjoint, so once coverage holds
    their I-sets are nonempty and disjoint, hence different. It is therefore
    enough to check coverage on the domain and separation of each domain
    vertex from the vertices within distance ``2r`` of it.
    """
    if not 1 <= r <= MAX_RADIUS:
        raise ParameterError(f"radius {r} outside 1..{MAX_RADIUS}")
    W, H = code.width, code.height
    pad = 3 * r
    lw = W + 2 * pad
    lh = H + 2 * pad
    # Local bit layout over [-pad, W+pad) x [-pad, H+pad).
    dom = code.domain.tolist()
    cw = 0
    for j in range(lh):
        for i in range(lw):
            if dom[(i - pad) % W][(j - pad) % H]:
                cw |= 1 << (j * lw + i)

    def idx(x, y):
        return (y + pad) * lw + (x + pad)

    base = 0
    c0 = (-2 * r, -2 * r)
    for dy in range(-r, r + 1):
        for dx in range(-r, r + 1):
            if abs(dx) + abs(dy) <= r:
                base |= 1 << idx(c0[0] + dx, c0[1] + dy)
    base_idx = idx(*c0)

    # I-sets of every vertex within 2r of the domain, keyed by local index.
    reach = 2 * r
    isets = {}
    for y in range(-reach, H + reach):
        for x in range(-reach, W + reach):
            isets[(x, y)] = cw & (base << (idx(x, y) - base_idx))
    domain_pts = [(x, y) for y in range(H) for x in range(W)]
    for u in domain_pts:
        if not isets[u]:
            return IdVerdict(False, uncovered=GridPoint(*u))
    offsets = [(dx, dy) for dy in range(-reach, reach + 1) for dx in range(-reach, reach + 1)
               if 0 < abs(dx) + abs(dy) <= reach]
    for u in domain_pts:
        su = isets[u]
        for dx, dy in offsets:
            v = (u[0] + dx, u[1] + dy)
            if su == isets[v]:
                return IdVerdict(False, pair=(GridPoint(*u), GridPoint(*v)))
    return IdVerdict(True)


def density(code: PeriodicCode) -> Fraction:
    return Fraction(int(code.domain.sum()), code.width * code.height)


def qn_size(k: int) -> int:
    """Number of vertices in the centred square ``|x|, |y| <= k``."""
    if k < 0:
        raise ParameterError("k must be non-negative")
    return (2 * k + 1) ** 2


def theorem34_lower_bound(n: int) -> Fraction:
    """Finite-window density bound that tends to 6/35 as ``n`` grows."""
    if n < 3:
        raise ParameterError("n must be at least 3")
    q = qn_size(n)
    return Fraction(6, 35) * Fraction(qn_size(n - 2), q) - Fraction(qn_size(n + 3) - q, q)


# ---------------------------------------------------------------------------
# pattern files


def parse_pattern(text: str) -> PeriodicCode:
    """Parse ``period W H`` followed by ``H`` rows of ``W`` characters."""
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise PatternParseError("missing 'period W H' header", 1, 1)
    head = lines[0].split(" ")
    if len(head) != 3 or head[0] != "period" or not all(t.isdigit() for t in head[1:]):
        raise PatternParseError("header must be 'period W H'", 1, 1)
    W, H = int(head[1]), int(head[2])
    if W < 1 or H < 1:
        raise PatternParseError("period dimensions must be positive", 1, 8)
    body = lines[1:]
    if len(body) != H:
        raise PatternParseError(f"expected {H} rows, found {len(body)}",
                                min(len(lines) + 1, H + 2), 1)
    rows = []
    for y, line in enumerate(body):
        lineno = y + 2
        for col, ch in enumerate(line, start=1):
            if ch not in "#.":
                raise PatternParseError(f"unexpected character {ch!r}", lineno, col)
        if len(line) != W:
            raise PatternParseError(f"expected {W} columns, found {len(line)}",
                                    lineno, min(len(line), W) + 1)
        rows.append(line)
    return PeriodicCode.from_rows(rows)


def format_pattern(code: PeriodicCode) -> str:
    return "\n".join([f"period {code.width} {code.height}", *code.rows()]) + "\n"


def read_pattern(path: str | os.PathLike) -> PeriodicCode:
    with open(path, encoding="utf-8") as f:
        return parse_pattern(f.read())


def write_pattern(path: str | os.PathLike, code: PeriodicCode) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(format_pattern(code))
