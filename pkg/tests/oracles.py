"""Independent reference implementations used only by the test-suite.

Everything here works on plain Python sets of ``(x, y)`` tuples and mirrors
the reference search functions line by line; none of it shares code
with the package's bitmask kernels.
"""
from fractions import Fraction

import numpy as np


def r_ball_square(r, x, y):
    return {(i, j) for i in range(x - r, x + r + 1) for j in range(y - r, y + r + 1)
            if abs(i - x) + abs(j - y) <= r}


def r_ball_king(r, x, y):
    return {(i, j) for i in range(x - r, x + r + 1) for j in range(y - r, y + r + 1)}


def id_on_square_grid(K, J, r):
    no_id = False
    S = set()
    for u in J:
        L = frozenset(r_ball_square(r, *u) & K)
        if len(L) < 1:
            no_id = True
        S.add(L)
    if len(J) > len(S):
        no_id = True
    return not no_id


def code_share(K, r, x, y):
    total = Fraction(0)
    for u in r_ball_square(r, x, y):
        total += Fraction(1, len(r_ball_square(r, *u) & K))
    return total


def approximated_share(K, r, x, y):
    isets = [frozenset(r_ball_square(r, *u) & K) for u in r_ball_square(r, x, y)]
    total = Fraction(0)
    for s in set(isets):
        total += Fraction(1, len(s)) + Fraction(isets.count(s) - 1, len(s) + 1)
    return total


# -- ShiftingRule1..10, transcribed ------------------------------------------

def shifting_rule1(K, x, y):
    if K & r_ball_king(1, x, y) != {(x, y)}:
        return Fraction(0)
    s = Fraction(0)
    m = K.__contains__
    if not m((x + 2, y)) and not m((x + 2, y - 1)) and m((x + 3, y)) and m((x + 3, y - 1)):
        s += Fraction(1, 5)
    if not m((x + 2, y)) and not m((x + 2, y + 1)) and m((x + 3, y)) and m((x + 3, y + 1)):
        s += Fraction(1, 5)
    if not m((x - 2, y)) and not m((x - 2, y - 1)) and m((x - 3, y)) and m((x - 3, y - 1)):
        s += Fraction(1, 5)
    if not m((x - 2, y)) and not m((x - 2, y + 1)) and m((x - 3, y)) and m((x - 3, y + 1)):
        s += Fraction(1, 5)
    if not m((x, y + 2)) and not m((x - 1, y + 2)) and m((x, y + 3)) and m((x - 1, y + 3)):
        s += Fraction(1, 5)
    if not m((x, y + 2)) and not m((x + 1, y + 2)) and m((x, y + 3)) and m((x + 1, y + 3)):
        s += Fraction(1, 5)
    if not m((x, y - 2)) and not m((x - 1, y - 2)) and m((x, y - 3)) and m((x - 1, y - 3)):
        s += Fraction(1, 5)
    if not m((x, y - 2)) and not m((x + 1, y - 2)) and m((x, y - 3)) and m((x + 1, y - 3)):
        s += Fraction(1, 5)
    return s


def shifting_rule2(K, x, y):
    if K & r_ball_king(1, x, y) != {(x, y)}:
        return Fraction(0)
    s = Fraction(0)
    m = K.__contains__
    if not m((x + 2, y)) and m((x + 3, y)) and m((x + 4, y)):
        s += Fraction(1, 30)
    if not m((x - 2, y)) and m((x - 3, y)) and m((x - 4, y)):
        s += Fraction(1, 30)
    if not m((x, y + 2)) and m((x, y + 3)) and m((x, y + 4)):
        s += Fraction(1, 30)
    if not m((x, y - 2)) and m((x, y - 3)) and m((x, y - 4)):
        s += Fraction(1, 30)
    return s


def shifting_rule3(K, x, y):
    if K & r_ball_square(2, x, y) != {(x, y)}:
        return Fraction(0)
    s = Fraction(0)
    m = K.__contains__
    if m((x + 2, y + 1)) and m((x + 3, y + 1)):
        s += Fraction(1, 12)
    if m((x + 2, y - 1)) and m((x + 3, y - 1)):
        s += Fraction(1, 12)
    if m((x - 2, y + 1)) and m((x - 3, y + 1)):
        s += Fraction(1, 12)
    if m((x - 2, y - 1)) and m((x - 3, y - 1)):
        s += Fraction(1, 12)
    if m((x + 1, y + 2)) and m((x + 1, y + 3)):
        s += Fraction(1, 12)
    if m((x - 1, y + 2)) and m((x - 1, y + 3)):
        s += Fraction(1, 12)
    if m((x + 1, y - 2)) and m((x + 1, y - 3)):
        s += Fraction(1, 12)
    if m((x - 1, y - 2)) and m((x - 1, y - 3)):
        s += Fraction(1, 12)
    return s


def shifting_rule4(K, x, y):
    if K & r_ball_square(2, x, y) != {(x, y)}:
        return Fraction(0)
    s = Fraction(0)
    m = K.__contains__
    if m((x + 2, y + 1)) and m((x + 2, y + 2)):
        s += Fraction(7, 60)
    if m((x + 2, y - 1)) and m((x + 2, y - 2)):
        s += Fraction(7, 60)
    if m((x - 2, y + 1)) and m((x - 2, y + 2)):
        s += Fraction(7, 60)
    if m((x - 2, y - 1)) and m((x - 2, y - 2)):
        s += Fraction(7, 60)
    if m((x + 1, y + 2)) and m((x + 2, y + 2)):
        s += Fraction(7, 60)
    if m((x - 1, y + 2)) and m((x - 2, y + 2)):
        s += Fraction(7, 60)
    if m((x + 1, y - 2)) and m((x + 2, y - 2)):
        s += Fraction(7, 60)
    if m((x - 1, y - 2)) and m((x - 2, y - 2)):
        s += Fraction(7, 60)
    return s


def _king_axis_fails(K, x, y):
    S = r_ball_square(2, x, y) - r_ball_king(1, x, y)
    return K & r_ball_king(1, x, y) != {(x, y)} or len(S & K) > 1


def shifting_rule5(K, x, y):
    if _king_axis_fails(K, x, y):
        return Fraction(0)
    s = Fraction(0)
    m = K.__contains__
    if m((x + 2, y)) and m((x + 2, y + 1)):
        s += Fraction(1, 30)
    if m((x + 2, y)) and m((x + 2, y - 1)):
        s += Fraction(1, 30)
    if m((x - 2, y)) and m((x - 2, y + 1)):
        s += Fraction(1, 30)
    if m((x - 2, y)) and m((x - 2, y - 1)):
        s += Fraction(1, 30)
    if m((x, y + 2)) and m((x + 1, y + 2)):
        s += Fraction(1, 30)
    if m((x, y + 2)) and m((x - 1, y + 2)):
        s += Fraction(1, 30)
    if m((x, y - 2)) and m((x + 1, y - 2)):
        s += Fraction(1, 30)
    if m((x, y - 2)) and m((x - 1, y - 2)):
        s += Fraction(1, 30)
    return s


def shifting_rule6(K, x, y):
    if _king_axis_fails(K, x, y):
        return Fraction(0)
    s = Fraction(0)
    m = K.__contains__
    if m((x + 2, y - 1)) and m((x + 2, y)) and m((x + 2, y + 1)):
        s += Fraction(1, 20)
    if m((x - 2, y - 1)) and m((x - 2, y)) and m((x - 2, y + 1)):
        s += Fraction(1, 20)
    if m((x - 1, y + 2)) and m((x, y + 2)) and m((x + 1, y + 2)):
        s += Fraction(1, 20)
    if m((x - 1, y - 2)) and m((x, y - 2)) and m((x + 1, y - 2)):
        s += Fraction(1, 20)
    return s


def shifting_rule7(K, x, y):
    if K & r_ball_square(2, x, y) != {(x, y)}:
        return Fraction(0)
    s = Fraction(0)
    if (x + 3, y) in K:
        if r_ball_square(1, x + 2, y + 1) & K == {(x + 2, y + 1)}:
            s += Fraction(7, 60)
        if r_ball_square(1, x + 2, y - 1) & K == {(x + 2, y - 1)}:
            s += Fraction(7, 60)
    if (x - 3, y) in K:
        if r_ball_square(1, x - 2, y + 1) & K == {(x - 2, y + 1)}:
            s += Fraction(7, 60)
        if r_ball_square(1, x - 2, y - 1) & K == {(x - 2, y - 1)}:
            s += Fraction(7, 60)
    if (x, y + 3) in K:
        if r_ball_square(1, x + 1, y + 2) & K == {(x + 1, y + 2)}:
            s += Fraction(7, 60)
        if r_ball_square(1, x - 1, y + 2) & K == {(x - 1, y + 2)}:
            s += Fraction(7, 60)
    if (x, y - 3) in K:
        if r_ball_square(1, x + 1, y - 2) & K == {(x + 1, y - 2)}:
            s += Fraction(7, 60)
        if r_ball_square(1, x - 1, y - 2) & K == {(x - 1, y - 2)}:
            s += Fraction(7, 60)
    return s


def shifting_rule8(K, x, y):
    if K & r_ball_square(2, x, y) != {(x, y)}:
        return Fraction(0)
    s = Fraction(0)
    m = K.__contains__
    if (not m((x + 2, y - 1)) and not m((x + 3, y - 1)) and not m((x + 2, y + 1))
            and not m((x + 3, y + 1)) and not m((x + 4, y)) and not m((x + 1, y - 2))
            and not m((x + 1, y + 2)) and m((x + 2, y - 2)) and m((x + 2, y + 2))
            and m((x + 3, y))):
        s += Fraction(1, 20)
    if (not m((x - 2, y - 1)) and not m((x - 3, y - 1)) and not m((x - 2, y + 1))
            and not m((x - 3, y + 1)) and not m((x - 4, y)) and not m((x - 1, y - 2))
            and not m((x - 1, y + 2)) and m((x - 2, y - 2)) and m((x - 2, y + 2))
            and m((x - 3, y))):
        s += Fraction(1, 20)
    if (not m((x - 1, y + 2)) and not m((x - 1, y + 3)) and not m((x + 1, y + 2))
            and not m((x + 1, y + 3)) and not m((x, y + 4)) and not m((x - 2, y + 1))
            and not m((x + 2, y + 1)) and m((x - 2, y + 2)) and m((x + 2, y + 2))
            and m((x, y + 3))):
        s += Fraction(1, 20)
    if (not m((x - 1, y - 2)) and not m((x - 1, y - 3)) and not m((x + 1, y - 2))
            and not m((x + 1, y - 3)) and not m((x, y - 4)) and not m((x - 2, y - 1))
            and not m((x + 2, y - 1)) and m((x - 2, y - 2)) and m((x + 2, y - 2))
            and m((x, y - 3))):
        s += Fraction(1, 20)
    return s


def shifting_rule9(K, x, y):
    if _king_axis_fails(K, x, y):
        return Fraction(0)
    s = Fraction(0)
    m = K.__contains__
    if (m((x + 2, y)) and m((x + 1, y - 2)) and m((x + 1, y + 2))
            and not m((x + 2, y - 1)) and not m((x + 2, y + 1))):
        s += Fraction(7, 60)
    if (m((x - 2, y)) and m((x - 1, y - 2)) and m((x - 1, y + 2))
            and not m((x - 2, y - 1)) and not m((x - 2, y + 1))):
        s += Fraction(7, 60)
    if (m((x, y + 2)) and m((x - 2, y + 1)) and m((x + 2, y + 1))
            and not m((x - 1, y + 2)) and not m((x + 1, y + 2))):
        s += Fraction(7, 60)
    if (m((x, y - 2)) and m((x - 2, y - 1)) and m((x + 2, y - 1))
            and not m((x - 1, y - 2)) and not m((x + 1, y - 2))):
        s += Fraction(7, 60)
    return s


def shifting_rule10(K, x, y):
    if K & r_ball_square(2, x, y) != {(x, y)}:
        return Fraction(0)
    s = Fraction(0)
    m = K.__contains__
    if (not m((x + 3, y - 1)) and not m((x + 3, y)) and not m((x + 3, y + 1))
            and m((x + 2, y - 1)) and m((x + 2, y + 1)) and not m((x + 2, y - 2))
            and not m((x + 2, y + 2)) and m((x + 4, y))):
        s += Fraction(7, 60)
    if (not m((x - 3, y - 1)) and not m((x - 3, y)) and not m((x - 3, y + 1))
            and m((x - 2, y - 1)) and m((x - 2, y + 1)) and not m((x - 2, y - 2))
            and not m((x - 2, y + 2)) and m((x - 4, y))):
        s += Fraction(7, 60)
    if (not m((x - 1, y + 3)) and not m((x, y + 3)) and not m((x + 1, y + 3))
            and m((x - 1, y + 2)) and m((x + 1, y + 2)) and not m((x - 2, y + 2))
            and not m((x + 2, y + 2)) and m((x, y + 4))):
        s += Fraction(7, 60)
    if (not m((x - 1, y - 3)) and not m((x, y - 3)) and not m((x + 1, y - 3))
            and m((x - 1, y - 2)) and m((x + 1, y - 2)) and not m((x - 2, y - 2))
            and not m((x + 2, y - 2)) and m((x, y - 4))):
        s += Fraction(7, 60)
    return s


SHIFTING_RULES = {
    1: shifting_rule1, 2: shifting_rule2, 3: shifting_rule3, 4: shifting_rule4,
    5: shifting_rule5, 6: shifting_rule6, 7: shifting_rule7, 8: shifting_rule8,
    9: shifting_rule9, 10: shifting_rule10,
}


def naive_stage1(base):
    """The Problems1 / Problems2 loops with plain sets."""
    test_space = r_ball_square(1, 0, 0)
    search = sorted(r_ball_square(3, 0, 0) - r_ball_square(2, 0, 0))
    out = []
    for i in range(1 << len(search)):
        proposed = {p for j, p in enumerate(search) if i >> j & 1} | set(base)
        if id_on_square_grid(proposed, test_space, 2) and \
                approximated_share(proposed, 2, 0, 0) > Fraction(35, 6):
            out.append(frozenset(proposed))
    return out


def naive_stage2(D, amounts=None):
    """The stage-2 driver loop: max of CodeShare minus all ShiftingRules."""
    test_space = r_ball_square(2, 0, 0)
    search = sorted(r_ball_square(4, 0, 0) - r_ball_square(3, 0, 0))
    best = None
    valid = 0
    for j in range(1 << len(search)):
        proposed = {p for k, p in enumerate(search) if j >> k & 1} | set(D)
        if not id_on_square_grid(proposed, test_space, 2):
            continue
        valid += 1
        s = code_share(proposed, 2, 0, 0)
        for k, rule in SHIFTING_RULES.items():
            out = rule(proposed, 0, 0)
            if amounts is not None and out:
                # rescale by the overridden per-firing amount
                out = out / rule_unit(k) * amounts.get(k, rule_unit(k))
            s -= out
        if best is None or s > best:
            best = s
    return best, valid


_UNITS = {1: Fraction(1, 5), 2: Fraction(1, 30), 3: Fraction(1, 12), 4: Fraction(7, 60),
          5: Fraction(1, 30), 6: Fraction(1, 20), 7: Fraction(7, 60), 8: Fraction(1, 20),
          9: Fraction(7, 60), 10: Fraction(7, 60)}


def rule_unit(k):
    return _UNITS[k]


# -- torus brute force -------------------------------------------------------

def torus_identifying(domains, W, H, r):
    """Definition-level check on a torus, vectorised over many domains.

    ``domains`` has shape ``(M, W, H)``. The torus side is the least multiple
    of the period that is at least ``4r + 2``. Every vertex's I-set is an
    exact multi-word bitset over the torus cells; rows are lexsorted and
    adjacent entries compared, so all pairs of vertices are checked.
    """
    domains = np.asarray(domains, dtype=bool)
    M = domains.shape[0]
    kx = -(-(4 * r + 2) // W)
    ky = -(-(4 * r + 2) // H)
    TW, TH = kx * W, ky * H
    torus = np.tile(domains, (1, kx, ky))  # (M, TW, TH)
    cell = np.arange(TW * TH).reshape(TW, TH)
    nwords = -(-(TW * TH) // 64)
    offsets = [(dx, dy) for dx in range(-r, r + 1) for dy in range(-r, r + 1)
               if abs(dx) + abs(dy) <= r]
    words = np.zeros((nwords, M, TW, TH), dtype=np.uint64)
    cnt = np.zeros((M, TW, TH), dtype=np.int32)
    for dx, dy in offsets:
        # cell (x+dx, y+dy) as seen from vertex (x, y)
        t = np.roll(torus, shift=(-dx, -dy), axis=(1, 2))
        c = np.roll(cell, shift=(-dx, -dy), axis=(0, 1))
        bit = (np.uint64(1) << (c % 64).astype(np.uint64))[None]
        for w in range(nwords):
            words[w] |= np.where(t & (c // 64 == w)[None], bit, np.uint64(0))
        cnt += t
    covered = (cnt > 0).reshape(M, -1).all(axis=1)
    flat = words.reshape(nwords, M, -1)
    order = np.lexsort(flat[::-1], axis=-1)
    srt = np.take_along_axis(flat, order[None], axis=-1)
    same = np.ones((M, TW * TH - 1), dtype=bool)
    for w in range(nwords):
        same &= srt[w, :, 1:] == srt[w, :, :-1]
    return covered & ~same.any(axis=1)


def torus_shares(t, r=2):
    """Share of every codeword of a torus code given as a boolean matrix."""
    TW, TH = t.shape
    offsets = [(dx, dy) for dx in range(-r, r + 1) for dy in range(-r, r + 1)
               if abs(dx) + abs(dy) <= r]
    size = {}
    for x in range(TW):
        for y in range(TH):
            size[(x, y)] = sum(bool(t[(x + dx) % TW, (y + dy) % TH]) for dx, dy in offsets)
    out = {}
    for x in range(TW):
        for y in range(TH):
            if t[x, y]:
                out[(x, y)] = sum(Fraction(1, size[((x + dx) % TW, (y + dy) % TH)])
                                  for dx, dy in offsets)
    return out
