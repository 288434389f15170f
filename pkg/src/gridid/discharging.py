"""The ten share-shifting rules of the radius-2 discharging scheme.

Each rule is stored once in a canonical orientation (pointing along +x) and
expanded to its distinct D4 images. Outflow from a sender only depends on
the constellation inside ``B_4`` of the sender, so rules are evaluated on the
41-cell window masks of :mod:`gridid.window`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Mapping, Optional

import numpy as np

from .codeset import CodeWindow, PeriodicCode, iset, verify_periodic
from .errors import ParameterError
from .lattice import D4, GridPoint, SymmetryOp, as_point, square_ball
from .share import format_rational, share_exact
from .window import mask_of, window_mask

KING = "king"              # c is the only codeword of its 3x3 king ball
ISOLATED = "isolated"      # c is the only codeword of B_2(c)
KING_AXIS = "king-axis"    # KING, and at most one of (+-2,0), (0,+-2) is a codeword

DETERMINED = "determined"
INFERRED = "inferred"
CONDITIONAL = "conditional-on-isets"

_PRE_FORBID = {
    KING: mask_of((x, y) for x in (-1, 0, 1) for y in (-1, 0, 1) if (x, y) != (0, 0)),
    ISOLATED: mask_of(p for p in square_ball(2) if tuple(p) != (0, 0)),
}
_PRE_FORBID[KING_AXIS] = _PRE_FORBID[KING]
AXIS2 = mask_of([(2, 0), (-2, 0), (0, 2), (0, -2)])
_ORIGIN = mask_of([(0, 0)])


@dataclass(frozen=True)
class Variant:
    op: SymmetryOp
    required: int
    forbidden: int
    receivers: tuple[GridPoint, ...]


@dataclass(frozen=True)
class Rule:
    id: int
    amount: Fraction
    precondition: str
    required: tuple[tuple[int, int], ...]
    forbidden: tuple[tuple[int, int], ...]
    # One receiver, or the ordered pair (v, v') for the I-set conditional rules.
    receivers: tuple[tuple[int, int], ...]
    confidence: str

    @cached_property
    def variants(self) -> tuple[Variant, ...]:
        out, seen = [], set()
        for op in D4:
            req = mask_of(op(p) for p in self.required)
            forb = mask_of(op(p) for p in self.forbidden)
            if (req, forb) in seen:
                continue
            seen.add((req, forb))
            out.append(Variant(op, req, forb, tuple(op(p) for p in self.receivers)))
        return tuple(out)

    def precondition_holds(self, mask: int) -> bool:
        if not mask & _ORIGIN or mask & _PRE_FORBID[self.precondition]:
            return False
        if self.precondition == KING_AXIS and (mask & AXIS2).bit_count() > 1:
            return False
        return True

    def matching(self, mask: int) -> list[Variant]:
        if not self.precondition_holds(mask):
            return []
        return [v for v in self.variants
                if mask & v.required == v.required and not mask & v.forbidden]


RULES: dict[int, Rule] = {r.id: r for r in (
    Rule(1, Fraction(1, 5), KING, ((3, 0), (3, -1)), ((2, 0), (2, -1)),
         ((3, -1), (3, 0)), CONDITIONAL),
    Rule(2, Fraction(1, 30), KING, ((3, 0), (4, 0)), ((2, 0),), ((3, 0),), DETERMINED),
    Rule(3, Fraction(1, 12), ISOLATED, ((2, 1), (3, 1)), (), ((2, 1),), INFERRED),
    Rule(4, Fraction(7, 60), ISOLATED, ((2, 1), (2, 2)), (), ((2, 1),), INFERRED),
    Rule(5, Fraction(1, 30), KING_AXIS, ((2, 0), (2, 1)), (), ((2, 0),), INFERRED),
    Rule(6, Fraction(1, 20), KING_AXIS, ((2, -1), (2, 0), (2, 1)), (), ((2, 0),), INFERRED),
    Rule(7, Fraction(7, 60), ISOLATED, ((3, 0), (2, 1)),
         ((1, 1), (3, 1), (2, 0), (2, 2)), ((2, 1),), DETERMINED),
    Rule(8, Fraction(1, 20), ISOLATED, ((2, -2), (2, 2), (3, 0)),
         ((2, -1), (3, -1), (2, 1), (3, 1), (4, 0), (1, -2), (1, 2)), ((3, 0),), DETERMINED),
    Rule(9, Fraction(7, 60), KING_AXIS, ((2, 0), (1, -2), (1, 2)), ((2, -1), (2, 1)),
         ((2, 0),), DETERMINED),
    Rule(10, Fraction(7, 60), ISOLATED, ((2, -1), (2, 1), (4, 0)),
         ((3, -1), (3, 0), (3, 1), (2, -2), (2, 2)), ((2, -1), (2, 1)), CONDITIONAL),
)}

AMOUNTS: dict[int, Fraction] = {k: r.amount for k, r in RULES.items()}
RULE_IDS = tuple(RULES)


def _check_rule(rule: int) -> Rule:
    if rule not in RULES:
        raise ParameterError(f"rule must be 1..10, got {rule}")
    return RULES[rule]


def _amount(rule: int, amounts: Optional[Mapping[int, Fraction]]) -> Fraction:
    if amounts is None:
        return RULES[rule].amount
    return Fraction(amounts.get(rule, RULES[rule].amount))


def rule_outflow(code: CodeWindow, c, rule: int,
                 amounts: Optional[Mapping[int, Fraction]] = None) -> Fraction:
    """Share leaving codeword ``c`` under one rule, over all its variants."""
    r = _check_rule(rule)
    c = as_point(c)
    mask = window_mask(code, c)
    if c not in code.codewords:
        raise ParameterError(f"{tuple(c)} is not a codeword")
    return _amount(rule, amounts) * len(r.matching(mask))


def total_outflow(code: CodeWindow, c,
                  amounts: Optional[Mapping[int, Fraction]] = None) -> Fraction:
    c = as_point(c)
    mask = window_mask(code, c)
    if c not in code.codewords:
        raise ParameterError(f"{tuple(c)} is not a codeword")
    return sum((_amount(k, amounts) * len(r.matching(mask)) for k, r in RULES.items()),
               Fraction(0))


@dataclass(frozen=True)
class RuleFiring:
    rule: int
    variant: SymmetryOp
    amount: Fraction
    receiver: Optional[GridPoint]
    confidence: str
    candidates: tuple[GridPoint, ...] = ()
    # True when the v / v' labelling decided the receiver (both I-set differences nonempty).
    convention_dependent: bool = False

    def to_json(self) -> dict:
        return {
            "rule": self.rule,
            "variant": self.variant.to_json(),
            "amount": format_rational(self.amount),
            "receiver": None if self.receiver is None else list(self.receiver),
            "confidence": self.confidence,
            "convention_dependent": self.convention_dependent,
        }


def _resolve_conditional(code: CodeWindow, v: GridPoint, vp: GridPoint) -> tuple[GridPoint, bool]:
    iv, ivp = iset(code, v, 2), iset(code, vp, 2)
    v_extra = bool(iv - ivp)
    vp_extra = bool(ivp - iv)
    return (v if v_extra else vp), (v_extra and vp_extra)


def rule_firings(code: CodeWindow, c, resolve: bool = True,
                 amounts: Optional[Mapping[int, Fraction]] = None) -> list[RuleFiring]:
    """Every variant match at sender ``c``, with receivers where they can be named.

    With ``resolve`` the I-set condition of rules 1 and 10 is evaluated, which
    needs ``B_2`` of both candidate receivers inside the support; otherwise
    those firings carry no receiver.
    """
    c = as_point(c)
    mask = window_mask(code, c)
    if c not in code.codewords:
        raise ParameterError(f"{tuple(c)} is not a codeword")
    out = []
    for k, r in RULES.items():
        for var in r.matching(mask):
            cands = tuple(c + p for p in var.receivers)
            op = SymmetryOp(var.op.rotation, var.op.reflect, (c.x, c.y))
            amount = _amount(k, amounts)
            if len(cands) == 1:
                out.append(RuleFiring(k, op, amount, cands[0], r.confidence, cands))
            elif resolve:
                recv, dep = _resolve_conditional(code, *cands)
                out.append(RuleFiring(k, op, amount, recv, r.confidence, cands, dep))
            else:
                out.append(RuleFiring(k, op, amount, None, r.confidence, cands))
    return out


def modified_share_sender(code: CodeWindow, c,
                          amounts: Optional[Mapping[int, Fraction]] = None) -> Fraction:
    """Modified share of a codeword that receives nothing: share minus outflow."""
    return share_exact(code, c, 2) - total_outflow(code, c, amounts)


# ---------------------------------------------------------------------------
# vectorised evaluation over arrays of window masks


def rule_match_counts(masks: np.ndarray) -> np.ndarray:
    """Number of matching variants per rule, shape ``(10, len(masks))``.

    Row ``k - 1`` holds rule ``k``; preconditions are applied.
    """
    masks = np.asarray(masks, dtype=np.uint64)
    axis_ok = np.bitwise_count(masks & np.uint64(AXIS2)) <= 1
    has_c = (masks & np.uint64(_ORIGIN)) != 0
    pre = {}
    for name, forb in _PRE_FORBID.items():
        pre[name] = has_c & ((masks & np.uint64(forb)) == 0)
    pre[KING_AXIS] = pre[KING_AXIS] & axis_ok
    out = np.zeros((len(RULES), masks.shape[0]), dtype=np.int64)
    for k, r in RULES.items():
        row = out[k - 1]
        for v in r.variants:
            req, forb = np.uint64(v.required), np.uint64(v.forbidden)
            row += ((masks & req) == req) & ((masks & forb) == 0)
        row *= pre[r.precondition]
    return out


# ---------------------------------------------------------------------------
# whole-code simulation


@dataclass
class SimulationResult:
    share: dict[GridPoint, Fraction]
    outflow: dict[GridPoint, Fraction]
    inflow: dict[GridPoint, Fraction]
    modified_share: dict[GridPoint, Fraction]
    firings: dict[GridPoint, list[RuleFiring]] = field(default_factory=dict)
    # Some receiver came from an inferred or labelling-dependent resolution.
    convention_dependent: bool = False

    def to_json(self) -> dict:
        def key(p):
            return f"{p[0]},{p[1]}"
        return {
            "modified_share": {key(p): format_rational(q) for p, q in self.modified_share.items()},
            "share": {key(p): format_rational(q) for p, q in self.share.items()},
            "outflow": {key(p): format_rational(q) for p, q in self.outflow.items()},
            "inflow": {key(p): format_rational(q) for p, q in self.inflow.items()},
            "convention_dependent": self.convention_dependent,
        }


def _simulate_class(code: PeriodicCode, c: GridPoint, amounts):
    # Chebyshev 6 covers B_4(c) and B_2 of every candidate receiver.
    win = code.window_around(c, 6)
    return share_exact(win, c, 2), rule_firings(win, c, resolve=True, amounts=amounts)


def discharge_simulate(code: PeriodicCode, amounts: Optional[Mapping[int, Fraction]] = None,
                       jobs: int = 1) -> SimulationResult:
    """Apply the shifting scheme to a 2-identifying periodic code.

    Receivers are folded back into the fundamental domain, so the result
    gives one modified share per codeword class.
    """
    if not verify_periodic(code, 2).ok:
        raise ParameterError("discharge simulation needs a 2-identifying periodic code")
    classes = code.codeword_classes()
    if jobs > 1 and len(classes) > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            per_class = list(pool.map(_simulate_class, [code] * len(classes), classes,
                                      [amounts] * len(classes)))
    else:
        per_class = [_simulate_class(code, c, amounts) for c in classes]

    W, H = code.width, code.height
    share, outflow, firings = {}, {}, {}
    inflow = {c: Fraction(0) for c in classes}
    dependent = False
    for c, (s, fired) in zip(classes, per_class):
        share[c] = s
        firings[c] = fired
        outflow[c] = sum((f.amount for f in fired), Fraction(0))
        for f in fired:
            recv = GridPoint(f.receiver.x % W, f.receiver.y % H)
            inflow[recv] += f.amount
            if f.confidence == INFERRED or f.convention_dependent:
                dependent = True
    ms = {c: share[c] - outflow[c] + inflow[c] for c in classes}
    return SimulationResult(share, outflow, inflow, ms, firings, dependent)
