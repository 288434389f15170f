"""Exhaustive check that a codeword receiving no share ends with ms_2 <= 35/6.

Stage 1 enumerates the 2^12 subsets of the ring ``B_3 \\ B_2`` around the
origin and keeps the "problem sets": partial constellations that already
separate every pair of ``B_1`` but whose subcode estimate still exceeds
35/6. Stage 2 extends each problem set by all 2^16 subsets of the ring
``B_4 \\ B_3``; for every extension that separates all pairs of ``B_2`` the
exact share minus the total rule outflow must be at most 35/6.

Shares are evaluated as integers scaled by ``lcm(1..14) = 360360`` so the
vectorised kernels stay exact; results are converted back to fractions.
"""
from __future__ import annotations

import enum
import json
import logging
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .discharging import AMOUNTS, RULE_IDS, rule_match_counts
from .errors import ParameterError
from .lattice import GridPoint, Region, square_ball
from .share import format_rational, parse_rational
from .window import ball_mask, mask_of, points_of, ring_cells, spread

log = logging.getLogger(__name__)

BOUND = Fraction(35, 6)
SCHEMA = 1
JOBS_ENV = "GRIDID_JOBS"

RING3 = ring_cells(2, 3)   # 12 cells, row-major
RING4 = ring_cells(3, 4)   # 16 cells, row-major
B1 = list(square_ball(1))
B2 = list(square_ball(2))
_BALL2 = {tuple(u): ball_mask(2, u) for u in B2}
_B2_MASK = mask_of(B2)
_RING3_MASK = mask_of(RING3)
_SHARE_SCALE = 360360  # lcm(1, ..., 14)


class BaseIset(enum.Enum):
    SINGLETON = "singleton"
    AXIS_PAIR = "axis-pair"

    @property
    def points(self) -> tuple[GridPoint, ...]:
        if self is BaseIset.SINGLETON:
            return (GridPoint(0, 0),)
        return (GridPoint(0, 0), GridPoint(2, 0))

    @property
    def mask(self) -> int:
        return mask_of(self.points)

    @classmethod
    def parse(cls, name: str) -> BaseIset:
        try:
            return cls(name)
        except ValueError:
            raise ParameterError(f"unknown base {name!r}; use singleton or axis-pair") from None


@dataclass(frozen=True)
class ProblemSet:
    D: Region
    estimate: Fraction

    @property
    def mask(self) -> int:
        return mask_of(self.D)

    def sort_key(self):
        return tuple(sorted(self.D))

    def to_json(self) -> list:
        return [list(p) for p in sorted(self.D)]


def _pair_masks(targets) -> list[int]:
    """Symmetric differences of the ``B_2`` balls of every target pair."""
    out = []
    for i, u in enumerate(targets):
        for v in targets[i + 1:]:
            out.append(_BALL2[tuple(u)] ^ _BALL2[tuple(v)])
    return out


_PAIRS_B1 = _pair_masks(B1)
_PAIRS_B2 = _pair_masks(B2)


def identifying_mask(masks: np.ndarray, targets, pairs: Sequence[int]) -> np.ndarray:
    """Vectorised coverage + separation check for ``targets`` inside the window."""
    ok = np.ones(masks.shape, dtype=bool)
    for u in targets:
        ok &= (masks & np.uint64(_BALL2[tuple(u)])) != 0
    for m in pairs:
        ok &= (masks & np.uint64(m)) != 0
    return ok


def scaled_estimate(masks: np.ndarray) -> np.ndarray:
    """Subcode estimate at the origin times 360360, for each mask."""
    total = np.zeros(masks.shape, dtype=np.int64)
    seen: list[np.ndarray] = []
    lut_first = np.array([0] + [_SHARE_SCALE // n for n in range(1, 14)], dtype=np.int64)
    lut_repeat = np.array([_SHARE_SCALE // (n + 1) for n in range(0, 14)], dtype=np.int64)
    for u in B2:
        s = masks & np.uint64(_BALL2[tuple(u)])
        first = np.ones(masks.shape, dtype=bool)
        for t in seen:
            first &= s != t
        n = np.bitwise_count(s).astype(np.int64)
        total += np.where(first, lut_first[n], lut_repeat[n])
        seen.append(s)
    return total


def scaled_share(masks: np.ndarray) -> np.ndarray:
    """Exact share at the origin times 360360; zero entries for uncovered balls."""
    lut = np.array([0] + [_SHARE_SCALE // n for n in range(1, 14)], dtype=np.int64)
    total = np.zeros(masks.shape, dtype=np.int64)
    for u in B2:
        total += lut[np.bitwise_count(masks & np.uint64(_BALL2[tuple(u)])).astype(np.int64)]
    return total


def stage1(base: BaseIset) -> list[ProblemSet]:
    """All problem sets for ``base``, sorted by their point lists."""
    subsets = np.arange(1 << len(RING3), dtype=np.uint64)
    masks = spread(subsets, RING3) | np.uint64(base.mask)
    ok = identifying_mask(masks, B1, _PAIRS_B1)
    est = scaled_estimate(masks)
    ok &= est > BOUND * _SHARE_SCALE
    out = [ProblemSet(Region.from_points(points_of(int(m))), Fraction(int(e), _SHARE_SCALE))
           for m, e in zip(masks[ok], est[ok])]
    return sorted(out, key=ProblemSet.sort_key)


def _validate_problem(problem: ProblemSet, base: BaseIset) -> int:
    try:
        m = problem.mask
    except KeyError:
        raise ParameterError("problem set leaves the radius-4 window") from None
    if m & _B2_MASK != base.mask:
        raise ParameterError("problem set must meet B_2 exactly in the base I-set")
    if m & ~(_B2_MASK | _RING3_MASK):
        raise ParameterError("problem set extends beyond B_3")
    return m


@dataclass(frozen=True)
class Stage2Result:
    """Outcome for one problem set; ``max_share`` is ``None`` when no extension
    separates ``B_2`` (a vacuous pass)."""

    max_share: Optional[Fraction]
    valid_candidates: int
    cases: int

    @property
    def vacuous(self) -> bool:
        return self.max_share is None

    @property
    def passed(self) -> bool:
        return self.max_share is None or self.max_share <= BOUND


def _scale_for(tables: Sequence[Mapping[int, Fraction]]) -> int:
    scale = _SHARE_SCALE
    for t in tables:
        for q in t.values():
            scale = math.lcm(scale, Fraction(q).denominator)
    return scale


def _full_table(amounts: Optional[Mapping[int, Fraction]]) -> dict[int, Fraction]:
    t = dict(AMOUNTS)
    if amounts:
        t.update({k: Fraction(v) for k, v in amounts.items()})
    return t


def stage2_multi(problem: ProblemSet, base: BaseIset,
                 tables: Sequence[Optional[Mapping[int, Fraction]]],
                 span: tuple[int, int] = (0, 1 << 16)) -> list[Stage2Result]:
    """Stage 2 for several rule-amount tables sharing one enumeration.

    ``span`` restricts the outer-ring subset indices to ``[lo, hi)`` so the
    work can be sharded; maxima of shards combine with :func:`merge`.
    """
    d = _validate_problem(problem, base)
    lo, hi = span
    full = [_full_table(t) for t in tables]
    scale = _scale_for(full)
    subsets = np.arange(lo, hi, dtype=np.uint64)
    masks = spread(subsets, RING4) | np.uint64(d)
    ok = identifying_mask(masks, B2, _PAIRS_B2)
    masks = masks[ok]
    n_valid = int(masks.shape[0])
    if n_valid == 0:
        return [Stage2Result(None, 0, hi - lo) for _ in full]
    share = scaled_share(masks) * (scale // _SHARE_SCALE)
    counts = rule_match_counts(masks)
    out = []
    for t in full:
        weights = np.array([int(t[k] * scale) for k in RULE_IDS], dtype=np.int64)
        ms = share - weights @ counts
        out.append(Stage2Result(Fraction(int(ms.max()), scale), n_valid, hi - lo))
    return out


def stage2(problem: ProblemSet, base: BaseIset,
           amounts: Optional[Mapping[int, Fraction]] = None,
           span: tuple[int, int] = (0, 1 << 16)) -> Stage2Result:
    """Maximum of ``share - outflow`` over all valid extensions of ``problem``."""
    return stage2_multi(problem, base, [amounts], span)[0]


def merge(results: Iterable[Stage2Result]) -> Stage2Result:
    best: Optional[Fraction] = None
    valid = cases = 0
    for r in results:
        valid += r.valid_candidates
        cases += r.cases
        if r.max_share is not None and (best is None or r.max_share > best):
            best = r.max_share
    return Stage2Result(best, valid, cases)


# ---------------------------------------------------------------------------
# reports and checkpoints


@dataclass
class VerificationReport:
    base: BaseIset
    problem_sets: list[ProblemSet]
    results: list[Stage2Result]
    elapsed: float = 0.0
    amounts: dict[int, Fraction] = field(default_factory=lambda: dict(AMOUNTS))

    @property
    def cases_examined(self) -> int:
        return sum(r.cases for r in self.results)

    @property
    def vacuous_count(self) -> int:
        return sum(r.vacuous for r in self.results)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def max_share(self) -> Optional[Fraction]:
        return merge(self.results).max_share

    def to_json(self) -> dict:
        out = {
            "schema": SCHEMA,
            "base": self.base.value,
            "problem_set_count": len(self.problem_sets),
            "problem_sets": [p.to_json() for p in self.problem_sets],
            "results": [
                {"set_index": i,
                 "max_share": None if r.max_share is None else format_rational(r.max_share),
                 "valid_candidates": r.valid_candidates}
                for i, r in enumerate(self.results)
            ],
            "verdict": "pass" if self.passed else "fail",
            "bound": format_rational(BOUND),
            "cases_examined": self.cases_examined,
            "vacuous_count": self.vacuous_count,
            "ring_order": {"ring3": [list(p) for p in RING3], "ring4": [list(p) for p in RING4]},
            "wall_time_s": round(self.elapsed, 3),
        }
        if self.amounts != AMOUNTS:
            out["amounts"] = {str(k): format_rational(v) for k, v in sorted(self.amounts.items())}
        return out


def load_checkpoint(path) -> dict[tuple[str, int], Stage2Result]:
    done: dict[tuple[str, int], Stage2Result] = {}
    if not path or not os.path.exists(path):
        return done
    with open(path, encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            ms = rec["max_share"]
            done[(rec["base"], int(rec["set_index"]))] = Stage2Result(
                None if ms is None else parse_rational(ms),
                int(rec["valid_candidates"]), int(rec["cases"]))
    return done


def _checkpoint_line(base: BaseIset, index: int, r: Stage2Result) -> str:
    return json.dumps({
        "base": base.value, "set_index": index,
        "max_share": None if r.max_share is None else format_rational(r.max_share),
        "valid_candidates": r.valid_candidates, "cases": r.cases,
    }, sort_keys=True)


def _task(args):
    problem, base, amounts, span = args
    return stage2(problem, base, amounts, span)


def default_jobs() -> int:
    try:
        return max(1, int(os.environ.get(JOBS_ENV, "1")))
    except ValueError:
        return 1


def verify_base(base: BaseIset, amounts: Optional[Mapping[int, Fraction]] = None,
                jobs: int = 1, chunks: int = 1, checkpoint=None) -> VerificationReport:
    """Run both stages for one base I-set.

    ``chunks`` splits each problem set's outer-ring enumeration into equal
    shards; with ``checkpoint`` completed problem sets are appended as JSON
    lines and skipped on the next run.
    """
    if chunks < 1 or (1 << 16) % chunks:
        raise ParameterError("chunks must be a power of two up to 65536")
    t0 = time.perf_counter()
    problems = stage1(base)
    done = load_checkpoint(checkpoint)
    todo = [i for i in range(len(problems)) if (base.value, i) not in done]
    step = (1 << 16) // chunks
    tasks = [(problems[i], base, amounts, (k * step, (k + 1) * step))
             for i in todo for k in range(chunks)]
    log.info("base %s: %d problem sets, %d to run", base.value, len(problems), len(todo))

    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            shard_results = list(pool.map(_task, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        shard_results = [_task(t) for t in tasks]

    results = dict(done)
    sink = open(checkpoint, "a", encoding="utf-8") if checkpoint else None
    try:
        for n, i in enumerate(todo):
            r = merge(shard_results[n * chunks:(n + 1) * chunks])
            results[(base.value, i)] = r
            if sink:
                sink.write(_checkpoint_line(base, i, r) + "\n")
        if sink:
            sink.flush()
    finally:
        if sink:
            sink.close()
    ordered = [results[(base.value, i)] for i in range(len(problems))]
    return VerificationReport(base, problems, ordered, time.perf_counter() - t0,
                              _full_table(amounts))


def verify_lemma33(amounts: Optional[Mapping[int, Fraction]] = None, jobs: int = 1,
                   bases: Sequence[BaseIset] = (BaseIset.SINGLETON, BaseIset.AXIS_PAIR),
                   checkpoint=None, chunks: int = 1) -> tuple[VerificationReport, ...]:
    return tuple(verify_base(b, amounts, jobs, chunks, checkpoint) for b in bases)


def mutation_table(rule: int) -> dict[int, Fraction]:
    t = dict(AMOUNTS)
    t[rule] = Fraction(0)
    return t


def mutation_analysis(bases: Sequence[BaseIset] = (BaseIset.SINGLETON, BaseIset.AXIS_PAIR)
                      ) -> dict[Optional[int], Optional[Fraction]]:
    """Overall maximum modified share with the unmodified table (key ``None``)
    and with each single rule's amount set to zero."""
    keys: list[Optional[int]] = [None, *RULE_IDS]
    tables = [None] + [mutation_table(k) for k in RULE_IDS]
    best: dict[Optional[int], Optional[Fraction]] = {k: None for k in keys}
    for base in bases:
        for p in stage1(base):
            for k, r in zip(keys, stage2_multi(p, base, tables)):
                if r.max_share is not None and (best[k] is None or r.max_share > best[k]):
                    best[k] = r.max_share
    return best
