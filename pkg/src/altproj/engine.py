"""Alternating-projection runner for constant, block, and adaptive schedules.

One run iterates the two-step recursion

    b_n = P_{B_n}(a_{n-1}),   a_n = P_{A_n}(b_n)        (n = 1, 2, ...)

where the pair (A_n, B_n) is produced by a schedule.  Every step is
computed; ``record_stride`` only thins the log.  Runs are strictly
sequential and deterministic, and a trace can be re-simulated from any of
its records bit-identically.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .geometry import as_point
from .sets import project


class ScheduleExhausted(RuntimeError):
    """No pair is defined for the requested iteration index."""

    def __init__(self, message, n=None):
        super().__init__(message)
        self.n = n


class ProjectionStepError(RuntimeError):
    """A projection failed mid-run; carries the failing step index."""

    def __init__(self, step, cause):
        super().__init__(f"projection failed at step {step}: {cause}")
        self.step = step


@dataclass(frozen=True)
class Constant:
    A: object
    B: object


@dataclass(frozen=True)
class Blocks:
    """Finite list of (A_k, B_k, length_k) blocks, lengths >= 1."""

    blocks: tuple

    def __post_init__(self):
        blocks = tuple((A, B, int(L)) for A, B, L in self.blocks)
        if not blocks:
            raise ValueError("Blocks schedule needs at least one block")
        if any(L < 1 for _, _, L in blocks):
            raise ValueError("block lengths must be >= 1")
        object.__setattr__(self, "blocks", blocks)

    @property
    def total_length(self):
        return sum(L for _, _, L in self.blocks)


@dataclass(frozen=True)
class Adaptive:
    """Lazily indexed pairs with a block-advance predicate.

    ``pairs`` is either a sequence of (A, B) pairs or a callable mapping
    the 1-based block index to a pair (raise IndexError/KeyError when the
    family ends).  ``switch_predicate(block_id, a)`` decides, after each
    step, whether the current block is finished.  ``max_block_len`` caps
    a block that never fires; hitting the cap halts the run with status
    ``schedule_exhausted`` rather than silently moving on.
    """

    pairs: object
    switch_predicate: object
    max_block_len: int

    def __post_init__(self):
        if int(self.max_block_len) < 1:
            raise ValueError("max_block_len must be >= 1")
        object.__setattr__(self, "max_block_len", int(self.max_block_len))

    def pair(self, block_id: int):
        if callable(self.pairs):
            try:
                return self.pairs(block_id)
            except (IndexError, KeyError, StopIteration):
                raise ScheduleExhausted(f"adaptive pair family ends before block {block_id}")
        if block_id - 1 >= len(self.pairs):
            raise ScheduleExhausted(f"adaptive pair list ends before block {block_id}")
        return self.pairs[block_id - 1]


Schedule = (Constant, Blocks, Adaptive)


@dataclass(frozen=True)
class RunConfig:
    """Run parameters: start point, budget, halting, and logging control.

    ``stop_residual`` halts once ||a_n - a_{n-1}|| drops below it; the
    default (None) runs to max_iter so that non-convergent runs are not
    self-truncated.  ``record_stride`` thins the log; first step, block
    boundaries, indices in ``record_indices`` and the final step are
    always logged.
    """

    start: np.ndarray
    max_iter: int
    stop_residual: float | None = None
    record_stride: int = 1
    target: np.ndarray | None = None
    record_indices: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "start", as_point(self.start))
        if int(self.max_iter) < 1:
            raise ValueError("max_iter must be >= 1")
        object.__setattr__(self, "max_iter", int(self.max_iter))
        if int(self.record_stride) < 1:
            raise ValueError("record_stride must be >= 1")
        object.__setattr__(self, "record_stride", int(self.record_stride))
        if self.target is not None:
            object.__setattr__(self, "target", as_point(self.target, dim=self.start.size))
        object.__setattr__(self, "record_indices", frozenset(int(i) for i in self.record_indices))


@dataclass(frozen=True)
class TraceRecord:
    n: int
    block_id: int
    block_step: int
    a: np.ndarray
    b: np.ndarray
    norm_a: float
    norm_b: float
    res_a: float
    gap_ab: float
    dist_target: float | None


@dataclass(frozen=True)
class BlockLog:
    block_id: int
    start_n: int
    end_n: int
    advance: str  # "predicate" | "length" | "budget" | "run_end"


@dataclass(frozen=True)
class Trace:
    records: tuple
    blocks: tuple
    status: str  # "max_iter" | "residual_met" | "schedule_exhausted"
    schedule_complete: bool

    @property
    def final(self) -> TraceRecord:
        return self.records[-1]

    def completed_blocks(self):
        return [bl for bl in self.blocks if bl.advance in ("predicate", "length")]


def _pair_for(schedule, block_id: int):
    if isinstance(schedule, Constant):
        return schedule.A, schedule.B
    if isinstance(schedule, Blocks):
        if block_id - 1 >= len(schedule.blocks):
            raise ScheduleExhausted(f"blocks schedule ends before block {block_id}")
        A, B, _ = schedule.blocks[block_id - 1]
        return A, B
    if isinstance(schedule, Adaptive):
        return schedule.pair(block_id)
    raise TypeError(f"unknown schedule type {type(schedule).__name__}")


def _advance_after_step(schedule, block_id, block_step, a_n):
    """Returns (advance: bool, cause: str | None, halt: bool)."""
    if isinstance(schedule, Constant):
        return False, None, False
    if isinstance(schedule, Blocks):
        _, _, L = schedule.blocks[block_id - 1]
        if block_step >= L:
            return True, "length", False
        return False, None, False
    if schedule.switch_predicate(block_id, a_n):
        return True, "predicate", False
    if block_step >= schedule.max_block_len:
        return True, "budget", True
    return False, None, False


def run_perturbed(schedule, cfg: RunConfig, resume_from: TraceRecord | None = None) -> Trace:
    """Run the two-step projection recursion under a schedule.

    Halts on max_iter, on stop_residual, when the schedule has no pair
    for the next step, or when an adaptive block exhausts its budget
    without its predicate firing (status ``schedule_exhausted`` with
    ``schedule_complete`` False in that last case).
    """
    records = []
    block_logs = []

    if resume_from is None:
        prev = cfg.start.copy()
        n = 1
        block_id, block_step = 1, 0
        block_start_n = 1
    else:
        prev = resume_from.a.copy()
        n = resume_from.n + 1
        block_id, block_step = resume_from.block_id, resume_from.block_step
        block_start_n = resume_from.n - resume_from.block_step + 1
        adv, cause, halt = _advance_after_step(schedule, block_id, block_step, prev)
        if adv and not halt:
            block_logs.append(BlockLog(block_id, block_start_n, resume_from.n, cause))
            block_id += 1
            block_step = 0
            block_start_n = n

    status = "max_iter"
    schedule_complete = False

    def log(n, bid, bstep, a, b, prev_a, force=False):
        if force or n % cfg.record_stride == 0 or n == 1 or n in cfg.record_indices:
            dist = (float(np.linalg.norm(a - cfg.target))
                    if cfg.target is not None else None)
            records.append(TraceRecord(
                n=n, block_id=bid, block_step=bstep,
                a=a.copy(), b=b.copy(),
                norm_a=float(np.linalg.norm(a)),
                norm_b=float(np.linalg.norm(b)),
                res_a=float(np.linalg.norm(a - prev_a)),
                gap_ab=float(np.linalg.norm(a - b)),
                dist_target=dist))
            return True
        return False

    while n <= cfg.max_iter:
        try:
            A_n, B_n = _pair_for(schedule, block_id)
        except ScheduleExhausted:
            status = "schedule_exhausted"
            schedule_complete = all(bl.advance in ("predicate", "length")
                                    for bl in block_logs) and len(block_logs) > 0
            break

        try:
            b_n = project(B_n, prev)
            a_n = project(A_n, b_n)
        except (ValueError, RuntimeError) as exc:
            raise ProjectionStepError(n, exc) from exc
        block_step += 1

        advanced, cause, halt = _advance_after_step(schedule, block_id, block_step, a_n)
        residual = float(np.linalg.norm(a_n - prev))
        residual_stop = cfg.stop_residual is not None and residual < cfg.stop_residual
        is_last = (n == cfg.max_iter) or halt or residual_stop
        log(n, block_id, block_step, a_n, b_n, prev, force=advanced or is_last)

        if advanced:
            block_logs.append(BlockLog(block_id, block_start_n, n, cause))
            if halt:
                status = "schedule_exhausted"
                schedule_complete = False
                prev = a_n
                n += 1
                break
            block_id += 1
            block_step = 0
            block_start_n = n + 1

        prev = a_n
        n += 1
        if residual_stop:
            status = "residual_met"
            break
    else:
        status = "max_iter"

    if block_step > 0 and status != "schedule_exhausted":
        block_logs.append(BlockLog(block_id, block_start_n, n - 1, "run_end"))
    if status == "max_iter" and not records:
        raise RuntimeError("run produced no records")  # unreachable: max_iter >= 1
    return Trace(records=tuple(records), blocks=tuple(block_logs), status=status,
                 schedule_complete=schedule_complete)


def run_classical(A, B, cfg: RunConfig) -> Trace:
    """Unperturbed alternating projections: constant pair (A, B)."""
    return run_perturbed(Constant(A, B), cfg)


def resolve_pair(schedule, n: int, trace_so_far: Trace | None = None):
    """The pair (A_n, B_n, block_id) the schedule assigns to step n.

    For Constant and Blocks this is a pure function of n.  For Adaptive
    schedules the block position depends on past iterates, so the trace
    prefix must contain the record of step n-1 (full-rate logging).
    """
    if n < 1:
        raise ValueError("iteration indices start at 1")
    if isinstance(schedule, Constant):
        return schedule.A, schedule.B, 1
    if isinstance(schedule, Blocks):
        acc = 0
        for k, (A, B, L) in enumerate(schedule.blocks, start=1):
            acc += L
            if n <= acc:
                return A, B, k
        raise ScheduleExhausted(f"blocks schedule ends at step {acc}, requested {n}", n=n)
    if n == 1:
        A, B = schedule.pair(1)
        return A, B, 1
    if trace_so_far is None:
        raise ValueError("adaptive resolution beyond step 1 needs the trace prefix")
    last = None
    for rec in trace_so_far.records:
        if rec.n == n - 1:
            last = rec
            break
    if last is None:
        raise ValueError(f"trace prefix does not contain step {n - 1}")
    block_id, block_step = last.block_id, last.block_step
    advanced, cause, halt = _advance_after_step(schedule, block_id, block_step, last.a)
    if advanced and not halt:
        block_id += 1
    elif halt:
        raise ScheduleExhausted(
            f"block {block_id} exhausted its budget without firing", n=n)
    A, B = schedule.pair(block_id)
    return A, B, block_id


# ---------------------------------------------------------------------------
# Trace output


def _fmt(x) -> str:
    return repr(float(x))


def trace_to_csv(trace: Trace, path, meta: dict | None = None) -> None:
    """Write the logged records as CSV (shortest round-trip decimals).

    Column layout: n,block,res_a,norm_a,norm_b,gap_ab,dist_target.
    Metadata (config hash, seed) goes into leading '#' comment lines.
    """
    lines = []
    for key, val in (meta or {}).items():
        lines.append(f"# {key}={val}")
    lines.append("n,block,res_a,norm_a,norm_b,gap_ab,dist_target")
    for r in trace.records:
        dist = "" if r.dist_target is None else _fmt(r.dist_target)
        lines.append(",".join([str(r.n), str(r.block_id), _fmt(r.res_a),
                               _fmt(r.norm_a), _fmt(r.norm_b), _fmt(r.gap_ab), dist]))
    text = "\n".join(lines) + "\n"
    if hasattr(path, "write"):
        path.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def trace_to_json(trace: Trace, path, meta: dict | None = None) -> None:
    """Full-precision JSON dump including iterate coordinates."""
    doc = {
        "meta": meta or {},
        "status": trace.status,
        "schedule_complete": trace.schedule_complete,
        "blocks": [{"block": bl.block_id, "start_n": bl.start_n,
                    "end_n": bl.end_n, "advance": bl.advance}
                   for bl in trace.blocks],
        "records": [{
            "n": r.n, "block": r.block_id, "block_step": r.block_step,
            "a": r.a.tolist(), "b": r.b.tolist(),
            "norm_a": r.norm_a, "norm_b": r.norm_b,
            "res_a": r.res_a, "gap_ab": r.gap_ab,
            "dist_target": r.dist_target,
        } for r in trace.records],
    }
    text = json.dumps(doc, indent=1)
    if hasattr(path, "write"):
        path.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)
