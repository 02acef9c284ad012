"""The synchronous dynamics: targets, transfers, events, genealogy, absorption.

Each step is evaluated from the step-n field alone (double buffering): the
target pass computes a_n for every vertex, the gather pass rebuilds the field
by scanning each closed neighborhood for sources. Tie-breaking randomness is
keyed by (seed, step, vertex), so a run is bit-identical for a fixed
(graph, field, seed, max_steps) regardless of scheduling.
"""

from __future__ import annotations

import collections
from dataclasses import dataclass, field as dfield

import numpy as np

from . import _kernels, rng, stats
from .graph import Graph
from .initial import EXACT, REAL, Field
from .stats import RunResult, TimeSeriesRow

EVENT_A, EVENT_B, EVENT_C, EVENT_D, EVENT_E = range(5)
EVENT_LABELS = "ABCDE"

REAL_MASS_DRIFT_TOL = 1e-9  # per-step relative drift budget, real mode


class EngineInvariantError(RuntimeError):
    """A step violated an exact invariant (audit failure or overflow)."""


@dataclass(frozen=True)
class TargetMap:
    """Realized targets a_n plus tie bookkeeping for one step.

    tie_size[x] is the cardinality of the argmax set used at x (1 when the
    vertex is empty); nbr_max[x] is C'_n(x), the value a_n(x) holds.
    """

    step: int
    targets: np.ndarray
    tie_size: np.ndarray
    nbr_max: np.ndarray


@dataclass(frozen=True)
class StepReport:
    """Per-step aggregates: event tags, in-degrees, tie/mover counts, mass audit."""

    step: int
    targets: TargetMap
    events: np.ndarray
    indeg: np.ndarray
    counts: tuple[int, int, int, int, int]
    ties_this_step: int
    movers: int
    mass_before: float | int
    mass_after: float | int


@dataclass
class ClusterState:
    """Locations of every origin's resource (the L_n map) plus move times.

    Clusters are the groups of origins sharing a location; the update
    L' = a[L] sends co-located origins to one common target, so clusters
    merge and never split, and distinct clusters occupy distinct locations
    by construction. Zero-mass origins stay parked at home forever (their
    location never becomes anyone's argmax).
    """

    origin_location: np.ndarray
    last_move: np.ndarray
    step: int

    @classmethod
    def initial(cls, vertex_count: int) -> "ClusterState":
        return cls(
            origin_location=np.arange(vertex_count, dtype=np.int64),
            last_move=np.full(vertex_count, -1, dtype=np.int64),
            step=0,
        )

    def sizes_by_location(self) -> np.ndarray:
        """|S_n(x)| for every vertex x (0 where unoccupied); sums to V."""
        v = self.origin_location.shape[0]
        return np.bincount(self.origin_location, minlength=v)

    def histogram(self) -> dict[int, int]:
        return stats.cluster_histogram(self)

    def occupied_locations(self) -> np.ndarray:
        return np.flatnonzero(self.sizes_by_location())

    def location_roots(self) -> dict[int, int]:
        """location -> canonical member (smallest origin id) per occupied location."""
        order = np.argsort(self.origin_location, kind="stable")
        locs = self.origin_location[order]
        first = np.ones(locs.shape[0], dtype=bool)
        first[1:] = locs[1:] != locs[:-1]
        return {int(l): int(o) for l, o in zip(locs[first], order[first])}

    def advance(self, targets: np.ndarray, step: int) -> "ClusterState":
        new_loc = targets[self.origin_location]
        moved = new_loc != self.origin_location
        lm = self.last_move.copy()
        lm[moved] = step
        return ClusterState(new_loc, lm, step + 1)


@dataclass(frozen=True)
class RunOptions:
    """Observer/audit knobs for run(); defaults record everything, audit on."""

    record_every: int = 1
    gap_deltas: tuple[float, ...] = ()
    cluster_ks: tuple[int, ...] = ()
    window: int = 16
    audit: bool = True
    stop_on_absorption: bool = True
    snapshot_steps: tuple[int, ...] = ()


@dataclass(frozen=True)
class StepView:
    """Read-only snapshot handed to run() observers after each evaluation."""

    step: int
    values: np.ndarray
    new_values: np.ndarray
    clusters: ClusterState
    report: StepReport
    absorbed: bool


class _Eval:
    """Raw kernel outputs for one step evaluation."""

    __slots__ = ("a", "tie_size", "nbr_max", "c_new", "indeg", "ev")

    def __init__(self, v: int, dtype) -> None:
        self.a = np.empty(v, dtype=np.int64)
        self.tie_size = np.empty(v, dtype=np.int64)
        self.nbr_max = np.empty(v, dtype=dtype)
        self.c_new = np.empty(v, dtype=dtype)
        self.indeg = np.empty(v, dtype=np.int64)
        self.ev = np.empty(v, dtype=np.uint8)


def _check_shapes(fld: Field, g: Graph) -> None:
    if fld.values.shape != (g.vertex_count,):
        raise ValueError(
            f"field length {fld.values.shape[0]} does not match vertex count {g.vertex_count}"
        )


def _evaluate(values: np.ndarray, g: Graph, seed: int, step: int) -> _Eval:
    out = _Eval(g.vertex_count, values.dtype)
    u = rng.tie_uniforms(seed, step, g.vertex_count)
    _kernels.eval_step(values, g.nbr, g.counts, u,
                       out.a, out.tie_size, out.nbr_max, out.c_new, out.indeg, out.ev)
    return out


def mass_total(values: np.ndarray, mode: str) -> float | int:
    """Total mass: exact integer sum, or compensated float sum (inf-aware)."""
    if mode == EXACT:
        return int(values.sum())
    if np.isinf(values).any():
        return float("inf")
    return float(_kernels.comp_sum(values))


def targets(fld: Field, g: Graph, rng_key: tuple[int, int]) -> TargetMap:
    """Realized targets a_n(x) for every vertex.

    A positive vertex targets the richest vertex of its closed neighborhood,
    ties resolved uniformly from the stream keyed by (seed, step, x); an empty
    vertex targets itself with tie_size 1.
    """
    _check_shapes(fld, g)
    seed, step = rng_key
    out = _evaluate(fld.values, g, seed, step)
    return TargetMap(step, out.a, out.tie_size, out.nbr_max)


def classify(fld: Field, tm: TargetMap, g: Graph) -> np.ndarray:
    """Event tag per vertex from the realized targets.

    A where empty; otherwise, with R the set of vertices sending here:
    B if R = {x}, C if R is one other vertex, D if |R| > 1, E if R is empty.
    Independent of the kernel's tagging (sources tallied by bincount).
    """
    _check_shapes(fld, g)
    v = g.vertex_count
    indeg = np.bincount(tm.targets, minlength=v)
    active = fld.values > 0
    self_kept = tm.targets == np.arange(v, dtype=np.int64)
    ev = np.full(v, EVENT_A, dtype=np.uint8)
    ev[active & (indeg == 0)] = EVENT_E
    ev[active & (indeg > 1)] = EVENT_D
    ev[active & (indeg == 1) & self_kept] = EVENT_B
    ev[active & (indeg == 1) & ~self_kept] = EVENT_C
    return ev


def neighborhood_info(fld: Field, g: Graph) -> tuple[np.ndarray, np.ndarray]:
    """(neighborhood max C'_n, argmax multiplicity) per vertex, no tie draws."""
    _check_shapes(fld, g)
    nbr_max = np.empty(g.vertex_count, dtype=fld.values.dtype)
    mult = np.empty(g.vertex_count, dtype=np.int64)
    _kernels.self_max_info(fld.values, g.nbr, g.counts, nbr_max, mult)
    return nbr_max, mult


def is_absorbed(fld: Field, g: Graph) -> bool:
    """True iff every positive vertex strictly dominates its neighborhood.

    Equivalently the support is an independent set; such a state is an exact
    fixed point of the step under every tie-break realization.
    """
    _check_shapes(fld, g)
    nbr_max, mult = neighborhood_info(fld, g)
    pos = fld.values > 0
    return bool((~pos | ((nbr_max == fld.values) & (mult == 1))).all())


def _absorbed_from(values: np.ndarray, out: _Eval) -> bool:
    pos = values > 0
    return bool((~pos | ((out.nbr_max == values) & (out.tie_size == 1))).all())


def _report(step: int, values: np.ndarray, out: _Eval, mode: str) -> StepReport:
    v = values.shape[0]
    tm = TargetMap(step, out.a, out.tie_size, out.nbr_max)
    counts = np.bincount(out.ev, minlength=5)
    movers = int((out.a != np.arange(v, dtype=np.int64)).sum())
    return StepReport(
        step=step,
        targets=tm,
        events=out.ev,
        indeg=out.indeg,
        counts=tuple(int(c) for c in counts),
        ties_this_step=int((out.tie_size > 1).sum()),
        movers=movers,
        mass_before=mass_total(values, mode),
        mass_after=mass_total(out.c_new, mode),
    )


def step(fld: Field, clusters: ClusterState, g: Graph,
         rng_key: tuple[int, int]) -> tuple[Field, ClusterState, StepReport]:
    """One synchronous update: C_{n+1}(y) = sum of C_n over the senders to y.

    Pure: returns a fresh field at step n+1, the advanced cluster state, and
    the step report. Empty vertices keep value 0 (they are never an argmax).
    """
    _check_shapes(fld, g)
    seed, n = rng_key
    out = _evaluate(fld.values, g, seed, n)
    report = _report(n, fld.values, out, fld.mode)
    out.c_new.setflags(write=False)
    new_field = Field(out.c_new, fld.step + 1, fld.mode)
    return new_field, clusters.advance(out.a, n), report


def _audit(n: int, values: np.ndarray, out: _Eval, report: StepReport,
           times_e: np.ndarray, clusters: ClusterState, mode: str) -> None:
    v = values.shape[0]

    def fail(what: str) -> None:
        raise EngineInvariantError(f"step {n}: {what}")

    before, after = report.mass_before, report.mass_after
    if mode == EXACT:
        if after != before:
            fail(f"mass not conserved: {before} -> {after}")
    elif np.isinf(before):
        if not np.isinf(after):
            fail(f"infinite mass lost: {before} -> {after}")
    elif before == 0:
        if after != 0:
            fail(f"mass created from zero: {after}")
    elif abs(after - before) > REAL_MASS_DRIFT_TOL * before:
        fail(f"mass drift {abs(after - before) / before:.3e} exceeds {REAL_MASS_DRIFT_TOL}")
    if int(out.indeg.sum()) != v:
        fail(f"in-degree total {int(out.indeg.sum())} != {v}")
    zeros = values <= 0
    if out.c_new[zeros].any():
        fail("a zero vertex received mass")
    grew = out.c_new > values
    if (grew & (out.ev != EVENT_D)).any():
        fail("value grew outside a D event")
    if (out.nbr_max < values).any():
        fail("neighborhood max below own value")
    if (times_e > 1).any():
        fail("an E event occurred twice at one vertex")
    if int(clusters.sizes_by_location().sum()) != v:
        fail("cluster sizes do not partition the origin set")


def _row(n: int, values: np.ndarray, out: _Eval, report: StepReport,
         clusters: ClusterState, opts: RunOptions, mode: str) -> TimeSeriesRow:
    v = values.shape[0]
    pos = values > 0
    active_count = int(pos.sum())
    gaps = stats.gap_values(values, out.nbr_max)
    if active_count:
        pg = gaps[pos]
        # exact-mode gap maxima stay integers (they are resource values)
        max_gap = int(pg.max()) if mode == EXACT else float(pg.max())
        mean_gap = float(pg.mean())
    else:
        max_gap = 0 if mode == EXACT else 0.0
        mean_gap = 0.0
    sizes = clusters.sizes_by_location()
    joint = []
    if opts.gap_deltas and opts.cluster_ks:
        gap_pos = gaps > 0
        for delta in opts.gap_deltas:
            under = gap_pos & (gaps < delta)
            for k in opts.cluster_ks:
                frac = float((under & (sizes <= k)).sum()) / v
                joint.append((float(delta), int(k), frac))
    return TimeSeriesRow(
        step=n,
        activity=report.movers / v,
        ties=report.ties_this_step,
        count_a=report.counts[0],
        count_b=report.counts[1],
        count_c=report.counts[2],
        count_d=report.counts[3],
        count_e=report.counts[4],
        max_gap=max_gap,
        mean_gap=mean_gap,
        active_count=active_count,
        max_cluster=int(sizes.max()),
        moment_alpha2=stats.cluster_moment(clusters, 2),
        total_mass=report.mass_before,
        joint=tuple(joint),
    )


def run(g: Graph, field0: Field, max_steps: int, seed: int,
        observers=(), options: RunOptions | None = None) -> RunResult:
    """Iterate the dynamics until absorption or max_steps.

    Every step is evaluated (targets, events, audits); rows are recorded on
    the configured cadence plus always at the terminal state. Observers are
    called with a StepView after each evaluation. Non-absorption at max_steps
    is a reported outcome, not an error.
    """
    if max_steps < 0:
        raise ValueError("max_steps must be >= 0")
    _check_shapes(field0, g)
    opts = options or RunOptions()
    v = g.vertex_count
    values = field0.values.copy()
    initial_values = field0.values.copy()
    clusters = ClusterState.initial(v)
    times_d = np.zeros(v, dtype=np.int64)
    times_e = np.zeros(v, dtype=np.int64)
    times_tied = np.zeros(v, dtype=np.int64)
    window = collections.deque(maxlen=max(opts.window, 0))
    snapshot_steps = set(opts.snapshot_steps)
    snapshots: dict[int, np.ndarray] = {}
    rows: list[TimeSeriesRow] = []
    absorption_step: int | None = None

    n = 0
    while True:
        out = _evaluate(values, g, seed, n)
        report = _report(n, values, out, field0.mode)
        absorbed_now = _absorbed_from(values, out)
        if absorbed_now and absorption_step is None:
            absorption_step = n
        times_d += out.ev == EVENT_D
        times_e += out.ev == EVENT_E
        times_tied += out.tie_size > 1
        if opts.audit:
            _audit(n, values, out, report, times_e, clusters, field0.mode)
        if opts.window:
            window.append(out.ev)
        stop = (absorbed_now and opts.stop_on_absorption) or n >= max_steps
        if n % opts.record_every == 0 or stop:
            rows.append(_row(n, values, out, report, clusters, opts, field0.mode))
        if n in snapshot_steps:
            snapshots[n] = values.copy()
        for obs in observers:
            obs(StepView(n, values, out.c_new, clusters, report, absorbed_now))
        if stop:
            break
        clusters = clusters.advance(out.a, n)
        values = out.c_new
        n += 1

    values.setflags(write=False)
    final = Field(values, n, field0.mode)
    win = (np.stack(window, axis=0) if window
           else np.empty((0, v), dtype=np.uint8))
    result = RunResult(
        rows=rows,
        absorbed=absorption_step is not None,
        absorption_step=absorption_step,
        steps_run=n,
        final_field=final,
        initial_values=initial_values,
        last_move=clusters.last_move.copy(),
        times_d=times_d,
        times_e=times_e,
        times_tied=times_tied,
        event_window=win,
        manifest={
            "seed": int(seed),
            "max_steps": int(max_steps),
            "steps_run": int(n),
            "record_every": int(opts.record_every),
            "vertex_count": int(v),
            "mode": field0.mode,
            "graph": g.params(),
            "absorbed": absorption_step is not None,
            "absorption_step": absorption_step,
            "stop_on_absorption": bool(opts.stop_on_absorption),
            "audit": bool(opts.audit),
            "window": int(opts.window),
            "gap_deltas": [float(d) for d in opts.gap_deltas],
            "cluster_ks": [int(k) for k in opts.cluster_ks],
        },
        snapshots=snapshots,
    )
    return result
