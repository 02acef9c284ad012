"""Estimators and exact identities over step reports and finished runs.

Population statistics are spatial averages over the finite graph, standing in
for single-vertex probabilities under translation invariance. Reductions are
pure and order-fixed: exact-mode results are independent of reduction order,
real-mode results are reproducible via fixed-order summation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, NamedTuple

import numpy as np

from .initial import EXACT, Field

if TYPE_CHECKING:  # pragma: no cover
    from .engine import ClusterState, StepReport, TargetMap
    from .graph import Graph

EVENT_LABELS = "ABCDE"

TYPE_A = 0
TYPE_B = 1
TYPE_C = 2
TYPE_UNDETERMINED = 255
TYPE_LABELS = {TYPE_A: "A-vertex", TYPE_B: "B-vertex", TYPE_C: "C-vertex",
               TYPE_UNDETERMINED: "undetermined"}


@dataclass(frozen=True)
class TimeSeriesRow:
    """Per-step statistics row; `joint` holds (delta, k, fraction) counters."""

    step: int
    activity: float
    ties: int
    count_a: int
    count_b: int
    count_c: int
    count_d: int
    count_e: int
    max_gap: float | int
    mean_gap: float
    active_count: int
    max_cluster: int
    moment_alpha2: float
    total_mass: float | int
    joint: tuple[tuple[float, int, float], ...] = ()

    @property
    def event_counts(self) -> tuple[int, int, int, int, int]:
        return (self.count_a, self.count_b, self.count_c, self.count_d, self.count_e)


@dataclass
class RunResult:
    """Everything a finished run reports.

    last_move[v] is the last step m with L_{m+1}(v) != L_m(v), or -1 when the
    origin's resource never relocated. event_window holds the per-vertex event
    tags of the most recent evaluated steps (for typing non-absorbed runs).
    """

    rows: list[TimeSeriesRow]
    absorbed: bool
    absorption_step: int | None
    steps_run: int
    final_field: Field
    initial_values: np.ndarray
    last_move: np.ndarray
    times_d: np.ndarray
    times_e: np.ndarray
    times_tied: np.ndarray
    event_window: np.ndarray  # (W, V) uint8, oldest first
    manifest: dict = field(default_factory=dict)
    snapshots: dict[int, np.ndarray] = field(default_factory=dict)


class MovingMass(NamedTuple):
    origins: float
    mass: float


class GapStats(NamedTuple):
    max_gap: float
    mean_gap: float


def activity(report: "StepReport") -> float:
    """Fraction of vertices whose resource relocates this step."""
    return report.movers / report.targets.targets.shape[0]


def in_degree_total(targets) -> int:
    """Sum over vertices of |E_n(x)|, tallied from the target map.

    Always equals the vertex count — every vertex has exactly one target —
    which is the finite-graph deterministic form of the mass-transport
    in-degree identity. Returned tallied, not assumed.
    """
    arr = getattr(targets, "targets", targets)
    return int(np.bincount(arr, minlength=arr.shape[0]).sum())


def gap_stats(fld: Field, g: "Graph") -> GapStats:
    """Max and mean of the neighborhood gap C'_n - C_n over positive vertices.

    Zero-resource vertices are excluded (they trivially satisfy the vanishing
    limit and would mask the signal); an all-zero field reports (0, 0).
    """
    from . import engine  # local import; engine depends on this module

    nbr_max, _ = engine.neighborhood_info(fld, g)
    return gap_stats_from(fld.values, nbr_max)


def gap_stats_from(values: np.ndarray, nbr_max: np.ndarray) -> GapStats:
    pos = values > 0
    if not pos.any():
        return GapStats(0.0, 0.0)
    gaps = gap_values(values, nbr_max)[pos]
    return GapStats(float(gaps.max()), float(gaps.mean()))


def gap_values(values: np.ndarray, nbr_max: np.ndarray) -> np.ndarray:
    """Per-vertex C'_n - C_n; defined as 0 where the two coincide (inf-safe)."""
    with np.errstate(invalid="ignore"):
        gaps = nbr_max - values
    np.copyto(gaps, np.zeros(1, dtype=gaps.dtype)[0], where=nbr_max == values)
    return gaps


def cluster_histogram(clusters: "ClusterState") -> dict[int, int]:
    """Histogram of |S_n(x)| over occupied locations; sizes weight-sum to V."""
    sizes = clusters.sizes_by_location()
    occupied = sizes[sizes > 0]
    vals, cnts = np.unique(occupied, return_counts=True)
    return {int(s): int(c) for s, c in zip(vals, cnts)}


def cluster_moment(clusters: "ClusterState", alpha: float) -> float:
    """Empirical moment sum_x |S_n(x)|^alpha / V (empty locations contribute 0).

    alpha = 1 is exactly 1 at every step: the clusters partition the origin
    set, which is the summed (deterministic) form of the mass-transport
    identity on the finite graph.
    """
    if alpha < 1:
        raise ValueError(f"alpha must be >= 1, got {alpha}")
    sizes = clusters.sizes_by_location()
    n = sizes.shape[0]
    if alpha == int(alpha) and alpha <= 3:
        # integer powers stay in exact arithmetic (sum <= V^alpha fits int64)
        total = int((sizes.astype(np.int64) ** int(alpha)).sum())
        return total / n
    occ = sizes[sizes > 0].astype(np.float64)
    return float((occ ** alpha).sum()) / n


def moving_mass_fraction(run: RunResult, n: int) -> MovingMass:
    """Fraction of origins (and of initial mass) still relocating after step n.

    The origin fraction is the empirical analogue of the probability that a
    fixed origin's resource moves again after n; the mass-weighted variant is
    the conservation probe. Non-increasing in n and 0 from absorption on. For
    non-absorbed runs the value is a lower bound (moves past the horizon are
    unknown) and callers should treat it as such.
    """
    still = run.last_move > n
    v = run.last_move.shape[0]
    origins = float(still.sum()) / v
    c0 = run.initial_values
    if run.final_field.mode == EXACT:
        total = int(c0.sum())
        mass = float(int(c0[still].sum()) / total) if total > 0 else 0.0
    else:
        total = float(c0.sum(dtype=np.longdouble))
        if total > 0 and np.isfinite(total):
            mass = float(c0[still].sum(dtype=np.longdouble) / total)
        else:
            mass = float("nan") if not np.isfinite(total) else 0.0
    return MovingMass(origins, mass)


def vertex_type(run: RunResult, window: int | None = None) -> np.ndarray:
    """Per-vertex limit type: A (empty), B (keeps own), C (conveyor), or undetermined.

    Absorbed runs type exactly from the final field (A where it is 0, else B).
    Non-absorbed runs use the trailing event window: a tag wins a vertex when
    it holds a strict majority of the window; anything else — a mixed window,
    or a majority of D/E tags, which cannot persist — is undetermined.
    """
    v = run.final_field.values.shape[0]
    if run.absorbed:
        return np.where(run.final_field.values > 0, TYPE_B, TYPE_A).astype(np.uint8)
    win = run.event_window
    if window is not None and window < win.shape[0]:
        win = win[-window:]
    w = win.shape[0]
    if w == 0:
        return np.full(v, TYPE_UNDETERMINED, dtype=np.uint8)
    out = np.full(v, TYPE_UNDETERMINED, dtype=np.uint8)
    for tag in (TYPE_A, TYPE_B, TYPE_C):
        out[(win == tag).sum(axis=0) * 2 > w] = tag
    return out
