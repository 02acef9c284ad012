"""Brute-force reference dynamics with exact rational probabilities.

An unoptimized, pure-Python re-statement of one update step plus exhaustive
enumeration of every joint tie-break assignment on tiny instances. The oracle
shares no code with the engine's kernels; probabilities are Fractions so the
oracle itself carries no floating tolerance — all tolerance lives in the
Monte Carlo comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np

from . import engine as _engine
from .graph import Graph, disjoint_union
from .initial import EXACT, make_field

MAX_ORACLE_VERTICES = 16
MAX_ORACLE_HORIZON = 6
_MAX_BRANCHES = 10**7


class OracleGuardError(ValueError):
    """Instance exceeds the enumeration guard bounds."""


def _argmax_set(values, g: Graph, x: int) -> list[int]:
    hood = [int(v) for v in g.nbr[x, : g.counts[x]]]
    m = max(values[y] for y in hood)
    return [y for y in hood if values[y] == m]


def naive_step(values, g: Graph, tie_choices) -> tuple:
    """Literal evaluation of one update under explicitly supplied targets.

    tie_choices maps vertex -> designated target (a sequence or mapping); a
    choice is required for every tied positive vertex and must lie in that
    vertex's argmax set. Untied vertices may be omitted.
    """
    values = tuple(values)
    n = len(values)
    if n != g.vertex_count:
        raise ValueError("field length does not match vertex count")

    def choice_for(x):
        if isinstance(tie_choices, dict):
            return tie_choices.get(x)
        return tie_choices[x] if x < len(tie_choices) else None

    out = [values[0] - values[0]] * n  # zero of the value type
    for x in range(n):
        if values[x] <= 0:
            tgt = x
            c = choice_for(x)
            if c is not None and int(c) != x:
                raise ValueError(f"vertex {x} is empty; its target must be itself")
        else:
            amax = _argmax_set(values, g, x)
            c = choice_for(x)
            if c is None:
                if len(amax) > 1:
                    raise ValueError(f"vertex {x} is tied; a tie choice is required")
                tgt = amax[0]
            else:
                tgt = int(c)
                if tgt not in amax:
                    raise ValueError(f"tie choice {tgt} for vertex {x} is not in its argmax set")
        if values[x] > 0:
            out[tgt] = out[tgt] + values[x]
    return tuple(out)


@dataclass(frozen=True)
class OutcomeDistribution:
    """Exact law of the configuration after `horizon` steps."""

    outcomes: tuple[tuple[tuple, Fraction], ...]
    horizon: int

    def as_dict(self) -> dict[tuple, Fraction]:
        return dict(self.outcomes)

    def total(self) -> Fraction:
        return sum((p for _, p in self.outcomes), Fraction(0))


def _step_branches(values, g: Graph):
    """All (next configuration, probability) pairs one step from `values`."""
    n = len(values)
    amax = [_argmax_set(values, g, x) if values[x] > 0 else [x] for x in range(n)]
    branching = math.prod(len(s) for s in amax)
    if branching > _MAX_BRANCHES:
        raise OracleGuardError(f"joint tie branching {branching} exceeds guard")
    weight = Fraction(1, branching)
    merged: dict[tuple, Fraction] = {}
    for assignment in product(*amax):
        out = [values[0] - values[0]] * n
        for x in range(n):
            if values[x] > 0:
                out[assignment[x]] = out[assignment[x]] + values[x]
        key = tuple(out)
        merged[key] = merged.get(key, Fraction(0)) + weight
    return merged


def enumerate_outcomes(values, g: Graph, horizon: int) -> OutcomeDistribution:
    """Exact outcome distribution by branching over every joint tie assignment.

    Guarded to vertex_count <= 16 and horizon <= 6; exact-valued (integer or
    rational) fields only. Identical configurations are merged, so the
    probabilities sum to exactly 1.
    """
    if g.vertex_count > MAX_ORACLE_VERTICES:
        raise OracleGuardError(f"vertex count {g.vertex_count} exceeds {MAX_ORACLE_VERTICES}")
    if not 0 <= horizon <= MAX_ORACLE_HORIZON:
        raise OracleGuardError(f"horizon {horizon} outside 0..{MAX_ORACLE_HORIZON}")
    values = tuple(values)
    for v in values:
        if isinstance(v, float):
            raise OracleGuardError("enumeration is exact mode only (no floats)")
        if v < 0:
            raise ValueError("values must be nonnegative")
    dist = {values: Fraction(1)}
    for _ in range(horizon):
        nxt: dict[tuple, Fraction] = {}
        for cfg, p in dist.items():
            for out, q in _step_branches(cfg, g).items():
                nxt[out] = nxt.get(out, Fraction(0)) + p * q
        dist = nxt
    outcomes = tuple(sorted(dist.items()))
    return OutcomeDistribution(outcomes, horizon)


def compare_engine_oracle(g: Graph, values, horizon: int, trials: int,
                          seed: int, tolerance: float | None = None) -> dict:
    """Monte Carlo the engine at the horizon and compare with the exact law.

    The trials execute as one engine run over `trials` disjoint copies of the
    instance (per-vertex tie streams make the copies independent, so the law
    matches per-trial runs). Reports per-outcome |empirical - exact|, the
    total-variation distance and a chi-square statistic; the pass flag (if a
    tolerance is given) requires every per-outcome distance within tolerance.
    """
    exact = enumerate_outcomes(values, g, horizon)
    if trials < 1:
        raise ValueError("trials must be >= 1")
    big = disjoint_union(g, trials)
    tiled = np.tile(np.asarray(values, dtype=np.int64), trials)
    fld = make_field(big, tiled, EXACT)
    for step_idx in range(horizon):
        fld, _, _ = _engine.step(
            fld, _engine.ClusterState.initial(big.vertex_count), big, (seed, step_idx)
        )
    configs = fld.values.reshape(trials, g.vertex_count)
    uniq, counts = np.unique(configs, axis=0, return_counts=True)
    empirical = {tuple(int(v) for v in row): int(c) for row, c in zip(uniq, counts)}

    exact_map = exact.as_dict()
    keys = sorted(set(exact_map) | set(empirical))
    outcomes = []
    max_abs = 0.0
    tv = Fraction(0)
    chi2 = 0.0
    for key in keys:
        p = exact_map.get(key, Fraction(0))
        c = empirical.get(key, 0)
        freq = c / trials
        diff = abs(freq - float(p))
        max_abs = max(max_abs, diff)
        tv += abs(Fraction(c, trials) - p)
        if p > 0:
            expected = float(p) * trials
            chi2 += (c - expected) ** 2 / expected
        outcomes.append({
            "configuration": list(key),
            "probability": {"numerator": p.numerator, "denominator": p.denominator},
            "expected_frequency": float(p),
            "count": c,
            "frequency": freq,
            "abs_difference": diff,
        })
    report = {
        "horizon": horizon,
        "trials": trials,
        "seed": int(seed),
        "outcomes": outcomes,
        "max_abs_difference": max_abs,
        "total_variation": float(tv / 2),
        "chi_square": chi2,
        "exact_outcome_count": len(exact_map),
        "observed_outcome_count": len(empirical),
    }
    if tolerance is not None:
        report["tolerance"] = float(tolerance)
        report["passed"] = bool(max_abs <= tolerance)
    return report
