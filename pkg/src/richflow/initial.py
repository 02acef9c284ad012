"""Initial resource fields: i.i.d. translation-invariant laws and shifted patterns.

Two value modes exist. Exact mode stores nonnegative int64 values and is meant
for conservation tests: the total initial mass is bounded at creation with
arbitrary-precision arithmetic so no later sum can overflow (every per-vertex
receive sum of nonnegative values is at most the conserved total). Real mode
stores float64 and admits the distinguished value inf, which is strictly
greater than every finite value, ties only with inf, and absorbs addition —
exactly IEEE semantics. Equality (hence tie detection) is exact bit equality
in both modes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import rng
from .graph import Graph

EXACT = "exact"
REAL = "real"

_INT64_MAX = np.iinfo(np.int64).max

KINDS = (
    "constant",
    "uniform_real",
    "exponential",
    "pareto",
    "two_point",
    "uniform_int",
    "geometric",
    "pattern",
)

# laws that can produce integer values (and thus run in exact mode)
_INT_CAPABLE = {"constant", "two_point", "uniform_int", "geometric", "pattern"}
_REAL_ONLY = {"uniform_real", "exponential", "pareto"}


class SpecError(ValueError):
    """A distribution spec violates its parameter domain."""


class MassOverflowError(OverflowError):
    """Exact-mode total mass does not fit the 64-bit accumulator."""


def _is_int(v) -> bool:
    return isinstance(v, (int, np.integer)) and not isinstance(v, bool)


@dataclass(frozen=True)
class DistributionSpec:
    """Parameters of one initial law; unused fields stay None.

    mode "auto" resolves to exact for integer-valued parameterizations and
    real otherwise (exact for conservation tests, real for continuous laws).
    """

    kind: str
    mode: str = "auto"
    value: float | int | None = None          # constant
    low: float | int | None = None            # uniform_real / uniform_int
    high: float | int | None = None
    rate: float | None = None                 # exponential
    shape: float | None = None                # pareto
    scale: float | None = None
    v1: float | int | None = None             # two_point
    p: float | None = None                    # two_point / geometric
    v2: float | int | None = None
    pattern: tuple = ()                       # pattern
    pattern_shape: tuple | None = None
    random_shift: bool = False

    def integer_valued(self) -> bool:
        if self.kind in _REAL_ONLY:
            return False
        if self.kind == "constant":
            return _is_int(self.value)
        if self.kind == "two_point":
            return _is_int(self.v1) and _is_int(self.v2)
        if self.kind == "pattern":
            return all(_is_int(v) for v in self.pattern)
        return True  # uniform_int, geometric

    def resolved(self) -> "DistributionSpec":
        """Validate parameters and pin the value mode; raises SpecError."""
        if self.kind not in KINDS:
            raise SpecError(f"unknown distribution kind {self.kind!r}")
        mode = self.mode
        if mode == "auto":
            mode = EXACT if self.integer_valued() else REAL
        if mode not in (EXACT, REAL):
            raise SpecError(f"unknown value mode {mode!r}")
        if mode == EXACT and not self.integer_valued():
            raise SpecError(f"exact mode requires an integer-valued law, got {self.kind}")
        self._check_params(mode)
        return replace(self, mode=mode)

    def _check_params(self, mode: str) -> None:
        k = self.kind
        if k == "constant":
            _require_value("value", self.value, mode)
        elif k == "uniform_real":
            _require_value("low", self.low, REAL)
            _require_value("high", self.high, REAL, allow_inf=False)
            if not self.low <= self.high:
                raise SpecError(f"uniform_real needs low <= high, got ({self.low}, {self.high})")
        elif k == "uniform_int":
            for name, v in (("low", self.low), ("high", self.high)):
                if not _is_int(v) or v < 0:
                    raise SpecError(f"uniform_int {name} must be a nonnegative integer, got {v!r}")
            if not self.low <= self.high:
                raise SpecError(f"uniform_int needs low <= high, got ({self.low}, {self.high})")
        elif k == "exponential":
            if self.rate is None or not self.rate > 0:
                raise SpecError(f"exponential rate must be > 0, got {self.rate!r}")
        elif k == "pareto":
            if self.shape is None or not self.shape > 0:
                raise SpecError(f"pareto shape must be > 0, got {self.shape!r}")
            if self.scale is None or not self.scale > 0 or math.isinf(self.scale):
                raise SpecError(f"pareto scale must be finite > 0, got {self.scale!r}")
        elif k == "two_point":
            _require_value("v1", self.v1, mode)
            _require_value("v2", self.v2, mode)
            _check_prob("p", self.p)
        elif k == "geometric":
            _check_prob("p", self.p)
        elif k == "pattern":
            if len(self.pattern) == 0:
                raise SpecError("pattern must be non-empty")
            for v in self.pattern:
                _require_value("pattern value", v, mode)


def _require_value(name, v, mode, allow_inf=True) -> None:
    if v is None:
        raise SpecError(f"{name} is required")
    if mode == EXACT:
        if not _is_int(v) or v < 0 or v > _INT64_MAX:
            raise SpecError(f"{name} must be a nonnegative 64-bit integer in exact mode, got {v!r}")
    else:
        v = float(v)
        if math.isnan(v) or v < 0:
            raise SpecError(f"{name} must be nonnegative, got {v!r}")
        if math.isinf(v) and not allow_inf:
            raise SpecError(f"{name} must be finite, got {v!r}")


def _check_prob(name, p) -> None:
    if p is None or not 0 < p < 1:
        raise SpecError(f"{name} must satisfy 0 < {name} < 1, got {p!r}")


@dataclass(frozen=True)
class Field:
    """One resource value per vertex at step n."""

    values: np.ndarray
    step: int
    mode: str

    @property
    def total(self):
        """Total mass: exact int in exact mode, float in real mode."""
        if self.mode == EXACT:
            return int(self.values.sum())
        return float(self.values.sum(dtype=np.longdouble))


def make_field(g: Graph, values, mode: str, step: int = 0) -> Field:
    """Validate and freeze a per-vertex value array into a Field."""
    if mode == EXACT:
        arr = np.asarray(values)
        if arr.dtype.kind not in "iu":
            if not np.equal(np.floor(arr), arr).all():
                raise SpecError("exact mode requires integer values")
        arr = arr.astype(np.int64)
    elif mode == REAL:
        arr = np.asarray(values, dtype=np.float64)
        if np.isnan(arr).any():
            raise SpecError("field values must not be NaN")
    else:
        raise SpecError(f"unknown value mode {mode!r}")
    if arr.shape != (g.vertex_count,):
        raise SpecError(f"field length {arr.shape} does not match vertex count {g.vertex_count}")
    if (arr < 0).any():
        raise SpecError("field values must be nonnegative")
    if mode == EXACT:
        total = int(arr.astype(object).sum())  # arbitrary precision
        if total > _INT64_MAX:
            raise MassOverflowError(
                f"total initial mass {total} exceeds the exact-mode accumulator"
            )
    arr.setflags(write=False)
    return Field(arr, step, mode)


def sample_field(g: Graph, spec: DistributionSpec, seed: int) -> Field:
    """Draw C_0: one i.i.d. value per vertex from the deterministic stream.

    The value at vertex x is a fixed transform of element x of the stream
    keyed by the seed, so the same (spec, seed, graph) is bit-identical no
    matter how generation is chunked or parallelized.
    """
    spec = spec.resolved()
    if spec.kind == "pattern":
        return pattern_field(
            g, spec.pattern, spec.random_shift, seed,
            pattern_shape=spec.pattern_shape, mode=spec.mode,
        )
    n = g.vertex_count
    k = spec.kind
    if k == "constant":
        if spec.mode == EXACT:
            values = np.full(n, int(spec.value), dtype=np.int64)
        else:
            values = np.full(n, float(spec.value), dtype=np.float64)
        return make_field(g, values, spec.mode)

    u = rng.init_uniforms(seed, n)
    if k == "uniform_real":
        lo, hi = float(spec.low), float(spec.high)
        values = lo + u * (hi - lo)
    elif k == "exponential":
        values = -np.log1p(-u) / spec.rate
    elif k == "pareto":
        values = spec.scale * np.power(1.0 - u, -1.0 / spec.shape)
    elif k == "uniform_int":
        lo, hi = int(spec.low), int(spec.high)
        span = hi - lo + 1
        values = lo + np.minimum((u * span).astype(np.int64), span - 1)
    elif k == "geometric":
        # support {1, 2, ...}: P(X = j) = p (1-p)^(j-1), mean 1/p
        values = 1 + np.floor(np.log1p(-u) / math.log1p(-spec.p)).astype(np.int64)
    elif k == "two_point":
        if spec.mode == EXACT:
            values = np.where(u < spec.p, np.int64(spec.v1), np.int64(spec.v2))
        else:
            values = np.where(u < spec.p, float(spec.v1), float(spec.v2))
    else:  # pragma: no cover - resolved() guards
        raise SpecError(f"unknown distribution kind {k!r}")
    return make_field(g, values, spec.mode)


def pattern_field(g: Graph, values, random_shift: bool, seed: int,
                  pattern_shape=None, mode: str = "auto") -> Field:
    """Tile a periodic pattern over a torus, optionally uniformly shifted.

    The pattern period must divide each torus length; the random shift draws
    one uniform offset per axis from the seed, which restores translation
    invariance in law. Torus kind with periodic boundary only.
    """
    if g.kind != "torus" or g.boundary != "periodic":
        raise SpecError("pattern fields are defined on periodic tori only")
    flat = np.asarray(values)
    if pattern_shape is None:
        pattern_shape = (flat.size,)
    pattern_shape = tuple(int(v) for v in pattern_shape)
    if len(pattern_shape) != g.d:
        raise SpecError(
            f"pattern shape {pattern_shape} does not match graph dimension {g.d}"
        )
    if math.prod(pattern_shape) != flat.size:
        raise SpecError(f"pattern shape {pattern_shape} does not hold {flat.size} values")
    for period, length in zip(pattern_shape, g.lengths):
        if length % period != 0:
            raise SpecError(f"pattern period {period} does not divide torus length {length}")
    if mode == "auto":
        mode = EXACT if all(_is_int(v) for v in np.asarray(values).ravel().tolist()) else REAL
    tile = flat.reshape(pattern_shape)
    reps = tuple(ln // pp for ln, pp in zip(g.lengths, pattern_shape))
    full = np.tile(tile, reps)
    if random_shift:
        u = rng.shift_uniforms(seed, g.d)
        shifts = np.minimum((u * np.asarray(g.lengths)).astype(np.int64),
                            np.asarray(g.lengths) - 1)
        full = np.roll(full, tuple(int(s) for s in shifts), axis=tuple(range(g.d)))
    return make_field(g, full.reshape(-1), mode)
