"""Finite graphs the dynamics runs on: tori, free-boundary boxes, layered lattices.

Vertices are integers in row-major order over (layer, coordinates). Closed
neighborhoods (the vertex itself plus its neighbors) are stored as one padded
int64 table `nbr` with a per-vertex valid count, each row sorted ascending and
duplicate-free. Graphs are immutable after construction and safe to share
across any number of readers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

MAX_VERTICES = 2**31 - 1

_PAD = np.iinfo(np.int64).max  # sorts after every real vertex id


@dataclass(frozen=True)
class Graph:
    """Immutable vertex set with closed neighborhoods.

    kind      "torus" or "layered" (a free-boundary box is a torus kind with
              boundary "free"); internal disjoint unions use "batch".
    lengths   per-axis extents; row-major indexing, axis 0 slowest.
    layers    1 for plain tori/boxes.
    nbr       (V, K) table; row x holds the closed neighborhood of x in
              nbr[x, :counts[x]], sorted ascending, x itself included.
    """

    kind: str
    boundary: str
    d: int
    lengths: tuple[int, ...]
    layers: int
    vertex_count: int
    nbr: np.ndarray = field(repr=False)
    counts: np.ndarray = field(repr=False)
    templates: tuple = ()

    @property
    def max_degree(self) -> int:
        return int(self.counts.max()) - 1

    @property
    def uniform_count(self) -> int | None:
        """Common |G_x| if every vertex has the same one, else None."""
        c0 = int(self.counts[0])
        return c0 if bool((self.counts == c0).all()) else None

    def neighborhood(self, x: int) -> list[int]:
        return closed_neighborhood(self, x)

    def coords(self, x: int) -> tuple[int, ...]:
        """Row-major coordinates of x: (c0..cd-1), layer-prefixed when layered."""
        if not 0 <= x < self.vertex_count:
            raise ValueError(f"vertex id out of range: {x}")
        block = self.vertex_count // self.layers
        j, r = divmod(x, block)
        cc = np.unravel_index(r, self.lengths)
        if self.kind == "layered":
            return (j + 1, *map(int, cc))
        return tuple(map(int, cc))

    def params(self) -> dict:
        """Construction parameters (graphs serialize as parameters only)."""
        p = {
            "kind": self.kind,
            "boundary": self.boundary,
            "d": self.d,
            "lengths": list(self.lengths),
        }
        if self.kind == "layered":
            p["layers"] = self.layers
            p["templates"] = [list(t[:2]) + [list(t[2])] for t in self.templates]
        return p


def _check_dims(d, lengths) -> tuple[int, ...]:
    if not isinstance(d, int) or d < 1:
        raise ValueError(f"dimension must be a positive integer, got {d!r}")
    lengths = tuple(int(v) for v in lengths)
    if len(lengths) != d:
        raise ValueError(f"expected {d} axis lengths, got {len(lengths)}")
    if any(v < 2 for v in lengths):
        raise ValueError(f"every axis length must be >= 2, got {lengths}")
    return lengths


def _check_size(n: int) -> None:
    if n > MAX_VERTICES:
        raise ValueError(f"vertex count {n} overflows the index type (max {MAX_VERTICES})")


def _pack(columns: list[np.ndarray]) -> tuple[np.ndarray, np.ndarray]:
    """Sort candidate-neighbor columns per row, drop duplicates and padding."""
    cand = np.stack(columns, axis=1)
    cand.sort(axis=1)
    dup = np.zeros_like(cand, dtype=bool)
    dup[:, 1:] = (cand[:, 1:] == cand[:, :-1]) & (cand[:, 1:] != _PAD)
    cand[dup] = _PAD
    cand.sort(axis=1)
    counts = (cand != _PAD).sum(axis=1).astype(np.int64)
    k = int(counts.max())
    nbr = cand[:, :k].copy()
    nbr[nbr == _PAD] = 0  # padding slots are never read
    nbr.setflags(write=False)
    counts.setflags(write=False)
    return nbr, counts


def _axis_steps(coords: np.ndarray, lengths, shape, wrap: bool) -> list[np.ndarray]:
    """Candidate neighbor ids for a +/-1 step along every axis (PAD where off-grid)."""
    cols = []
    for ax, ln in enumerate(lengths):
        for s in (1, -1):
            cc = coords.copy()
            cc[:, ax] = cc[:, ax] + s
            if wrap:
                cc[:, ax] %= ln
                cols.append(np.ravel_multi_index(tuple(cc.T), shape))
            else:
                ok = (cc[:, ax] >= 0) & (cc[:, ax] < ln)
                cc[:, ax] = np.clip(cc[:, ax], 0, ln - 1)
                ids = np.ravel_multi_index(tuple(cc.T), shape)
                cols.append(np.where(ok, ids, _PAD))
    return cols


def _grid(d: int, lengths, boundary: str) -> Graph:
    lengths = _check_dims(d, lengths)
    n = math.prod(lengths)
    _check_size(n)
    ids = np.arange(n, dtype=np.int64)
    coords = np.stack(np.unravel_index(ids, lengths), axis=1).astype(np.int64)
    cols = [ids] + _axis_steps(coords, lengths, lengths, wrap=boundary == "periodic")
    nbr, counts = _pack(cols)
    return Graph("torus", boundary, d, lengths, 1, n, nbr, counts)


def build_torus(d: int, lengths) -> Graph:
    """d-dimensional torus: +/-1 neighbors along each axis, wrapping periodically.

    Every |G_x| is 2d+1 when all lengths are >= 3; a length-2 axis makes the
    +1 and -1 neighbors coincide and the duplicate collapses (set semantics).
    """
    return _grid(d, lengths, "periodic")


def build_box(d: int, lengths) -> Graph:
    """Free-boundary box: as the torus but without wraparound.

    Border vertices simply lose their off-grid neighbors. This breaks vertex
    transitivity; it exists as a probing mode, periodic graphs are the default.
    """
    return _grid(d, lengths, "free")


def _check_template(t, layers: int, lengths) -> tuple[int, int, tuple[int, ...]]:
    try:
        j, j2, off = t
    except (TypeError, ValueError):
        raise ValueError(f"edge template must be (layer, layer, offset), got {t!r}")
    j, j2 = int(j), int(j2)
    if not (1 <= j <= layers and 1 <= j2 <= layers):
        raise ValueError(f"template {t!r} references an invalid layer (1..{layers})")
    if isinstance(off, int):
        off = (off,)
    off = tuple(int(v) for v in off)
    if len(off) != len(lengths):
        raise ValueError(f"template {t!r} offset must have {len(lengths)} entries")
    off = tuple(v % ln for v, ln in zip(off, lengths))
    if j == j2 and all(v == 0 for v in off):
        raise ValueError(f"template {t!r} produces self-loop edges")
    return j, j2, off


def build_layered(layers: int, d: int, lengths, templates, boundary: str = "periodic") -> Graph:
    """Layered periodic graph: `layers` copies of the d-dimensional grid.

    A template (j, j2, offset) connects (j, x) to (j2, x+offset) for every
    lattice point x; the edge set is the closure of the templates under
    translation and symmetrization, plus implicit self-membership. Layer
    indices are 1-based.
    """
    if not isinstance(layers, int) or layers < 1:
        raise ValueError(f"layer count must be a positive integer, got {layers!r}")
    lengths = _check_dims(d, lengths)
    block = math.prod(lengths)
    n = layers * block
    _check_size(n)
    templates = tuple(_check_template(t, layers, lengths) for t in templates)

    ids = np.arange(n, dtype=np.int64)
    layer = ids // block
    rest = ids % block
    coords = np.stack(np.unravel_index(rest, lengths), axis=1).astype(np.int64)
    wrap = boundary == "periodic"

    def shifted(off, sign) -> tuple[np.ndarray, np.ndarray]:
        cc = coords + sign * np.asarray(off, dtype=np.int64)
        if wrap:
            cc %= np.asarray(lengths, dtype=np.int64)
            return np.ravel_multi_index(tuple(cc.T), lengths), np.ones(n, dtype=bool)
        ok = ((cc >= 0) & (cc < np.asarray(lengths))).all(axis=1)
        cc = np.clip(cc, 0, np.asarray(lengths) - 1)
        return np.ravel_multi_index(tuple(cc.T), lengths), ok

    cols = [ids]
    for j, j2, off in templates:
        fwd, ok_f = shifted(off, +1)  # (j, x) -> (j2, x+off)
        bwd, ok_b = shifted(off, -1)  # (j2, x) -> (j, x-off)
        c1 = np.where((layer == j - 1) & ok_f, (j2 - 1) * block + fwd, _PAD)
        c2 = np.where((layer == j2 - 1) & ok_b, (j - 1) * block + bwd, _PAD)
        cols.extend([c1, c2])
    nbr, counts = _pack(cols)
    return Graph("layered", boundary, d, lengths, layers, n, nbr, counts, templates)


def closed_neighborhood(g: Graph, x: int) -> list[int]:
    """The stored duplicate-free list G_x, containing x itself."""
    if not 0 <= x < g.vertex_count:
        raise ValueError(f"vertex id out of range: {x}")
    return [int(v) for v in g.nbr[x, : g.counts[x]]]


def disjoint_union(g: Graph, copies: int) -> Graph:
    """`copies` independent copies of g in one vertex set (ids offset by V per copy).

    Internal tool for batched Monte Carlo; copies do not interact.
    """
    if copies < 1:
        raise ValueError("copies must be >= 1")
    n = g.vertex_count * copies
    _check_size(n)
    offs = (np.arange(copies, dtype=np.int64) * g.vertex_count)[:, None, None]
    nbr = (g.nbr[None, :, :] + offs).reshape(n, g.nbr.shape[1])
    # padding slots moved off 0; rewrite them to 0 so ids stay in range
    counts = np.tile(g.counts, copies)
    k = np.arange(g.nbr.shape[1])
    nbr[k[None, :] >= counts[:, None]] = 0
    nbr.setflags(write=False)
    counts.setflags(write=False)
    return Graph("batch", g.boundary, g.d, g.lengths, g.layers, n, nbr, counts)
