"""Immutable citation graph with compressed adjacency and DAG preprocessing."""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from .corpus import YEAR_UNKNOWN

CACHE_MAGIC = b"LMG1"


def _id_key(x):
    """Total order over mixed int/str node ids."""
    if isinstance(x, bool):
        x = int(x)
    if isinstance(x, (int, float)):
        return (0, x, "")
    return (1, 0, str(x))


@dataclass
class CitationGraph:
    """Citation graph over dense node indices.

    Forward adjacency lists the references R(a) (edges toward the past),
    backward adjacency the citations C(a); the two are exact transposes.
    Both are CSR-style (indptr, indices) pairs with neighbor indices sorted
    ascending per row. Instances are never mutated after construction, so
    any number of readers may query one concurrently.
    """

    ids: list
    years: np.ndarray
    fwd_indptr: np.ndarray
    fwd_indices: np.ndarray
    bwd_indptr: np.ndarray
    bwd_indices: np.ndarray
    dropped_references: int = 0
    _index: dict | None = field(default=None, repr=False, compare=False)

    @property
    def n(self) -> int:
        return len(self.ids)

    @property
    def m(self) -> int:
        return int(self.fwd_indices.size)

    @property
    def index(self) -> dict:
        if self._index is None:
            self._index = {v: i for i, v in enumerate(self.ids)}
        return self._index

    def index_of(self, a) -> int:
        try:
            return self.index[a]
        except KeyError:
            raise KeyError(f"unknown node id: {a!r}") from None

    def out_indices(self, i):
        return self.fwd_indices[self.fwd_indptr[i] : self.fwd_indptr[i + 1]]

    def in_indices(self, i):
        return self.bwd_indices[self.bwd_indptr[i] : self.bwd_indptr[i + 1]]

    def reverse(self) -> "CitationGraph":
        """Graph with every edge flipped (citations become references).

        Shares the underlying arrays with this graph.
        """
        return CitationGraph(
            ids=self.ids,
            years=self.years,
            fwd_indptr=self.bwd_indptr,
            fwd_indices=self.bwd_indices,
            bwd_indptr=self.fwd_indptr,
            bwd_indices=self.fwd_indices,
            dropped_references=self.dropped_references,
        )


def _csr_from_edges(n, src, dst):
    """Build sorted forward/backward CSR arrays from parallel edge arrays."""
    src = np.asarray(src, dtype=np.int64)
    dst = np.asarray(dst, dtype=np.int64)
    if src.size == 0:
        empty_ptr = np.zeros(n + 1, dtype=np.int64)
        empty_idx = np.zeros(0, dtype=np.int32)
        return empty_ptr, empty_idx, empty_ptr.copy(), empty_idx.copy()
    order = np.lexsort((dst, src))
    fwd_indices = dst[order].astype(np.int32)
    fwd_indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=n), out=fwd_indptr[1:])
    order = np.lexsort((src, dst))
    bwd_indices = src[order].astype(np.int32)
    bwd_indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(dst, minlength=n), out=bwd_indptr[1:])
    return fwd_indptr, fwd_indices, bwd_indptr, bwd_indices


def build_graph(records, dropped=None) -> CitationGraph:
    """Index a record stream into a CitationGraph.

    One node per record; one edge per (citing, cited) pair whose cited id is
    itself a record. References to unknown ids are dropped and counted in
    ``dropped_references`` on the result. Duplicate record ids are fatal.
    """
    ids = []
    years = []
    index = {}
    ref_src = []
    ref_ids = []
    for rec in records:
        if rec.id in index:
            raise ValueError(f"duplicate paper id: {rec.id!r}")
        i = len(ids)
        index[rec.id] = i
        ids.append(rec.id)
        years.append(YEAR_UNKNOWN if rec.year is None else int(rec.year))
        for r in rec.references:
            ref_src.append(i)
            ref_ids.append(r)
    n = len(ids)
    src = []
    dst = []
    n_dropped = 0
    for i, r in zip(ref_src, ref_ids):
        j = index.get(r)
        if j is None:
            n_dropped += 1
        else:
            src.append(i)
            dst.append(j)
    fwd_indptr, fwd_indices, bwd_indptr, bwd_indices = _csr_from_edges(n, src, dst)
    return CitationGraph(
        ids=ids,
        years=np.asarray(years, dtype=np.int64),
        fwd_indptr=fwd_indptr,
        fwd_indices=fwd_indices,
        bwd_indptr=bwd_indptr,
        bwd_indices=bwd_indices,
        dropped_references=n_dropped,
    )


def _scipy_adj(g: CitationGraph):
    return sparse.csr_matrix(
        (np.ones(g.m, dtype=np.int8), g.fwd_indices, g.fwd_indptr), shape=(g.n, g.n)
    )


def _edge_arrays(g: CitationGraph):
    src = np.repeat(np.arange(g.n, dtype=np.int64), np.diff(g.fwd_indptr))
    return src, g.fwd_indices.astype(np.int64)


def _induced(g: CitationGraph, keep) -> CitationGraph:
    """Subgraph on the given node indices (sorted ascending)."""
    keep = np.asarray(sorted(keep), dtype=np.int64)
    remap = np.full(g.n, -1, dtype=np.int64)
    remap[keep] = np.arange(keep.size)
    src, dst = _edge_arrays(g)
    ok = (remap[src] >= 0) & (remap[dst] >= 0)
    fwd_indptr, fwd_indices, bwd_indptr, bwd_indices = _csr_from_edges(
        keep.size, remap[src[ok]], remap[dst[ok]]
    )
    return CitationGraph(
        ids=[g.ids[i] for i in keep],
        years=g.years[keep].copy(),
        fwd_indptr=fwd_indptr,
        fwd_indices=fwd_indices,
        bwd_indptr=bwd_indptr,
        bwd_indices=bwd_indices,
    )


def largest_weakly_connected_component(g: CitationGraph) -> CitationGraph:
    """Induced subgraph on the largest weakly connected component.

    Size ties are broken toward the component containing the smallest node
    id, so the result is deterministic.
    """
    if g.n == 0:
        return g
    _, labels = csgraph.connected_components(_scipy_adj(g), directed=True, connection="weak")
    sizes = np.bincount(labels)
    best = np.flatnonzero(sizes == sizes.max())
    if best.size > 1:
        best = sorted(
            best, key=lambda c: min(_id_key(g.ids[i]) for i in np.flatnonzero(labels == c))
        )
    return _induced(g, np.flatnonzero(labels == best[0]))


def _without_edges(g: CitationGraph, drop_mask, src, dst) -> CitationGraph:
    keepers = ~drop_mask
    fwd_indptr, fwd_indices, bwd_indptr, bwd_indices = _csr_from_edges(
        g.n, src[keepers], dst[keepers]
    )
    return CitationGraph(
        ids=g.ids,
        years=g.years,
        fwd_indptr=fwd_indptr,
        fwd_indices=fwd_indices,
        bwd_indptr=bwd_indptr,
        bwd_indices=bwd_indices,
    )


def break_cycles(g: CitationGraph):
    """Delete a deterministic set of edges so the graph becomes acyclic.

    Within each strongly connected component, every edge pointing at a
    strictly newer paper is deleted (unknown years order after all known
    years). Components that remain cyclic lose their lexicographically
    largest (source id, target id) edge, one per component per round, until
    no cycle is left. Returns ``(dag, removed)`` where removed lists the
    deleted edges as (source id, target id) pairs.
    """
    removed = []
    cur = g
    while cur.m:
        _, labels = csgraph.connected_components(
            _scipy_adj(cur), directed=True, connection="strong"
        )
        sizes = np.bincount(labels)
        src, dst = _edge_arrays(cur)
        internal = (labels[src] == labels[dst]) & ((sizes[labels[src]] > 1) | (src == dst))
        if not internal.any():
            break
        years = cur.years
        newer = internal & (years[dst] > years[src])
        drop = newer.copy()
        has_year_edge = set(labels[src[newer]].tolist())
        tie_best = {}
        for e in np.flatnonzero(internal & ~newer):
            c = labels[src[e]]
            if c in has_year_edge:
                continue  # year rule already makes progress in this SCC
            key = (_id_key(cur.ids[src[e]]), _id_key(cur.ids[dst[e]]))
            if c not in tie_best or key > tie_best[c][0]:
                tie_best[c] = (key, e)
        for _, e in tie_best.values():
            drop[e] = True
        for e in np.flatnonzero(drop):
            removed.append((cur.ids[src[e]], cur.ids[dst[e]]))
        cur = _without_edges(cur, drop, src, dst)
    if cur is not g:
        cur.dropped_references = g.dropped_references
    return cur, removed


def references(g: CitationGraph, a) -> set:
    """First-order reference set R(a): papers a cites."""
    i = g.index_of(a)
    return {g.ids[j] for j in g.out_indices(i)}


def citations(g: CitationGraph, a) -> set:
    """First-order citation set C(a): papers citing a."""
    i = g.index_of(a)
    return {g.ids[j] for j in g.in_indices(i)}


def _bounded_reach(indptr, indices, start, k):
    """Node indices reachable from start within 1..k steps (start excluded)."""
    seen = {start}
    frontier = [start]
    out = []
    for _ in range(k):
        nxt = []
        for u in frontier:
            for v in indices[indptr[u] : indptr[u + 1]]:
                v = int(v)
                if v not in seen:
                    seen.add(v)
                    nxt.append(v)
        if not nxt:
            break
        out.extend(nxt)
        frontier = nxt
    return out


def extended_references(g: CitationGraph, a, k: int) -> set:
    """k-step reference set R^k(a): everything reachable in at most k hops."""
    if k < 1:
        raise ValueError(f"neighborhood order k must be >= 1, got {k}")
    i = g.index_of(a)
    return {g.ids[j] for j in _bounded_reach(g.fwd_indptr, g.fwd_indices, i, k)}


def extended_citations(g: CitationGraph, a, k: int) -> set:
    """k-step citation set C^k(a), the mirror of extended_references."""
    if k < 1:
        raise ValueError(f"neighborhood order k must be >= 1, got {k}")
    i = g.index_of(a)
    return {g.ids[j] for j in _bounded_reach(g.bwd_indptr, g.bwd_indices, i, k)}


def write_graph_cache(g: CitationGraph, path):
    """Binary snapshot: magic "LMG1", little-endian counts, ids, years, adjacency."""
    ids_blob = json.dumps(g.ids, ensure_ascii=False, separators=(",", ":")).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(CACHE_MAGIC)
        fh.write(struct.pack("<QQQ", g.n, g.m, len(ids_blob)))
        fh.write(ids_blob)
        fh.write(g.years.astype("<i8").tobytes())
        fh.write(g.fwd_indptr.astype("<i8").tobytes())
        fh.write(g.fwd_indices.astype("<i4").tobytes())
        fh.write(g.bwd_indptr.astype("<i8").tobytes())
        fh.write(g.bwd_indices.astype("<i4").tobytes())


def read_graph_cache(path) -> CitationGraph:
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != CACHE_MAGIC:
            raise ValueError(f"{path}: not a graph cache (bad magic {magic!r})")
        n, m, blob_len = struct.unpack("<QQQ", fh.read(24))
        ids = json.loads(fh.read(blob_len).decode("utf-8"))
        years = np.frombuffer(fh.read(8 * n), dtype="<i8").astype(np.int64)
        fwd_indptr = np.frombuffer(fh.read(8 * (n + 1)), dtype="<i8").astype(np.int64)
        fwd_indices = np.frombuffer(fh.read(4 * m), dtype="<i4").astype(np.int32)
        bwd_indptr = np.frombuffer(fh.read(8 * (n + 1)), dtype="<i8").astype(np.int64)
        bwd_indices = np.frombuffer(fh.read(4 * m), dtype="<i4").astype(np.int32)
    return CitationGraph(
        ids=ids,
        years=years,
        fwd_indptr=fwd_indptr,
        fwd_indices=fwd_indices,
        bwd_indptr=bwd_indptr,
        bwd_indices=bwd_indices,
    )
