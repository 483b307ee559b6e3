"""Classic bibliographic and co-citation coupling with cosine/Jaccard scores."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import sparse

from .graph import CitationGraph, extended_citations, extended_references


@dataclass
class CoupledSet:
    """Papers coupled with a source through shared k-order neighbors."""

    source: object
    partners: set
    k: int
    direction: str  # "bibliographic" | "cocitation"


def cosine_sim(a, b) -> float:
    """Set cosine |A∩B| / sqrt(|A|·|B|); 0 if either set is empty."""
    if not a or not b:
        return 0.0
    inter = len(a & b)
    if not inter:
        return 0.0
    return min(1.0, inter / math.sqrt(len(a) * len(b)))


def jaccard_sim(a, b) -> float:
    """Set Jaccard |A∩B| / |A∪B|; 0 when both sets are empty."""
    if not a and not b:
        return 0.0
    return min(1.0, len(a & b) / len(a | b))


def bc_set(g: CitationGraph, a, k: int = 1) -> CoupledSet:
    """Papers bibliographically coupled with a: citers of anything in R^k(a).

    The source itself is excluded from the partner set.
    """
    partners = set()
    for b in extended_references(g, a, k):
        partners |= extended_citations(g, b, k)
    partners.discard(a)
    return CoupledSet(a, partners, k, "bibliographic")


def cc_set(g: CitationGraph, a, k: int = 1) -> CoupledSet:
    """Papers co-citation coupled with a: references of anything in C^k(a)."""
    partners = set()
    for b in extended_citations(g, a, k):
        partners |= extended_references(g, b, k)
    partners.discard(a)
    return CoupledSet(a, partners, k, "cocitation")


_MEASURES = {"cosine": cosine_sim, "jaccard": jaccard_sim}


def bc_similarity(g: CitationGraph, a, b, k: int = 1, measure: str = "cosine") -> float:
    """Overlap score between the k-order reference sets of a and b."""
    try:
        score = _MEASURES[measure]
    except KeyError:
        raise ValueError(f"unknown similarity measure: {measure!r}") from None
    return score(extended_references(g, a, k), extended_references(g, b, k))


def cc_similarity(g: CitationGraph, a, b, k: int = 1, measure: str = "cosine") -> float:
    """Overlap score between the k-order citation sets of a and b."""
    try:
        score = _MEASURES[measure]
    except KeyError:
        raise ValueError(f"unknown similarity measure: {measure!r}") from None
    return score(extended_citations(g, a, k), extended_citations(g, b, k))


def _reach_matrix(g, idx, k, indptr, indices):
    """Boolean CSR of the <=k step neighborhoods for the given source rows."""
    n = g.n
    adj = sparse.csr_matrix(
        (np.ones(indices.size, dtype=np.float64), indices, indptr), shape=(n, n)
    )
    rows = sparse.csr_matrix(
        (np.ones(idx.size), idx, np.arange(idx.size + 1)), shape=(idx.size, n)
    )
    frontier = rows @ adj
    frontier.data[:] = 1.0
    reach = frontier.copy()
    for _ in range(k - 1):
        frontier = frontier @ adj
        if frontier.nnz == 0:
            break
        frontier.data[:] = 1.0
        reach = reach + frontier
        reach.data[:] = 1.0
    return reach


def coupling_matrix(
    g: CitationGraph,
    sample,
    k: int = 1,
    measure: str = "cosine",
    direction: str = "references",
):
    """Dense pairwise coupling matrix over a node sample.

    Scores every pair with the set measure applied to k-order reference
    sets (direction "references", i.e. bibliographic coupling) or citation
    sets (direction "citations"). Diagonal is 1, result exactly symmetric.
    Returns a PairwiseMatrix of kind "similarity".
    """
    from .diffusion import PairwiseMatrix  # local import, avoids module cycle

    if measure not in _MEASURES:
        raise ValueError(f"unknown similarity measure: {measure!r}")
    sample = list(sample)
    if len(set(sample)) != len(sample):
        raise ValueError("sample contains duplicate ids")
    idx = np.asarray([g.index_of(a) for a in sample], dtype=np.int64)
    if direction == "references":
        indptr, indices = g.fwd_indptr, g.fwd_indices
    elif direction == "citations":
        indptr, indices = g.bwd_indptr, g.bwd_indices
    else:
        raise ValueError(f"direction must be 'references' or 'citations', got {direction!r}")
    reach = _reach_matrix(g, idx, k, indptr, indices)
    counts = np.asarray((reach @ reach.T).todense(), dtype=np.float64)
    sizes = np.asarray(reach.sum(axis=1)).ravel()
    if measure == "cosine":
        denom = np.sqrt(np.outer(sizes, sizes))
    else:
        denom = sizes[:, None] + sizes[None, :] - counts
    with np.errstate(divide="ignore", invalid="ignore"):
        vals = np.where(denom > 0, counts / denom, 0.0)
    upper = np.triu(vals, 1)
    vals = upper + upper.T
    np.fill_diagonal(vals, 1.0)
    np.clip(vals, 0.0, 1.0, out=vals)
    return PairwiseMatrix(ids=sample, values=vals, kind="similarity")
