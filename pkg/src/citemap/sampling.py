"""Node sampling: pick the subset the O(n^2) similarity stage can afford."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np


@dataclass
class Sample:
    """An ordered node subset plus the provenance needed to reproduce it."""

    ids: list
    selector: str
    seed: int
    parent_size: int


def _pick(pool, n, seed):
    # numpy's default generator (PCG64) keeps samples portable across platforms
    rng = np.random.default_rng(seed)
    chosen = rng.choice(len(pool), size=n, replace=False)
    return [pool[i] for i in chosen]


def sample_by_keyword(records, keyword, n, seed, allowed_ids=None) -> Sample:
    """Seeded uniform n-subset of the papers carrying a keyword.

    Matching is exact on the stored tag (case sensitive, whitespace
    trimmed). If fewer than n papers match, all matches are returned with a
    warning; zero matches raise. ``allowed_ids`` restricts candidates, e.g.
    to the nodes that survived graph preprocessing.
    """
    if n < 1:
        raise ValueError(f"sample size must be >= 1, got {n}")
    kw = keyword.strip()
    pool = []
    total = 0
    for rec in records:
        if allowed_ids is not None and rec.id not in allowed_ids:
            continue
        total += 1
        if any(tag.strip() == kw for tag in rec.keywords):
            pool.append(rec.id)
    if not pool:
        raise ValueError(f"no papers tagged with keyword {kw!r}")
    if len(pool) <= n:
        if len(pool) < n:
            warnings.warn(
                f"keyword {kw!r}: only {len(pool)} matches for requested {n}", stacklevel=2
            )
        ids = pool
    else:
        ids = _pick(pool, n, seed)
    return Sample(ids=ids, selector=f"keyword:{kw}", seed=seed, parent_size=total)


def sample_random(records, n, seed, allowed_ids=None) -> Sample:
    """Seeded uniform n-subset of all papers; n larger than the pool raises."""
    if n < 1:
        raise ValueError(f"sample size must be >= 1, got {n}")
    pool = [
        rec.id
        for rec in records
        if allowed_ids is None or rec.id in allowed_ids
    ]
    if n > len(pool):
        raise ValueError(f"cannot sample {n} from {len(pool)} papers")
    return Sample(
        ids=_pick(pool, n, seed), selector="random", seed=seed, parent_size=len(pool)
    )


def write_sample(sample: Sample, path, corpus_hash="-", prefix=None):
    """Write one id per line after a tab-separated "#" header line.

    The header records selector, seed, parent population size and a corpus
    content hash so a sample file is self-describing.
    """
    lead = f"# {prefix.strip()}" if prefix else "#"
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(
            f"{lead}\tselector={sample.selector}\tseed={sample.seed}"
            f"\tparent={sample.parent_size}\tcorpus={corpus_hash}\n"
        )
        for a in sample.ids:
            fh.write(f"{a}\n")


def read_sample(path) -> Sample:
    """Read a sample file back; digit-only ids are restored as integers."""
    selector, seed, parent = "unknown", 0, 0
    ids = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                for tok in line.split("\t"):
                    if tok.startswith("selector="):
                        selector = tok[len("selector=") :]
                    elif tok.startswith("seed="):
                        seed = int(tok[len("seed=") :])
                    elif tok.startswith("parent="):
                        parent = int(tok[len("parent=") :])
                continue
            ids.append(int(line) if line.isdigit() else line)
    return Sample(ids=ids, selector=selector, seed=seed, parent_size=parent)
