"""Corpus parsing: newline-delimited bibliographic records and edge lists."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field

log = logging.getLogger(__name__)

# Sorts after every real publication year, so "unknown" orders last.
YEAR_UNKNOWN = 2**31 - 1


@dataclass
class PaperRecord:
    """One bibliographic item: identifier, metadata and outgoing references.

    Ids are opaque (int or str) and must be unique within a corpus. The
    keyword list holds the descriptive subject tags attached to the paper
    (it may be empty); references may point at ids the corpus does not
    contain, which the graph builder later drops and counts.
    """

    id: object
    title: str = ""
    year: int | None = None
    keywords: list[str] = field(default_factory=list)
    references: list = field(default_factory=list)


def _coerce_year(value):
    try:
        y = int(value)
    except (TypeError, ValueError):
        return None
    return y if -10000 < y < 10000 else None


def _parse_keywords(obj):
    raw = obj.get("fos", obj.get("keywords"))
    if not isinstance(raw, list):
        return []
    tags = []
    for item in raw:
        if isinstance(item, dict):
            item = item.get("name")
        if isinstance(item, str):
            item = item.strip()
            if item:
                tags.append(item)
    return tags


def _parse_dblp_line(line):
    """Parse one record line; returns a PaperRecord or None if malformed.

    Raw DBLP v12 dumps wrap the records in a JSON array, so leading/trailing
    commas and bare bracket lines are tolerated.
    """
    text = line.strip().strip(",")
    if not text or text in ("[", "]"):
        return False  # structural, not a record
    try:
        obj = json.loads(text)
    except json.JSONDecodeError:
        return None
    if not isinstance(obj, dict) or "id" not in obj:
        return None
    refs = obj.get("references")
    if not isinstance(refs, list):
        refs = []
    return PaperRecord(
        id=obj["id"],
        title=str(obj.get("title", "")),
        year=_coerce_year(obj.get("year")),
        keywords=_parse_keywords(obj),
        references=list(dict.fromkeys(refs)),
    )


class CorpusReader:
    """Iterates PaperRecords from a one-object-per-line corpus file.

    Malformed lines are skipped and counted in ``.skipped`` (reset at the
    start of each iteration). The reader can be iterated more than once.
    """

    def __init__(self, path):
        self.path = path
        self.skipped = 0
        with open(path, "rb"):
            pass  # unreadable corpus is fatal up front

    def __iter__(self):
        self.skipped = 0
        with open(self.path, encoding="utf-8") as fh:
            for line in fh:
                rec = _parse_dblp_line(line)
                if rec is None:
                    self.skipped += 1
                elif rec is not False:
                    yield rec
        if self.skipped:
            log.warning("%s: skipped %d malformed line(s)", self.path, self.skipped)


def _coerce_token(tok):
    return int(tok) if tok.isdigit() else tok


class EdgeListReader:
    """Iterates PaperRecords reconstructed from a "src<TAB>dst" edge list.

    Every id seen on either side of an edge becomes a record, in first-seen
    order. An optional metadata file (one JSON object per line with id,
    title, year, keywords) fills in the record fields. Digit-only tokens
    are read as integer ids.
    """

    def __init__(self, path, meta=None):
        self.path = path
        self.meta = meta
        self.skipped = 0
        with open(path, "rb"):
            pass

    def _load(self):
        self.skipped = 0
        order = []
        refs = {}
        with open(self.path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                parts = line.split("\t")
                if len(parts) != 2 or not parts[0] or not parts[1]:
                    self.skipped += 1
                    continue
                src, dst = (_coerce_token(p.strip()) for p in parts)
                for node in (src, dst):
                    if node not in refs:
                        refs[node] = []
                        order.append(node)
                if dst not in refs[src]:
                    refs[src].append(dst)
        meta = {}
        if self.meta:
            with open(self.meta, encoding="utf-8") as fh:
                for line in fh:
                    rec = _parse_dblp_line(line)
                    if rec is None:
                        self.skipped += 1
                    elif rec is not False:
                        meta[rec.id] = rec
        records = []
        for node in order:
            base = meta.get(node)
            records.append(
                PaperRecord(
                    id=node,
                    title=base.title if base else "",
                    year=base.year if base else None,
                    keywords=list(base.keywords) if base else [],
                    references=refs[node],
                )
            )
        return records

    def __iter__(self):
        records = self._load()
        if self.skipped:
            log.warning("%s: skipped %d malformed line(s)", self.path, self.skipped)
        return iter(records)


def load_corpus(path, schema="dblp", meta=None):
    """Open a corpus file and return a re-iterable reader of PaperRecords.

    schema "dblp" reads newline-delimited JSON objects with fields id,
    title, year, references and fos/keywords (names, or {name, weight}
    dicts). schema "edgelist" reads "src<TAB>dst" lines plus an optional
    metadata file. An unreadable file raises immediately; malformed lines
    are skipped and counted on the returned reader.
    """
    if schema == "dblp":
        if meta:
            raise ValueError("metadata file is only valid with schema='edgelist'")
        return CorpusReader(path)
    if schema == "edgelist":
        return EdgeListReader(path, meta)
    raise ValueError(f"unknown corpus schema: {schema!r}")
