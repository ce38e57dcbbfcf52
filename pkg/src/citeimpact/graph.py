"""Citation graph storage, ingestion and export.

Publications are interned to dense integer indices in order of first
appearance (edges first, then metadata-only ids). Both directions of the
adjacency are held as CSR arrays with each row sorted ascending, so the
per-publication reference and citer lists are zero-copy, read-only slices.
"""

from __future__ import annotations

import io
import logging
from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from pathlib import Path
from typing import TextIO, Union

import numpy as np

logger = logging.getLogger(__name__)

MIN_YEAR = 1000
MAX_YEAR = 3000
META_HEADER = ("id", "year", "group", "doctype")

PathOrFile = Union[str, Path, TextIO]


class ParseError(ValueError):
    """Malformed edge or metadata input. ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        self.line = line
        self.source = source
        where = ""
        if source:
            where += f"{source}:"
        if line is not None:
            where += f"line {line}: "
        elif where:
            where += " "
        super().__init__(where + message)


class MetadataConflict(ParseError):
    """The same id appears in metadata with different values."""


@dataclass(frozen=True)
class PublicationMeta:
    id: str
    year: int | None = None
    group: str | None = None
    doctype: str | None = None

    def __post_init__(self) -> None:
        if self.year is not None and not MIN_YEAR <= self.year <= MAX_YEAR:
            raise ValueError(f"year {self.year} outside [{MIN_YEAR}, {MAX_YEAR}]")


@dataclass(frozen=True)
class ValidationReport:
    duplicate_edges_dropped: int = 0
    self_loops_dropped: int = 0
    temporal_violations: int = 0
    unknown_meta_ids: int = 0

    def as_dict(self) -> dict[str, int]:
        return {
            "duplicate_edges_dropped": self.duplicate_edges_dropped,
            "self_loops_dropped": self.self_loops_dropped,
            "temporal_violations": self.temporal_violations,
            "unknown_meta_ids": self.unknown_meta_ids,
        }

    def summary(self) -> str:
        return " ".join(f"{k}={v}" for k, v in self.as_dict().items())


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


class CitationGraph:
    """Immutable bidirectional citation graph over dense publication indices.

    ``references(f)`` lists the publications ``f`` cites (restricted to the
    dataset); ``citers(f)`` lists the publications citing ``f``. Both are
    ascending numpy views that must not be modified.
    """

    __slots__ = ("_tokens", "_index", "ref_ptr", "ref_idx", "cit_ptr", "cit_idx", "_meta")

    def __init__(self, tokens: list[str], ref_ptr: np.ndarray, ref_idx: np.ndarray,
                 cit_ptr: np.ndarray, cit_idx: np.ndarray,
                 meta: list[PublicationMeta | None] | None = None):
        self._tokens = tuple(tokens)
        self._index = {t: i for i, t in enumerate(self._tokens)}
        self.ref_ptr = _readonly(ref_ptr)
        self.ref_idx = _readonly(ref_idx)
        self.cit_ptr = _readonly(cit_ptr)
        self.cit_idx = _readonly(cit_idx)
        self._meta = tuple(meta) if meta is not None else (None,) * len(self._tokens)

    def __setattr__(self, name, value):
        if hasattr(self, name):
            raise AttributeError(f"CitationGraph is immutable; cannot set {name!r}")
        object.__setattr__(self, name, value)

    def __repr__(self) -> str:
        return f"CitationGraph(n={self.n}, edge_count={self.edge_count})"

    @property
    def n(self) -> int:
        return len(self._tokens)

    @property
    def edge_count(self) -> int:
        return int(self.ref_idx.shape[0])

    @property
    def tokens(self) -> tuple[str, ...]:
        return self._tokens

    def token(self, f: int) -> str:
        self._check(f)
        return self._tokens[f]

    def index(self, token: str) -> int:
        try:
            return self._index[token]
        except KeyError:
            raise KeyError(f"unknown publication id {token!r}") from None

    def __contains__(self, token: object) -> bool:
        return token in self._index

    def _check(self, f: int) -> None:
        if not 0 <= f < len(self._tokens):
            raise IndexError(f"publication index {f} out of range [0, {len(self._tokens)})")

    def citers(self, f: int) -> np.ndarray:
        self._check(f)
        return self.cit_idx[self.cit_ptr[f]:self.cit_ptr[f + 1]]

    def references(self, f: int) -> np.ndarray:
        self._check(f)
        return self.ref_idx[self.ref_ptr[f]:self.ref_ptr[f + 1]]

    def citation_counts(self) -> np.ndarray:
        return np.diff(self.cit_ptr)

    def meta(self, f: int) -> PublicationMeta | None:
        self._check(f)
        return self._meta[f]

    @property
    def has_meta(self) -> bool:
        return any(m is not None for m in self._meta)

    def iter_edges(self) -> Iterator[tuple[str, str]]:
        """Edges as token pairs, ordered by (citing index, cited index)."""
        toks = self._tokens
        ptr = self.ref_ptr.tolist()
        idx = self.ref_idx.tolist()
        for c in range(self.n):
            tc = toks[c]
            for k in range(ptr[c], ptr[c + 1]):
                yield tc, toks[idx[k]]

    def write_edges(self, fh: TextIO) -> None:
        for c, d in self.iter_edges():
            fh.write(f"{c}\t{d}\n")

    def write_meta(self, fh: TextIO) -> None:
        fh.write("\t".join(META_HEADER) + "\n")
        for m in self._meta:
            if m is None:
                continue
            year = "" if m.year is None else str(m.year)
            fh.write(f"{m.id}\t{year}\t{m.group or ''}\t{m.doctype or ''}\n")


def _csr(rows: np.ndarray, cols: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    # rows/cols must already be sorted by (row, col).
    ptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(rows, minlength=n), out=ptr[1:])
    return ptr, cols.astype(np.int32 if n < 2**31 else np.int64)


def _assemble(src: np.ndarray, dst: np.ndarray, tokens: list[str],
              meta: list[PublicationMeta | None] | None) -> tuple[CitationGraph, int, int]:
    n = len(tokens)
    src = np.asarray(src, dtype=np.int64)
    dst = np.asarray(dst, dtype=np.int64)
    loops = src == dst
    n_loops = int(loops.sum())
    if n_loops:
        src = src[~loops]
        dst = dst[~loops]
    keys = np.unique(src * n + dst)
    n_dups = int(src.shape[0] - keys.shape[0])
    src, dst = np.divmod(keys, n) if n else (keys, keys)
    ref_ptr, ref_idx = _csr(src, dst, n)
    rkeys = np.sort(dst * n + src)
    cdst, csrc = np.divmod(rkeys, n) if n else (rkeys, rkeys)
    cit_ptr, cit_idx = _csr(cdst, csrc, n)
    return CitationGraph(tokens, ref_ptr, ref_idx, cit_ptr, cit_idx, meta), n_dups, n_loops


def _temporal_violations(g: CitationGraph) -> int:
    years = np.array([(m.year if m is not None and m.year is not None else -1)
                      for m in g._meta], dtype=np.int64)
    if years.size == 0 or (years < 0).all():
        return 0
    src = np.repeat(np.arange(g.n, dtype=np.int64), np.diff(g.ref_ptr))
    ys = years[src]
    yd = years[g.ref_idx]
    return int(((ys >= 0) & (yd >= 0) & (ys < yd)).sum())


def _merge_meta(rows: Iterable[PublicationMeta]) -> dict[str, PublicationMeta]:
    merged: dict[str, PublicationMeta] = {}
    for m in rows:
        prev = merged.get(m.id)
        if prev is None:
            merged[m.id] = m
        elif prev != m:
            raise MetadataConflict(f"conflicting metadata for id {m.id!r}: {prev} vs {m}")
    return merged


def build_graph(edges: Iterable[tuple[str, str]],
                meta: Iterable[PublicationMeta] | None = None
                ) -> tuple[CitationGraph, ValidationReport]:
    """Intern tokens, drop self-loops and duplicate edges, and build CSR rows.

    ``edges`` yields ``(citing, cited)`` token pairs. Raises ``ParseError``
    (with the 1-based position of the offending pair) for empty tokens and
    ``MetadataConflict`` for a metadata id given twice with different values.
    """
    index: dict[str, int] = {}
    tokens: list[str] = []
    src: list[int] = []
    dst: list[int] = []
    for k, pair in enumerate(edges, start=1):
        try:
            c, d = pair
        except (TypeError, ValueError):
            raise ParseError(f"expected a (citing, cited) pair, got {pair!r}", line=k) from None
        if not c or not d:
            raise ParseError("empty publication id", line=k)
        i = index.get(c)
        if i is None:
            i = index[c] = len(tokens)
            tokens.append(c)
        j = index.get(d)
        if j is None:
            j = index[d] = len(tokens)
            tokens.append(d)
        src.append(i)
        dst.append(j)
    n_edge_tokens = len(tokens)

    meta_list: list[PublicationMeta | None] | None = None
    unknown = 0
    if meta is not None:
        merged = _merge_meta(meta)
        for t in merged:
            if t not in index:
                index[t] = len(tokens)
                tokens.append(t)
        unknown = len(tokens) - n_edge_tokens
        meta_list = [merged.get(t) for t in tokens]

    g, n_dups, n_loops = _assemble(np.array(src, dtype=np.int64),
                                   np.array(dst, dtype=np.int64), tokens, meta_list)
    report = ValidationReport(
        duplicate_edges_dropped=n_dups,
        self_loops_dropped=n_loops,
        temporal_violations=_temporal_violations(g) if meta_list is not None else 0,
        unknown_meta_ids=unknown,
    )
    return g, report


def graph_from_index_edges(src: np.ndarray, dst: np.ndarray, tokens: list[str],
                           meta: Iterable[PublicationMeta] | None = None) -> CitationGraph:
    """Build from edges already expressed as dense indices into ``tokens``.

    Same cleaning as :func:`build_graph`; skips token interning, which makes
    it the fast path for generated networks.
    """
    meta_list = None
    if meta is not None:
        by_id = _merge_meta(meta)
        meta_list = [by_id.get(t) for t in tokens]
    g, _, _ = _assemble(src, dst, list(tokens), meta_list)
    return g


# -- file formats -------------------------------------------------------------

def _open(source: PathOrFile) -> tuple[TextIO, str, bool]:
    if isinstance(source, (str, Path)):
        return open(source, encoding="utf-8", newline=""), str(source), True
    return source, getattr(source, "name", None) or "<stream>", False


def read_edges(source: PathOrFile) -> Iterator[tuple[str, str]]:
    """Yield ``(citing, cited)`` from a tab-separated edge list.

    Lines starting with ``#`` and blank lines are skipped.
    """
    fh, name, owned = _open(source)
    try:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\r\n")
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ParseError(f"expected 2 tab-separated columns, got {len(parts)}",
                                 line=lineno, source=name)
            c, d = parts
            if not c or not d:
                raise ParseError("empty publication id", line=lineno, source=name)
            yield c, d
    finally:
        if owned:
            fh.close()


def read_meta(source: PathOrFile) -> Iterator[PublicationMeta]:
    """Yield metadata rows from a TSV with header ``id year group doctype``."""
    fh, name, owned = _open(source)
    try:
        header_seen = False
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\r\n")
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if not header_seen:
                if tuple(parts) != META_HEADER:
                    raise ParseError(f"expected header {'<TAB>'.join(META_HEADER)!r}",
                                     line=lineno, source=name)
                header_seen = True
                continue
            if len(parts) != len(META_HEADER):
                raise ParseError(f"expected {len(META_HEADER)} columns, got {len(parts)}",
                                 line=lineno, source=name)
            pid, year_s, group, doctype = parts
            if not pid:
                raise ParseError("empty publication id", line=lineno, source=name)
            year = None
            if year_s:
                try:
                    year = int(year_s)
                except ValueError:
                    raise ParseError(f"year {year_s!r} is not an integer",
                                     line=lineno, source=name) from None
                if not MIN_YEAR <= year <= MAX_YEAR:
                    raise ParseError(f"year {year} outside [{MIN_YEAR}, {MAX_YEAR}]",
                                     line=lineno, source=name)
            yield PublicationMeta(pid, year, group or None, doctype or None)
    finally:
        if owned:
            fh.close()


def load_graph(edges: PathOrFile, meta: PathOrFile | None = None
               ) -> tuple[CitationGraph, ValidationReport]:
    return build_graph(read_edges(edges), read_meta(meta) if meta is not None else None)


def graph_to_text(g: CitationGraph) -> str:
    buf = io.StringIO()
    g.write_edges(buf)
    return buf.getvalue()
