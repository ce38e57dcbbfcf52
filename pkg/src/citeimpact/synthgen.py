"""Seeded synthetic citation networks with preferential attachment.

Publications arrive one at a time. Publication ``i`` draws a Poisson reference
count and cites that many distinct earlier publications, each chosen with
probability proportional to ``(in_degree + 1) ** exponent``. Sampling runs on
a Fenwick tree of weights; a publication's picks are zero-weighted until it is
finished, which gives sampling without replacement and no rejection loop.

Randomness comes from numpy's PCG64 only. The number of uniforms consumed is
fixed by the reference counts, so the output is a pure function of the
parameters and seed.
"""

from __future__ import annotations

import logging
from collections.abc import Iterator
from dataclasses import dataclass
from typing import TextIO

import numpy as np
from numba import njit

from citeimpact.graph import CitationGraph, PublicationMeta, graph_from_index_edges

logger = logging.getLogger(__name__)

GENERATOR_VERSION = "synthgen-1"
RNG_NAME = "numpy.PCG64"
FIRST_YEAR = 1980
LAST_YEAR = 2017
DOCTYPE = "article"

_UNIFORM_BLOCK = 1 << 22


@dataclass(frozen=True)
class SynthParams:
    n_pubs: int
    refs_mean: float = 20.0
    pref_attach_exponent: float = 1.0
    n_groups: int = 5
    seed: int = 0

    def __post_init__(self) -> None:
        if int(self.n_pubs) != self.n_pubs or self.n_pubs < 1:
            raise ValueError(f"n_pubs must be a positive integer, got {self.n_pubs!r}")
        if not self.refs_mean >= 0:
            raise ValueError(f"refs_mean must be >= 0, got {self.refs_mean!r}")
        if not self.pref_attach_exponent >= 0:
            raise ValueError(
                f"pref_attach_exponent must be >= 0, got {self.pref_attach_exponent!r}"
            )
        if self.n_groups < 0:
            raise ValueError(f"n_groups must be >= 0, got {self.n_groups!r}")
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must fit in 64 unsigned bits, got {self.seed!r}")


@njit(cache=True)
def _fenwick_add(tree, i, delta):
    n = tree.shape[0] - 1
    i += 1
    while i <= n:
        tree[i] += delta
        i += i & (-i)


@njit(cache=True)
def _fenwick_total(tree, count):
    s = 0.0
    i = count
    while i > 0:
        s += tree[i]
        i -= i & (-i)
    return s


@njit(cache=True)
def _fenwick_find(tree, count, target, top_bit):
    # Largest pos with prefix(pos) <= target, restricted to the first ``count`` leaves.
    pos = 0
    step = top_bit
    while step > 0:
        nxt = pos + step
        if nxt <= count and tree[nxt] <= target:
            pos = nxt
            target -= tree[nxt]
        step >>= 1
    return pos


@njit(cache=True)
def _attach(ref_counts, uniforms, u_pos, start, stop, tree, weight, indeg,
            exponent, top_bit, dst, d_pos):
    # Processes publications [start, stop); returns the updated write cursors.
    for i in range(start, stop):
        k = ref_counts[i]
        first = d_pos
        for _ in range(k):
            total = _fenwick_total(tree, i)
            j = _fenwick_find(tree, i, uniforms[u_pos] * total, top_bit)
            u_pos += 1
            if j >= i or weight[j] == 0.0:
                # Rounding left us on an exhausted leaf; take the nearest live one.
                j = min(j, i - 1)
                while j > 0 and weight[j] == 0.0:
                    j -= 1
                while weight[j] == 0.0:
                    j += 1
            dst[d_pos] = j
            d_pos += 1
            _fenwick_add(tree, j, -weight[j])
            weight[j] = 0.0
        for p in range(first, d_pos):
            j = dst[p]
            indeg[j] += 1
            w = (indeg[j] + 1.0) ** exponent
            weight[j] = w
            _fenwick_add(tree, j, w)
        w0 = 1.0
        weight[i] = w0
        _fenwick_add(tree, i, w0)
    return u_pos, d_pos


@dataclass(frozen=True)
class SynthNetwork:
    """A generated network, stored by publication number (creation order).

    ``src[e]`` cites ``dst[e]``; edges are grouped by citing publication in
    creation order.
    """

    params: SynthParams
    src: np.ndarray
    dst: np.ndarray
    years: np.ndarray

    @property
    def n_pubs(self) -> int:
        return self.params.n_pubs

    @property
    def edge_count(self) -> int:
        return int(self.src.shape[0])

    def token(self, i: int) -> str:
        width = len(str(self.params.n_pubs - 1))
        return f"P{i:0{width}d}"

    def tokens(self) -> list[str]:
        width = len(str(self.params.n_pubs - 1))
        return [f"P{i:0{width}d}" for i in range(self.params.n_pubs)]

    def group(self, i: int) -> str | None:
        if self.params.n_groups == 0:
            return None
        return f"G{i % self.params.n_groups}"

    def provenance(self) -> str:
        p = self.params
        return (
            f"# generator={GENERATOR_VERSION} rng={RNG_NAME} seed={p.seed} "
            f"n_pubs={p.n_pubs} refs_mean={p.refs_mean!r} "
            f"exponent={p.pref_attach_exponent!r} n_groups={p.n_groups}"
        )

    def edges(self) -> Iterator[tuple[str, str]]:
        toks = self.tokens()
        for s, d in zip(self.src.tolist(), self.dst.tolist()):
            yield toks[s], toks[d]

    def meta(self) -> Iterator[PublicationMeta]:
        toks = self.tokens()
        for i, year in enumerate(self.years.tolist()):
            yield PublicationMeta(toks[i], year, self.group(i), DOCTYPE)

    def write_edges(self, fh: TextIO) -> None:
        fh.write(self.provenance() + "\n")
        toks = self.tokens()
        src = self.src.tolist()
        dst = self.dst.tolist()
        step = 1 << 16
        for a in range(0, len(src), step):
            fh.write("".join(
                f"{toks[s]}\t{toks[d]}\n" for s, d in zip(src[a:a + step], dst[a:a + step])
            ))

    def write_meta(self, fh: TextIO) -> None:
        fh.write(self.provenance() + "\n")
        fh.write("id\tyear\tgroup\tdoctype\n")
        for m in self.meta():
            fh.write(f"{m.id}\t{m.year}\t{m.group or ''}\t{m.doctype}\n")

    def to_graph(self) -> CitationGraph:
        """Build the graph directly, with dense index = publication number."""
        meta = list(self.meta())
        return graph_from_index_edges(self.src, self.dst, self.tokens(), meta)


def generate(params: SynthParams) -> SynthNetwork:
    n = params.n_pubs
    rng = np.random.Generator(np.random.PCG64(params.seed))
    ref_counts = rng.poisson(params.refs_mean, size=n).astype(np.int64)
    # Publication i can only cite the i publications before it.
    np.minimum(ref_counts, np.arange(n, dtype=np.int64), out=ref_counts)
    m = int(ref_counts.sum())

    dst = np.empty(m, dtype=np.int64)
    tree = np.zeros(n + 1, dtype=np.float64)
    weight = np.zeros(n, dtype=np.float64)
    indeg = np.zeros(n, dtype=np.int64)
    top_bit = 1 << (n.bit_length() - 1)
    exponent = float(params.pref_attach_exponent)

    # Uniform draws are taken in blocks aligned to publication boundaries.
    ends = np.cumsum(ref_counts)
    start = 0
    d_pos = 0
    while start < n:
        consumed = int(ends[start - 1]) if start else 0
        stop = int(np.searchsorted(ends, consumed + _UNIFORM_BLOCK, side="right"))
        stop = max(stop, start + 1)
        stop = min(stop, n)
        need = int(ends[stop - 1]) - consumed
        uniforms = rng.random(need)
        _, d_pos = _attach(ref_counts, uniforms, 0, start, stop, tree, weight, indeg,
                           exponent, top_bit, dst, d_pos)
        start = stop

    src = np.repeat(np.arange(n, dtype=np.int64), ref_counts)
    span = LAST_YEAR - FIRST_YEAR + 1
    years = FIRST_YEAR + (np.arange(n, dtype=np.int64) * span) // n
    logger.debug("generated %d publications, %d edges", n, m)
    return SynthNetwork(params, src, dst, years)
