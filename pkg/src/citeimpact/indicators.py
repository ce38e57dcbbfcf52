"""Per-citer profiles and the 13 citation impact indicators.

For a focal publication ``f`` and a citer ``c``:

* ``r_citing(c)`` counts references of ``c`` that also cite ``f``
  (depth/breadth side);
* ``r_cited(c)`` counts references of ``c`` that ``f`` also cites
  (dependence/independence side).

The absolute indicators are tallies of these over all citers, and the
relative ones divide by the citation count ``cp``. Relative indicators are
``None`` when ``cp == 0``.
"""

from __future__ import annotations

import logging
import os
from collections.abc import Sequence
from concurrent.futures import Executor, ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from citeimpact import _kernels as K
from citeimpact.graph import CitationGraph

logger = logging.getLogger(__name__)

DEFAULT_MIN_CP = 100

COUNT_FIELDS = (
    "cp",
    "cp_rciting_eq0",
    "cp_rciting_gt0",
    "tr_citing",
    "cp_rcited_eq0",
    "cp_rcited_gt0",
    "tr_cited",
)
RELATIVE_FIELDS = (
    "pcp_rciting_eq0",
    "pcp_rciting_gt0",
    "mr_citing",
    "pcp_rcited_eq0",
    "pcp_rcited_gt0",
    "mr_cited",
)
# Column order of the indicator CSV.
INDICATOR_NAMES = (
    "cp",
    "cp_rciting_eq0",
    "cp_rciting_gt0",
    "tr_citing",
    "pcp_rciting_eq0",
    "pcp_rciting_gt0",
    "mr_citing",
    "cp_rcited_eq0",
    "cp_rcited_gt0",
    "tr_cited",
    "pcp_rcited_eq0",
    "pcp_rcited_gt0",
    "mr_cited",
)


@dataclass(frozen=True)
class CiterProfile:
    citer: int
    r_citing: int
    r_cited: int


@dataclass(frozen=True)
class IndicatorRecord:
    """Indicators of one focal publication.

    ``pub`` is the dense index and ``pub_id`` the external token. The six
    relative fields are ``None`` (undefined) for uncited publications.
    """

    pub: int
    pub_id: str
    cp: int
    cp_rciting_eq0: int
    cp_rciting_gt0: int
    tr_citing: int
    cp_rcited_eq0: int
    cp_rcited_gt0: int
    tr_cited: int
    pcp_rciting_eq0: float | None
    pcp_rciting_gt0: float | None
    mr_citing: float | None
    pcp_rcited_eq0: float | None
    pcp_rcited_gt0: float | None
    mr_cited: float | None

    def get(self, name: str) -> int | float | None:
        if name not in INDICATOR_NAMES:
            raise KeyError(f"unknown indicator {name!r}")
        return getattr(self, name)

    def as_dict(self) -> dict:
        d = asdict(self)
        del d["pub"]
        return d


def check_indicator(name: str) -> str:
    if name not in INDICATOR_NAMES:
        raise ValueError(
            f"unknown indicator {name!r}; expected one of: {', '.join(INDICATOR_NAMES)}"
        )
    return name


def record_from_counts(pub: int, pub_id: str, counts: Sequence[int]) -> IndicatorRecord:
    cp, c_eq0, c_gt0, tr_c, d_eq0, d_gt0, tr_d = (int(x) for x in counts)
    if cp > 0:
        rel = (c_eq0 / cp, c_gt0 / cp, tr_c / cp, d_eq0 / cp, d_gt0 / cp, tr_d / cp)
    else:
        rel = (None,) * 6
    return IndicatorRecord(pub, pub_id, cp, c_eq0, c_gt0, tr_c, d_eq0, d_gt0, tr_d, *rel)


def citer_profile(g: CitationGraph, f: int, c: int) -> CiterProfile:
    """Profile of citer ``c`` with respect to focal ``f``.

    ``f`` itself sits in ``references(c)`` but never in ``citers(f)`` or
    ``references(f)`` (no self-loops), so no exclusion is needed.
    """
    citers = g.citers(f)
    refs_c = g.references(c)
    pos = int(np.searchsorted(citers, c))
    if pos >= citers.shape[0] or citers[pos] != c:
        raise ValueError(f"{g.token(c)!r} does not cite {g.token(f)!r}")
    return CiterProfile(
        c,
        int(K.intersect_count(refs_c, citers)),
        int(K.intersect_count(refs_c, g.references(f))),
    )


def profile_distribution(g: CitationGraph, f: int) -> list[CiterProfile]:
    """One profile per citer of ``f``, ordered by citer index."""
    citers = g.citers(f)
    out = np.zeros((citers.shape[0], 2), dtype=np.int64)
    K.citer_profiles(g.ref_ptr, g.ref_idx, g.cit_ptr, g.cit_idx, f, out)
    return [CiterProfile(int(c), int(a), int(b))
            for c, (a, b) in zip(citers.tolist(), out.tolist())]


def compute_indicators(g: CitationGraph, f: int) -> IndicatorRecord:
    profiles = profile_distribution(g, f)
    cp = len(profiles)
    citing_eq0 = sum(1 for p in profiles if p.r_citing == 0)
    cited_eq0 = sum(1 for p in profiles if p.r_cited == 0)
    counts = (
        cp,
        citing_eq0,
        cp - citing_eq0,
        sum(p.r_citing for p in profiles),
        cited_eq0,
        cp - cited_eq0,
        sum(p.r_cited for p in profiles),
    )
    return record_from_counts(f, g.token(f), counts)


def focal_set(g: CitationGraph, min_cp: int = DEFAULT_MIN_CP) -> np.ndarray:
    if min_cp < 0:
        raise ValueError(f"min_cp must be >= 0, got {min_cp}")
    return np.flatnonzero(g.citation_counts() >= min_cp).astype(np.int64)


def _chunks(focal: np.ndarray, cit_ptr: np.ndarray, n_chunks: int) -> list[tuple[int, int]]:
    # Split contiguous focal ranges of roughly equal estimated work.
    if focal.shape[0] == 0:
        return []
    cp = (cit_ptr[focal + 1] - cit_ptr[focal]).astype(np.float64)
    cost = cp * 20.0 + 1.0
    cum = np.cumsum(cost)
    bounds = np.searchsorted(cum, np.linspace(0, cum[-1], n_chunks + 1)[1:-1])
    edges = [0, *sorted(set(int(b) for b in bounds)), focal.shape[0]]
    return [(a, b) for a, b in zip(edges[:-1], edges[1:]) if b > a]


def batch_counts(g: CitationGraph, focal: np.ndarray, threads: int = 1,
                 executor: Executor | None = None) -> np.ndarray:
    """Absolute counts for ``focal`` as an ``(len(focal), 7)`` int64 matrix.

    Rows are written in place by position, so the result does not depend on
    how work is split between threads.
    """
    focal = np.ascontiguousarray(focal, dtype=np.int64)
    out = K.empty_counts(focal.shape[0])
    args = (g.ref_ptr, g.ref_idx, g.cit_ptr, g.cit_idx)
    if executor is None and threads <= 1:
        K.focal_counts(*args, focal, out)
        return out
    spans = _chunks(focal, g.cit_ptr, 8 * threads if executor is None else 64)

    def run(span: tuple[int, int]) -> None:
        a, b = span
        K.focal_counts(*args, focal[a:b], out[a:b])

    if executor is not None:
        list(executor.map(run, spans))
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(run, spans))
    return out


def batch_compute(g: CitationGraph, min_cp: int = DEFAULT_MIN_CP, *, threads: int = 1,
                  executor: Executor | None = None) -> list[IndicatorRecord]:
    """Indicator records for every publication with ``cp >= min_cp``.

    Records come back in dense-index order. ``threads`` sizes an internal
    pool; alternatively pass an existing ``executor``.
    """
    if threads < 1:
        raise ValueError(f"threads must be >= 1, got {threads}")
    focal = focal_set(g, min_cp)
    counts = batch_counts(g, focal, threads=threads, executor=executor)
    tokens = g.tokens
    return [record_from_counts(f, tokens[f], row)
            for f, row in zip(focal.tolist(), counts.tolist())]


def default_threads() -> int:
    return len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else os.cpu_count() or 1
