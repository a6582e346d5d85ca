"""Seeded random directed graphs filtered for pseudo-Hermiticity.

Families
--------
er_bidir
    Directed G(n, p): every ordered pair independently with probability p.
er_dag
    Undirected G(n, p) oriented from lower to higher index (acyclic).
er_dag_plus_one
    An ``er_dag`` draw plus the reverse of one uniformly chosen edge.
ba_in_regular, ba_out_regular
    Directed preferential attachment on total degree.  Each new vertex links
    to ``m`` distinct existing vertices; in ``ba_in_regular`` the edges point
    into the new vertex, in ``ba_out_regular`` out of it.

Every draw is rejected unless its Hamiltonian has a real spectrum and is
diagonalizable; after ``max_attempts`` rejections
:class:`GenerationBudgetExceeded` is raised.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GenerationBudgetExceeded
from .graphcore import DirectedGraph, from_adjacency
from .spectral import classify

FAMILIES = ("er_bidir", "er_dag", "er_dag_plus_one", "ba_in_regular", "ba_out_regular")
ER_FAMILIES = FAMILIES[:3]
BA_FAMILIES = FAMILIES[3:]


@dataclass(frozen=True)
class RandomGraphSpec:
    family: str
    n: int
    p: float | None = None
    m: int | None = None
    seed: int = 0
    max_attempts: int = 10_000

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; choose from {FAMILIES}")
        if int(self.n) != self.n or self.n < 1:
            raise ValueError("n must be a positive integer")
        if self.family in ER_FAMILIES:
            if self.p is None or not 0 <= self.p <= 1:
                raise ValueError("edge probability p must lie in [0, 1]")
        else:
            if self.m is None or int(self.m) != self.m or not 1 <= self.m < self.n:
                raise ValueError("attachment count m must satisfy 1 <= m < n")
        if self.max_attempts < 1:
            raise ValueError("max_attempts must be positive")


def graph_rng(seed: int, index: int | None = None) -> np.random.Generator:
    """Independent stream for graph ``index`` of an ensemble with master ``seed``.

    The stream is ``SeedSequence(seed, spawn_key=(index,))``, so each graph
    can be regenerated on its own and results do not depend on scheduling.
    """
    if index is None:
        return np.random.default_rng(np.random.SeedSequence(seed))
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def _er_bidir(n, p, rng):
    a = (rng.random((n, n)) < p).astype(float)
    np.fill_diagonal(a, 0.0)
    return a


def _er_dag(n, p, rng):
    return np.triu(rng.random((n, n)) < p, 1).astype(float)


def _er_dag_plus_one(n, p, rng):
    a = _er_dag(n, p, rng)
    edges = np.argwhere(a > 0)
    if len(edges) == 0:
        return None
    i, j = edges[rng.integers(len(edges))]
    a[j, i] = 1.0
    return a


def _ba(n, m, rng, inward):
    a = np.zeros((n, n))
    deg = np.zeros(n)

    def link(new, old):
        if inward:
            a[old, new] = 1.0
        else:
            a[new, old] = 1.0

    for t in range(m):
        link(m, t)
    deg[:m] = 1.0
    deg[m] = m
    for v in range(m + 1, n):
        w = deg[:v]
        targets = rng.choice(v, size=m, replace=False, p=w / w.sum())
        for t in targets:
            link(v, t)
        deg[targets] += 1.0
        deg[v] = m
    return a


def draw_adjacency(spec: RandomGraphSpec, rng: np.random.Generator) -> np.ndarray | None:
    """One unfiltered draw; None when the draw must be retried outright."""
    if spec.family == "er_bidir":
        return _er_bidir(spec.n, spec.p, rng)
    if spec.family == "er_dag":
        return _er_dag(spec.n, spec.p, rng)
    if spec.family == "er_dag_plus_one":
        return _er_dag_plus_one(spec.n, spec.p, rng)
    return _ba(spec.n, spec.m, rng, inward=spec.family == "ba_in_regular")


def acceptable(a: np.ndarray) -> bool:
    h = (np.diag(a.sum(axis=1)) - a).T
    return classify(h).ok


def generate(spec: RandomGraphSpec, index: int | None = None) -> DirectedGraph:
    """Rejection-sample one graph of ``spec.family``."""
    rng = graph_rng(spec.seed, index)
    for _ in range(spec.max_attempts):
        a = draw_adjacency(spec, rng)
        if a is not None and acceptable(a):
            return from_adjacency(a)
    raise GenerationBudgetExceeded(spec.family, spec.seed, spec.max_attempts, index)


def _family(spec, allowed):
    if spec.family not in allowed:
        raise ValueError(f"expected family in {allowed}, got {spec.family!r}")


def gen_er_bidir(spec: RandomGraphSpec, index: int | None = None) -> DirectedGraph:
    _family(spec, ("er_bidir",))
    return generate(spec, index)


def gen_er_dag(spec: RandomGraphSpec, index: int | None = None) -> DirectedGraph:
    _family(spec, ("er_dag",))
    return generate(spec, index)


def gen_er_dag_plus_one(spec: RandomGraphSpec, index: int | None = None) -> DirectedGraph:
    _family(spec, ("er_dag_plus_one",))
    return generate(spec, index)


def gen_ba_directed(spec: RandomGraphSpec, index: int | None = None) -> DirectedGraph:
    _family(spec, BA_FAMILIES)
    return generate(spec, index)


def is_acyclic(g: DirectedGraph) -> bool:
    """Kahn's test: repeatedly strip vertices with no incoming edges."""
    a = g.adjacency
    indeg = a.sum(axis=0)
    alive = np.ones(g.n, dtype=bool)
    while True:
        free = np.flatnonzero(alive & (indeg == 0))
        if len(free) == 0:
            return not alive.any()
        alive[free] = False
        indeg -= a[free].sum(axis=0)
