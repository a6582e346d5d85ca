"""Directed and weighted graphs, Hamiltonians and the weighted-Laplacian mapping.

Vertices are 1-indexed in every public input and output and 0-indexed in
matrices.  The adjacency convention is row-source: ``A[i, j] = 1`` iff the
edge ``i -> j`` is present.  The graph Hamiltonian is ``(D_out - A)^T`` so
that amplitude flows along edge direction and the diagonal holds out-degrees.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import GraphFormatError

HAMILTONIAN_SOURCES = ("directed-laplacian", "hermitized", "kronecker-sum", "interdependent", "custom")


@dataclass(frozen=True)
class DirectedGraph:
    n: int
    edges: tuple[tuple[int, int], ...]

    @property
    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        for s, t in self.edges:
            a[s - 1, t - 1] = 1.0
        return a

    def out_degree(self) -> np.ndarray:
        return self.adjacency.sum(axis=1)

    def in_degree(self) -> np.ndarray:
        return self.adjacency.sum(axis=0)


@dataclass(frozen=True)
class Hamiltonian:
    matrix: np.ndarray
    source: str = "custom"

    def __post_init__(self):
        m = np.asarray(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("Hamiltonian matrix must be square")
        if self.source not in HAMILTONIAN_SOURCES:
            raise ValueError(f"unknown Hamiltonian source {self.source!r}")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class WeightedGraph:
    """Complete undirected graph with self-loops; ``weights`` is symmetric."""

    n: int
    weights: np.ndarray


@dataclass(frozen=True)
class OrientedIncidence:
    """Oriented incidence matrix over an explicit edge ordering.

    A column for the edge ``(u, v)`` holds +1 at ``u`` and -1 at ``v``; a
    self-loop column holds a single 2.
    """

    matrix: np.ndarray
    edges: tuple[tuple[int, int], ...]

    @property
    def self_loop(self) -> tuple[bool, ...]:
        return tuple(u == v for u, v in self.edges)


@dataclass(frozen=True)
class InterdependentSpec:
    h1: np.ndarray
    h2: np.ndarray
    b0: np.ndarray | None = None


def from_edge_list(n: int, edges: Iterable[Sequence[int]]) -> DirectedGraph:
    """Build a directed graph on vertices ``1..n`` from ``(source, target)`` pairs."""
    if int(n) != n or n < 1:
        raise GraphFormatError(f"vertex count must be a positive integer, got {n}")
    n = int(n)
    seen = set()
    for edge in edges:
        _check_edge(n, edge, seen)
    return DirectedGraph(n, tuple(sorted(seen)))


def _check_edge(n, edge, seen, line=None):
    if len(edge) != 2:
        raise GraphFormatError(f"edge must have two endpoints, got {edge!r}", line)
    s, t = edge
    if int(s) != s or int(t) != t:
        raise GraphFormatError(f"vertex indices must be integers, got {edge!r}", line)
    s, t = int(s), int(t)
    if not (1 <= s <= n and 1 <= t <= n):
        raise GraphFormatError(f"vertex index out of range 1..{n} in edge ({s}, {t})", line)
    if s == t:
        raise GraphFormatError(f"self-loop on vertex {s}", line)
    if (s, t) in seen:
        raise GraphFormatError(f"duplicate edge ({s}, {t})", line)
    seen.add((s, t))


def from_adjacency(a: np.ndarray) -> DirectedGraph:
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise GraphFormatError("adjacency must be square")
    if not np.all((a == 0) | (a == 1)):
        raise GraphFormatError("adjacency entries must be 0 or 1")
    src, dst = np.nonzero(a)
    return from_edge_list(a.shape[0], zip((src + 1).tolist(), (dst + 1).tolist()))


def hamiltonian(g: DirectedGraph) -> Hamiltonian:
    a = g.adjacency
    return Hamiltonian((np.diag(a.sum(axis=1)) - a).T, "directed-laplacian")


def incidence(n: int, edges: Sequence[tuple[int, int]]) -> OrientedIncidence:
    """Oriented incidence matrix; ``(u, u)`` entries are self-loops."""
    m = np.zeros((n, len(edges)), dtype=int)
    for k, (u, v) in enumerate(edges):
        if not (1 <= u <= n and 1 <= v <= n):
            raise ValueError(f"vertex index out of range in edge ({u}, {v})")
        if u == v:
            m[u - 1, k] = 2
        else:
            m[u - 1, k] = 1
            m[v - 1, k] = -1
    return OrientedIncidence(m, tuple((int(u), int(v)) for u, v in edges))


def complete_incidence(n: int) -> OrientedIncidence:
    """Incidence of the complete graph with one self-loop per vertex."""
    edges = [(i, i) for i in range(1, n + 1)]
    edges += [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    return incidence(n, edges)


def weighted_laplacian(inc: OrientedIncidence, weights: Sequence[float]) -> np.ndarray:
    w = np.asarray(weights, dtype=float).ravel()
    if w.shape[0] != inc.matrix.shape[1]:
        raise ValueError(
            f"expected {inc.matrix.shape[1]} edge weights, got {w.shape[0]}"
        )
    m = inc.matrix.astype(float)
    return (m * w) @ m.T


def edge_weights(wg: WeightedGraph, inc: OrientedIncidence) -> np.ndarray:
    """Per-edge weights of ``wg`` in the column order of ``inc``."""
    return np.array([wg.weights[u - 1, v - 1] for u, v in inc.edges])


def complete_laplacian_direct(wg: WeightedGraph) -> np.ndarray:
    w = np.asarray(wg.weights, dtype=float)
    lap = -w.copy()
    np.fill_diagonal(lap, w.sum(axis=1) + 3.0 * np.diag(w))
    return lap


def weights_from_hermitized(ht: Hamiltonian | np.ndarray, atol: float = 1e-10) -> WeightedGraph:
    """Edge weights of the complete self-looped graph whose Laplacian is ``ht``."""
    h = np.asarray(ht.matrix if isinstance(ht, Hamiltonian) else ht)
    if np.iscomplexobj(h):
        if np.max(np.abs(h.imag), initial=0.0) > atol:
            raise ValueError("hermitized Hamiltonian must be real to map onto edge weights")
        h = h.real
    h = h.astype(float)
    if np.max(np.abs(h - h.T), initial=0.0) > atol:
        raise ValueError("hermitized Hamiltonian is not symmetric")
    h = (h + h.T) / 2
    w = -h.copy()
    np.fill_diagonal(w, h.sum(axis=1) / 4.0)
    return WeightedGraph(h.shape[0], w)


def _as_matrix(x) -> np.ndarray:
    if isinstance(x, DirectedGraph):
        return np.asarray(hamiltonian(x).matrix)
    if isinstance(x, Hamiltonian):
        return np.asarray(x.matrix)
    return np.asarray(x, dtype=float)


def _blocks(spec: InterdependentSpec):
    h1, h2 = _as_matrix(spec.h1), _as_matrix(spec.h2)
    n1, n2 = h1.shape[0], h2.shape[0]
    if h1.shape != (n1, n1) or h2.shape != (n2, n2):
        raise ValueError("component Hamiltonians must be square")
    b0 = np.zeros((n1, n2)) if spec.b0 is None else np.asarray(spec.b0, dtype=float)
    if b0.shape != (n1, n2):
        raise ValueError(f"interconnection matrix must be {n1}x{n2}, got {b0.shape}")
    if not np.all((b0 == 0) | (b0 == 1)):
        raise ValueError("interconnection entries must be 0 or 1")
    return h1, h2, b0


def build_interdependent(spec: InterdependentSpec) -> Hamiltonian:
    h1, h2, b0 = _blocks(spec)
    top = np.hstack([h1 + np.diag(b0.sum(axis=1)), -b0])
    bottom = np.hstack([-b0.T, h2 + np.diag(b0.sum(axis=0))])
    return Hamiltonian(np.vstack([top, bottom]), "interdependent")


@dataclass(frozen=True)
class TheoremReport:
    """Sufficient conditions for pseudo-Hermiticity of an interdependent network.

    ``b0_pseudo_hermitian`` is None when the interconnection matrix is not
    square.  A false verdict makes no claim either way.
    """

    b0_pseudo_hermitian: bool | None
    degree_regular: bool
    degree: float | None
    h1_commutes: bool
    h2_commutes: bool

    @property
    def verdict(self) -> bool:
        flags = [self.degree_regular, self.h1_commutes, self.h2_commutes]
        if self.b0_pseudo_hermitian is not None:
            flags.append(self.b0_pseudo_hermitian)
        return all(flags)


def check_interdependent_theorem(spec: InterdependentSpec, atol: float = 1e-10) -> TheoremReport:
    from .spectral import classify

    h1, h2, b0 = _blocks(spec)
    if b0.shape[0] == b0.shape[1]:
        ph = classify(Hamiltonian(b0)).label != "broken"
    else:
        ph = None
    sums = np.concatenate([b0.sum(axis=1), b0.sum(axis=0)])
    regular = bool(np.all(sums == sums[0]))
    return TheoremReport(
        b0_pseudo_hermitian=ph,
        degree_regular=regular,
        degree=float(sums[0]) if regular else None,
        h1_commutes=bool(np.max(np.abs(h1 @ b0 - b0 @ h2), initial=0.0) <= atol),
        h2_commutes=bool(np.max(np.abs(h2 @ b0.T - b0.T @ h1), initial=0.0) <= atol),
    )


# ---------------------------------------------------------------- file formats


def parse_edge_list(text: str, n: int | None = None) -> DirectedGraph:
    """Parse ``source target`` lines; ``#`` starts a comment.

    The vertex count is the largest index seen unless ``n`` is given.
    """
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphFormatError(f"expected 'source target', got {raw.strip()!r}", lineno)
        try:
            s, t = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(f"vertex indices must be integers, got {raw.strip()!r}", lineno)
        pairs.append(((s, t), lineno))
    if n is None:
        if not pairs:
            raise GraphFormatError("edge list is empty; use the JSON format for edgeless graphs")
        n = max(max(p) for p, _ in pairs)
    if n < 1:
        raise GraphFormatError("vertex count must be positive")
    seen = set()
    for edge, lineno in pairs:
        _check_edge(n, edge, seen, lineno)
    return DirectedGraph(n, tuple(sorted(seen)))


def parse_json_graph(text: str) -> DirectedGraph:
    """Parse ``{"n": int, "edges": [[s, t], ...]}``."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFormatError(exc.msg, exc.lineno) from None
    if not isinstance(data, dict) or "n" not in data:
        raise GraphFormatError('JSON graph must be an object with keys "n" and "edges"')
    n = data["n"]
    if not isinstance(n, int) or isinstance(n, bool):
        raise GraphFormatError(f'"n" must be an integer, got {n!r}')
    edges = data.get("edges", [])
    if not isinstance(edges, list) or not all(isinstance(e, list) for e in edges):
        raise GraphFormatError('"edges" must be a list of [source, target] pairs')
    for e in edges:
        if not all(isinstance(v, int) and not isinstance(v, bool) for v in e):
            raise GraphFormatError(f"vertex indices must be integers, got {e!r}")
    return from_edge_list(n, [tuple(e) for e in edges])


def load_graph(path: str | Path, fmt: str | None = None) -> DirectedGraph:
    path = Path(path)
    if fmt is None:
        fmt = "json" if path.suffix.lower() == ".json" else "edgelist"
    text = path.read_text()
    if fmt == "json":
        return parse_json_graph(text)
    if fmt == "edgelist":
        return parse_edge_list(text)
    raise ValueError(f"unknown graph format {fmt!r}")


def to_json(g: DirectedGraph) -> str:
    return json.dumps({"n": g.n, "edges": [list(e) for e in g.edges]})


def to_edge_list(g: DirectedGraph) -> str:
    return "".join(f"{s} {t}\n" for s, t in g.edges)
