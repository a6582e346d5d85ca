"""Quantum walk centralities and classical baselines."""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, NotPseudoHermitianError
from .graphcore import DirectedGraph, Hamiltonian, hamiltonian
from .spectral import (
    EtaDecomposition,
    classify,
    decompose_evolution,
    eigen_biorthonormal,
    eta_decomposition,
    hermitize,
)
from .walk import format_number, sample_times

METHODS = ("eta_ctqw", "ctqw", "pagerank", "eigenvector")
TIE_TOL = 1e-9
GROUP_TOL = 1e-8


def descending_order(scores, tol: float = TIE_TOL) -> list[list[int]]:
    """Tie groups of 0-based vertex indices, highest score first.

    Consecutive scores within ``tol`` of the first member of a group share
    the group; inside a group vertices are listed in ascending index order.
    """
    x = np.asarray(scores, dtype=float)
    order = np.lexsort((np.arange(len(x)), -x))
    groups: list[list[int]] = []
    for i in order:
        if groups and x[groups[-1][0]] - x[i] <= tol:
            groups[-1].append(int(i))
        else:
            groups.append([int(i)])
    return [sorted(g) for g in groups]


@dataclass(frozen=True)
class CentralityScores:
    scores: np.ndarray
    method: str
    warning: str | None = None

    @property
    def tie_groups(self) -> list[list[int]]:
        return descending_order(self.scores)

    @property
    def order(self) -> list[int]:
        """Vertices (0-based) from most to least central, ties by index."""
        return [i for g in self.tie_groups for i in g]

    @property
    def ranks(self) -> np.ndarray:
        """1-based competition rank of each vertex; tied vertices share a rank."""
        r = np.zeros(len(self.scores), dtype=int)
        pos = 1
        for g in self.tie_groups:
            r[g] = pos
            pos += len(g)
        return r


def scores_csv(results: list[CentralityScores]) -> str:
    out = io.StringIO()
    out.write("vertex,score,rank,method\n")
    for res in results:
        for v, (s, r) in enumerate(zip(res.scores, res.ranks), start=1):
            out.write(f"{v},{format_number(s)},{r},{res.method}\n")
    return out.getvalue()


def parse_scores_csv(text: str) -> list[CentralityScores]:
    lines = text.strip().splitlines()
    if not lines or lines[0] != "vertex,score,rank,method":
        raise ValueError("scores CSV must start with the header vertex,score,rank,method")
    by_method: dict[str, list[float]] = {}
    for line in lines[1:]:
        _, score, _, method = line.split(",")
        by_method.setdefault(method, []).append(float(score))
    return [CentralityScores(np.array(v), m) for m, v in by_method.items()]


def _uniform(n: int) -> np.ndarray:
    return np.full(n, 1.0 / np.sqrt(n), dtype=complex)


def _grouped_average(values, basis, coeff) -> np.ndarray:
    """Infinite-time average of ``|sum_n exp(-i l_n t) basis[:, n] coeff[n]|^2``.

    Cross terms between distinct eigenvalues average to zero, so each group
    of (numerically) equal eigenvalues contributes the squared modulus of its
    own projection.
    """
    values = np.real(values)
    order = np.argsort(values, kind="stable")
    out = np.zeros(basis.shape[0])
    start = 0
    for k in range(1, len(order) + 1):
        if k == len(order) or values[order[k]] - values[order[k - 1]] > GROUP_TOL:
            idx = order[start:k]
            out += np.abs(basis[:, idx] @ coeff[idx]) ** 2
            start = k
    return out


def eta_ctqw_centrality(h, ed: EtaDecomposition | None = None) -> CentralityScores:
    """Long-time average occupation of the unitary eta-walk from the uniform state."""
    ed = ed or eta_decomposition(h)
    ht = hermitize(h, ed).matrix
    lam, s = np.linalg.eigh(ht)
    psi0 = _uniform(ht.shape[0])
    v = _grouped_average(lam, s, s.conj().T @ psi0)
    return CentralityScores(v / v.sum(), "eta_ctqw")


def ctqw_centrality(h) -> CentralityScores:
    """Long-time average occupation of the raw walk, normalised by its total."""
    c = classify(h)
    if not c.ok:
        raise NotPseudoHermitianError(c.reason)
    sd = eigen_biorthonormal(h)
    psi0 = _uniform(len(sd.eigenvalues))
    v = _grouped_average(sd.eigenvalues, sd.right, sd.left.conj().T @ psi0)
    return CentralityScores(v / v.sum(), "ctqw")


def ctqw_centrality_quadrature(
    h,
    mode: str = "eta",
    t_max: float = 100.0,
    dt: float = 0.01,
    ed: EtaDecomposition | None = None,
    psi0=None,
) -> CentralityScores:
    """Trapezoidal time average over ``[0, t_max]``; a check on the closed forms."""
    m = np.asarray(h.matrix if isinstance(h, Hamiltonian) else h)
    n = m.shape[0]
    psi0 = _uniform(n) if psi0 is None else np.asarray(psi0, dtype=complex)
    if mode == "eta":
        basis = decompose_evolution(h, ed or eta_decomposition(h))
    elif mode == "nonunitary":
        basis = decompose_evolution(h)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    times = sample_times(t_max, dt)
    prob = np.abs(basis.apply(psi0, times)) ** 2
    avg = np.trapezoid(prob, times, axis=0) / times[-1]
    method = "eta_ctqw" if mode == "eta" else "ctqw"
    return CentralityScores(avg / avg.sum(), method)


@dataclass(frozen=True)
class PageRankParams:
    alpha: float = 0.85
    tol: float = 1e-12
    max_iter: int = 100_000


def transition_matrix(g: DirectedGraph | np.ndarray) -> np.ndarray:
    """Row-stochastic surfer matrix; dangling rows become uniform."""
    a = g.adjacency if isinstance(g, DirectedGraph) else np.asarray(g, dtype=float)
    n = a.shape[0]
    out = a.sum(axis=1)
    m = np.full((n, n), 1.0 / n)
    live = out > 0
    m[live] = a[live] / out[live, None]
    return m


def pagerank_step(p: np.ndarray, m: np.ndarray, alpha: float) -> np.ndarray:
    return (1 - alpha) / len(p) + alpha * (m.T @ p)


def pagerank(g: DirectedGraph, params: PageRankParams = PageRankParams()) -> CentralityScores:
    if not 0 <= params.alpha <= 1:
        raise ValueError("alpha must lie in [0, 1]")
    m = transition_matrix(g)
    p = np.full(g.n, 1.0 / g.n)
    for _ in range(params.max_iter):
        nxt = pagerank_step(p, m, params.alpha)
        if np.abs(nxt - p).sum() < params.tol:
            return CentralityScores(nxt / nxt.sum(), "pagerank")
        p = nxt
    raise ConvergenceError(f"PageRank did not converge in {params.max_iter} iterations")


def eigenvector_centrality(g: DirectedGraph) -> CentralityScores:
    """Perron vector of ``A^T`` (in-link based), L1-normalised.

    When the adjacency spectrum is identically zero (empty or acyclic graphs)
    there is no principal direction; uniform scores are returned with a
    warning.
    """
    a = g.adjacency
    lam, vec = np.linalg.eig(a.T)
    if np.max(np.abs(lam), initial=0.0) <= 1e-12:
        return CentralityScores(
            np.full(g.n, 1.0 / g.n), "eigenvector", "degenerate spectrum: all adjacency eigenvalues are zero"
        )
    k = int(np.argmax(lam.real))
    x = np.real(vec[:, k])
    if x.sum() < 0:
        x = -x
    x = np.clip(x, 0.0, None)
    x[x < 1e-12 * x.max()] = 0.0
    return CentralityScores(x / x.sum(), "eigenvector")


def compute(method: str, g: DirectedGraph, h: Hamiltonian | None = None, ed: EtaDecomposition | None = None) -> CentralityScores:
    if method == "pagerank":
        return pagerank(g)
    if method == "eigenvector":
        return eigenvector_centrality(g)
    h = h or hamiltonian(g)
    if method == "ctqw":
        return ctqw_centrality(h)
    if method == "eta_ctqw":
        return eta_ctqw_centrality(h, ed)
    raise ValueError(f"unknown method {method!r}; choose from {METHODS}")
