"""Rank agreement statistics and the ensemble experiment runner."""

from __future__ import annotations

import io
import itertools
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .centrality import METHODS, TIE_TOL, CentralityScores, compute, descending_order
from .errors import PreconditionError
from .graphcore import DirectedGraph, hamiltonian
from .randnet import RandomGraphSpec, generate
from .spectral import eta_decomposition
from .walk import format_number

Z95 = 1.96


@dataclass(frozen=True)
class CorrelationResult:
    value: float | None  # None when either input is entirely tied
    method: str
    ties_x: int
    ties_y: int


def _signs(x: np.ndarray, tol: float) -> np.ndarray:
    d = x[:, None] - x[None, :]
    return np.sign(d) * (np.abs(d) > tol)


def _check_pair(x, y):
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    if x.shape != y.shape:
        raise ValueError("score vectors must have equal length")
    if len(x) < 2:
        raise ValueError("at least two items are needed")
    return x, y


def kendall_tau(x, y, tol: float = TIE_TOL) -> CorrelationResult:
    """Kendall tau-b with ties detected at ``tol``."""
    x, y = _check_pair(x, y)
    iu = np.triu_indices(len(x), 1)
    sx, sy = _signs(x, tol)[iu], _signs(y, tol)[iu]
    n0 = len(sx)
    tx, ty = int(np.sum(sx == 0)), int(np.sum(sy == 0))
    denom = math.sqrt((n0 - tx) * (n0 - ty))
    value = float(np.sum(sx * sy) / denom) if denom > 0 else None
    return CorrelationResult(value, "kendall", tx, ty)


def average_ranks(x, tol: float = TIE_TOL) -> np.ndarray:
    """Zero-based ranks by decreasing score; tied items share the mean rank."""
    r = np.zeros(len(x))
    pos = 0
    for g in descending_order(x, tol):
        r[g] = pos + (len(g) - 1) / 2
        pos += len(g)
    return r


def _weighted_tau(sx, sy, rank) -> float | None:
    f = 1.0 / (rank + 1.0)
    w = f[:, None] + f[None, :]
    iu = np.triu_indices(len(rank), 1)
    w, sx, sy = w[iu], sx[iu], sy[iu]
    dx, dy = np.sum(np.abs(sx) * w), np.sum(np.abs(sy) * w)
    if dx == 0 or dy == 0:
        return None
    return float(np.sum(sx * sy * w) / math.sqrt(dx * dy))


def vigna_tau(x, y, tol: float = TIE_TOL) -> CorrelationResult:
    """Weighted Kendall tau with additive hyperbolic weights ``1/(r+1)``.

    The weighting rank ``r`` is taken from each input in turn and the two
    values are averaged, which makes the index symmetric.  Ties are handled
    through the norms, as in Kendall's tau-b.
    """
    x, y = _check_pair(x, y)
    sx, sy = _signs(x, tol), _signs(y, tol)
    a = _weighted_tau(sx, sy, average_ranks(x, tol))
    b = _weighted_tau(sx, sy, average_ranks(y, tol))
    iu = np.triu_indices(len(x), 1)
    tx, ty = int(np.sum(sx[iu] == 0)), int(np.sum(sy[iu] == 0))
    value = None if a is None or b is None else (a + b) / 2
    return CorrelationResult(value, "vigna", tx, ty)


def top_k(x, k: int) -> set[int]:
    """Indices of the ``k`` largest scores; boundary ties go to lower indices."""
    order = [i for g in descending_order(x) for i in g]
    return set(order[:k])


def jaccard_topk(x, y, k: int) -> float:
    if len(x) != len(y):
        raise ValueError("score vectors must have equal length")
    if not 1 <= k <= len(x):
        raise ValueError(f"k must lie in 1..{len(x)}")
    return len(top_k(x, k) & top_k(y, k)) / k


def agresti_coull(successes: int, trials: int, z: float = Z95) -> tuple[float, float]:
    if trials < 1 or not 0 <= successes <= trials:
        raise ValueError("need 0 <= successes <= trials and trials >= 1")
    nt = trials + z * z
    pt = (successes + z * z / 2) / nt
    half = z * math.sqrt(pt * (1 - pt) / nt)
    return max(0.0, pt - half), min(1.0, pt + half)


# -------------------------------------------------------------- ensembles


@dataclass(frozen=True)
class AgreementReport:
    k: int
    fractions: tuple[float, ...]
    mean: float
    low: float
    high: float


@dataclass
class EnsembleReport:
    spec: RandomGraphSpec
    count: int
    methods: tuple[str, ...]
    align: str
    graphs: list[DirectedGraph]
    scores: dict[str, np.ndarray]  # method -> (count, n)
    position_mean: dict[str, np.ndarray] = field(default_factory=dict)
    position_std: dict[str, np.ndarray] = field(default_factory=dict)
    vigna: dict[tuple[str, str], float | None] = field(default_factory=dict)
    agreement: dict[tuple[str, str], list[AgreementReport]] = field(default_factory=dict)

    def agreement_for(self, a: str, b: str, k: int) -> AgreementReport:
        pair = (a, b) if (a, b) in self.agreement else (b, a)
        return next(r for r in self.agreement[pair] if r.k == k)

    def to_json(self) -> str:
        data = {
            "spec": asdict(self.spec),
            "master_seed": self.spec.seed,
            "count": self.count,
            "methods": list(self.methods),
            "align": self.align,
            "graphs": [{"n": g.n, "edges": [list(e) for e in g.edges]} for g in self.graphs],
            "scores": {m: self.scores[m].tolist() for m in self.methods},
            "position_mean": {m: v.tolist() for m, v in self.position_mean.items()},
            "position_std": {m: v.tolist() for m, v in self.position_std.items()},
            "vigna_tau": {f"{a},{b}": v for (a, b), v in self.vigna.items()},
            "agreement": {
                f"{a},{b}": [asdict(r) | {"fractions": list(r.fractions)} for r in reps]
                for (a, b), reps in self.agreement.items()
            },
        }
        return json.dumps(data, indent=1)

    def positions_csv(self) -> str:
        out = io.StringIO()
        cols = [f"{m}_{s}" for m in self.methods for s in ("mean", "std")]
        out.write(",".join(["position"] + cols) + "\n")
        n = self.spec.n
        for i in range(n):
            row = []
            for m in self.methods:
                row += [format_number(self.position_mean[m][i]), format_number(self.position_std[m][i])]
            out.write(",".join([str(i + 1)] + row) + "\n")
        return out.getvalue()

    def agreement_csv(self, a: str, b: str) -> str:
        out = io.StringIO()
        out.write("k,mean,low,high\n")
        for r in self.agreement[(a, b)]:
            out.write(f"{r.k},{format_number(r.mean)},{format_number(r.low)},{format_number(r.high)}\n")
        return out.getvalue()


def _score_graph(spec: RandomGraphSpec, index: int, methods) -> tuple[DirectedGraph, list[CentralityScores]]:
    g = generate(spec, index)
    h = hamiltonian(g)
    try:
        ed = eta_decomposition(h) if "eta_ctqw" in methods else None
        return g, [compute(m, g, h, ed) for m in methods]
    except PreconditionError as exc:
        raise PreconditionError(
            f"{spec.family} graph {index} (master seed {spec.seed}): {exc}"
        ) from exc


def run_ensemble(
    spec: RandomGraphSpec,
    count: int,
    methods=METHODS,
    workers: int = 1,
    align: str = "own",
) -> EnsembleReport:
    """Generate ``count`` graphs and aggregate their centrality statistics.

    ``align="own"`` averages each method's scores sorted in its own
    decreasing order; ``align="pagerank"`` orders every method's scores by
    the per-graph PageRank ranking instead.
    """
    methods = tuple(methods)
    bad = [m for m in methods if m not in METHODS]
    if bad:
        raise ValueError(f"unknown methods {bad}; choose from {METHODS}")
    if count < 1:
        raise ValueError("count must be positive")
    if align not in ("own", "pagerank"):
        raise ValueError("align must be 'own' or 'pagerank'")
    if align == "pagerank" and "pagerank" not in methods:
        raise ValueError("align='pagerank' needs the pagerank method")

    def job(i):
        return _score_graph(spec, i, methods)

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(job, range(count)))
    else:
        results = [job(i) for i in range(count)]

    graphs = [g for g, _ in results]
    scores = {m: np.array([res[j].scores for _, res in results]) for j, m in enumerate(methods)}
    report = EnsembleReport(spec, count, methods, align, graphs, scores)

    for m in methods:
        if align == "own":
            ordered = -np.sort(-scores[m], axis=1)
        else:
            ref = [CentralityScores(s, "pagerank").order for s in scores["pagerank"]]
            ordered = np.array([scores[m][i][ref[i]] for i in range(count)])
        report.position_mean[m] = ordered.mean(axis=0)
        report.position_std[m] = ordered.std(axis=0)

    for a, b in itertools.combinations(methods, 2):
        taus = [vigna_tau(scores[a][i], scores[b][i]).value for i in range(count)]
        taus = [t for t in taus if t is not None]
        report.vigna[(a, b)] = float(np.mean(taus)) if taus else None
        reps = []
        for k in range(1, min(5, spec.n) + 1):
            fr = [jaccard_topk(scores[a][i], scores[b][i], k) for i in range(count)]
            hits = int(round(sum(f * k for f in fr)))
            low, high = agresti_coull(hits, k * count)
            reps.append(AgreementReport(k, tuple(fr), hits / (k * count), low, high))
        report.agreement[(a, b)] = reps
    return report
