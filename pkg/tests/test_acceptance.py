"""One check per acceptance criterion; each prints a PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -v`` and read the "acceptance criteria"
section at the end of the output.
"""

from __future__ import annotations

import time

import numpy as np
import pytest
import scipy.linalg

from conftest import ETA3, HT3
from ptwalk import fixtures
from ptwalk.centrality import (
    ctqw_centrality,
    ctqw_centrality_quadrature,
    eigenvector_centrality,
    eta_ctqw_centrality,
    pagerank,
)
from ptwalk.errors import PreconditionError
from ptwalk.graphcore import (
    InterdependentSpec,
    build_interdependent,
    check_interdependent_theorem,
    complete_laplacian_direct,
    hamiltonian,
    weights_from_hermitized,
)
from ptwalk.randnet import RandomGraphSpec, generate, is_acyclic
from ptwalk.spectral import classify, decompose_evolution, eta_decomposition, hermitize
from ptwalk.stats import agresti_coull, jaccard_topk, kendall_tau, run_ensemble, vigna_tau
from ptwalk.walk import evolve_eta, kronecker_sum

THREE_VERTEX_REFERENCE = {
    "eta_ctqw": (0.415638, 0.415638, 0.168724),
    "ctqw": (0.416667, 0.416667, 0.166667),
    "pagerank": (0.475, 0.475, 0.05),
    "eigenvector": (0.5, 0.5, 0.0),
}
FOUR_VERTEX_REFERENCE = {
    "ctqw": (0.386364, 0.113636, 0.386364, 0.113636),
    "eta_ctqw": (0.339192, 0.160808, 0.339192, 0.160808),
    "pagerank": (0.25, 0.25, 0.25, 0.25),
    "eigenvector": (0.292893, 0.207107, 0.292893, 0.207107),
}


def _err(a, b) -> float:
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


def _measures(g):
    h = hamiltonian(g)
    return {
        "eta_ctqw": eta_ctqw_centrality(h).scores,
        "ctqw": ctqw_centrality(h).scores,
        "pagerank": pagerank(g).scores,
        "eigenvector": eigenvector_centrality(g).scores,
    }


def test_three_vertex_reference_scores(criterion):
    start = time.perf_counter()
    got = _measures(fixtures.three_vertex())
    elapsed = time.perf_counter() - start
    worst = max(_err(got[m], THREE_VERTEX_REFERENCE[m]) for m in THREE_VERTEX_REFERENCE)
    ok = criterion("three-vertex reference scores (4 measures, 1e-4, <1 s)", worst < 1e-4 and elapsed < 1.0,
                   f"max err {worst:.2e}, {elapsed:.3f} s")
    assert ok


def test_eta_and_hermitized_matrices(criterion, h3):
    ed = eta_decomposition(h3)
    e1, e2 = _err(ed.eta, ETA3), _err(hermitize(h3, ed).matrix, HT3)
    ok = criterion("eta and hermitized H for the 3-vertex graph (1e-10)", max(e1, e2) < 1e-10,
                   f"eta err {e1:.1e}, H err {e2:.1e}")
    assert ok


def _four_vertex_rows():
    out = {}
    for name, g in (("C1", fixtures.four_vertex_a()), ("C2", fixtures.four_vertex_b())):
        got = _measures(g)
        out[name] = {m: _err(got[m], FOUR_VERTEX_REFERENCE[m]) for m in FOUR_VERTEX_REFERENCE}
    return out


def test_four_vertex_classical_and_raw_rows():
    for name, errs in _four_vertex_rows().items():
        for m in ("ctqw", "pagerank", "eigenvector"):
            assert errs[m] < 1e-4, (name, m, errs[m])


@pytest.mark.xfail(strict=True, reason="no recoverable 4-vertex topology reproduces the eta-CTQW row")
def test_four_vertex_reference_scores(criterion):
    rows = _four_vertex_rows()
    matched = [name for name, errs in rows.items() if max(errs.values()) < 1e-4]
    detail = "; ".join(
        f"{name}: " + ", ".join(f"{m} {e:.1e}" for m, e in errs.items()) for name, errs in rows.items()
    )
    if not matched:
        detail = "documented reconstruction failure, eta_ctqw row off for both candidates; " + detail
    ok = criterion("four-vertex reference scores (a candidate matches all rows, 1e-4)", bool(matched), detail)
    assert ok


def test_conservation_and_equivalence(criterion, mixed100):
    rng = np.random.default_rng(2024)
    start = time.perf_counter()
    herm = norm = bc = group = 0.0
    for g in mixed100:
        h = hamiltonian(g)
        ed = eta_decomposition(h)
        m = ed.eta @ h.matrix @ ed.eta_inv
        herm = max(herm, _err(m, m.conj().T))
        ht = hermitize(h, ed).matrix
        psi = rng.normal(size=g.n) + 1j * rng.normal(size=g.n)
        psi /= np.linalg.norm(psi)
        basis = decompose_evolution(h, ed)
        for t in (0.1, 1.0, 10.0, 100.0):
            norm = max(norm, abs(evolve_eta(h, ed, psi, t, basis).norm2 - 1))
            b = ed.eta @ scipy.linalg.expm(-1j * h.matrix * t) @ ed.eta_inv
            c = scipy.linalg.expm(-1j * ht * t)
            bc = max(bc, _err(b, c))
        for bs in (decompose_evolution(h), basis):
            once = bs.propagator(1.9)
            group = max(group, _err(once, bs.propagator(1.2) @ bs.propagator(0.7)))
    elapsed = time.perf_counter() - start
    ok = herm < 1e-7 and norm < 1e-9 and bc < 1e-8 and group < 1e-8 and elapsed < 30
    criterion(
        "conservation and equivalence (100 mixed graphs, <30 s)",
        ok,
        f"hermitian {herm:.1e}, norm {norm:.1e}, B-C {bc:.1e}, group {group:.1e}, {elapsed:.1f} s",
    )
    assert ok


def test_oracle_equivalence(criterion, dag50, h3):
    worst = 0.0
    for g in dag50:
        h = hamiltonian(g)
        ed = eta_decomposition(h)
        for mode, exact in (("eta", eta_ctqw_centrality(h, ed)), ("nonunitary", ctqw_centrality(h))):
            quad = ctqw_centrality_quadrature(h, mode, 100 * np.pi, 0.005, ed=ed)
            worst = max(worst, _err(quad.scores, exact.scores))
    period = max(
        _err(ctqw_centrality_quadrature(h3, "eta", np.pi, np.pi / 2000).scores, eta_ctqw_centrality(h3).scores),
        _err(ctqw_centrality_quadrature(h3, "nonunitary", np.pi, np.pi / 2000).scores, ctqw_centrality(h3).scores),
    )
    ok = criterion("closed form vs quadrature (50 DAGs 1e-3, one period 1e-6)", worst < 1e-3 and period < 1e-6,
                   f"DAG max {worst:.1e}, one-period {period:.1e}")
    assert ok


def test_mapping_round_trip(criterion, mixed100, dag50):
    worst = 0.0
    for g in list(mixed100) + list(dag50):
        ht = hermitize(hamiltonian(g)).matrix
        worst = max(worst, _err(complete_laplacian_direct(weights_from_hermitized(ht)), ht))
    ok = criterion("mapping round trip on ensemble graphs (1e-10)", worst < 1e-10, f"max err {worst:.1e}")
    assert ok


def test_multi_particle(criterion, h3):
    sys2 = kronecker_sum(h3, 2)
    m = sys2.eta @ sys2.composite.matrix @ sys2.eta_inv
    herm = _err(m, m.conj().T)
    lam = np.linalg.eigvals(h3.matrix).real
    pairs = np.sort((lam[:, None] + lam[None, :]).ravel())
    spec = _err(np.sort(np.linalg.eigvals(sys2.composite.matrix).real), pairs)
    ok = criterion("two walkers on the 3-vertex graph", herm < 1e-7 and spec < 1e-8,
                   f"hermitian {herm:.1e}, spectrum {spec:.1e}")
    assert ok


def test_interdependent_theorem(criterion, h3):
    twin = InterdependentSpec(h3.matrix, h3.matrix, np.eye(3))
    rep = check_interdependent_theorem(twin)
    label = classify(build_interdependent(twin)).label
    bad = check_interdependent_theorem(
        InterdependentSpec(np.diag([1.0, 2.0]), np.diag([2.0, 1.0]), np.eye(2))
    )
    ok = (
        rep.b0_pseudo_hermitian and rep.degree_regular and rep.h1_commutes and rep.h2_commutes
        and label == "pseudo_hermitian"
        and not bad.h1_commutes and not bad.verdict
    )
    criterion("interdependent networks (twin passes, diag(1,2)/diag(2,1) fails commutation)", ok,
              f"twin {label}, violating case commutes={bad.h1_commutes}")
    assert ok


def test_generator_contracts(criterion, dag50):
    acyclic = all(is_acyclic(g) for g in dag50)
    tri = 0.0
    for g in dag50:
        h = hamiltonian(g).matrix
        tri = max(tri, _err(np.sort(np.linalg.eigvals(h).real), np.sort(np.diag(h))))
    spec = RandomGraphSpec("er_dag_plus_one", 8, p=0.3, seed=77)
    one = run_ensemble(spec, 12, workers=1)
    four = run_ensemble(spec, 12, workers=4)
    same = one.graphs == four.graphs and all(np.array_equal(one.scores[m], four.scores[m]) for m in one.methods)
    again = [generate(spec, i) for i in range(12)] == one.graphs
    ok = acyclic and tri < 1e-10 and same and again
    criterion("generator contracts (acyclic, triangular spectrum, thread determinism)", ok,
              f"acyclic {acyclic}, diag err {tri:.1e}, deterministic {same and again}")
    assert ok


# Families, sizes and thresholds of the ensemble comparison.  Each check is
# (k, low, high) on the pooled PageRank vs eta-CTQW top-k Jaccard agreement.
ENSEMBLES = (
    ("er_dag", dict(n=25, p=0.3), 100, [(1, 0.90, 1.0), (5, 0.68, 0.88)]),
    ("ba_out_regular", dict(n=20, m=3), 100, [(1, 0.90, 1.0), (5, 0.85, 1.0)]),
    ("ba_in_regular", dict(n=40, m=3), 100, [(1, 0.90, 1.0), (5, 0.85, 1.0)]),
    ("er_bidir", dict(n=25, p=0.3), 300, [(1, 0.0, 0.30)]),
    ("er_dag_plus_one", dict(n=25, p=0.3), 100, [(1, 0.28, 0.58)]),
)
ENSEMBLE_SEED = 20240601


@pytest.mark.slow
def test_ensemble_statistics(criterion):
    start = time.perf_counter()
    lines, ok = [], True
    for family, params, count, checks in ENSEMBLES:
        spec = RandomGraphSpec(family, seed=ENSEMBLE_SEED, **params)
        try:
            rep = run_ensemble(spec, count, ("pagerank", "eta_ctqw"))
        except PreconditionError as exc:
            ok = False
            lines.append(f"{family}: {exc}")
            continue
        for k, lo, hi in checks:
            value = rep.agreement_for("pagerank", "eta_ctqw", k).mean
            ok &= lo <= value <= hi
            lines.append(f"{family} top-{k} {value:.3f} (want {lo:.2f}..{hi:.2f})")
    elapsed = time.perf_counter() - start
    ok &= elapsed < 600
    criterion("ensemble statistics at the published sizes (<10 min)", ok,
              "; ".join(lines) + f"; {elapsed:.0f} s")
    assert ok


REDUCED = (
    ("er_dag", dict(n=10, p=0.3)),
    ("er_dag_plus_one", dict(n=10, p=0.3)),
    ("er_bidir", dict(n=8, p=0.3)),
    ("ba_out_regular", dict(n=5, m=2)),
    ("ba_in_regular", dict(n=12, m=2)),
)


def test_ensemble_statistics_reduced_sizes(criterion):
    # Not a gate: the same comparison at sizes where every family is feasible.
    lines = []
    for family, params in REDUCED:
        rep = run_ensemble(RandomGraphSpec(family, seed=ENSEMBLE_SEED, **params), 100, ("pagerank", "eta_ctqw"))
        vals = [rep.agreement_for("pagerank", "eta_ctqw", k).mean for k in (1, 5)]
        lines.append(f"{family} top-1 {vals[0]:.2f} top-5 {vals[1]:.2f}")
    criterion("ensemble agreement at reduced sizes (informational)", None, "; ".join(lines))


def test_stats_unit_suite(criterion):
    x = np.array([0.4, 0.1, 0.3, 0.2, 0.05])
    ident = [kendall_tau(x, x).value, vigna_tau(x, x).value]
    rev = [kendall_tau(x, -x).value, vigna_tau(x, -x).value]
    z = 1.96
    nt = 100 + z * z
    pt = (78 + z * z / 2) / nt
    half = z * np.sqrt(pt * (1 - pt) / nt)
    ac = _err(agresti_coull(78, 100), (pt - half, pt + half))
    tied = np.array([0.3, 0.3, 0.3, 0.1])
    jac = [jaccard_topk(tied, np.array([0.3, 0.3, 0.2, 0.2]), 1) for _ in range(5)]
    ok = (
        np.allclose(ident, 1) and np.allclose(rev, -1) and ac < 1e-12
        and len(set(jac)) == 1 and jac[0] == 1.0
    )
    criterion("stats unit suite (identity, reversal, Agresti-Coull, tie determinism)", ok,
              f"identity {ident}, reversal {rev}, AC err {ac:.1e}")
    assert ok
