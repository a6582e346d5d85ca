"""Time evolution of walkers: the raw non-unitary walk and the eta-walk."""

from __future__ import annotations

import io
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .errors import NotPseudoHermitianError
from .graphcore import Hamiltonian
from .spectral import (
    EtaDecomposition,
    EvolutionBasis,
    build_eta,
    classify,
    decompose_evolution,
    eigen_biorthonormal,
    eta_decomposition,
)

MODES = ("nonunitary", "eta")
NORM_TOL = 1e-9


@dataclass(frozen=True)
class WalkState:
    amplitudes: np.ndarray
    time: float = 0.0

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    @property
    def norm2(self) -> float:
        return float(np.sum(self.probabilities))


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    probabilities: np.ndarray  # shape (len(times), n)
    mode: str
    total: np.ndarray | None = None

    def __post_init__(self):
        if self.total is None:
            object.__setattr__(self, "total", self.probabilities.sum(axis=1))

    @classmethod
    def from_csv(cls, text: str, mode: str = "eta") -> "Trajectory":
        lines = text.strip().splitlines()
        head = lines[0].split(",")
        if head[0] != "t" or head[-1] != "total":
            raise ValueError("trajectory CSV must have columns t,p1,...,pn,total")
        rows = np.array([[float(x) for x in line.split(",")] for line in lines[1:]])
        return cls(rows[:, 0], rows[:, 1:-1], mode, rows[:, -1])

    def to_csv(self) -> str:
        n = self.probabilities.shape[1]
        out = io.StringIO()
        out.write(",".join(["t"] + [f"p{j}" for j in range(1, n + 1)] + ["total"]) + "\n")
        for t, row, tot in zip(self.times, self.probabilities, self.total):
            out.write(",".join(format_number(x) for x in (t, *row, tot)) + "\n")
        return out.getvalue()


def format_number(x: float) -> str:
    return f"{float(x):.15g}"


def uniform_state(n: int) -> WalkState:
    return WalkState(np.full(n, 1.0 / np.sqrt(n), dtype=complex), 0.0)


def _initial(psi0, n: int) -> np.ndarray:
    amps = psi0.amplitudes if isinstance(psi0, WalkState) else psi0
    amps = np.asarray(amps, dtype=complex).ravel()
    if amps.shape[0] != n:
        raise ValueError(f"initial state has {amps.shape[0]} entries, expected {n}")
    norm = np.linalg.norm(amps)
    if abs(norm - 1.0) > NORM_TOL:
        raise ValueError(f"initial state must have unit norm, got {norm:.12g}")
    return amps


def _n(h) -> int:
    return np.asarray(h.matrix if isinstance(h, Hamiltonian) else h).shape[0]


def evolve_nonunitary(h, psi0, t: float, basis: EvolutionBasis | None = None) -> WalkState:
    """``psi(t) = B diag(exp(-i lambda t)) B^-1 psi0`` with the raw Hamiltonian."""
    amps = _initial(psi0, _n(h))
    basis = basis or decompose_evolution(h)
    return WalkState(basis.apply(amps, t)[0], float(t))


def evolve_eta(h, ed: EtaDecomposition, psi0, t: float, basis: EvolutionBasis | None = None) -> WalkState:
    """Unitary evolution ``exp(-i eta H eta^-1 t) psi0``."""
    amps = _initial(psi0, _n(h))
    basis = basis or decompose_evolution(h, ed)
    out = basis.apply(amps, t)[0]
    if t == 0:
        out = amps.copy()
    return WalkState(out, float(t))


def sample_times(t_max: float, dt: float) -> np.ndarray:
    """``0, dt, 2 dt, ...`` up to ``t_max`` (inclusive up to rounding)."""
    if not dt > 0:
        raise ValueError("dt must be positive")
    if not t_max >= dt:
        raise ValueError("t_max must be at least dt")
    count = int(np.floor(t_max / dt * (1 + 1e-12))) + 1
    return np.arange(count) * dt


def trajectory(h, mode: str, psi0, t_max: float, dt: float, ed: EtaDecomposition | None = None) -> Trajectory:
    """Squared moduli sampled on a regular grid, each from the closed form."""
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    times = sample_times(t_max, dt)
    amps = _initial(psi0, _n(h))
    if mode == "eta":
        basis = decompose_evolution(h, ed or eta_decomposition(h))
    else:
        basis = decompose_evolution(h)
    states = basis.apply(amps, times)
    states[0] = amps
    return Trajectory(times, np.abs(states) ** 2, mode)


# ----------------------------------------------------------- several walkers


@dataclass(frozen=True)
class MultiParticleSystem:
    particles: int
    base: Hamiltonian
    interaction: np.ndarray | None
    composite: Hamiltonian
    eta: np.ndarray | None = None
    eta_inv: np.ndarray | None = None


def _kron_power(m: np.ndarray, p: int) -> np.ndarray:
    return reduce(np.kron, [m] * p)


def kronecker_sum(h, p: int, gamma: np.ndarray | None = None) -> MultiParticleSystem:
    """Hamiltonian of ``p`` distinguishable walkers, ``H (+) ... (+) H + gamma``.

    Without interaction the metric of the composite is the ``p``-fold tensor
    power of the single-walker metric.  With an interaction the composite is
    re-classified and its metric rebuilt from scratch.
    """
    if int(p) != p or p < 1:
        raise ValueError("particle count must be a positive integer")
    base = h if isinstance(h, Hamiltonian) else Hamiltonian(np.asarray(h))
    m = np.asarray(base.matrix)
    n = m.shape[0]
    eye = np.eye(n)
    total = np.zeros((n**p, n**p), dtype=m.dtype)
    for k in range(p):
        factors = [eye] * p
        factors[k] = m
        total = total + reduce(np.kron, factors)
    if gamma is not None:
        gamma = np.asarray(gamma, dtype=float)
        if gamma.shape != total.shape:
            raise ValueError(f"interaction must be {total.shape}, got {gamma.shape}")
        total = total + gamma
    composite = Hamiltonian(total, "kronecker-sum")
    eta = eta_inv = None
    if gamma is None:
        if classify(base).ok:
            ed = build_eta(eigen_biorthonormal(base))
            eta, eta_inv = _kron_power(ed.eta, p), _kron_power(ed.eta_inv, p)
    else:
        c = classify(composite)
        if not c.ok:
            raise NotPseudoHermitianError(f"interacting composite Hamiltonian is broken: {c.reason}")
        ed = eta_decomposition(composite)
        eta, eta_inv = ed.eta, ed.eta_inv
    return MultiParticleSystem(int(p), base, gamma, composite, eta, eta_inv)
