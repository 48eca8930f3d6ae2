"""Simulated annealing for discrete tangent-point energies on closed
biarc configurations.

Moves perturb one junction at a time and rebuild only the two adjacent
biarcs; a move is rejected outright when a rebuilt pair is not
constructible, the length gate fails, junctions get too close, or the
configuration's polygonal thickness proxy drops below half its initial
value (a crude guard against leaving the knot class).
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .biarc import ImproperPairError, IncompatiblePairError, PointTangent, build_balanced_biarc
from .energy import LOG_SPACE_POWER, log_pair_sum, pair_quotients
from .interpolate import BiarcCurve, from_junctions


@dataclass
class AnnealConfig:
    q: float
    n: int
    L: float
    steps: int = 20000
    initial_temperature: Optional[float] = None  # default: 0.1 x initial energy
    cooling_rate: float = 0.995
    sigma_position: float = 0.05  # times L/n
    sigma_tangent: float = 0.05  # radians
    min_pair_distance: float = 1e-3
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.cooling_rate < 1.0:
            raise ValueError("cooling rate must lie in (0, 1)")
        if self.sigma_position <= 0 or self.sigma_tangent <= 0:
            raise ValueError("move scales must be positive")
        if self.min_pair_distance <= 0:
            raise ValueError("min_pair_distance must be positive")
        if self.q < 2:
            raise ValueError("energy power q must be >= 2")


@dataclass
class AnnealTrace:
    """Per-step records (step, energy, temperature, accepted) where energy
    is the chain energy after the accept/reject decision, plus the best
    configuration seen."""

    records: np.ndarray
    best_energy: float
    best_points: np.ndarray
    best_tangents: np.ndarray

    @property
    def accepted(self) -> np.ndarray:
        return self.records[self.records[:, 3] > 0.5]


def _config_energy(points, tangents, lam, q) -> float:
    if q > LOG_SPACE_POWER:
        return float(np.exp(log_pair_sum(points, tangents, lam, q)))
    x, off = pair_quotients(points, tangents)
    w = lam[:, None] * lam[None, :]
    return float(np.sum(x[off] ** q * w[off]))


def _min_pair_distance(points) -> float:
    n = len(points)
    diff = points[:, None, :] - points[None, :, :]
    d = np.linalg.norm(diff, axis=-1)
    return float(d[~np.eye(n, dtype=bool)].min())


def _thickness_proxy(points, tangents) -> float:
    """Smallest junction tangent-point radius of the configuration."""
    x, off = pair_quotients(points, tangents)
    positive = off & (x > 0)
    if not np.any(positive):
        return np.inf
    return float(1.0 / x[positive].max())


def _rebuild_segments(points, tangents, j, n):
    """Lengths of the two biarcs adjacent to junction j, or None when a
    pair is not constructible."""
    prev = (j - 1) % n
    nxt = (j + 1) % n
    try:
        b_prev = build_balanced_biarc(
            PointTangent(points[prev], tangents[prev]), PointTangent(points[j], tangents[j])
        )
        b_next = build_balanced_biarc(
            PointTangent(points[j], tangents[j]), PointTangent(points[nxt], tangents[nxt])
        )
    except (ImproperPairError, IncompatiblePairError, ValueError, RuntimeError):
        return None
    return b_prev.total_length, b_next.total_length


def anneal_discrete(initial: BiarcCurve, cfg: AnnealConfig) -> tuple[BiarcCurve, AnnealTrace]:
    """Search for low-energy junction configurations near the initial one.

    Returns the best configuration found (rebuilt, so all chain invariants
    are re-validated) together with the annealing trace. With a fixed seed
    the run is deterministic.
    """
    n = initial.n_segments
    if cfg.n != n:
        raise ValueError(f"config expects n={cfg.n} but the curve has {n} segments")
    lam = initial.segment_lengths.copy()
    lo, hi = cfg.L / (2 * n), 2 * cfg.L / n
    if lam.min() < lo or lam.max() > hi:
        raise ValueError("initial configuration fails the length gate")
    points = initial.junction_points.copy()
    tangents = initial.junction_tangents.copy()
    if _min_pair_distance(points) < cfg.min_pair_distance:
        raise ValueError("initial junctions are closer than min_pair_distance")

    rng = np.random.default_rng(cfg.seed)
    energy = _config_energy(points, tangents, lam, cfg.q)
    temperature = (
        cfg.initial_temperature if cfg.initial_temperature is not None else 0.1 * energy
    )
    thickness_floor = 0.5 * _thickness_proxy(points, tangents)
    sigma_q = cfg.sigma_position * cfg.L / n

    best_energy = energy
    best_points = points.copy()
    best_tangents = tangents.copy()
    records = np.empty((cfg.steps, 4))

    for step in range(cfg.steps):
        j = int(rng.integers(n))
        cand_points = points.copy()
        cand_tangents = tangents.copy()
        cand_points[j] = points[j] + rng.normal(scale=sigma_q, size=3)
        t = tangents[j]
        kick = rng.normal(scale=cfg.sigma_tangent, size=3)
        kick -= np.dot(kick, t) * t
        cand_tangents[j] = (t + kick) / np.linalg.norm(t + kick)

        accepted = False
        rebuilt = _rebuild_segments(cand_points, cand_tangents, j, n)
        if rebuilt is not None:
            cand_lam = lam.copy()
            cand_lam[(j - 1) % n], cand_lam[j] = rebuilt
            if (
                cand_lam.min() >= lo
                and cand_lam.max() <= hi
                and _min_pair_distance(cand_points) >= cfg.min_pair_distance
                and _thickness_proxy(cand_points, cand_tangents) >= thickness_floor
            ):
                cand_energy = _config_energy(cand_points, cand_tangents, cand_lam, cfg.q)
                delta = cand_energy - energy
                if delta <= 0.0 or rng.random() < math.exp(-delta / temperature):
                    points, tangents, lam = cand_points, cand_tangents, cand_lam
                    energy = cand_energy
                    accepted = True
                    if energy < best_energy:
                        best_energy = energy
                        best_points = points.copy()
                        best_tangents = tangents.copy()
        records[step] = (step, energy, temperature, float(accepted))
        temperature *= cfg.cooling_rate

    best = from_junctions(best_points, best_tangents)
    trace = AnnealTrace(
        records=records,
        best_energy=best_energy,
        best_points=best_points,
        best_tangents=best_tangents,
    )
    return best, trace


def trace_to_csv(trace: AnnealTrace) -> str:
    buf = io.StringIO()
    buf.write("step,energy,temperature,accepted\n")
    for step, energy, temperature, accepted in trace.records:
        buf.write(f"{int(step)},{energy:.12g},{temperature:.12g},{int(accepted)}\n")
    return buf.getvalue()
