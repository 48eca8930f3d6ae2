"""Tangent-point energies, thickness, ropelength, and related checks.

Discrete energies live on closed biarc curves and are driven by the
junction quotients x_ij = 2 dist(l(q_j), q_i) / |q_i - q_j|^2, the inverse
tangent-point radius of junction i seen from the tangent line l(q_j) at
junction j. High powers are accumulated in log space.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
import numpy as np
from scipy.optimize import minimize
from scipy.special import logsumexp

from .curve import CurveSpec, curvature_values, periodic_distance
from .interpolate import BiarcCurve, check_Bn

# switch the double sum to log-space accumulation beyond this power
LOG_SPACE_POWER = 50.0

CSV_HEADER = "kind,q,n,value,grid,curve,seed"


@dataclass(frozen=True)
class EnergyReport:
    """A named energy value with its discretization metadata."""

    kind: str
    q: float
    n: int
    value: float
    metadata: dict = field(default_factory=dict)

    def to_json(self) -> str:
        payload = {"kind": self.kind, "q": self.q, "n": self.n, "value": self.value}
        payload.update(self.metadata)
        return json.dumps(payload, sort_keys=True)

    def to_csv_row(self) -> str:
        grid = self.metadata.get("grid", "")
        curve = self.metadata.get("curve", "")
        seed = self.metadata.get("seed", "")
        return f"{self.kind},{self.q:.12g},{self.n},{self.value:.12g},{grid},{curve},{seed}"


def pair_quotients(points: np.ndarray, tangents: np.ndarray):
    """Matrix x[i, j] = 2 dist(l(q_j), q_i) / |q_i - q_j|^2 of inverse
    tangent-point radii between junctions, zero on the diagonal, together
    with the off-diagonal mask."""
    points = np.asarray(points, dtype=float)
    tangents = np.asarray(tangents, dtype=float)
    diff = points[:, None, :] - points[None, :, :]  # q_i - q_j
    dist2 = np.einsum("ijk,ijk->ij", diff, diff)
    n = len(points)
    off = ~np.eye(n, dtype=bool)
    scale = float(np.sqrt(dist2[off].max()))
    if dist2[off].min() <= (1e-12 * scale) ** 2:
        raise ValueError("coincident junction points")
    along = np.einsum("ijk,jk->ij", diff, tangents)
    perp = diff - along[:, :, None] * tangents[None, :, :]
    h = np.linalg.norm(perp, axis=-1)
    x = np.zeros_like(dist2)
    x[off] = 2.0 * h[off] / dist2[off]
    return x, off


def log_pair_sum(points, tangents, lam, q: float) -> float:
    """log of sum_{i != j} x_ij^q lambda_i lambda_j."""
    x, off = pair_quotients(points, tangents)
    lam = np.asarray(lam, dtype=float)
    logw = np.log(lam[:, None] * lam[None, :])
    with np.errstate(divide="ignore"):
        logx = np.where(off & (x > 0), np.log(np.where(x > 0, x, 1.0)), -np.inf)
    terms = q * logx + logw
    return float(logsumexp(terms[off]))


def _junction_quotients(beta: BiarcCurve):
    return pair_quotients(beta.junction_points, beta.junction_tangents)


def _log_pair_sum(beta: BiarcCurve, q: float) -> float:
    return log_pair_sum(beta.junction_points, beta.junction_tangents, beta.segment_lengths, q)


def discrete_tp_energy(beta: BiarcCurve, q: float, gated: bool, L: float) -> float:
    """Double sum of x_ij^q lambda_i lambda_j over junction pairs.

    With ``gated`` the energy is +inf unless the biarc lengths satisfy the
    gate [L/(2n), 2L/n]; ungated it is finite on any closed biarc curve.
    """
    if q < 2:
        raise ValueError("tangent-point power q must be >= 2")
    n = beta.n_segments
    if gated and not check_Bn(beta, L, n):
        return math.inf
    if q > LOG_SPACE_POWER:
        return float(np.exp(_log_pair_sum(beta, q)))
    x, off = _junction_quotients(beta)
    lam = beta.segment_lengths
    w = lam[:, None] * lam[None, :]
    return float(np.sum(x[off] ** q * w[off]))


def continuous_tp_energy(curve: CurveSpec, q: float, grid: int, chunk: int = 256) -> float:
    """Double quadrature of the inverse tangent-point radius to the power q
    over the periodic square; diagonal cells use the curvature limit."""
    if not curve.is_arclength:
        raise ValueError("continuous energy expects an arclength-parametrized curve")
    if q <= 2:
        raise ValueError("continuous tangent-point power must exceed 2")
    L = curve.length
    h = L / grid
    s = (np.arange(grid) + 0.5) * h
    pos = curve.position(s)
    tan = curve.derivative(s)
    curv = curvature_values(curve, s)
    par = periodic_distance(s[:, None], s[None, :], L)
    total = 0.0
    for lo in range(0, grid, chunk):
        hi = min(lo + chunk, grid)
        diff = pos[None, lo:hi, :] - pos[:, None, :]  # gamma(t_j) - gamma(s_i)
        dist2 = np.einsum("ijk,ijk->ij", diff, diff)
        rows = np.arange(lo, hi)
        diag = rows[None, :] == np.arange(grid)[:, None]
        near = (dist2 < (1e-9 * L) ** 2) & ~diag & (par[:, lo:hi] > 2.5 * h)
        if np.any(near):
            raise ValueError("curve is not embedded: distinct parameters collide")
        along = np.einsum("ijk,ik->ij", diff, tan)
        perp2 = dist2 - along * along
        perp2 = np.maximum(perp2, 0.0)
        safe = np.where(diag, 1.0, dist2)
        x = 2.0 * np.sqrt(perp2) / safe
        x[diag] = curv[lo:hi]
        total += float(np.sum(x**q))
    return total * h * h


def _inverse_tp(curve: CurveSpec, L: float, s: float, t: float) -> float:
    # the band |s-t| < 1e-3 L is excluded: there the quotient is a 0/0
    # cancellation whose supremum is the curvature, handled separately
    if periodic_distance(s, t, L) < 1e-3 * L:
        return 0.0
    p = curve.position(np.array([s, t]))
    tangent = curve.derivative(np.array([s]))[0]
    d = p[1] - p[0]
    dist2 = float(np.dot(d, d))
    if dist2 < (1e-9 * L) ** 2:
        return 0.0
    perp = d - np.dot(d, tangent) * tangent
    return 2.0 * float(np.linalg.norm(perp)) / dist2


def thickness_and_ropelength(curve: CurveSpec, grid: int = 64) -> tuple[float, float]:
    """Thickness (smallest tangent-point radius) and ropelength length/Delta.

    A coarse pair grid seeds local Nelder-Mead refinements of the largest
    inverse radii; the near-diagonal supremum equals the maximal curvature
    and is taken into account separately.
    """
    if not curve.is_arclength:
        raise ValueError("thickness expects an arclength-parametrized curve")
    L = curve.length
    h = L / grid
    s = (np.arange(grid) + 0.5) * h
    pos = curve.position(s)
    tan = curve.derivative(s)
    diff = pos[None, :, :] - pos[:, None, :]
    dist2 = np.einsum("ijk,ijk->ij", diff, diff)
    along = np.einsum("ijk,ik->ij", diff, tan)
    perp2 = np.maximum(dist2 - along * along, 0.0)
    par = periodic_distance(s[:, None], s[None, :], L)
    admissible = par >= 1e-3 * L
    inv = np.zeros_like(dist2)
    inv[admissible] = 2.0 * np.sqrt(perp2[admissible]) / dist2[admissible]
    flat = np.argsort(inv, axis=None)[::-1][: 8 * 4]
    # keep the best cells that are not immediate grid neighbours of a better one
    seeds = []
    for f in flat:
        i, j = divmod(int(f), grid)
        if all(max(abs(i - a), abs(j - b)) > 1 for a, b in seeds):
            seeds.append((i, j))
        if len(seeds) == 8:
            break
    best = 0.0
    converged = False
    for i, j in seeds:
        res = minimize(
            lambda z: -_inverse_tp(curve, L, z[0], z[1]),
            x0=np.array([s[i], s[j]]),
            method="Nelder-Mead",
            options={"xatol": 1e-10 * L, "fatol": 1e-12, "maxiter": 400},
        )
        if res.success:
            converged = True
        best = max(best, -float(res.fun))
    if not converged and seeds:
        raise RuntimeError(
            f"thickness refinement did not converge; best inverse radius {best!r}"
        )
    curv = float(np.max(curvature_values(curve, s)))
    sup_inv = max(best, curv)
    delta = 1.0 / sup_inv
    return delta, L / delta


def ropelength_proxy(beta: BiarcCurve, L: float) -> float:
    """L^((n-2)/n) * (n-th discrete energy)^(1/n), evaluated in log space.

    Returns +inf when the curve fails the length gate.
    """
    n = beta.n_segments
    if not check_Bn(beta, L, n):
        return math.inf
    log_energy = _log_pair_sum(beta, float(n))
    return float(np.exp((n - 2) / n * math.log(L) + log_energy / n))


@dataclass(frozen=True)
class HolderCheck:
    lhs: float
    rhs: float
    holds: bool


def holder_bound_check(beta: BiarcCurve, k: float, m: float, L: float) -> HolderCheck:
    """Power-mean comparison of discrete energies: the k-th root energy is
    bounded by the m-th root energy times (4 len^2 n(n-1)/n^2)^(1/k - 1/m)."""
    if not 2 <= k <= m:
        raise ValueError("need 2 <= k <= m")
    n = beta.n_segments
    if not check_Bn(beta, L, n):
        raise ValueError("biarc curve fails the length gate")
    lhs = math.exp(_log_pair_sum(beta, float(k)) / k)
    length = beta.total_length
    factor = (4.0 * length * length * n * (n - 1) / n**2) ** (1.0 / k - 1.0 / m)
    rhs = factor * math.exp(_log_pair_sum(beta, float(m)) / m)
    return HolderCheck(lhs=lhs, rhs=rhs, holds=lhs <= rhs * (1.0 + 1e-12))
