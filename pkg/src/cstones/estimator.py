"""Single-sinusoid estimation from a compressed residual vector.

Given a sensing matrix Phi and a residual measurement r, the estimator finds
the sinusoid (omega, a, phi) whose compressed samples best explain r in the
least-squares sense.  For a fixed frequency the optimal linear amplitudes
(a1, a2) against the measured atom pair

    A_w = [Phi @ sin_w, Phi @ cos_w]

solve a 2x2 normal system in closed form; the frequency itself is found by
an iterative grid search over [0, pi] that repeatedly re-grids the bracket
around the best candidate ("frequency range refinement").  The bracket
shrinks by a factor of at most 2/grid_points per round, so a handful of
rounds reaches the frequency tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .model import SinusoidParams, sinusoid_samples
from .sensing import SensingMatrix

__all__ = [
    "MeasuredAtomPair",
    "EstimatorConfig",
    "EstimateOutcome",
    "build_atoms",
    "amplitude_ls",
    "estimate_sinusoid",
]


@dataclass(frozen=True)
class MeasuredAtomPair:
    """The M x 2 matrix of compressed sine/cosine atoms at one frequency."""

    a_omega: np.ndarray
    omega: float

    def __post_init__(self):
        a = np.asarray(self.a_omega, dtype=float)
        if a.ndim != 2 or a.shape[1] != 2:
            raise ValueError(f"a_omega must be M x 2, got shape {a.shape}")
        object.__setattr__(self, "a_omega", a)


@dataclass(frozen=True)
class EstimatorConfig:
    """Knobs of the frequency search.

    ``grid_points`` is the number of grid intervals per refinement round
    (the grid itself has grid_points + 1 nodes); ``None`` defaults to the
    sensing matrix's column count N.  The search halts once the bracket is
    narrower than ``freq_tol`` or after ``max_refinements`` rounds.
    """

    grid_points: int | None = None
    freq_tol: float = 1e-8
    max_refinements: int = 60
    gram_det_tol: float = 1e-12

    def __post_init__(self):
        if self.grid_points is not None and self.grid_points < 2:
            raise ValueError(f"grid_points must be >= 2, got {self.grid_points}")
        if self.freq_tol <= 0.0:
            raise ValueError(f"freq_tol must be positive, got {self.freq_tol}")
        if self.max_refinements < 1:
            raise ValueError(f"max_refinements must be >= 1, got {self.max_refinements}")
        if self.gram_det_tol <= 0.0:
            raise ValueError(f"gram_det_tol must be positive, got {self.gram_det_tol}")


@dataclass(frozen=True)
class EstimateOutcome:
    """Result of one single-sinusoid estimation.

    ``bracket_history`` records (alpha, beta) per round starting from the
    initial bracket; ``best_s_history`` the running best squared error after
    each round.  Both exist so callers can audit the refinement invariants.
    """

    params: SinusoidParams
    residual_sq: float
    refinements_used: int
    bracket_history: tuple[tuple[float, float], ...] = field(default=())
    best_s_history: tuple[float, ...] = field(default=())


def build_atoms(phi: SensingMatrix, omega: float) -> MeasuredAtomPair:
    """Measure the sine/cosine sample pair at ``omega`` through ``phi``."""
    sin_w, cos_w = sinusoid_samples(omega, phi.n_cols)
    a = np.column_stack((phi.entries @ sin_w, phi.entries @ cos_w))
    return MeasuredAtomPair(a_omega=a, omega=float(omega))


def _solve_normal_2x2(g00, g01, g11, b0, b1, tol):
    """Solve the 2x2 normal equations G a = b, elementwise over arrays.

    Falls back to rank-1 least squares on the dominant column wherever the
    Gram determinant is at most tol * trace^2 (degenerate atom pairs, e.g.
    omega in {0, pi} where the sine column vanishes).
    """
    det = g00 * g11 - g01 * g01
    trace = g00 + g11
    regular = det > tol * trace * trace
    if np.all(regular):
        return (g11 * b0 - g01 * b1) / det, (g00 * b1 - g01 * b0) / det
    safe_det = np.where(regular, det, 1.0)
    a1 = (g11 * b0 - g01 * b1) / safe_det
    a2 = (g00 * b1 - g01 * b0) / safe_det
    dom0 = g00 >= g11
    fb1 = np.where((g00 > 0) & dom0, b0 / np.where(g00 > 0, g00, 1.0), 0.0)
    fb2 = np.where((g11 > 0) & ~dom0, b1 / np.where(g11 > 0, g11, 1.0), 0.0)
    a1 = np.where(regular, a1, fb1)
    a2 = np.where(regular, a2, fb2)
    return a1, a2


def amplitude_ls(
    atoms: MeasuredAtomPair, r: np.ndarray, gram_det_tol: float = 1e-12
) -> tuple[float, float, float]:
    """Least-squares amplitudes of ``r`` against one measured atom pair.

    Returns (a1, a2, s_omega) where (a1, a2) minimizes ||r - A_w a||^2 via
    the 2x2 normal equations and s_omega is the attained minimum, evaluated
    directly as the squared norm of the residual.
    """
    a = atoms.a_omega
    r = np.asarray(r, dtype=float)
    if r.ndim != 1 or r.size != a.shape[0]:
        raise ValueError(f"residual length {r.shape} does not match atoms {a.shape}")
    col0 = a[:, 0]
    col1 = a[:, 1]
    g00 = float(col0 @ col0)
    g01 = float(col0 @ col1)
    g11 = float(col1 @ col1)
    b0 = float(col0 @ r)
    b1 = float(col1 @ r)
    a1, a2 = _solve_normal_2x2(g00, g01, g11, b0, b1, gram_det_tol)
    a1 = float(a1)
    a2 = float(a2)
    res = r - col0 * a1 - col1 * a2
    return a1, a2, float(res @ res)


def _grid_eval(phi_entries, t, r, omegas, tol):
    """Vectorized amplitude solve and squared error over a frequency grid."""
    args = np.outer(t, omegas)
    u = phi_entries @ np.sin(args)
    v = phi_entries @ np.cos(args)
    g00 = np.einsum("ij,ij->j", u, u)
    g01 = np.einsum("ij,ij->j", u, v)
    g11 = np.einsum("ij,ij->j", v, v)
    b0 = u.T @ r
    b1 = v.T @ r
    a1, a2 = _solve_normal_2x2(g00, g01, g11, b0, b1, tol)
    res = r[:, None] - u * a1 - v * a2
    s = np.einsum("ij,ij->j", res, res)
    return a1, a2, s


def estimate_sinusoid(
    phi: SensingMatrix,
    r: np.ndarray,
    cfg: EstimatorConfig | None = None,
    initial_bracket: tuple[float, float] = (0.0, math.pi),
) -> EstimateOutcome:
    """Estimate the best-matching sinusoid for a residual measurement.

    Each round lays a uniform grid of grid_points + 1 frequencies over the
    current bracket [alpha, beta], solves the closed-form amplitude problem
    at every node, and keeps the global best (strict improvement, lowest
    index on ties).  The bracket then contracts to the grid neighbors of
    the best-known frequency and the search repeats until the bracket is
    narrower than ``freq_tol``.

    Parameters
    ----------
    phi : SensingMatrix
        Measurement operator.
    r : np.ndarray
        Residual measurement vector of length M; must be nonzero.
    cfg : EstimatorConfig, optional
        Search configuration; defaults match the matrix's N-point grid.
    initial_bracket : (float, float)
        Starting frequency bracket, by default the full (0, pi) range.

    Returns
    -------
    EstimateOutcome
        Final parameters, attained squared error, and per-round history.
        The returned residual_sq is exactly ``amplitude_ls`` re-evaluated
        at the returned frequency.
    """
    if cfg is None:
        cfg = EstimatorConfig()
    r = np.asarray(r, dtype=float)
    if r.ndim != 1 or r.size != phi.m_rows:
        raise ValueError(f"residual length {r.shape} does not match matrix m={phi.m_rows}")
    if float(r @ r) == 0.0:
        raise ValueError("residual is identically zero; nothing to estimate")

    grid_points = cfg.grid_points if cfg.grid_points is not None else phi.n_cols
    if grid_points < 2:
        raise ValueError(f"resolved grid_points must be >= 2, got {grid_points}")
    alpha, beta = float(initial_bracket[0]), float(initial_bracket[1])
    if not (0.0 <= alpha < beta <= math.pi):
        raise ValueError(f"initial bracket must satisfy 0 <= a < b <= pi, got {initial_bracket}")

    t = np.arange(1, phi.n_cols + 1, dtype=float)
    best_s = math.inf
    best_omega = alpha
    brackets = [(alpha, beta)]
    s_history = []
    rounds = 0

    while (beta - alpha) >= cfg.freq_tol and rounds < cfg.max_refinements:
        omegas = np.linspace(alpha, beta, grid_points + 1)
        _, _, s = _grid_eval(phi.entries, t, r, omegas, cfg.gram_det_tol)
        j = int(np.argmin(s))
        improved = bool(s[j] < best_s)
        if improved:
            best_s = float(s[j])
            best_omega = float(omegas[j])
        rounds += 1
        s_history.append(best_s)
        # Recenter on the grid node nearest the incumbent frequency; when the
        # round improved this is the argmin node itself.  Missing neighbors at
        # the grid edge clamp to the current bracket endpoint.
        i_star = j if improved else int(np.argmin(np.abs(omegas - best_omega)))
        new_alpha = max(float(omegas[i_star - 1]), alpha) if i_star >= 1 else alpha
        new_beta = min(float(omegas[i_star + 1]), beta) if i_star <= grid_points - 1 else beta
        if not improved and new_alpha == alpha and new_beta == beta:
            break
        alpha, beta = new_alpha, new_beta
        brackets.append((alpha, beta))

    # Keep omega strictly inside (0, pi); the boundary atoms are degenerate
    # and SinusoidParams requires the open interval.
    omega_hat = best_omega
    if omega_hat <= 0.0:
        omega_hat = math.nextafter(0.0, 1.0)
    elif omega_hat >= math.pi:
        omega_hat = math.nextafter(math.pi, 0.0)

    a1, a2, s_final = amplitude_ls(build_atoms(phi, omega_hat), r, cfg.gram_det_tol)
    params = SinusoidParams.from_linear(omega_hat, a1, a2)
    return EstimateOutcome(
        params=params,
        residual_sq=s_final,
        refinements_used=rounds,
        bracket_history=tuple(brackets),
        best_s_history=tuple(s_history),
    )
