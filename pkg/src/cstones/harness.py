"""Monte Carlo experiment harness: sweeps over measurement count or SNR.

For every (sweep value, trial) cell the harness draws a random model,
synthesizes and optionally noises its samples, draws a fresh sensing matrix,
measures, runs each requested method, and scores the reconstruction with the
normalized l2 error ||x - xhat|| / ||x|| against the (noisy) sample vector.
Everything is keyed off deterministic seeds so a spec reruns to identical
tables; wall time is the only non-reproducible column.

Method ids: "mds" (the model-selection recoverer), "oracle" (genie-aided
least squares at the true frequencies), "bomp" (band-excluded pursuit).
"""

from __future__ import annotations

import json
import math
import os
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from .baselines import BompConfig, bomp_recover, oracle_ls
from .model import NoiseSpec, add_noise, draw_model, synthesize
from .recovery import RecoveryConfig, recover
from .sensing import GAUSSIAN, SUBSAMPLING, matrix_from_kind, measure

__all__ = [
    "METHOD_MDS",
    "METHOD_ORACLE",
    "METHOD_BOMP",
    "CSV_HEADER",
    "ExperimentSpec",
    "TrialResult",
    "ExperimentResult",
    "normalized_l2_error",
    "match_frequencies",
    "run_experiment",
    "write_csv",
    "write_summary_json",
    "write_svg",
]

METHOD_MDS = "mds"
METHOD_ORACLE = "oracle"
METHOD_BOMP = "bomp"
_KNOWN_METHODS = (METHOD_MDS, METHOD_ORACLE, METHOD_BOMP)

AXIS_M = "m"
AXIS_SNR = "snr"

CSV_HEADER = "sweep_value,method,trial,seed,nl2_error,freq_err_total,time_s"

# Salt separating the noise stream from the model-drawing stream, which both
# derive from base_seed ^ trial.
_NOISE_SALT = 0x5EED_0F_A11


@dataclass(frozen=True)
class ExperimentSpec:
    """Full description of one sweep experiment.

    ``sweep_axis`` is "m" (vary measurement count, fixed SNR) or "snr"
    (vary SNR in dB, fixed measurement count).  ``fixed_snr_db`` of None
    means noiseless.  Sweep values must be sorted ascending.
    """

    sweep_axis: str
    sweep_values: tuple[float, ...]
    n: int = 128
    k: int = 3
    preset: str = "freq"
    matrix_kind: str = GAUSSIAN
    fixed_m: int = 64
    fixed_snr_db: float | None = None
    trials: int = 50
    base_seed: int = 0
    methods: tuple[str, ...] = (METHOD_MDS,)
    min_sep: float | None = None
    recovery: RecoveryConfig | None = None
    bomp: BompConfig | None = None

    def __post_init__(self):
        object.__setattr__(self, "sweep_values", tuple(float(v) for v in self.sweep_values))
        object.__setattr__(self, "methods", tuple(self.methods))
        if self.sweep_axis not in (AXIS_M, AXIS_SNR):
            raise ValueError(f"sweep_axis must be 'm' or 'snr', got {self.sweep_axis!r}")
        if not self.sweep_values:
            raise ValueError("sweep_values must be nonempty")
        if list(self.sweep_values) != sorted(self.sweep_values):
            raise ValueError(f"sweep_values must be ascending: {self.sweep_values}")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        for meth in self.methods:
            if meth not in _KNOWN_METHODS:
                raise ValueError(f"unknown method {meth!r}; known: {_KNOWN_METHODS}")
        if self.matrix_kind not in (GAUSSIAN, SUBSAMPLING):
            raise ValueError(f"unknown matrix kind {self.matrix_kind!r}")
        if self.recovery is not None and self.recovery.k != self.k:
            raise ValueError("recovery config sparsity must match spec.k")
        if self.bomp is not None and self.bomp.k != self.k:
            raise ValueError("bomp config sparsity must match spec.k")

    @property
    def resolved_min_sep(self) -> float:
        return self.min_sep if self.min_sep is not None else math.pi / self.n

    def resolved_recovery(self) -> RecoveryConfig:
        return self.recovery if self.recovery is not None else RecoveryConfig(k=self.k)

    def resolved_bomp(self) -> BompConfig:
        return self.bomp if self.bomp is not None else BompConfig(k=self.k)

    def to_dict(self) -> dict:
        rec = self.resolved_recovery()
        est = rec.estimator
        bomp = self.resolved_bomp()
        return {
            "sweep_axis": self.sweep_axis,
            "sweep_values": list(self.sweep_values),
            "n": self.n,
            "k": self.k,
            "preset": self.preset,
            "matrix_kind": self.matrix_kind,
            "fixed_m": self.fixed_m,
            "fixed_snr_db": self.fixed_snr_db,
            "trials": self.trials,
            "base_seed": self.base_seed,
            "methods": list(self.methods),
            "min_sep": self.resolved_min_sep,
            "recovery": {
                "max_sweeps": rec.max_sweeps,
                "residual_rel_tol": rec.residual_rel_tol,
                "collapse_duplicates": rec.collapse_duplicates,
                "warm_start": rec.warm_start,
                "estimator": {
                    "grid_points": est.grid_points,
                    "freq_tol": est.freq_tol,
                    "max_refinements": est.max_refinements,
                    "gram_det_tol": est.gram_det_tol,
                },
            },
            "bomp": {"band_radius": bomp.band_radius, "frame_c": bomp.frame_c},
        }


@dataclass(frozen=True)
class TrialResult:
    """One (sweep value, method, trial) row."""

    sweep_value: float
    method: str
    trial: int
    seed: int
    nl2_error: float
    freq_errors: tuple[float, ...] | None
    time_s: float

    @property
    def freq_err_total(self) -> float:
        if self.freq_errors is None:
            return float("nan")
        return float(sum(self.freq_errors))


@dataclass(frozen=True)
class ExperimentResult:
    """All trial rows plus per-cell aggregates and run metadata."""

    spec: ExperimentSpec
    rows: tuple[TrialResult, ...]
    summary: dict
    metadata: dict = field(default_factory=dict)

    def csv_lines(self, include_time: bool = True) -> list[str]:
        header = CSV_HEADER if include_time else CSV_HEADER.rsplit(",", 1)[0]
        lines = [header]
        for row in self.rows:
            cells = [
                repr(row.sweep_value),
                row.method,
                str(row.trial),
                str(row.seed),
                repr(row.nl2_error),
                repr(row.freq_err_total),
            ]
            if include_time:
                cells.append(repr(row.time_s))
            lines.append(",".join(cells))
        return lines


def normalized_l2_error(x: np.ndarray, xhat: np.ndarray) -> float:
    """||x - xhat||_2 / ||x||_2; rejects a zero reference vector."""
    x = np.asarray(x, dtype=float)
    xhat = np.asarray(xhat, dtype=float)
    if x.shape != xhat.shape:
        raise ValueError(f"shape mismatch: {x.shape} vs {xhat.shape}")
    denom = float(np.linalg.norm(x))
    if denom == 0.0:
        raise ValueError("reference vector is zero; error undefined")
    return float(np.linalg.norm(x - xhat)) / denom


def match_frequencies(truth, estimate) -> tuple[tuple[tuple[int, int], ...], tuple[float, ...]]:
    """Minimum-total-absolute-error assignment between two frequency sets.

    Returns (pairs, errors) where pairs[(i, j)] matches truth[i] with
    estimate[j] and errors holds |truth[i] - estimate[j]| per pair, in
    truth order.
    """
    truth = np.asarray(truth, dtype=float)
    estimate = np.asarray(estimate, dtype=float)
    if truth.shape != estimate.shape or truth.ndim != 1:
        raise ValueError(f"count mismatch: {truth.shape} vs {estimate.shape}")
    cost = np.abs(truth[:, None] - estimate[None, :])
    rows, cols = linear_sum_assignment(cost)
    pairs = tuple((int(i), int(j)) for i, j in zip(rows, cols))
    errors = tuple(float(cost[i, j]) for i, j in pairs)
    return pairs, errors


def _mix_seed(base: int, trial: int, sweep_value: float | None = None) -> int:
    seed = base ^ trial
    if sweep_value is not None:
        seed ^= int(round(float(sweep_value)))
    return seed & 0x7FFF_FFFF_FFFF_FFFF


def _run_cell(spec: ExperimentSpec, sweep_value: float, trial: int) -> list[TrialResult]:
    """Run every method for one (sweep value, trial) cell."""
    model_seed = _mix_seed(spec.base_seed, trial)
    model = draw_model(
        spec.k, spec.n, spec.resolved_min_sep, preset=spec.preset, seed=model_seed
    )
    s = synthesize(model)
    snr = sweep_value if spec.sweep_axis == AXIS_SNR else spec.fixed_snr_db
    noise_seed = _mix_seed(spec.base_seed ^ _NOISE_SALT, trial)
    x = add_noise(s, NoiseSpec(snr_db=snr, seed=noise_seed))
    m_rows = int(sweep_value) if spec.sweep_axis == AXIS_M else spec.fixed_m
    matrix_seed = _mix_seed(spec.base_seed, trial, sweep_value)
    phi = matrix_from_kind(spec.matrix_kind, m_rows, spec.n, matrix_seed)
    meas = measure(phi, x)

    rows = []
    for method in spec.methods:
        t0 = time.perf_counter()
        try:
            xhat, freqs_hat = _apply_method(method, spec, phi, meas, model)
            elapsed = time.perf_counter() - t0
            nl2 = normalized_l2_error(x, xhat)
            if freqs_hat is not None and len(freqs_hat) == model.k:
                _, freq_errors = match_frequencies(model.frequencies, freqs_hat)
            else:
                freq_errors = None
        except Exception:
            # Failed trials score the worst-case xhat = 0 error and keep the
            # sweep running.
            elapsed = time.perf_counter() - t0
            nl2 = 1.0
            freq_errors = None
        rows.append(
            TrialResult(
                sweep_value=sweep_value,
                method=method,
                trial=trial,
                seed=model_seed,
                nl2_error=nl2,
                freq_errors=freq_errors,
                time_s=elapsed,
            )
        )
    return rows


def _apply_method(method, spec, phi, meas, model):
    if method == METHOD_MDS:
        result = recover(phi, meas, spec.resolved_recovery())
        return result.signal, result.model.frequencies
    if method == METHOD_ORACLE:
        fitted = oracle_ls(phi, meas, model.frequencies)
        return synthesize(fitted), fitted.frequencies
    if method == METHOD_BOMP:
        fitted = bomp_recover(phi, meas, spec.resolved_bomp())
        return synthesize(fitted), fitted.frequencies
    raise ValueError(f"unknown method {method!r}")


def run_experiment(spec: ExperimentSpec, workers: int = 1) -> ExperimentResult:
    """Run the full sweep and aggregate per-cell statistics.

    ``workers`` > 1 fans trials out over a process pool; rows are gathered
    in deterministic (sweep value, method, trial) order either way.
    """
    tasks = [(v, t) for v in spec.sweep_values for t in range(spec.trials)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            cell_rows = list(pool.map(_run_cell_star, [(spec, v, t) for v, t in tasks]))
    else:
        cell_rows = [_run_cell(spec, v, t) for v, t in tasks]

    by_key = {}
    for (v, t), rows in zip(tasks, cell_rows):
        for row in rows:
            by_key[(v, row.method, t)] = row
    ordered = tuple(
        by_key[(v, meth, t)]
        for v in spec.sweep_values
        for meth in spec.methods
        for t in range(spec.trials)
    )

    summary = {}
    for v in spec.sweep_values:
        cell = {}
        for meth in spec.methods:
            errs = [r.nl2_error for r in ordered if r.sweep_value == v and r.method == meth]
            times = [r.time_s for r in ordered if r.sweep_value == v and r.method == meth]
            cell[meth] = {
                "mean_error": float(np.mean(errs)),
                "median_error": float(np.median(errs)),
                "mean_time_s": float(np.mean(times)),
                "trials": len(errs),
            }
        summary[_value_key(v)] = cell

    metadata = {
        "error_reference": "noisy sample vector x (equals the clean signal when noiseless)",
        "matrix_policy": "redrawn per trial, seed = base_seed ^ trial ^ round(sweep_value)",
        "model_seed": "base_seed ^ trial (shared across sweep values)",
        "noise_seed": "(base_seed ^ salt) ^ trial, common noise stream across sweep values",
        "failed_trial_convention": "nl2_error = 1.0 (the xhat = 0 worst case), freq errors empty",
    }
    return ExperimentResult(spec=spec, rows=ordered, summary=summary, metadata=metadata)


def _run_cell_star(args):
    return _run_cell(*args)


def _value_key(v: float) -> str:
    return repr(int(v)) if float(v).is_integer() else repr(float(v))


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(result: ExperimentResult, path: str) -> None:
    """Write the per-trial table; atomic (temp file then rename)."""
    _atomic_write(path, "\n".join(result.csv_lines()) + "\n")


def write_summary_json(result: ExperimentResult, path: str) -> None:
    """Write per-cell aggregates with the full spec echoed for provenance."""
    payload = {
        "spec": result.spec.to_dict(),
        "summary": result.summary,
        "metadata": result.metadata,
    }
    _atomic_write(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


_SVG_COLORS = {
    METHOD_MDS: "#d62728",
    METHOD_ORACLE: "#2ca02c",
    METHOD_BOMP: "#1f77b4",
}


def write_svg(result: ExperimentResult, path: str) -> None:
    """Self-contained SVG line chart of mean error vs. sweep value.

    The y axis is log10 of the mean normalized error, clipped below at
    1e-12; one polyline per method.
    """
    spec = result.spec
    width, height = 640, 420
    left, right, top, bottom = 70, 20, 25, 50
    xs = list(spec.sweep_values)
    floor = 1e-12

    series = {}
    for meth in spec.methods:
        series[meth] = [
            math.log10(max(result.summary[_value_key(v)][meth]["mean_error"], floor))
            for v in xs
        ]
    all_y = [y for ys in series.values() for y in ys]
    y_lo = math.floor(min(all_y)) if all_y else -1
    y_hi = math.ceil(max(all_y)) if all_y else 0
    if y_hi == y_lo:
        y_hi = y_lo + 1
    x_lo, x_hi = min(xs), max(xs)
    if x_hi == x_lo:
        x_hi = x_lo + 1.0

    def sx(v):
        return left + (v - x_lo) / (x_hi - x_lo) * (width - left - right)

    def sy(y):
        return top + (y_hi - y) / (y_hi - y_lo) * (height - top - bottom)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{left}" y1="{height - bottom}" x2="{width - right}" '
        f'y2="{height - bottom}" stroke="black"/>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{height - bottom}" stroke="black"/>',
    ]
    for v in xs:
        parts.append(
            f'<text x="{sx(v):.1f}" y="{height - bottom + 18}" font-size="11" '
            f'text-anchor="middle">{_value_key(v)}</text>'
        )
    for tick in range(y_lo, y_hi + 1):
        parts.append(
            f'<line x1="{left - 4}" y1="{sy(tick):.1f}" x2="{left}" y2="{sy(tick):.1f}" '
            f'stroke="black"/>'
        )
        parts.append(
            f'<text x="{left - 8}" y="{sy(tick) + 4:.1f}" font-size="11" '
            f'text-anchor="end">1e{tick}</text>'
        )
    axis_label = "measurements M" if spec.sweep_axis == AXIS_M else "SNR (dB)"
    parts.append(
        f'<text x="{(left + width - right) / 2:.1f}" y="{height - 12}" font-size="12" '
        f'text-anchor="middle">{axis_label}</text>'
    )
    parts.append(
        f'<text x="14" y="{(top + height - bottom) / 2:.1f}" font-size="12" '
        f'text-anchor="middle" transform="rotate(-90 14 {(top + height - bottom) / 2:.1f})">'
        f"mean normalized error</text>"
    )
    for idx, meth in enumerate(spec.methods):
        color = _SVG_COLORS.get(meth, "#7f7f7f")
        points = " ".join(f"{sx(v):.1f},{sy(y):.1f}" for v, y in zip(xs, series[meth]))
        parts.append(
            f'<polyline points="{points}" fill="none" stroke="{color}" stroke-width="2"/>'
        )
        ly = top + 14 + 16 * idx
        parts.append(
            f'<line x1="{width - right - 120}" y1="{ly - 4}" x2="{width - right - 95}" '
            f'y2="{ly - 4}" stroke="{color}" stroke-width="2"/>'
        )
        parts.append(
            f'<text x="{width - right - 88}" y="{ly}" font-size="12">{meth}</text>'
        )
    parts.append("</svg>")
    _atomic_write(path, "\n".join(parts) + "\n")
