"""Parameter sweeps, optimum search, and scaling verification.

Grid points are independent; run_sweep can fan them out to a process pool
and always collects results in grid order, so serial and parallel runs
produce identical records.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .analytic import amplitudes_for, g2_analytic, theta_optimal_exact
from .model import ModelParams
from .observables import blockade_metrics, classify_statistics, g2_zero_delay
from .steady_state import build_liouvillian, converge_truncation, solve_steady_state

AXES = ("delta_over_j", "probe_over_drive", "theta", "drive_rabi", "kappa")
ENGINES = ("numeric", "analytic")

GOLDEN = (math.sqrt(5) - 1) / 2


@dataclass(frozen=True)
class SweepSpec:
    """One sweep axis over a base parameter set."""

    base: ModelParams
    axis: str
    grid: tuple[float, ...]
    engines: tuple[str, ...] = ("numeric",)
    #: When sweeping drive_rabi, keep probe_rabi at this multiple of the drive.
    probe_tracks_drive: float | None = None
    truncation_tol: float = 1e-3

    def __post_init__(self):
        if self.axis not in AXES:
            raise ValueError(f"unknown axis {self.axis!r}; choose from {AXES}")
        if not self.grid:
            raise ValueError("grid must be nonempty")
        diffs = np.diff(self.grid)
        if len(diffs) and not (np.all(diffs > 0) or np.all(diffs < 0)):
            raise ValueError("grid must be strictly monotone")
        bad = set(self.engines) - set(ENGINES)
        if bad or not self.engines:
            raise ValueError(f"engines must be a nonempty subset of {ENGINES}")
        object.__setattr__(self, "grid", tuple(float(v) for v in self.grid))


@dataclass(frozen=True)
class SweepRecord:
    axis_value: float
    g2_numeric: float | None = None
    g2_analytic: float | None = None
    p1: float | None = None
    occupation: float | None = None
    n_max: int | None = None
    classification: str | None = None
    error: str | None = None

    @staticmethod
    def _log10(value: float | None) -> float | None:
        if value is None or value <= 0:
            return None
        return math.log10(value)

    @property
    def log10_g2_numeric(self) -> float | None:
        return self._log10(self.g2_numeric)

    @property
    def log10_g2_analytic(self) -> float | None:
        return self._log10(self.g2_analytic)


def apply_axis(
    base: ModelParams,
    axis: str,
    value: float,
    probe_tracks_drive: float | None = None,
) -> ModelParams:
    """Parameter set at one grid point of the given axis."""
    if axis == "delta_over_j":
        return base.with_(delta=value * base.coupling)
    if axis == "probe_over_drive":
        return base.with_(probe_rabi=value * base.drive_rabi)
    if axis == "theta":
        return base.with_(phase=value)
    if axis == "drive_rabi":
        p = base.with_(drive_rabi=value)
        if probe_tracks_drive is not None:
            p = p.with_(probe_rabi=probe_tracks_drive * value)
        return p
    if axis == "kappa":
        return base.with_(decay=value)
    raise ValueError(f"unknown axis {axis!r}")


def numeric_g2(p: ModelParams) -> float:
    rho = solve_steady_state(build_liouvillian(p))
    return g2_zero_delay(rho)


def analytic_g2(p: ModelParams) -> float:
    exact, _ = g2_analytic(amplitudes_for(p))
    return exact


def _evaluate_point(spec: SweepSpec, value: float) -> SweepRecord:
    p = apply_axis(spec.base, spec.axis, value, spec.probe_tracks_drive)
    g2_num = g2_an = p1 = occupation = None
    n_max = None
    classification = None
    error = None
    try:
        if "analytic" in spec.engines:
            amps = amplitudes_for(p)
            g2_an, _ = g2_analytic(amps)
            if p1 is None:
                p1 = amps.p_g1
        if "numeric" in spec.engines:
            _, n_used = converge_truncation(
                p, g2_zero_delay, tol=spec.truncation_tol
            )
            rho = solve_steady_state(build_liouvillian(p.with_(fock_cutoff=n_used)))
            metrics = blockade_metrics(rho)
            g2_num = metrics.g2_zero
            p1 = metrics.p1
            occupation = metrics.occupation
            n_max = metrics.n_max
            classification = metrics.classification
        elif g2_an is not None:
            classification = classify_statistics(g2_an)
    except Exception as exc:  # per-row failures must not abort the sweep
        error = f"{type(exc).__name__}: {exc}"
    return SweepRecord(
        axis_value=value,
        g2_numeric=g2_num,
        g2_analytic=g2_an,
        p1=p1,
        occupation=occupation,
        n_max=n_max,
        classification=classification,
        error=error,
    )


def run_sweep(spec: SweepSpec, workers: int = 1) -> list[SweepRecord]:
    """Evaluate every grid point; one record per point, in grid order."""
    if workers <= 1:
        return [_evaluate_point(spec, v) for v in spec.grid]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_evaluate_point, [spec] * len(spec.grid), spec.grid))


class BracketError(ValueError):
    pass


def golden_section(f, lo: float, hi: float, rel_tol: float = 1e-5) -> tuple[float, float]:
    """Minimize a unimodal function on [lo, hi] to a relative axis tolerance."""
    scale = max(abs(lo), abs(hi), 1e-12)
    x1 = hi - GOLDEN * (hi - lo)
    x2 = lo + GOLDEN * (hi - lo)
    f1, f2 = f(x1), f(x2)
    while abs(hi - lo) > rel_tol * scale:
        if f1 < f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - GOLDEN * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + GOLDEN * (hi - lo)
            f2 = f(x2)
    return (x1, f1) if f1 < f2 else (x2, f2)


def find_minimum(
    base: ModelParams,
    axis: str,
    bracket: tuple[float, float],
    engine: str = "numeric",
    n_scan: int = 33,
    rel_tol: float = 1e-5,
    probe_tracks_drive: float | None = None,
) -> tuple[float, float]:
    """Locate the g2 minimum along one axis inside the bracket.

    A coarse scan finds an interior bracketing triple, which golden-section
    search then refines.  Raises BracketError when no interior minimum
    exists in the bracket.
    """
    if engine not in ENGINES:
        raise ValueError(f"unknown engine {engine!r}")
    evaluator = numeric_g2 if engine == "numeric" else analytic_g2

    def f(v: float) -> float:
        return evaluator(apply_axis(base, axis, v, probe_tracks_drive))

    lo, hi = bracket
    xs = np.linspace(lo, hi, n_scan)
    ys = [f(x) for x in xs]
    k = int(np.argmin(ys))
    if k == 0 or k == n_scan - 1:
        raise BracketError(
            f"no interior minimum of g2 along {axis} in [{lo}, {hi}]"
        )
    return golden_section(f, xs[k - 1], xs[k + 1], rel_tol=rel_tol)


@dataclass(frozen=True)
class ScalingEntry:
    n_modes: int
    delta_over_j: float
    probe_over_drive: float
    theta_times_j_over_kappa: float
    min_g2: float
    error: str | None = None


@dataclass(frozen=True)
class ScalingReport:
    r: float
    entries: tuple[ScalingEntry, ...]
    exponents: dict = field(default_factory=dict)


def verify_scaling(
    n_list=(1, 2, 3),
    r: float = 0.025,
    coupling: float = 20.0,
    drive: float = 0.001,
    rounds: int = 2,
    fock_cutoff: int = 2,
) -> ScalingReport:
    """Locate the numeric blockade optimum per mode count and fit its scaling.

    For each N the optimal (detuning, probe, phase) triple is found by
    coordinate descent with golden-section line searches on the numeric g2;
    the three optimized ratios are then regressed against N on log-log
    axes.  Expected exponents: +1/2, +1/2, -1/2.
    """
    kappa = r * coupling
    entries = []
    for n in n_list:
        root_n = math.sqrt(n)
        theta0 = 2 * r / (3 * root_n)
        p = ModelParams(
            n_modes=n,
            delta=root_n * coupling,
            coupling=coupling,
            probe_rabi=3 * root_n * drive,
            drive_rabi=drive,
            phase=theta0,
            decay=kappa,
            fock_cutoff=fock_cutoff,
        )
        try:
            best = math.inf
            for _ in range(rounds):
                d, _ = find_minimum(
                    p, "delta_over_j",
                    (0.7 * root_n, 1.3 * root_n),
                    n_scan=9, rel_tol=1e-4,
                )
                p = p.with_(delta=d * coupling)
                q, _ = find_minimum(
                    p, "probe_over_drive",
                    (2.0 * root_n, 4.0 * root_n),
                    n_scan=9, rel_tol=1e-4,
                )
                p = p.with_(probe_rabi=q * drive)
                th, best = find_minimum(
                    p, "theta",
                    (0.3 * theta0, 2.0 * theta0),
                    n_scan=9, rel_tol=1e-4,
                )
                p = p.with_(phase=th)
            entries.append(
                ScalingEntry(
                    n_modes=n,
                    delta_over_j=p.delta / coupling,
                    probe_over_drive=p.probe_rabi / drive,
                    theta_times_j_over_kappa=p.phase / r,
                    min_g2=best,
                )
            )
        except Exception as exc:
            entries.append(
                ScalingEntry(n, math.nan, math.nan, math.nan, math.nan,
                             error=f"{type(exc).__name__}: {exc}")
            )
    good = [e for e in entries if e.error is None]
    exponents = {}
    if len(good) >= 2:
        log_n = np.log([e.n_modes for e in good])
        for name, values in (
            ("delta_over_j", [e.delta_over_j for e in good]),
            ("probe_over_drive", [e.probe_over_drive for e in good]),
            ("theta_times_j_over_kappa", [e.theta_times_j_over_kappa for e in good]),
        ):
            slope = np.polyfit(log_n, np.log(values), 1)[0]
            exponents[name] = float(slope)
    return ScalingReport(r=r, entries=tuple(entries), exponents=exponents)


def _theta_sweep_grid(lo: float, hi: float, step: float) -> tuple[float, ...]:
    n = int(round((hi - lo) / step)) + 1
    return tuple(lo + k * step for k in range(n))


def _geometric_grid(lo: float, hi: float, n: int) -> tuple[float, ...]:
    return tuple(float(v) for v in np.geomspace(lo, hi, n))


def preset_sweeps(name: str) -> list[tuple[str, SweepSpec]]:
    """Pinned figure-reproduction sweeps, one (label, spec) pair per series."""
    s2 = math.sqrt(2)
    if name == "fig2":
        theta_grid = _theta_sweep_grid(-0.01, 0.02, 5e-4)
        out = []
        for om in (0.001, 0.05, 0.1):
            base = ModelParams(1, 35.0, 35.0, 3 * om, om, 0.0, 0.5, 4)
            out.append(
                (f"drive{om:g}",
                 SweepSpec(base, "theta", theta_grid, ("numeric", "analytic")))
            )
        return out
    if name == "fig3":
        out = []
        for kappa in (0.1, 0.5, 1.0, 1.5):
            theta = theta_optimal_exact(1, kappa / 35.0)
            base = ModelParams(1, 35.0, 35.0, 3 * 0.005, 0.005, theta, kappa, 4)
            out.append(
                (f"kappa{kappa:g}",
                 SweepSpec(base, "drive_rabi", _geometric_grid(0.005, 0.5, 25),
                           ("numeric",), probe_tracks_drive=3.0))
            )
        return out
    if name == "fig4":
        grid = tuple(float(v) for v in np.linspace(-2.0, 2.0, 81))
        out = []
        for ratio in (1.0, 2.0, 5.0, 10.0):
            base = ModelParams(2, 20.0, 20.0, ratio * 0.1, 0.1, 0.0, 1.0, 4)
            out.append((f"ratio{ratio:g}", SweepSpec(base, "delta_over_j", grid)))
        return out
    if name == "fig5":
        grid = tuple(float(v) for v in np.linspace(1.0, 8.0, 71))
        out = []
        for j in (1.0, 5.0, 10.0, 20.0):
            base = ModelParams(2, s2 * j, j, 3 * s2 * 0.1, 0.1, 0.0, 1.0, 4)
            out.append((f"coupling{j:g}", SweepSpec(base, "probe_over_drive", grid)))
        return out
    if name == "fig6":
        theta_grid = _theta_sweep_grid(-0.01, 0.025, 5e-4)
        out = []
        for om in (0.001, 0.05, 0.1):
            base = ModelParams(2, s2 * 20.0, 20.0, 3 * s2 * om, om, 0.0, 0.5, 4)
            out.append(
                (f"drive{om:g}",
                 SweepSpec(base, "theta", theta_grid, ("numeric", "analytic")))
            )
        return out
    if name == "fig7":
        out = []
        for kappa in (0.1, 0.5, 1.0, 1.5):
            theta = theta_optimal_exact(2, kappa / 20.0)
            base = ModelParams(
                2, s2 * 20.0, 20.0, 3 * s2 * 0.005, 0.005, theta, kappa, 4
            )
            out.append(
                (f"kappa{kappa:g}",
                 SweepSpec(base, "drive_rabi", _geometric_grid(0.005, 0.5, 25),
                           ("numeric",), probe_tracks_drive=3 * s2))
            )
        return out
    raise ValueError(f"unknown preset {name!r}; choose fig2..fig7")
