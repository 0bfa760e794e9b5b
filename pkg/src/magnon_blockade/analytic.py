"""Few-excitation pure-state model and closed-form optimal conditions.

The model truncates the driven system at two excitations and evolves it
with the non-Hermitian Hamiltonian (effective Hamiltonian minus
i kappa/2 times the excitation number), which is accurate in the
weak-drive regime.  Amplitudes are normalized so that the vacuum
amplitude is 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import ModelParams

#: Relative size below which a resonance denominator is treated as singular.
SINGULAR_RTOL = 1e-12


class ResonanceError(ZeroDivisionError):
    """A closed-form denominator vanished at a resonance condition."""


@dataclass(frozen=True)
class AmplitudeSet:
    """Steady amplitudes of the two-excitation ansatz, vacuum-normalized.

    c_g1 is the single excitation of mode 1; c_g11 holds two quanta in
    mode 1; c_g12 holds one quantum each in modes 1 and 2 (zero for N = 1,
    and dropped by the general-N weak-drive approximation); c_e1 is the
    qubit excited with one quantum in mode 1.
    """

    n_modes: int
    c_g0: complex
    c_e0: complex
    c_g1: complex
    c_e1: complex
    c_g11: complex
    c_g12: complex = 0.0 + 0.0j
    weak_drive_certified: bool = True

    @property
    def p_g1(self) -> float:
        return abs(self.c_g1) ** 2

    @property
    def p_e1(self) -> float:
        return abs(self.c_e1) ** 2

    @property
    def p_g11(self) -> float:
        return abs(self.c_g11) ** 2

    @property
    def p_g12(self) -> float:
        return abs(self.c_g12) ** 2


@dataclass(frozen=True)
class AnalyticIntermediates:
    """Building blocks of the closed forms."""

    delta_tilde: complex  # complex detuning, imaginary part -kappa/2
    r: float  # decay-to-coupling ratio kappa / J
    a_coeff: complex
    b_coeff: complex
    a_prime: float
    b_prime: float


def complex_detuning(p: ModelParams) -> complex:
    return p.delta - 0.5j * p.decay


def intermediates(p: ModelParams) -> AnalyticIntermediates:
    if p.coupling <= 0:
        raise ValueError("intermediates require a positive coupling")
    dt = complex_detuning(p)
    if abs(dt) == 0:
        raise ResonanceError("zero complex detuning")
    r = p.decay / p.coupling
    phase = np.exp(-1j * p.phase)
    a_coeff = p.coupling * p.probe_rabi * phase - (
        2 * dt + p.n_modes * p.coupling**2 / dt
    ) * p.drive_rabi
    b_coeff = p.coupling * p.drive_rabi * p.probe_rabi * phase / dt
    a_prime = 12 * math.sqrt(2) * r * p.phase - r**2
    b_prime = -24 * p.phase + 8 * math.sqrt(2) * r
    return AnalyticIntermediates(
        delta_tilde=dt,
        r=r,
        a_coeff=a_coeff,
        b_coeff=b_coeff,
        a_prime=a_prime,
        b_prime=b_prime,
    )


def _check_denominator(value: complex, scale: float, name: str):
    if abs(value) <= SINGULAR_RTOL * max(scale, 1e-300):
        raise ResonanceError(f"singular denominator at the {name} resonance")


def amplitudes_general_n(p: ModelParams) -> AmplitudeSet:
    """Closed-form steady amplitudes for arbitrary N.

    The two-mode cross amplitude is dropped, which is valid in the
    weak-drive limit; weak_drive_certified records whether the resulting
    hierarchy |c_g1| >> |c_e1|, |c_g11| actually holds.
    """
    dt = complex_detuning(p)
    n = p.n_modes
    j = p.coupling
    phase = np.exp(-1j * p.phase)
    scale = max(abs(dt) ** 2, n * j**2)
    _check_denominator(dt**2 - n * j**2, scale, "single-excitation")
    _check_denominator(2 * dt**2 - j**2, scale, "two-excitation")

    c_g1 = (j * p.probe_rabi * phase - p.drive_rabi * dt) / (dt**2 - n * j**2)
    inter = intermediates(p) if j > 0 else None
    if inter is None:
        # Decoupled modes: driven damped oscillator amplitude.
        c_g1 = -p.drive_rabi / dt
        c_g11 = math.sqrt(2) * (-p.drive_rabi * c_g1) / (2 * dt)
        c_e0 = -p.probe_rabi * phase / dt
        c_e1 = -(p.probe_rabi * phase * c_g1 + p.drive_rabi * c_e0) / (2 * dt)
    else:
        c_g11 = (
            math.sqrt(2)
            * (inter.a_coeff * c_g1 - inter.b_coeff)
            / (4 * dt**2 - 2 * j**2)
        )
        c_e0 = -(n * j * c_g1 + p.probe_rabi * phase) / dt
        c_e1 = -(
            math.sqrt(2) * j * c_g11 + p.probe_rabi * phase * c_g1 + p.drive_rabi * c_e0
        ) / (2 * dt)
    certified = abs(c_g1) > 10 * max(abs(c_e1), abs(c_g11))
    return AmplitudeSet(
        n_modes=n,
        c_g0=1.0 + 0.0j,
        c_e0=c_e0,
        c_g1=c_g1,
        c_e1=c_e1,
        c_g11=c_g11,
        weak_drive_certified=certified,
    )


def _solve_ansatz(rows: list[list[complex]], rhs: list[complex]) -> np.ndarray:
    mat = np.array(rows, dtype=complex)
    try:
        return np.linalg.solve(mat, np.array(rhs, dtype=complex))
    except np.linalg.LinAlgError as exc:
        raise ResonanceError(f"ansatz linear system is singular: {exc}") from exc


def amplitudes_n1(p: ModelParams) -> AmplitudeSet:
    """Exact steady amplitudes of the five-state single-mode ansatz.

    Solves the truncated non-Hermitian steady equations directly; the
    moduli agree with the single-mode closed forms
    (:func:`closed_form_probabilities_n1`).
    """
    if p.n_modes != 1:
        raise ValueError("amplitudes_n1 requires a single-mode parameter set")
    dt = complex_detuning(p)
    j = p.coupling
    oq = p.probe_rabi * np.exp(-1j * p.phase)
    om = p.drive_rabi
    s2 = math.sqrt(2)
    # Unknowns: (c_e0, c_g1, c_e1, c_g11)
    sol = _solve_ansatz(
        [
            [dt, j, 0, 0],
            [j, dt, 0, 0],
            [om, oq, 2 * dt, s2 * j],
            [0, s2 * om, s2 * j, 2 * dt],
        ],
        [-oq, -om, 0, 0],
    )
    c_e0, c_g1, c_e1, c_g11 = sol
    certified = abs(c_g1) > 10 * max(abs(c_e1), abs(c_g11))
    return AmplitudeSet(
        n_modes=1,
        c_g0=1.0 + 0.0j,
        c_e0=c_e0,
        c_g1=c_g1,
        c_e1=c_e1,
        c_g11=c_g11,
        weak_drive_certified=certified,
    )


def amplitudes_n2(p: ModelParams) -> AmplitudeSet:
    """Exact steady amplitudes of the symmetric nine-state two-mode ansatz.

    Retains the cross amplitude (one quantum in each mode) that the
    general-N approximation drops.
    """
    if p.n_modes != 2:
        raise ValueError("amplitudes_n2 requires a two-mode parameter set")
    dt = complex_detuning(p)
    j = p.coupling
    oq = p.probe_rabi * np.exp(-1j * p.phase)
    om = p.drive_rabi
    s2 = math.sqrt(2)
    # Unknowns: (c_e0, c_g1, c_e1, c_g11, c_g12), symmetric in the two modes.
    sol = _solve_ansatz(
        [
            [dt, 2 * j, 0, 0, 0],
            [j, dt, 0, 0, 0],
            [om, oq, 2 * dt, s2 * j, j],
            [0, s2 * om, s2 * j, 2 * dt, 0],
            [0, 2 * om, 2 * j, 0, 2 * dt],
        ],
        [-oq, -om, 0, 0, 0],
    )
    c_e0, c_g1, c_e1, c_g11, c_g12 = sol
    certified = abs(c_g1) > 10 * max(abs(c_e1), abs(c_g11), abs(c_g12))
    return AmplitudeSet(
        n_modes=2,
        c_g0=1.0 + 0.0j,
        c_e0=c_e0,
        c_g1=c_g1,
        c_e1=c_e1,
        c_g11=c_g11,
        c_g12=c_g12,
        weak_drive_certified=certified,
    )


def closed_form_probabilities_n1(
    p: ModelParams, small_theta: bool = False
) -> tuple[float, float]:
    """|c_g1|^2 and |c_g11|^2 for one mode from the closed forms.

    The small_theta fast path additionally assumes the optimal ratios
    delta = J and probe = 3 * drive, and expands to leading order in the
    phase.
    """
    j, k, om, oq, d, th = (
        p.coupling,
        p.decay,
        p.drive_rabi,
        p.probe_rabi,
        p.delta,
        p.phase,
    )
    if small_theta:
        r = k / j
        p_g1 = (64 + 4 * (6 * th - r) ** 2) * om**2 / k**2 / (r**2 + 16)
        p_g11 = (
            4
            * ((12 * r * th - r**2) ** 2 + (12 * th - 8 * r) ** 2)
            * om**4
            / j**4
            / (((r**2 - 2) ** 2 + 16 * r**2) * (r**4 + 16 * r**2))
        )
        return p_g1, p_g11
    dt = complex_detuning(p)
    denom1 = 4 * abs(j**2 - dt**2) ** 2
    _check_denominator(denom1, max(j, abs(dt)) ** 4, "single-excitation")
    p_g1 = (
        4 * (d * om - j * oq * math.cos(th)) ** 2
        + (2 * j * oq * math.sin(th) - k * om) ** 2
    ) / denom1
    a, b = _real_coefficients(p)
    denom2 = 8 * abs((j**2 - 2 * dt**2) * (j**2 - dt**2)) ** 2
    _check_denominator(denom2, max(j, abs(dt)) ** 8, "two-excitation")
    p_g11 = (a**2 + b**2) / denom2
    return p_g1, p_g11


def _real_coefficients(p: ModelParams) -> tuple[float, float]:
    """Real quadratic coefficients entering the two-excitation amplitude."""
    j, k, om, oq, d, th = (
        p.coupling,
        p.decay,
        p.drive_rabi,
        p.probe_rabi,
        p.delta,
        p.phase,
    )
    a = (
        (2 * j**2 + 4 * d**2 - k**2) * om**2
        + 2 * j**2 * oq**2 * math.cos(2 * th)
        - 8 * d * j * om * oq * math.cos(th)
        + 4 * j * k * om * oq * math.sin(th)
    )
    b = (
        -2 * j**2 * oq**2 * math.sin(2 * th)
        + 8 * d * j * om * oq * math.sin(th)
        + 4 * j * k * om * oq * math.cos(th)
        - 4 * d * k * om**2
    )
    return a, b


def closed_form_probabilities_n2(
    p: ModelParams, small_theta: bool = False
) -> tuple[float, float]:
    """|c_g1|^2 and |c_g11|^2 for two modes from the closed forms.

    The small_theta path assumes delta = sqrt(2) J and probe = 3 sqrt(2)
    drive.  Its first-line bracket is implemented squared, matching the
    exact form it approximates.
    """
    j, k, om, oq, d, th = (
        p.coupling,
        p.decay,
        p.drive_rabi,
        p.probe_rabi,
        p.delta,
        p.phase,
    )
    if small_theta:
        r = k / j
        s2 = math.sqrt(2)
        a_p = 12 * s2 * r * th - r**2
        b_p = -24 * th + 8 * s2 * r
        p_g1 = (128 + 4 * (6 * s2 * th - r) ** 2) * om**2 / k**2 / (r**2 + 32)
        p_g11 = (
            8
            * (a_p**2 + b_p**2)
            * om**4
            / j**4
            / (((r**2 - 4) ** 2 + 32 * r**2) * (r**4 + 32 * r**2))
        )
        return p_g1, p_g11
    dt = complex_detuning(p)
    denom1 = 4 * abs(2 * j**2 - dt**2) ** 2
    _check_denominator(denom1, max(j, abs(dt)) ** 4, "single-excitation")
    p_g1 = (
        4 * (d * om - j * oq * math.cos(th)) ** 2
        + (2 * j * oq * math.sin(th) - om * k) ** 2
    ) / denom1
    a, b = _real_coefficients(p)
    denom2 = 32 * abs((j**2 - dt**2) * (2 * j**2 - dt**2)) ** 2
    _check_denominator(denom2, max(j, abs(dt)) ** 8, "two-excitation")
    p_g11 = ((a + 2 * j**2 * om**2) ** 2 + b**2) / denom2
    return p_g1, p_g11


def g2_analytic(amps: AmplitudeSet) -> tuple[float, float]:
    """(exact, leading-order) correlation from the amplitude set.

    Exact keeps the full two-excitation normalization in the denominator;
    the leading form is 2 |c_g11|^2 / |c_g1|^4.
    """
    if amps.p_g1 == 0:
        raise ZeroDivisionError("vanishing single-excitation amplitude")
    numerator = 2 * amps.p_g11
    exact = numerator / (amps.p_g1 + amps.p_e1 + amps.p_g12 + 2 * amps.p_g11) ** 2
    approx = numerator / amps.p_g1**2
    return exact, approx


def amplitudes_for(p: ModelParams) -> AmplitudeSet:
    """Most accurate available ansatz for the given mode count."""
    if p.n_modes == 1:
        return amplitudes_n1(p)
    if p.n_modes == 2:
        return amplitudes_n2(p)
    return amplitudes_general_n(p)


@dataclass(frozen=True)
class OptimalConditions:
    """Blockade-optimizing parameter ratios for N modes at a given r = kappa/J."""

    n_modes: int
    r: float
    delta_over_j: float
    probe_over_drive: float
    theta_general: float
    theta_exact: float | None


def theta_optimal_exact(n_modes: int, r: float) -> float | None:
    """Stationary-phase formula; available for one and two modes only."""
    if n_modes == 1:
        return r * (8 + r**2) / (12 * (1 + r**2))
    if n_modes == 2:
        return r * (16 + r**2) / (12 * math.sqrt(2) * (2 + r**2))
    return None


def optimal_conditions(n_modes: int, r: float) -> OptimalConditions:
    if n_modes < 1:
        raise ValueError("n_modes must be at least 1")
    if r <= 0:
        raise ValueError("r must be positive")
    root_n = math.sqrt(n_modes)
    return OptimalConditions(
        n_modes=n_modes,
        r=r,
        delta_over_j=root_n,
        probe_over_drive=3 * root_n,
        theta_general=2 * r / (3 * root_n),
        theta_exact=theta_optimal_exact(n_modes, r),
    )
