"""Physical parameters and Hamiltonian / dissipator assembly.

All rates and frequencies are expressed in units of the reference rate
gamma (gamma / 2 pi = 1 MHz); angles are in radians.  Everything lives in
the frame rotating at the common drive frequency, so only the detuning
enters the numerics.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace

import numpy as np

from .operators import (
    HilbertSpec,
    QuantumOperator,
    mode_annihilation,
    qubit_sigma_minus,
)

#: Minimum |detuning| / coupling ratio for the dispersive elimination to be trusted.
DISPERSIVE_RATIO_MIN = 5.0


@dataclass(frozen=True)
class ModelParams:
    """Parameters of the driven qubit + N-mode model.

    decay is the common rate of the qubit and every mode; the dissipator
    convention carries a kappa/2 prefactor in front of the two-sided
    Lindblad form, so a lone excited qubit population decays at rate kappa.
    """

    n_modes: int
    delta: float
    coupling: float
    probe_rabi: float
    drive_rabi: float
    phase: float
    decay: float
    fock_cutoff: int = 4

    def __post_init__(self):
        if self.n_modes < 1:
            raise ValueError("n_modes must be at least 1")
        if self.decay <= 0:
            raise ValueError("decay must be positive (no steady state otherwise)")
        if self.coupling < 0 or self.probe_rabi < 0 or self.drive_rabi < 0:
            raise ValueError("coupling and drive amplitudes must be nonnegative")
        if self.fock_cutoff < 1:
            raise ValueError("fock_cutoff must be at least 1")

    def hilbert_spec(self, fock_cutoff: int | None = None) -> HilbertSpec:
        return HilbertSpec(self.n_modes, fock_cutoff or self.fock_cutoff)

    def with_(self, **kwargs) -> "ModelParams":
        return replace(self, **kwargs)


def _check_spec(p: ModelParams, spec: HilbertSpec):
    if spec.n_modes != p.n_modes:
        raise ValueError(
            f"params have {p.n_modes} modes but space has {spec.n_modes}"
        )


def build_effective_hamiltonian(p: ModelParams, spec: HilbertSpec) -> QuantumOperator:
    """Rotating-frame Hamiltonian of the driven qubit + N-mode system."""
    _check_spec(p, spec)
    sm = qubit_sigma_minus(spec).matrix
    sp = sm.conj().T
    h = p.delta * (sp @ sm)
    drive_phase = np.exp(-1j * p.phase)
    h = h + p.probe_rabi * (drive_phase * sp + np.conj(drive_phase) * sm)
    for j in range(1, p.n_modes + 1):
        m = mode_annihilation(j, spec).matrix
        md = m.conj().T
        h = h + p.delta * (md @ m)
        h = h + p.coupling * (m @ sp + md @ sm)
        h = h + p.drive_rabi * (md + m)
    return QuantumOperator(h, spec)


def build_nonhermitian_hamiltonian(p: ModelParams, spec: HilbertSpec) -> QuantumOperator:
    """Effective Hamiltonian minus i kappa/2 times the total excitation number."""
    _check_spec(p, spec)
    h = build_effective_hamiltonian(p, spec).matrix
    sm = qubit_sigma_minus(spec).matrix
    number = sm.conj().T @ sm
    for j in range(1, p.n_modes + 1):
        m = mode_annihilation(j, spec).matrix
        number = number + m.conj().T @ m
    return QuantumOperator(h - 0.5j * p.decay * number, spec)


def build_dissipators(
    p: ModelParams, spec: HilbertSpec
) -> list[tuple[QuantumOperator, float]]:
    """Collapse channels: (sigma_minus, kappa) and one (m_j, kappa) per mode."""
    _check_spec(p, spec)
    channels = [(qubit_sigma_minus(spec), p.decay)]
    for j in range(1, p.n_modes + 1):
        channels.append((mode_annihilation(j, spec), p.decay))
    return channels


@dataclass(frozen=True)
class CavityMediatedParams:
    """Couplings and detunings of the two-arm cavity realization.

    Each arm j holds one mode coupled to its cavity with strength
    magnon_cavity_couplings[j]; the qubit couples to cavity j with
    qubit_cavity_couplings[j].  qubit_magnon_detunings[j] is the
    qubit-mode detuning entering the effective exchange coupling;
    qubit_cavity_detunings[j] enters the qubit frequency shift.  (The
    source model is ambiguous about which detuning the qubit shift uses;
    both are exposed and the identification is documented here.)
    """

    qubit_cavity_couplings: tuple[float, ...]
    magnon_cavity_couplings: tuple[float, ...]
    qubit_magnon_detunings: tuple[float, ...]
    qubit_cavity_detunings: tuple[float, ...]

    def __post_init__(self):
        n = len(self.qubit_cavity_couplings)
        for name in (
            "magnon_cavity_couplings",
            "qubit_magnon_detunings",
            "qubit_cavity_detunings",
        ):
            if len(getattr(self, name)) != n:
                raise ValueError("all per-arm parameter lists must have equal length")


@dataclass(frozen=True)
class EffectiveCoupling:
    """Result of the adiabatic elimination of the cavity arms."""

    couplings: tuple[float, ...]
    qubit_shift: float
    mode_shifts: tuple[float, ...]
    dispersive_ok: bool


def derive_effective_params(c: CavityMediatedParams) -> EffectiveCoupling:
    """Effective exchange couplings J_j = g_q g_m / Delta_m and dispersive shifts.

    Emits a warning (and flags the result) when any |Delta_m| / max(g_q, g_m)
    ratio falls below DISPERSIVE_RATIO_MIN.
    """
    couplings = []
    mode_shifts = []
    ok = True
    for g_q, g_m, d_m in zip(
        c.qubit_cavity_couplings,
        c.magnon_cavity_couplings,
        c.qubit_magnon_detunings,
    ):
        if d_m == 0:
            raise ZeroDivisionError(
                "qubit-magnon detuning is zero: adiabatic elimination is singular"
            )
        g_scale = max(abs(g_q), abs(g_m))
        if g_scale > 0 and abs(d_m) / g_scale < DISPERSIVE_RATIO_MIN:
            ok = False
        couplings.append(g_q * g_m / d_m)
        mode_shifts.append(g_m**2 / d_m)
    qubit_shift = 0.0
    for g_q, d_c in zip(c.qubit_cavity_couplings, c.qubit_cavity_detunings):
        if d_c == 0:
            raise ZeroDivisionError(
                "qubit-cavity detuning is zero: adiabatic elimination is singular"
            )
        qubit_shift += g_q**2 / d_c
    if not ok:
        warnings.warn(
            "dispersive validity ratio below "
            f"{DISPERSIVE_RATIO_MIN}: effective couplings are unreliable",
            stacklevel=2,
        )
    return EffectiveCoupling(
        couplings=tuple(couplings),
        qubit_shift=qubit_shift,
        mode_shifts=tuple(mode_shifts),
        dispersive_ok=ok,
    )


def params_from_cavity_mediated(
    c: CavityMediatedParams,
    *,
    delta: float,
    probe_rabi: float,
    drive_rabi: float,
    phase: float,
    decay: float,
    fock_cutoff: int = 4,
) -> ModelParams:
    """Map the eliminated two-arm model onto ModelParams with a common J.

    The per-arm couplings are averaged (the symmetric realization assumes
    they are equal); the dispersive shifts are taken as already absorbed
    into the common detuning supplied by the caller.
    """
    eff = derive_effective_params(c)
    j = float(np.mean(eff.couplings))
    return ModelParams(
        n_modes=len(eff.couplings),
        delta=delta,
        coupling=j,
        probe_rabi=probe_rabi,
        drive_rabi=drive_rabi,
        phase=phase,
        decay=decay,
        fock_cutoff=fock_cutoff,
    )


def single_excitation_energies(p: ModelParams) -> np.ndarray:
    """Eigenvalues of the undriven Hamiltonian in the one-excitation sector.

    The N degenerate modes hybridize with the qubit into one bright pair at
    delta +- sqrt(N) J and N - 1 dark states at delta.
    """
    spec = p.hilbert_spec(fock_cutoff=1)
    h = build_effective_hamiltonian(
        p.with_(probe_rabi=0.0, drive_rabi=0.0, fock_cutoff=1), spec
    ).matrix
    sm = qubit_sigma_minus(spec).matrix
    number = sm.conj().T @ sm
    for j in range(1, p.n_modes + 1):
        m = mode_annihilation(j, spec).matrix
        number = number + m.conj().T @ m
    one = np.isclose(np.diag(number).real, 1.0)
    block = h[np.ix_(one, one)]
    return np.linalg.eigvalsh(block)
