"""Asymptotic observables of the driven pair.

Once the reflection coefficient R of a mode is known, every post-pulse
quantity is closed form: the one-mode energy shift Omega0*R/(1-R), the
two-mode exact total and its three independent-particle counterparts, the
perturbative (Born) and sudden expansions, the statistical transition
weights whose weighted ladder reproduces the same shift, the ground-state
overlap, the abrupt-quench reflection, and the Berry connection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .dynamics import (
    Pulse,
    Trajectory,
    check_admissible,
    omega_squared,
    reflection,
    _log_sinh,
)
from .model import ModeSet

__all__ = [
    "EnergyShiftReport",
    "TransitionWeights",
    "SuddenShift",
    "energy_shift",
    "total_shift",
    "energy_shift_report",
    "born_shift",
    "sudden_shift",
    "transition_weights",
    "statistical_shift",
    "overlap",
    "abrupt_reflection",
    "berry_connection",
]

SHIFT_KINDS = ("exact", "hf", "ks", "natural")


def energy_shift(mode_frequency: float, R: float) -> float:
    """One-mode time-independent energy shift Omega0 * R / (1 - R)."""
    if not (0.0 <= R < 1.0):
        raise ValueError(f"reflection coefficient must lie in [0, 1), got {R}")
    return mode_frequency * R / (1.0 - R)


def _mode_frequencies(modes: ModeSet, kind: str):
    if kind == "exact":
        return (modes.omega1, modes.omega2)
    try:
        freq = {"hf": modes.omega_e, "ks": modes.omega_d, "natural": modes.omega_w}[kind]
    except KeyError:
        raise ValueError(f"kind must be one of {SHIFT_KINDS}, got {kind!r}") from None
    return (freq, freq)


def total_shift(modes: ModeSet, pulse: Pulse, kind: str, method: str = "analytic") -> float:
    """Two-particle total energy shift for the exact model or a reference.

    ``exact`` sums the shifts of the two independent modes; the reference
    kinds count one independent-particle frequency twice.
    """
    check_admissible(modes, pulse)
    return sum(
        energy_shift(om, reflection(om, pulse, method=method).R)
        for om in _mode_frequencies(modes, kind)
    )


@dataclass(frozen=True)
class EnergyShiftReport:
    """Per-mode shifts, exact total, and the three model totals."""

    omega0: float
    lam: float
    Lambda: float
    beta: float
    shift_mode1: float
    shift_mode2: float
    exact: float
    hf: float
    ks: float
    natural: float
    method: str

    def as_record(self) -> dict:
        return {
            "omega0": self.omega0,
            "lambda": self.lam,
            "Lambda": self.Lambda,
            "beta": self.beta,
            "shift_mode1": self.shift_mode1,
            "shift_mode2": self.shift_mode2,
            "exact": self.exact,
            "hf": self.hf,
            "ks": self.ks,
            "natural": self.natural,
        }


def energy_shift_report(modes: ModeSet, pulse: Pulse, method: str = "analytic") -> EnergyShiftReport:
    """All shift observables for one (model, pulse) combination."""
    check_admissible(modes, pulse)

    def shift(om):
        return energy_shift(om, reflection(om, pulse, method=method).R)

    d1, d2 = shift(modes.omega1), shift(modes.omega2)
    return EnergyShiftReport(
        omega0=modes.params.omega0,
        lam=modes.params.lam,
        Lambda=pulse.Lambda,
        beta=pulse.beta,
        shift_mode1=d1,
        shift_mode2=d2,
        exact=d1 + d2,
        hf=2.0 * shift(modes.omega_e),
        ks=2.0 * shift(modes.omega_d),
        natural=2.0 * shift(modes.omega_w),
        method=method,
    )


def born_shift(mode_frequency: float, pulse: Pulse) -> float:
    """First-order shift (Lambda*omega0^2*pi / 4 beta^2)^2 * Omega0 / sinh^2.

    Quadratic in the drive, hence blind to its sign.
    """
    if pulse.coupling == 0.0:
        return 0.0
    v = 0.5 * math.pi * mode_frequency / pulse.beta
    prefactor = (pulse.coupling * math.pi / (4.0 * pulse.beta**2)) ** 2
    return prefactor * mode_frequency * math.exp(-2.0 * _log_sinh(v))


@dataclass(frozen=True)
class SuddenShift:
    """Fast-drive expansion value with its validity flag."""

    value: float
    valid: bool


def sudden_shift(mode_frequency: float, pulse: Pulse) -> SuddenShift:
    """Sudden-limit expansion of the one-mode shift.

    Keeps the leading sign-carrying factor (1 - Lambda*omega0^2 / 2 beta^2).
    ``valid`` is a coarse asymptotic check (beta well above the mode
    frequency and the drive scale).
    """
    om, beta = mode_frequency, pulse.beta
    coupling = pulse.coupling
    value = (
        om
        * (0.5 * coupling) ** 2
        / (beta * om) ** 2
        * (1.0 - (math.pi * om / (2.0 * beta)) ** 2 / 3.0)
        * (1.0 - 0.5 * coupling / beta**2)
    )
    valid = beta >= 3.0 * om and beta**2 >= 3.0 * abs(coupling)
    return SuddenShift(value=value, valid=valid)


@dataclass(frozen=True)
class TransitionWeights:
    """Even-ladder transition weights W_{2n,0}(R), n = 0..n_max.

    ``tail_bound`` is the geometric bound R^(n_max+1) / sqrt(1-R) on the
    discarded weight beyond n_max.
    """

    R: float
    weights: np.ndarray
    tail_bound: float


def transition_weights(R: float, n_max: int = 200) -> TransitionWeights:
    """Statistical weights of the allowed upward transitions.

    W_n = Gamma(n+1/2) / (sqrt(pi) Gamma(n+1)) * sqrt(1-R) * R^n, evaluated
    with logarithmic Gamma accumulation so that no factorial overflows.
    The n_max = 200 default keeps the tail below 1e-12 for R <= 0.9.
    """
    if not (0.0 <= R < 1.0):
        raise ValueError(f"reflection coefficient must lie in [0, 1), got {R}")
    if n_max < 0:
        raise ValueError(f"n_max must be >= 0, got {n_max}")
    n = np.arange(n_max + 1)
    if R == 0.0:
        weights = np.zeros(n_max + 1)
        weights[0] = 1.0
        return TransitionWeights(R=R, weights=weights, tail_bound=0.0)
    log_c = gammaln(n + 0.5) - gammaln(n + 1.0) - 0.5 * math.log(math.pi)
    weights = np.exp(log_c + n * math.log(R) + 0.5 * math.log1p(-R))
    tail = R ** (n_max + 1) / math.sqrt(1.0 - R)
    return TransitionWeights(R=R, weights=weights, tail_bound=tail)


def statistical_shift(weights: TransitionWeights, mode_frequency: float) -> float:
    """Energy shift as the weighted ladder sum Omega0 [sum (2n+1/2) W - 1/2].

    Equals the closed form Omega0*R/(1-R) up to the truncation tail.
    """
    n = np.arange(len(weights.weights))
    return mode_frequency * (float(np.sum((2.0 * n + 0.5) * weights.weights)) - 0.5)


def overlap(modes: ModeSet, pulse: Pulse, kind: str, method: str = "analytic") -> float:
    """Squared overlap of the long-time state with the initial ground state.

    ``exact`` factorizes into per-mode factors sqrt(1-R(omega_i)); the
    density-optimal ``ks`` value is 1 - R(omega_d).
    """
    check_admissible(modes, pulse)
    if kind == "exact":
        r1 = reflection(modes.omega1, pulse, method=method).R
        r2 = reflection(modes.omega2, pulse, method=method).R
        return math.sqrt(1.0 - r1) * math.sqrt(1.0 - r2)
    if kind == "ks":
        return 1.0 - reflection(modes.omega_d, pulse, method=method).R
    raise ValueError(f"kind must be 'exact' or 'ks', got {kind!r}")


def abrupt_reflection(mode_frequency: float, Lambda: float, omega0: float) -> float:
    """Reflection coefficient of an abrupt (one-sided) frequency quench.

    The drive switches on at full strength and stays on, unlike the
    switch-on-and-off pulse; the two protocols are not comparable limits.
    """
    final_sq = mode_frequency**2 + Lambda * omega0**2
    if final_sq <= 0.0:
        raise ValueError(
            f"final squared frequency {final_sq} <= 0: quench unbinds the mode"
        )
    om_f = math.sqrt(final_sq)
    return ((mode_frequency - om_f) / (mode_frequency + om_f)) ** 2


def berry_connection(traj: Trajectory, pulse: Pulse, t: float) -> float:
    """Geometric connection i<phi|d_t phi> of one evolving mode.

    Equals Omega0/2 before the pulse and (Omega0/2)(1+R)/(1-R), i.e. the
    asymptotic one-mode energy, after it.
    """
    om = traj.mode_frequency
    B, Bdot, _ = traj.state_at(t)
    o2 = omega_squared(om, pulse, t)
    return float(om / 4.0 * (o2 * B**2 / om**2 + 1.0 / B**2 + Bdot**2 / om**2))
