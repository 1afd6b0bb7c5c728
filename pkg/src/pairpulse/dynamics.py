"""Time-dependent response of the trapped pair to a finite confinement pulse.

The pulse multiplies the confinement of every mode by a common envelope, so
each independent mode reduces to one parametric oscillator with frequency
``Omega^2(t) = Omega0^2 + Lambda*omega0^2*F(t)``.  The evolving Gaussian is
parametrized by a width scale ``B(t)`` obeying the Ermakov equation

    B'' + Omega^2(t) B = Omega0^2 / B^3,    B(-inf) = 1, B'(-inf) = 0.

Instead of the stiff nonlinear form, the equivalent *linear* complex
oscillator ``xi'' + Omega^2(t) xi = 0`` with ``xi = B exp(i gamma)`` is
integrated; ``B = |xi|`` and the phase rate ``gamma' = Omega0/B^2`` ride
along as an extra quadrature.  After the pulse, a single invariant built
from ``B`` and ``B'`` encodes the reflection coefficient ``R`` of the
associated one-dimensional scattering problem, which in turn fixes every
asymptotic observable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .model import ModeSet

__all__ = [
    "IonizationRegimeError",
    "Pulse",
    "Trajectory",
    "ReflectionResult",
    "OneMatrixSnapshot",
    "SnapshotSeries",
    "omega_squared",
    "check_admissible",
    "integrate_mode",
    "extract_reflection",
    "analytic_reflection",
    "reflection",
    "onematrix_snapshot",
    "snapshot_series",
    "gamma1_time",
    "effective_potential",
    "energy_expectation_ks",
    "continuity_residual",
    "trajectory_table",
]

PULSE_SHAPES = ("sech2",)

# Envelope value below which the pulse counts as "off" for initial
# conditions and asymptotic extraction.
PULSE_OFF = 1e-10

_LN2 = math.log(2.0)


class IonizationRegimeError(ValueError):
    """Drive strong enough to invert the confinement at pulse maximum."""


@dataclass(frozen=True)
class Pulse:
    """Finite-duration confinement drive.

    Attributes
    ----------
    Lambda : float
        Signed dimensionless strength; admissible magnitudes satisfy
        ``|Lambda| < (omega2/omega0)**2`` of the owning model.
    beta : float
        Inverse transition time, > 0.
    omega0 : float
        Confinement frequency of the owning model; sets the coupling
        scale ``Lambda * omega0**2``.
    shape : str
        Envelope shape; only ``sech2`` with F(t) = 1/cosh^2(2 beta t)
        in this version.
    t0 : float
        Envelope center (F is maximal at t = t0).
    """

    Lambda: float
    beta: float
    omega0: float
    shape: str = "sech2"
    t0: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.beta) and self.beta > 0):
            raise ValueError(f"beta must be finite and > 0, got {self.beta}")
        if not math.isfinite(self.Lambda):
            raise ValueError(f"Lambda must be finite, got {self.Lambda}")
        if self.shape not in PULSE_SHAPES:
            raise ValueError(f"shape must be one of {PULSE_SHAPES}, got {self.shape!r}")
        if not (math.isfinite(self.omega0) and self.omega0 > 0):
            raise ValueError(f"omega0 must be finite and > 0, got {self.omega0}")

    @property
    def coupling(self) -> float:
        """Signed drive amplitude Lambda * omega0**2."""
        return self.Lambda * self.omega0**2

    def envelope(self, t):
        """F(t) = sech^2(2 beta (t - t0)); F(t0) = 1, F(+-inf) = 0."""
        x = np.abs(2.0 * self.beta * (np.asarray(t, dtype=float) - self.t0))
        s = np.exp(-x)
        return 4.0 * s * s / np.square(1.0 + s * s)


def omega_squared(mode_frequency: float, pulse: Pulse, t):
    """Instantaneous squared frequency Omega0^2 + Lambda*omega0^2*F(t).

    Raises IonizationRegimeError if the value is not positive anywhere,
    which signals the excluded inverted-confinement regime.
    """
    val = mode_frequency**2 + pulse.coupling * pulse.envelope(t)
    if np.any(val <= 0.0):
        raise IonizationRegimeError(
            f"Omega^2(t) <= 0 for Omega0={mode_frequency}, Lambda={pulse.Lambda}: "
            "drive inverts the confinement (ionization-like regime)"
        )
    return val


def check_admissible(modes: ModeSet, pulse: Pulse) -> None:
    """Reject pulses outside |Lambda| < (omega2/omega0)^2 or with a
    coupling scale inconsistent with the model."""
    if not math.isclose(pulse.omega0, modes.omega1, rel_tol=1e-12):
        raise ValueError(
            f"pulse coupling scale omega0={pulse.omega0} does not match the "
            f"model confinement frequency {modes.omega1}"
        )
    bound = (modes.omega2 / modes.omega1) ** 2
    if abs(pulse.Lambda) >= bound:
        raise IonizationRegimeError(
            f"|Lambda| = {abs(pulse.Lambda)} >= (omega2/omega0)^2 = {bound}: "
            "ionization-like regime is excluded"
        )


@dataclass(eq=False)
class Trajectory:
    """Integrated width scale of one mode under one pulse.

    Carries the solver step samples plus the dense interpolant for
    evaluation at arbitrary times.  Immutable after construction.
    """

    mode_frequency: float
    pulse: Pulse
    t: np.ndarray
    B: np.ndarray
    Bdot: np.ndarray
    gamma: np.ndarray
    t_start: float
    t_end: float
    rtol: float
    atol: float
    _sol: object = field(repr=False)

    def state_at(self, t):
        """(B, Bdot, gamma) interpolated from the dense solution."""
        t = np.asarray(t, dtype=float)
        if np.any(t < self.t_start) or np.any(t > self.t_end):
            raise ValueError(
                f"time outside trajectory range [{self.t_start}, {self.t_end}]"
            )
        y = self._sol(t)
        B = np.hypot(y[0], y[1])
        Bdot = (y[0] * y[2] + y[1] * y[3]) / B
        return B, Bdot, y[4]

    def B_at(self, t):
        return self.state_at(t)[0]

    def Bdot_at(self, t):
        return self.state_at(t)[1]

    def gamma_at(self, t):
        return self.state_at(t)[2]

    def invariant_at(self, t):
        """K(t) = (1/4 B^2) [1 + (B Bdot / Omega0)^2 + B^4].

        Constant once the pulse is off; equals (1/2)(1+R)/(1-R).
        """
        B, Bdot, _ = self.state_at(t)
        return 0.25 / B**2 * (1.0 + (B * Bdot / self.mode_frequency) ** 2 + B**4)


def integrate_mode(
    mode_frequency: float,
    pulse: Pulse,
    rtol: float = 1e-10,
    atol: float = 1e-12,
    window: float = 15.0,
    settle_periods: float = 6.0,
) -> Trajectory:
    """Integrate the linear complex oscillator for one mode frequency.

    The window runs from ``t0 - window/beta`` (where the envelope is below
    PULSE_OFF) to ``t0 + window/beta + settle_periods`` width oscillation
    periods, so that asymptotic fits always have pulse-free data.

    Parameters
    ----------
    mode_frequency : float
        Unperturbed frequency Omega0 > 0 of this mode.
    pulse : Pulse
        The drive.
    rtol, atol : float
        Integrator tolerances (adaptive high-order explicit Runge-Kutta
        with dense output).

    Returns
    -------
    Trajectory
    """
    if mode_frequency <= 0:
        raise ValueError(f"mode frequency must be > 0, got {mode_frequency}")
    om = float(mode_frequency)
    # Positivity over the whole window follows from the value at the peak.
    if om**2 + min(pulse.coupling, 0.0) <= 0.0:
        raise IonizationRegimeError(
            f"Omega0^2 + Lambda*omega0^2 = {om**2 + pulse.coupling} <= 0: "
            "ionization-like regime is excluded"
        )
    t_start = pulse.t0 - window / pulse.beta
    t_end = pulse.t0 + window / pulse.beta + settle_periods * math.pi / om
    if pulse.envelope(t_start) > PULSE_OFF:
        raise ValueError(
            f"window too short: envelope at start is {pulse.envelope(t_start):.3e} "
            f"> {PULSE_OFF}"
        )
    coupling = pulse.coupling

    def rhs(t, y):
        o2 = om * om + coupling * pulse.envelope(t)
        return (y[2], y[3], -o2 * y[0], -o2 * y[1], om / (y[0] * y[0] + y[1] * y[1]))

    c, s = math.cos(om * t_start), math.sin(om * t_start)
    y0 = (c, s, -om * s, om * c, om * t_start)
    sol = solve_ivp(
        rhs,
        (t_start, t_end),
        y0,
        method="DOP853",
        rtol=rtol,
        atol=atol,
        dense_output=True,
    )
    if not sol.success:
        raise RuntimeError(f"mode integration failed: {sol.message}")
    y = sol.y
    B = np.hypot(y[0], y[1])
    Bdot = (y[0] * y[2] + y[1] * y[3]) / B
    return Trajectory(
        mode_frequency=om,
        pulse=pulse,
        t=sol.t,
        B=B,
        Bdot=Bdot,
        gamma=y[4],
        t_start=t_start,
        t_end=t_end,
        rtol=rtol,
        atol=atol,
        _sol=sol.sol,
    )


@dataclass(frozen=True)
class ReflectionResult:
    """Reflection coefficient of the associated scattering problem.

    ``delta`` is the asymptotic oscillation phase; it is None for the
    analytic method, which does not determine it.
    """

    R: float
    delta: float | None
    method: str

    def __post_init__(self):
        if not (0.0 <= self.R < 1.0):
            raise ValueError(f"reflection coefficient must lie in [0, 1), got {self.R}")


def extract_reflection(
    traj: Trajectory,
    method: str = "invariant",
    fit_periods: float = 5.0,
    fit_samples: int = 512,
) -> ReflectionResult:
    """Reflection coefficient and asymptotic phase from a trajectory.

    R comes from the post-pulse invariant K (exact once the envelope is
    off); the phase delta comes from a linear least-squares fit of
    ``B^2(t) = a - b cos(2 Omega0 t + delta)`` over the last
    ``fit_periods`` oscillation periods.  ``method="fit"`` instead
    recovers R from the fitted mean level a = (1+R)/(1-R).
    """
    if method not in ("invariant", "fit"):
        raise ValueError(f"method must be 'invariant' or 'fit', got {method!r}")
    om = traj.mode_frequency
    if traj.pulse.envelope(traj.t_end) > PULSE_OFF:
        raise ValueError("trajectory does not extend beyond the pulse support")
    t_lo = traj.t_end - fit_periods * math.pi / om
    if t_lo < traj.t_start or traj.pulse.envelope(t_lo) > PULSE_OFF:
        raise ValueError(
            f"trajectory too short to fit {fit_periods} pulse-free oscillation periods"
        )

    K = float(traj.invariant_at(traj.t_end))
    if K < 0.5 - 1e-9:
        raise RuntimeError(
            f"post-pulse invariant K = {K} < 1/2: unphysical, integration failed"
        )
    R_inv = max(0.0, (2.0 * K - 1.0) / (2.0 * K + 1.0))

    ts = np.linspace(t_lo, traj.t_end, fit_samples)
    B, _, _ = traj.state_at(ts)
    design = np.column_stack([np.ones_like(ts), np.cos(2 * om * ts), np.sin(2 * om * ts)])
    (a, c1, c2), *_ = np.linalg.lstsq(design, B * B, rcond=None)
    delta = math.remainder(math.atan2(c2, -c1), 2.0 * math.pi)
    if delta <= -math.pi:
        delta += 2.0 * math.pi

    if method == "fit":
        return ReflectionResult(R=max(0.0, (a - 1.0) / (a + 1.0)), delta=delta, method="ode_fit")
    return ReflectionResult(R=R_inv, delta=delta, method="ode_invariant")


def _log_sinh(x: float) -> float:
    return x - _LN2 + math.log1p(-math.exp(-2.0 * x))


def _log_cosh(x: float) -> float:
    return x - _LN2 + math.log1p(math.exp(-2.0 * x))


def analytic_reflection(mode_frequency: float, pulse: Pulse) -> ReflectionResult:
    """Closed-form reflection coefficient for the sech^2 envelope.

    rho = cos^2[(pi/2) sqrt(1 + Lambda omega0^2/beta^2)] /
          sinh^2[(pi/2) Omega0/beta]

    with cos -> cosh of the real root when the radicand is negative, and
    R = rho / (1 + rho).  Evaluated in log space so that extreme adiabatic
    or sudden parameters neither overflow nor lose the tiny result.
    """
    if pulse.shape != "sech2":
        raise ValueError(f"analytic form requires the sech2 shape, got {pulse.shape!r}")
    if mode_frequency <= 0:
        raise ValueError(f"mode frequency must be > 0, got {mode_frequency}")
    if pulse.coupling == 0.0:
        return ReflectionResult(R=0.0, delta=None, method="analytic")
    radicand = 1.0 + pulse.coupling / pulse.beta**2
    v = 0.5 * math.pi * mode_frequency / pulse.beta
    if radicand >= 0.0:
        c = math.cos(0.5 * math.pi * math.sqrt(radicand))
        if c == 0.0:
            return ReflectionResult(R=0.0, delta=None, method="analytic")
        log_rho = 2.0 * math.log(abs(c)) - 2.0 * _log_sinh(v)
    else:
        u = 0.5 * math.pi * math.sqrt(-radicand)
        log_rho = 2.0 * (_log_cosh(u) - _log_sinh(v))
    if log_rho > 700.0:
        raise IonizationRegimeError(
            "reflection coefficient approaches 1: pulse outside the admissible range"
        )
    rho = math.exp(log_rho)
    return ReflectionResult(R=rho / (1.0 + rho), delta=None, method="analytic")


def reflection(
    mode_frequency: float,
    pulse: Pulse,
    method: str = "analytic",
    rtol: float = 1e-10,
    atol: float = 1e-12,
) -> ReflectionResult:
    """Reflection coefficient by the analytic formula or the full ODE path."""
    if method == "analytic":
        return analytic_reflection(mode_frequency, pulse)
    if method == "ode":
        traj = integrate_mode(mode_frequency, pulse, rtol=rtol, atol=atol)
        return extract_reflection(traj)
    raise ValueError(f"method must be 'analytic' or 'ode', got {method!r}")


@dataclass(frozen=True)
class OneMatrixSnapshot:
    """Parameters of the time-dependent one-matrix at one instant.

    ``omega_d_t`` is the mode-mixed density frequency, ``D_t`` the pair
    Gaussian exponent, ``alpha_t`` the current coefficient (probability
    current j = x n alpha), and ``Z_t`` the geometric occupation ratio.
    """

    t: float
    omega1_t: float
    omega2_t: float
    B1: float
    B1dot: float
    B2: float
    B2dot: float
    omega_d_t: float
    D_t: float
    alpha_t: float
    Z_t: float


def onematrix_snapshot(
    modes: ModeSet, traj1: Trajectory, traj2: Trajectory, t: float
) -> OneMatrixSnapshot:
    """Evaluate the time-dependent one-matrix parameters at time t.

    ``traj1``/``traj2`` must be the center-of-mass and relative mode
    trajectories integrated under the same pulse.
    """
    if traj1.pulse != traj2.pulse:
        raise ValueError("trajectories were not integrated under the same pulse")
    w1, w2 = modes.omega1, modes.omega2
    if not (
        math.isclose(traj1.mode_frequency, w1, rel_tol=1e-12)
        and math.isclose(traj2.mode_frequency, w2, rel_tol=1e-12)
    ):
        raise ValueError("trajectories do not match the model mode frequencies")
    B1, B1d, _ = traj1.state_at(t)
    B2, B2d, _ = traj2.state_at(t)
    B1, B1d, B2, B2d = float(B1), float(B1d), float(B2), float(B2d)
    o1 = w1 / B1**2
    o2 = w2 / B2**2
    od = 2.0 * o1 * o2 / (o1 + o2)
    D_t = 0.25 * ((o1 - o2) ** 2 + (B1d / B1 - B2d / B2) ** 2) / (o1 + o2)
    alpha = od * 0.5 * (B1 * B1d / w1 + B2 * B2d / w2)
    root = math.sqrt(1.0 + 2.0 * D_t / od)
    Z_t = (root - 1.0) / (root + 1.0)
    return OneMatrixSnapshot(
        t=float(t),
        omega1_t=o1,
        omega2_t=o2,
        B1=B1,
        B1dot=B1d,
        B2=B2,
        B2dot=B2d,
        omega_d_t=od,
        D_t=D_t,
        alpha_t=alpha,
        Z_t=Z_t,
    )


def gamma1_time(snapshot: OneMatrixSnapshot, x1, x2):
    """Time-dependent one-matrix Gamma_1(x1, x2, t); Hermitian, complex."""
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    od, D_t, alpha = snapshot.omega_d_t, snapshot.D_t, snapshot.alpha_t
    amp = math.sqrt(od / math.pi) * np.exp(-0.5 * od * (x1 * x1 + x2 * x2))
    phase = np.exp(0.5j * alpha * (x1 * x1 - x2 * x2))
    return amp * phase * np.exp(-0.5 * D_t * np.square(x1 - x2))


@dataclass(eq=False)
class SnapshotSeries:
    """One-matrix snapshots on a uniform time grid for stencil derivatives."""

    modes: ModeSet
    pulse: Pulse
    times: np.ndarray
    snapshots: list
    spacing: float

    def index_at(self, t: float) -> int:
        i = int(round((t - self.times[0]) / self.spacing))
        if i < 0 or i >= len(self.times) or abs(self.times[i] - t) > 0.5 * self.spacing + 1e-12:
            raise ValueError(f"time {t} not covered by the snapshot series")
        return i

    def _d2_inv_sqrt_omega_d(self, i: int) -> float:
        """5-point second derivative of omega_d(t)**-1/2 at grid index i."""
        if i < 2 or i > len(self.times) - 3:
            raise ValueError("stencil reaches past the snapshot-series edges")
        w = [self.snapshots[i + k].omega_d_t ** -0.5 for k in (-2, -1, 0, 1, 2)]
        return (-w[0] + 16.0 * w[1] - 30.0 * w[2] + 16.0 * w[3] - w[4]) / (
            12.0 * self.spacing**2
        )


def snapshot_series(
    modes: ModeSet,
    traj1: Trajectory,
    traj2: Trajectory,
    t_min: float,
    t_max: float,
    spacing: float | None = None,
) -> SnapshotSeries:
    """Build a uniformly spaced snapshot series on [t_min, t_max].

    Default spacing min(0.01/omega1, 0.02/beta) keeps the 5-point stencil
    truncation error far below the asymptotic observables.
    """
    if spacing is None:
        spacing = min(0.01 / modes.omega1, 0.02 / traj1.pulse.beta)
    if t_max <= t_min:
        raise ValueError("empty snapshot window")
    n = int(math.floor((t_max - t_min) / spacing)) + 1
    times = t_min + spacing * np.arange(n)
    snaps = [onematrix_snapshot(modes, traj1, traj2, t) for t in times]
    return SnapshotSeries(
        modes=modes, pulse=traj1.pulse, times=times, snapshots=snaps, spacing=spacing
    )


def effective_potential(series: SnapshotSeries, x, t: float, variant: str) -> np.ndarray:
    """Effective single-particle potential behind the density orbital.

    ``inverted`` differentiates the mode-mixed omega_d(t) of the exact
    density (formally exact, physically pathological at late times);
    ``preoptimized`` is the closed form (1/2) x^2 [omega_d^2 + coupling*F(t)]
    of the drive acting on the density-optimal initial state.
    """
    x2 = np.square(np.asarray(x, dtype=float))
    if variant == "preoptimized":
        od = series.modes.omega_d
        return 0.5 * x2 * (od * od + series.pulse.coupling * series.pulse.envelope(t))
    if variant == "inverted":
        i = series.index_at(t)
        od_t = series.snapshots[i].omega_d_t
        d2 = series._d2_inv_sqrt_omega_d(i)
        return 0.5 * x2 * od_t**2 - 0.5 * x2 * math.sqrt(od_t) * d2
    raise ValueError(f"variant must be 'inverted' or 'preoptimized', got {variant!r}")


def energy_expectation_ks(series: SnapshotSeries, t: float) -> float:
    """Two-particle energy expectation of the density-orbital description.

    Kinetic part (1/2) omega_d(t) [1 + alpha^2/omega_d^2] plus potential
    part (1/2) omega_d(t) [1 - omega_d^{-3/2} d^2/dt^2 omega_d^{-1/2}].
    Oscillates at late times when the modes differ.
    """
    i = series.index_at(t)
    snap = series.snapshots[i]
    od, alpha = snap.omega_d_t, snap.alpha_t
    d2 = series._d2_inv_sqrt_omega_d(i)
    kinetic = 0.5 * od * (1.0 + alpha**2 / od**2)
    potential = 0.5 * od * (1.0 - od**-1.5 * d2)
    return kinetic + potential


def continuity_residual(
    modes: ModeSet,
    traj1: Trajectory,
    traj2: Trajectory,
    t: float,
    x: np.ndarray,
    dt: float = 5e-3,
) -> float:
    """Max |d_t n + d_x (x n alpha)| / max |d_t n| on the given grid.

    d_t n uses a 5-point central difference over snapshots; the current
    divergence is evaluated in closed form from the snapshot at t.
    """
    x = np.asarray(x, dtype=float)

    def dens(tt):
        od = onematrix_snapshot(modes, traj1, traj2, tt).omega_d_t
        return math.sqrt(od / math.pi) * np.exp(-od * x * x)

    dndt = (dens(t - 2 * dt) - 8.0 * dens(t - dt) + 8.0 * dens(t + dt) - dens(t + 2 * dt)) / (
        12.0 * dt
    )
    snap = onematrix_snapshot(modes, traj1, traj2, t)
    n = math.sqrt(snap.omega_d_t / math.pi) * np.exp(-snap.omega_d_t * x * x)
    djdx = snap.alpha_t * n * (1.0 - 2.0 * snap.omega_d_t * x * x)
    return float(np.max(np.abs(dndt + djdx)) / np.max(np.abs(dndt)))


def trajectory_table(traj: Trajectory, n: int = 2001) -> np.ndarray:
    """Dense (t, B, Bdot, gamma) samples for export."""
    ts = np.linspace(traj.t_start, traj.t_end, n)
    B, Bdot, gamma = traj.state_at(ts)
    return np.column_stack([ts, B, Bdot, gamma])
