"""Static ground state of two trapped particles with a harmonic coupling.

The Hamiltonian separates in center-of-mass and relative coordinates into
two independent harmonic modes with frequencies ``omega1 = omega0`` and
``omega2 = omega0*sqrt(1-2*lam)``.  Everything here follows in closed form
from those two numbers: the one-particle reduced density matrix and its
Jastrow-type representation, the point-wise spectral decomposition into
Hermite natural orbitals with geometric occupation numbers (via Mehler's
kernel identity), occupation entropies, and the three independent-particle
reference models (energy-optimal, density-optimal, wavefunction-optimal).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "LAMBDA_MAX",
    "MAX_ORBITAL_INDEX",
    "ModelParams",
    "ModeSet",
    "OccupationSpectrum",
    "Entropies",
    "GridSpec",
    "derive_modes",
    "gamma1_static",
    "density",
    "occupation_spectrum",
    "natural_orbital",
    "hermite_function",
    "entropies",
    "model_wavefunction",
    "normal_coordinates",
    "mehler_coefficients",
]

# Coupling strengths lam >= 0.5 make the relative mode unbound.
LAMBDA_MAX = 0.5

# The orbital recurrence works on pre-normalized functions, so it neither
# overflows nor loses orthogonality for any index of practical interest.
# The contract is validated up to this bound; larger requests are rejected.
MAX_ORBITAL_INDEX = 1000

WAVEFUNCTION_KINDS = ("exact", "hf", "ks", "natural")

_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class ModelParams:
    """Physical inputs of the correlated pair.

    Attributes
    ----------
    omega0 : float
        Confinement frequency (atomic units), > 0.
    lam : float
        Dimensionless repulsive coupling strength, 0 <= lam < 0.5.
    """

    omega0: float
    lam: float

    def __post_init__(self):
        if not (math.isfinite(self.omega0) and self.omega0 > 0):
            raise ValueError(f"omega0 must be finite and > 0, got {self.omega0}")
        if not (0.0 <= self.lam < LAMBDA_MAX):
            raise ValueError(
                "lam must lie in [0, 0.5); at lam >= 0.5 the pair is unbound "
                f"(got {self.lam})"
            )


@dataclass(frozen=True)
class ModeSet:
    """All derived frequencies, kernel coefficients, and energies.

    ``omega1``/``omega2`` are the center-of-mass and relative mode
    frequencies.  ``omega_e`` (energy-optimal), ``omega_d`` (density-optimal)
    and ``omega_w`` (wavefunction-optimal) define the three
    independent-particle models.  ``D`` is the Gaussian pair-difference
    exponent of the one-matrix, ``Z`` the geometric ratio of its occupation
    spectrum, ``E0`` the two-particle ground-state energy, and ``C1`` the
    constant offset that completes the density-optimal potential.
    """

    params: ModelParams
    omega1: float
    omega2: float
    omega_e: float
    omega_d: float
    omega_w: float
    D: float
    Z: float
    E0: float
    C1: float


def derive_modes(params: ModelParams) -> ModeSet:
    """Compute all derived frequencies and kernel constants for one model.

    Parameters
    ----------
    params : ModelParams
        Validated physical inputs.

    Returns
    -------
    ModeSet
        With ``omega2 <= omega_d <= omega_w <= omega_e <= omega1`` (all
        strict for lam > 0).
    """
    w0, lam = params.omega0, params.lam
    w1 = w0
    w2 = w0 * math.sqrt(1.0 - 2.0 * lam)
    we = w0 * math.sqrt(1.0 - lam)
    wd = 2.0 * w1 * w2 / (w1 + w2)
    ww = math.sqrt(w1 * w2)
    D = 0.25 * (w1 - w2) ** 2 / (w1 + w2)
    Z = ((math.sqrt(w1) - math.sqrt(w2)) / (math.sqrt(w1) + math.sqrt(w2))) ** 2
    E0 = 0.5 * (w1 + w2)
    # Offset fixing the density-optimal single-particle Hamiltonian against
    # the exact ground-state energy: (E0 - 2*(omega_d/2)) / 2 per particle.
    C1 = 0.25 * (w0 + w2) - 0.5 * wd
    return ModeSet(
        params=params,
        omega1=w1,
        omega2=w2,
        omega_e=we,
        omega_d=wd,
        omega_w=ww,
        D=D,
        Z=Z,
        E0=E0,
        C1=C1,
    )


def _gaussian_orbital(freq: float, x):
    return (freq / math.pi) ** 0.25 * np.exp(-0.5 * freq * np.square(x))


def gamma1_static(modes: ModeSet, x1, x2):
    """One-particle reduced density matrix Gamma_1(x1, x2).

    Jastrow form: product of two density-optimal Gaussians times a
    Gaussian in the coordinate difference.  Symmetric and positive;
    accepts scalars or broadcastable arrays.
    """
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    pair = np.exp(-0.5 * modes.D * np.square(x1 - x2))
    return _gaussian_orbital(modes.omega_d, x1) * _gaussian_orbital(modes.omega_d, x2) * pair


def density(modes: ModeSet, x):
    """Ground-state one-particle probability density n(x), of unit norm."""
    x = np.asarray(x, dtype=float)
    return math.sqrt(modes.omega_d / math.pi) * np.exp(-modes.omega_d * np.square(x))


@dataclass(frozen=True)
class OccupationSpectrum:
    """Geometric occupation spectrum P_k = (1-Z) Z^k, k = 0..k_max.

    ``tail_mass`` is the exact geometric remainder Z**(k_max+1), so
    ``weights.sum() + tail_mass == 1`` analytically.
    """

    Z: float
    weights: np.ndarray
    k_max: int
    tail_mass: float

    def total(self) -> float:
        return float(np.sum(self.weights) + self.tail_mass)

    def escort(self, q: float) -> "OccupationSpectrum":
        """Escort transform Z -> Z**q, again a normalized geometric spectrum."""
        if q <= 0:
            raise ValueError(f"escort order must be > 0, got {q}")
        return occupation_spectrum_from_ratio(self.Z**q, self.k_max)


def occupation_spectrum_from_ratio(Z: float, k_max: int) -> OccupationSpectrum:
    if not (0.0 <= Z < 1.0):
        raise ValueError(f"geometric ratio must lie in [0, 1), got {Z}")
    if k_max < 0:
        raise ValueError(f"k_max must be >= 0, got {k_max}")
    k = np.arange(k_max + 1)
    if Z == 0.0:
        weights = np.zeros(k_max + 1)
        weights[0] = 1.0
        tail = 0.0
    else:
        weights = (1.0 - Z) * Z**k
        tail = Z ** (k_max + 1)
    return OccupationSpectrum(Z=Z, weights=weights, k_max=k_max, tail_mass=tail)


def occupation_spectrum(modes: ModeSet, k_max: int) -> OccupationSpectrum:
    """Natural-orbital occupation numbers of the static one-matrix."""
    return occupation_spectrum_from_ratio(modes.Z, k_max)


def hermite_function(k: int, xi):
    """Orthonormal oscillator eigenfunction of index k at unit frequency.

    Evaluated through the three-term recurrence on the *normalized*
    functions (never on raw Hermite polynomials), which keeps every
    intermediate bounded.  Valid for 0 <= k <= MAX_ORBITAL_INDEX.
    """
    if k < 0:
        raise ValueError(f"orbital index must be >= 0, got {k}")
    if k > MAX_ORBITAL_INDEX:
        raise ValueError(
            f"orbital index {k} exceeds the validated recurrence range "
            f"(<= {MAX_ORBITAL_INDEX})"
        )
    xi = np.asarray(xi, dtype=float)
    h_prev = math.pi**-0.25 * np.exp(-0.5 * xi * xi)
    if k == 0:
        return h_prev
    h = _SQRT2 * xi * h_prev
    for n in range(2, k + 1):
        h, h_prev = xi * math.sqrt(2.0 / n) * h - math.sqrt((n - 1) / n) * h_prev, h
    return h


def natural_orbital(modes: ModeSet, k: int, x):
    """k-th natural orbital: Hermite eigenfunction at frequency omega_w."""
    ww = modes.omega_w
    x = np.asarray(x, dtype=float)
    return ww**0.25 * hermite_function(k, math.sqrt(ww) * x)


def mehler_coefficients(Z: float, omega_w: float) -> tuple[float, float]:
    """Quadratic-form coefficients of the bilinear Gaussian kernel.

    Returns ``(same_coordinate, cross_coordinate)`` coefficients, i.e.
    ``omega_d + D`` and ``D`` of the Jastrow representation.  Inverse of
    the (Z, omega_w) solution of the kernel matching conditions.
    """
    same = omega_w * (1.0 + Z * Z) / (1.0 - Z * Z)
    cross = omega_w * 2.0 * Z / (1.0 - Z * Z)
    return same, cross


@dataclass(frozen=True)
class Entropies:
    """Occupation entropies of one spectrum (natural logarithms)."""

    von_neumann: float
    renyi: tuple[float, ...]


def entropies(spectrum: OccupationSpectrum, renyi_orders=()) -> Entropies:
    """Von Neumann and Renyi entropies of a geometric occupation spectrum.

    Uses the closed geometric-series forms (exact, no truncation bias):

        S    = -ln(1-Z) - Z ln(Z) / (1-Z)
        S_q  = [q ln(1-Z) - ln(1 - Z^q)] / (1-q),   q > 0, q != 1

    Raises for non-positive or unit Renyi orders and for spectra that are
    not normalized within tail tolerance.
    """
    if abs(spectrum.total() - 1.0) > 1e-9:
        raise ValueError("occupation spectrum is not normalized within tolerance")
    Z = spectrum.Z
    if Z == 0.0:
        svn = 0.0
    else:
        svn = -math.log1p(-Z) - Z * math.log(Z) / (1.0 - Z)
    out = []
    for q in renyi_orders:
        if q <= 0:
            raise ValueError(f"Renyi order must be > 0, got {q}")
        if abs(q - 1.0) < 1e-12:
            raise ValueError("Renyi order q = 1 is the von Neumann limit; use that field")
        if Z == 0.0:
            out.append(0.0)
        else:
            # 1 - Z^q via expm1 keeps precision for small q*ln(Z).
            out.append((q * math.log1p(-Z) - math.log(-math.expm1(q * math.log(Z)))) / (1.0 - q))
    return Entropies(von_neumann=svn, renyi=tuple(out))


def normal_coordinates(x1, x2):
    """Center-of-mass / relative coordinates of a particle pair."""
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    return (x1 + x2) / _SQRT2, (x1 - x2) / _SQRT2


def model_wavefunction(kind: str, modes: ModeSet, x1, x2):
    """Ground-state wavefunction of the exact model or one reference model.

    ``exact`` evaluates the two-mode product in normal coordinates; ``hf``,
    ``ks`` and ``natural`` are Gaussian products at omega_e, omega_d and
    omega_w respectively.
    """
    if kind == "exact":
        X1, X2 = normal_coordinates(x1, x2)
        return _gaussian_orbital(modes.omega1, X1) * _gaussian_orbital(modes.omega2, X2)
    try:
        freq = {"hf": modes.omega_e, "ks": modes.omega_d, "natural": modes.omega_w}[kind]
    except KeyError:
        raise ValueError(f"kind must be one of {WAVEFUNCTION_KINDS}, got {kind!r}") from None
    return _gaussian_orbital(freq, np.asarray(x1, dtype=float)) * _gaussian_orbital(
        freq, np.asarray(x2, dtype=float)
    )


@dataclass(frozen=True)
class GridSpec:
    """Uniform spatial grid specification."""

    x_min: float
    x_max: float
    n_points: int

    def __post_init__(self):
        if not self.x_min < self.x_max:
            raise ValueError(f"x_min must be < x_max, got [{self.x_min}, {self.x_max}]")
        if self.n_points < 3:
            raise ValueError(f"n_points must be >= 3, got {self.n_points}")

    @property
    def spacing(self) -> float:
        return (self.x_max - self.x_min) / (self.n_points - 1)

    def points(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n_points)

    @classmethod
    def for_modes(cls, modes: ModeSet, n_points: int = 512, half_width: float = 8.0) -> "GridSpec":
        # half_width sigmas of the density-optimal Gaussian; 8 puts the
        # tails below 1e-13 at the bounds.
        sigma = 1.0 / math.sqrt(modes.omega_d)
        return cls(-half_width * sigma, half_width * sigma, n_points)
