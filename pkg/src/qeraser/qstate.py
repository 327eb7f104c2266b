"""
Particle branches, slit geometry and entangled particle/path-detector states.

A state is a list of Gaussian branches, each attached to one orthonormal
detector tag.  ``detector_dim == 1`` is the coherent case with no path
detector.  All objects are immutable.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# (2/pi)^(1/4), common to every normalized Gaussian amplitude.
NORM_2_PI = (2.0 / np.pi) ** 0.25


@dataclass(frozen=True)
class GaussianPacket:
    """One Gaussian branch ``coeff * A * exp(-(x - center)^2 / width_sq)``.

    ``width_sq`` is the complex squared width eps^2 + i*a.  The normalization
    ``A = (2/pi)^(1/4) (eps + i a/eps)^(-1/2)`` is derived from ``width_sq``
    and is never folded into ``coeff``.
    """

    center: float
    width_sq: complex
    coeff: complex = 1.0 + 0.0j

    def __post_init__(self):
        w = complex(self.width_sq)
        if not np.isfinite(w.real) or not np.isfinite(w.imag) or w.real <= 0.0:
            raise ValueError(f"width_sq must have positive real part, got {w!r}")
        object.__setattr__(self, "width_sq", w)
        object.__setattr__(self, "coeff", complex(self.coeff))
        object.__setattr__(self, "center", float(self.center))

    @property
    def eps(self) -> float:
        return float(np.sqrt(self.width_sq.real))

    @property
    def a(self) -> float:
        return self.width_sq.imag

    @property
    def omega(self) -> float:
        """Expanded squared width eps^2 + a^2/eps^2 (``|amplitude|^2`` goes as exp(-2x^2/omega))."""
        eps2 = self.width_sq.real
        return eps2 + self.width_sq.imag ** 2 / eps2

    @property
    def prefactor(self) -> complex:
        """Normalization constant of the unit-coefficient packet (principal branch)."""
        eps = self.eps
        return NORM_2_PI / np.sqrt(complex(eps, self.width_sq.imag / eps))

    def amplitude(self, x):
        x = np.asarray(x, dtype=float)
        return self.coeff * self.prefactor * np.exp(-((x - self.center) ** 2) / self.width_sq)

    def with_coeff(self, coeff) -> "GaussianPacket":
        return GaussianPacket(self.center, self.width_sq, coeff)


def gaussian_overlap(bra: GaussianPacket, ket: GaussianPacket) -> complex:
    """Closed-form ``<bra|ket>`` of the unit-coefficient packets."""
    p = 1.0 / np.conj(bra.width_sq)
    q = 1.0 / ket.width_sq
    s = p + q
    delta = bra.center - ket.center
    integral = np.sqrt(np.pi / s) * np.exp(-p * q / s * delta ** 2)
    return complex(np.conj(bra.prefactor) * ket.prefactor * integral)


@dataclass(frozen=True)
class SlitArray:
    """N equally spaced slits; slit 0 sits at the largest x."""

    n: int
    spacing: float
    width_param: float
    amplitudes: tuple = None

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise ValueError(f"need at least 2 slits, got n={self.n}")
        if not self.spacing > 0:
            raise ValueError(f"slit spacing must be positive, got {self.spacing}")
        if not self.width_param > 0:
            raise ValueError(f"slit width parameter must be positive, got {self.width_param}")
        amps = self.amplitudes
        if amps is None:
            amps = (1.0 / np.sqrt(self.n),) * int(self.n)
        amps = tuple(complex(c) for c in amps)
        if len(amps) != self.n:
            raise ValueError(f"expected {self.n} amplitudes, got {len(amps)}")
        if all(c == 0 for c in amps):
            raise ValueError("amplitudes are all zero")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "spacing", float(self.spacing))
        object.__setattr__(self, "width_param", float(self.width_param))
        object.__setattr__(self, "amplitudes", amps)

    @property
    def centers(self) -> np.ndarray:
        k = np.arange(self.n)
        return self.spacing * ((self.n - 1) / 2.0 - k)

    def packets(self) -> list[GaussianPacket]:
        eps2 = self.width_param ** 2
        return [GaussianPacket(c, eps2, amp) for c, amp in zip(self.centers, self.amplitudes)]


@dataclass(frozen=True)
class EntangledState:
    """Branches ``(packet, tag)`` over a ``detector_dim``-dimensional detector."""

    detector_dim: int
    branches: tuple

    def __post_init__(self):
        if self.detector_dim < 1:
            raise ValueError("detector_dim must be >= 1")
        branches = tuple((p, int(t)) for p, t in self.branches)
        for _, tag in branches:
            if not 0 <= tag < self.detector_dim:
                raise ValueError(f"tag {tag} outside detector space of dim {self.detector_dim}")
        object.__setattr__(self, "branches", branches)

    @property
    def packets(self) -> list[GaussianPacket]:
        return [p for p, _ in self.branches]

    @property
    def tags(self) -> list[int]:
        return [t for _, t in self.branches]

    def map_packets(self, fn) -> "EntangledState":
        return EntangledState(self.detector_dim, tuple((fn(p), t) for p, t in self.branches))


def make_slit_state(slits: SlitArray) -> EntangledState:
    """Coherent superposition of one packet per slit, no path detector."""
    return EntangledState(1, tuple((p, 0) for p in slits.packets()))


def make_tagged_state(slits: SlitArray) -> EntangledState:
    """Slit k correlated with detector tag k."""
    return EntangledState(slits.n, tuple((p, k) for k, p in enumerate(slits.packets())))


def norm_squared(state: EntangledState) -> float:
    total = 0.0j
    for pj, tj in state.branches:
        for pk, tk in state.branches:
            if tj == tk:
                total += pj.coeff * np.conj(pk.coeff) * gaussian_overlap(pk, pj)
    if abs(total.imag) >= 1e-12:
        raise ArithmeticError(f"norm has imaginary part {total.imag:.3e}")
    return float(total.real)


@dataclass(frozen=True)
class ScreenGrid:
    xmin: float
    xmax: float
    points: int

    def __post_init__(self):
        if not self.xmin < self.xmax:
            raise ValueError(f"need xmin < xmax, got {self.xmin}, {self.xmax}")
        if int(self.points) != self.points or self.points < 2:
            raise ValueError(f"need at least 2 grid points, got {self.points}")
        object.__setattr__(self, "points", int(self.points))

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.xmin, self.xmax, self.points)

    @property
    def dx(self) -> float:
        return (self.xmax - self.xmin) / (self.points - 1)


@dataclass(frozen=True)
class Pattern:
    """Screen intensity sampled on a grid.

    ``signed`` waives the non-negativity check (used for difference
    quantities such as the Sorkin parameter).  ``notes`` carries regime
    warnings attached by the closed-form evaluators.
    """

    grid: ScreenGrid
    values: np.ndarray
    label: str = "marginal"
    signed: bool = False
    notes: tuple = field(default=())

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.grid.points,):
            raise ValueError(f"values shape {v.shape} does not match grid ({self.grid.points},)")
        if not np.all(np.isfinite(v)):
            raise ValueError(f"pattern {self.label!r} has non-finite values")
        if not self.signed and v.min() < -1e-15:
            raise ValueError(f"pattern {self.label!r} is negative: min {v.min():.3e}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def x(self) -> np.ndarray:
        return self.grid.x

    def scaled(self, factor: float, label: str | None = None) -> "Pattern":
        return Pattern(self.grid, self.values * factor, label or self.label, self.signed, self.notes)


def trapezoid(pattern: Pattern) -> float:
    return float(np.trapezoid(pattern.values, dx=pattern.grid.dx))

