"""
Free-particle evolution of Gaussian branches.

Free evolution for a time t maps the complex squared width
``eps^2 -> eps^2 + i*a`` with ``a = 2*hbar*t/m = lambda*D/pi``; centers and
coefficients are untouched.  Natural units (hbar = m = 1) by default.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qstate import EntangledState, GaussianPacket, Pattern, ScreenGrid


@dataclass(frozen=True)
class PropagationParams:
    a: float

    def __post_init__(self):
        if not np.isfinite(self.a) or self.a < 0:
            raise ValueError(f"evolution parameter a must be >= 0, got {self.a}")
        object.__setattr__(self, "a", float(self.a))

    def omega(self, eps: float) -> float:
        return eps ** 2 + self.a ** 2 / eps ** 2

    def ct_sq(self, eps: float) -> float:
        """|C_t|^2, peak density of a single evolved unit packet."""
        return float(np.sqrt(2.0 / (np.pi * self.omega(eps))))


def a_from_time(t: float, m: float = 1.0, hbar: float = 1.0) -> PropagationParams:
    if not m > 0:
        raise ValueError(f"mass must be positive, got {m}")
    if not hbar > 0:
        raise ValueError(f"hbar must be positive, got {hbar}")
    if t < 0:
        raise ValueError(f"time must be non-negative, got {t}")
    return PropagationParams(2.0 * hbar * t / m)


def a_from_geometry(wavelength: float, distance: float) -> PropagationParams:
    """Evolution parameter from de Broglie wavelength and slit-screen distance."""
    if not wavelength > 0:
        raise ValueError(f"wavelength must be positive, got {wavelength}")
    if distance < 0:
        raise ValueError(f"distance must be non-negative, got {distance}")
    return PropagationParams(wavelength * distance / np.pi)


def _as_params(params) -> PropagationParams:
    if isinstance(params, PropagationParams):
        return params
    return PropagationParams(params)


def propagate_packet(p: GaussianPacket, params) -> GaussianPacket:
    a = _as_params(params).a
    if a == 0.0:
        return p
    return GaussianPacket(p.center, p.width_sq + 1j * a, p.coeff)


def propagate_state(state: EntangledState, params) -> EntangledState:
    params = _as_params(params)
    return state.map_packets(lambda p: propagate_packet(p, params))


def evaluate_amplitude(state: EntangledState, x):
    """Amplitude per detector tag.

    Returns shape ``(detector_dim,)`` for scalar ``x`` and
    ``(detector_dim, len(x))`` for an array.
    """
    x = np.asarray(x, dtype=float)
    out = np.zeros((state.detector_dim,) + x.shape, dtype=complex)
    for packet, tag in state.branches:
        out[tag] += packet.amplitude(x)
    return out


def intensity(state: EntangledState, x) -> np.ndarray:
    amp = evaluate_amplitude(state, x)
    return np.sum(amp.real ** 2 + amp.imag ** 2, axis=0)


def marginal_intensity(state: EntangledState, grid: ScreenGrid, label: str = "marginal") -> Pattern:
    """Screen density with the detector traced out."""
    return Pattern(grid, intensity(state, grid.x), label)


def integration_grid(state: EntangledState, widths: float = 12.0, per_width: int = 40) -> ScreenGrid:
    """Grid covering every packet center +- ``widths`` expanded widths.

    Spacing resolves both the narrowest envelope and the fastest cross-term
    fringe, so trapezoid sums of the marginal converge to quadrature accuracy.
    """
    packets = state.packets
    w_max = max(np.sqrt(p.omega) for p in packets)
    w_min = min(np.sqrt(p.omega) for p in packets)
    centers = [p.center for p in packets]
    lo, hi = min(centers) - widths * w_max, max(centers) + widths * w_max
    dx = w_min / per_width
    # Cross terms oscillate with wavenumber 2 * a/|w|^2 * (center separation).
    spread = max(centers) - min(centers)
    for p in packets:
        k = 2.0 * abs(p.a) / abs(p.width_sq) ** 2 * spread
        if k > 0:
            dx = min(dx, 2.0 * np.pi / (per_width * k))
    points = int(np.ceil((hi - lo) / dx)) + 1
    return ScreenGrid(lo, hi, points)
