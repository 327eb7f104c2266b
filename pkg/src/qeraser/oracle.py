"""
Grid-based spectral free propagator, independent of the complex-width map.

The wave is sampled on a uniform periodic grid and evolved by multiplying
its discrete Fourier transform with ``exp(-i k^2 a / 4)`` (k angular
spatial frequency).  Periodicity means mass leaving one edge re-enters at
the other, so every propagated wave carries the window of grid points whose
wrap-around contamination is predicted to stay below ``tol / 10``
(relative amplitude).  Comparisons are restricted to that window.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import AliasingRisk
from .propagation import evaluate_amplitude, propagate_state
from .qstate import EntangledState, ScreenGrid

DEFAULT_TOL = 1e-6
WINDOW_MARGIN = 10.0


@dataclass(frozen=True)
class GridWave:
    grid: ScreenGrid
    samples: np.ndarray
    window: tuple = field(default=None)

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=complex)
        if s.shape != (self.grid.points,):
            raise ValueError("samples do not match grid")
        object.__setattr__(self, "samples", s)
        if self.window is None:
            object.__setattr__(self, "window", (self.grid.xmin, self.grid.xmax))

    @property
    def mask(self) -> np.ndarray:
        x = self.grid.x
        return (x >= self.window[0]) & (x <= self.window[1])

    def norm(self) -> float:
        """Trapezoid rule for a periodic integrand (plain sum times dx)."""
        return float(np.sum(np.abs(self.samples) ** 2) * self.grid.dx)


def sample_state(state: EntangledState, grid: ScreenGrid) -> list[GridWave]:
    amps = evaluate_amplitude(state, grid.x)
    return [GridWave(grid, amps[j]) for j in range(state.detector_dim)]


def _check_points(n: int):
    if n < 1024 or n & (n - 1):
        raise ValueError(f"spectral grids need a power of two >= 1024 points, got {n}")


def predicted_spread(w: GridWave, a: float) -> tuple[float, float]:
    """Mean and standard deviation of |psi|^2 after free evolution by ``a``.

    Uses the exact free-particle moment relation x(a) = x(0) + (a/2) k.
    """
    psi = w.samples
    n, dx = w.grid.points, w.grid.dx
    x = w.grid.x
    k = 2.0 * np.pi * np.fft.fftfreq(n, dx)
    rho = np.abs(psi) ** 2
    mass = rho.sum()
    if mass == 0:
        return 0.0, 0.0
    mean_x = float((x * rho).sum() / mass)
    var_x = float(((x - mean_x) ** 2 * rho).sum() / mass)
    psi_k = np.fft.fft(psi)
    rho_k = np.abs(psi_k) ** 2
    mean_k = float((k * rho_k).sum() / rho_k.sum())
    var_k = float(((k - mean_k) ** 2 * rho_k).sum() / rho_k.sum())
    dpsi = np.fft.ifft(1j * k * psi_k)
    # symmetrized <x p> = Re <psi| x (-i d/dx) |psi>
    xp = float(np.real(np.sum(np.conj(psi) * (x - mean_x) * (-1j) * dpsi)) / mass)
    var = var_x + a * (xp) + 0.25 * a * a * var_k
    return mean_x + 0.5 * a * mean_k, float(np.sqrt(max(var, 0.0)))


def spectral_propagate(w: GridWave, a: float, tol: float = DEFAULT_TOL) -> GridWave:
    """Free evolution by ``a`` on the periodic grid.

    Raises AliasingRisk when the uncontaminated window would not reach one
    standard deviation of the evolved wave on each side of its mean.
    """
    n = w.grid.points
    _check_points(n)
    if a < 0:
        raise ValueError("a must be non-negative")
    if a == 0:
        return GridWave(w.grid, w.samples.copy(), w.window)
    mean, sigma = predicted_spread(w, a)
    period = n * w.grid.dx
    # Gaussian-tail model: amplitude ratio exp(-r^2 / (4 sigma^2)) reaches tol/10 at r_c
    r_c = 2.0 * sigma * np.sqrt(np.log(WINDOW_MARGIN / tol))
    half = period - r_c
    if half < sigma:
        raise AliasingRisk(
            f"grid period {period:.4g} too short for evolved spread sigma={sigma:.4g} "
            f"(needs > {r_c + sigma:.4g} at tol={tol:.0e})"
        )
    k = 2.0 * np.pi * np.fft.fftfreq(n, w.grid.dx)
    out = np.fft.ifft(np.fft.fft(w.samples) * np.exp(-0.25j * a * k * k))
    window = (max(w.grid.xmin, mean - half), min(w.grid.xmax, mean + half))
    return GridWave(w.grid, out, window)


@dataclass
class CrossValidation:
    amplitude_linf: list
    amplitude_linf_rel: list
    amplitude_l2: list
    pattern_linf_rel: float
    norm_spectral: float
    norm_before: float
    window: tuple
    tol: float

    @property
    def passed(self) -> bool:
        return max(self.amplitude_linf_rel) <= self.tol

    def as_dict(self) -> dict:
        return {
            "amplitude_linf": [float(v) for v in self.amplitude_linf],
            "amplitude_linf_rel": [float(v) for v in self.amplitude_linf_rel],
            "amplitude_l2": [float(v) for v in self.amplitude_l2],
            "pattern_linf_rel": float(self.pattern_linf_rel),
            "norm_before": float(self.norm_before),
            "norm_spectral": float(self.norm_spectral),
            "window": [float(v) for v in self.window],
            "pass": bool(self.passed),
        }


def cross_validate(state: EntangledState, a: float, grid: ScreenGrid, tol: float = DEFAULT_TOL) -> CrossValidation:
    """Compare {sample, spectral propagate} against {analytic propagate, sample}."""
    initial = sample_state(state, grid)
    spectral = [spectral_propagate(w, a, tol) for w in initial]
    analytic = sample_state(propagate_state(state, a), grid)
    lo = max(s.window[0] for s in spectral)
    hi = min(s.window[1] for s in spectral)
    x = grid.x
    mask = (x >= lo) & (x <= hi)
    linf, linf_rel, l2 = [], [], []
    scale = max(np.max(np.abs(w.samples[mask])) for w in analytic)
    rho_s = np.zeros(mask.sum())
    rho_a = np.zeros(mask.sum())
    for s, an in zip(spectral, analytic):
        diff = s.samples[mask] - an.samples[mask]
        err = float(np.max(np.abs(diff)))
        linf.append(err)
        linf_rel.append(err / scale if scale > 0 else err)
        l2.append(float(np.sqrt(np.sum(np.abs(diff) ** 2) * grid.dx)))
        rho_s += np.abs(s.samples[mask]) ** 2
        rho_a += np.abs(an.samples[mask]) ** 2
    rho_scale = rho_a.max()
    return CrossValidation(
        amplitude_linf=linf,
        amplitude_linf_rel=linf_rel,
        amplitude_l2=l2,
        pattern_linf_rel=float(np.max(np.abs(rho_s - rho_a)) / rho_scale) if rho_scale > 0 else 0.0,
        norm_spectral=sum(s.norm() for s in spectral),
        norm_before=sum(w.norm() for w in initial),
        window=(float(lo), float(hi)),
        tol=tol,
    )
