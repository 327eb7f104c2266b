"""
Closed-form three-slit patterns, fringe visibility and the Sorkin test.

Every closed form assumes equal slit amplitudes 1/sqrt(3), slits at
x = +d, 0, -d with width parameter eps, and evolution parameter a.  With
``omega = eps^2 + a^2/eps^2`` the common prefactor is
``|C_t|^2 / 3 * exp(-2 x^2 / omega)``.

Far-field forms (omega >> d^2, d^2 << a) drop the exp(-d^2/omega) factors
and the constant d^2/a phases.  ``errata=False`` reproduces the
uncorrected published expressions; see ERRATA.md.
"""
from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass
from itertools import combinations

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import GridMismatch, ParameterOutOfRegime, WindowOutOfGrid
from .propagation import PropagationParams, intensity, propagate_state
from .qstate import EntangledState, Pattern, ScreenGrid, SlitArray, make_slit_state

SQRT2 = np.sqrt(2.0)
THIRD_TURN = 2.0 * np.pi / 3.0


class Kind(enum.Enum):
    PURE_EXACT = "pure_exact"
    PURE_FARFIELD = "pure_farfield"
    TAGGED = "tagged"
    TAGGED_FARFIELD = "tagged_farfield"
    SX = "sx"
    ERASER = "eraser"


OUTCOMES = {Kind.SX: ("up", "right", "down"), Kind.ERASER: ("alpha", "beta", "gamma")}
FAR_FIELD_KINDS = {Kind.PURE_FARFIELD, Kind.TAGGED_FARFIELD, Kind.SX, Kind.ERASER}


@dataclass(frozen=True)
class Scenario:
    kind: Kind
    outcome: str | None = None

    def __post_init__(self):
        kind = Kind(self.kind)
        object.__setattr__(self, "kind", kind)
        allowed = OUTCOMES.get(kind)
        if allowed is None and self.outcome is not None:
            raise ValueError(f"{kind.value} takes no outcome label")
        if allowed is not None and self.outcome not in allowed:
            raise ValueError(f"{kind.value} needs an outcome in {allowed}, got {self.outcome!r}")

    @property
    def label(self) -> str:
        return self.kind.value if self.outcome is None else f"{self.kind.value}_{self.outcome}"


def regime_notes(d: float, eps: float, a: float) -> tuple:
    omega = PropagationParams(a).omega(eps)
    notes = []
    if np.exp(-2 * d * d / omega) < 0.99:
        notes.append(f"exp(-2d^2/omega) = {np.exp(-2 * d * d / omega):.4f} < 0.99")
    if a == 0 or d * d / a > 0.01:
        notes.append(f"d^2/a = {d * d / a if a else np.inf:.4g} > 0.01")
    return tuple(notes)


def closed_form(scenario: Scenario, d: float, eps: float, a: float, grid: ScreenGrid,
                errata: bool = True) -> Pattern:
    if not d > 0 or not eps > 0:
        raise ValueError("d and eps must be positive")
    kind = scenario.kind
    if kind in FAR_FIELD_KINDS and not a > 0:
        raise ValueError(f"{kind.value} needs a > 0 (fringe period pi*a/d)")
    params = PropagationParams(a)
    omega = params.omega(eps)
    x = grid.x

    def env(m):
        # exp(-2x^2/omega) * cosh(m x d / omega), overflow-safe
        base = -2.0 * x * x / omega
        s = m * x * d / omega
        return 0.5 * (np.exp(base + s) + np.exp(base - s))

    env0 = np.exp(-2.0 * x * x / omega)
    phi = 2.0 * x * d / a if a > 0 else np.zeros_like(x)

    if kind is Kind.PURE_EXACT:
        # phase rate of the cross terms; 1/a only when eps^4 << a^2
        kappa = 1.0 / a if (not errata and a > 0) else a / (eps ** 4 + a * a)
        e1 = np.exp(-2.0 * (x - d) ** 2 / omega)
        e3 = np.exp(-2.0 * (x + d) ** 2 / omega)
        e12 = np.exp(-(2 * x * x + d * d - 2 * x * d) / omega)
        e23 = np.exp(-(2 * x * x + d * d + 2 * x * d) / omega)
        e13 = np.exp(-2.0 * (x * x + d * d) / omega)
        bracket = (env0 + e1 + e3
                   + 2 * e12 * np.cos(kappa * (2 * x * d - d * d))
                   + 2 * e23 * np.cos(kappa * (2 * x * d + d * d))
                   + 2 * e13 * np.cos(kappa * 4 * x * d))
    elif kind is Kind.TAGGED:
        bracket = env0 + np.exp(-2.0 * (x - d) ** 2 / omega) + np.exp(-2.0 * (x + d) ** 2 / omega)
    elif kind is Kind.TAGGED_FARFIELD:
        bracket = env0 + 2 * env(4)
    elif kind is Kind.PURE_FARFIELD:
        bracket = env0 + 2 * env(4) + 4 * env(2) * np.cos(phi) + 2 * env0 * np.cos(2 * phi)
    elif kind is Kind.SX:
        if scenario.outcome == "right":
            if errata:
                bracket = env(4) - env0 * np.cos(2 * phi)
            else:
                bracket = env0 * (1 - np.cos(2 * phi))
        else:
            sign = 1.0 if scenario.outcome == "up" else -1.0
            bracket = (0.5 * env0 + 0.5 * env(4) + sign * SQRT2 * env(2) * np.cos(phi)
                       + 0.5 * env0 * np.cos(2 * phi))
    else:
        # eraser: beta/gamma are alpha shifted by -/+ a third of a fringe
        if errata:
            shift = {"alpha": 0.0, "beta": -THIRD_TURN, "gamma": THIRD_TURN}[scenario.outcome]
            mid, last = shift, 2 * shift
        else:
            mid = {"alpha": 0.0, "beta": np.pi / 3, "gamma": -np.pi / 3}[scenario.outcome]
            last = {"alpha": 0.0, "beta": THIRD_TURN, "gamma": -THIRD_TURN}[scenario.outcome]
        bracket = (env0 + 2 * env(4) + 4 * env(2) * np.cos(phi + mid)
                   + 2 * env0 * np.cos(2 * phi + last)) / 3.0

    values = params.ct_sq(eps) / 3.0 * bracket
    notes = ()
    if kind in FAR_FIELD_KINDS:
        notes = regime_notes(d, eps, a)
        if notes:
            warnings.warn(f"{scenario.label}: " + "; ".join(notes), ParameterOutOfRegime, stacklevel=2)
    signed = not errata
    return Pattern(grid, values, scenario.label, signed=signed, notes=notes)


def _parabolic_peak(y0, y1, y2):
    denom = y0 - 2 * y1 + y2
    if denom == 0:
        return y1
    return y1 - (y0 - y2) ** 2 / (8 * denom)


def visibility(p: Pattern, baseline: Pattern, fringe_period: float, samples_per_period: int = 512) -> float:
    """Fringe contrast of ``p / baseline`` over one period centered at x = 0."""
    if p.grid != baseline.grid:
        raise GridMismatch("pattern and baseline live on different grids")
    if not fringe_period > 0:
        raise ValueError("fringe period must be positive")
    half = fringe_period / 2.0
    grid = p.grid
    if grid.xmin > -half or grid.xmax < half:
        raise WindowOutOfGrid(
            f"window [-{half:.6g}, {half:.6g}] exceeds grid [{grid.xmin:.6g}, {grid.xmax:.6g}]"
        )
    x = grid.x
    # keep one neighbor beyond the window so the spline spans it
    sel = np.flatnonzero((x >= -half - grid.dx) & (x <= half + grid.dx))
    xs, base = x[sel], baseline.values[sel]
    if np.any(base <= 0):
        raise ValueError("baseline must be strictly positive on the visibility window")
    ratio = p.values[sel] / base
    inside = (xs >= -half) & (xs <= half)
    if np.count_nonzero(inside) >= samples_per_period:
        r = ratio[inside]
    else:
        r = CubicSpline(xs, ratio)(np.linspace(-half, half, samples_per_period + 1))
    i_max, i_min = int(np.argmax(r)), int(np.argmin(r))
    r_max, r_min = r[i_max], r[i_min]
    if 0 < i_max < len(r) - 1:
        r_max = max(r_max, _parabolic_peak(*r[i_max - 1:i_max + 2]))
    if 0 < i_min < len(r) - 1:
        r_min = min(r_min, _parabolic_peak(*r[i_min - 1:i_min + 2]))
    if r_max + r_min == 0:
        return 0.0
    return float((r_max - r_min) / (r_max + r_min))


def _subset_state(slits: SlitArray, subset) -> EntangledState:
    full = make_slit_state(slits)
    return EntangledState(1, tuple(full.branches[k] for k in subset))


def subset_intensities(slits: SlitArray, a: float, grid: ScreenGrid, route: str = "analytic") -> dict:
    """Marginal intensity of every non-empty slit subset, keyed by index tuple."""
    out = {}
    for size in range(1, slits.n + 1):
        for subset in combinations(range(slits.n), size):
            state = _subset_state(slits, subset)
            if route == "analytic":
                out[subset] = intensity(propagate_state(state, a), grid.x)
            elif route == "oracle":
                from .oracle import sample_state, spectral_propagate

                wave = spectral_propagate(sample_state(state, grid)[0], a)
                out[subset] = np.abs(wave.samples) ** 2
            else:
                raise ValueError(f"unknown route {route!r}")
    return out


def sorkin(slits: SlitArray, a: float, grid: ScreenGrid, route: str = "analytic") -> Pattern:
    """Third-order interference I_123 - sum I_pairs + sum I_singles (zero under the Born rule)."""
    if slits.n != 3:
        raise ValueError(f"Sorkin parameter is defined here for 3 slits, got {slits.n}")
    i = subset_intensities(slits, a, grid, route)
    pairs = i[(0, 1)] + i[(0, 2)] + i[(1, 2)]
    singles = i[(0,)] + i[(1,)] + i[(2,)]
    return Pattern(grid, i[(0, 1, 2)] - pairs + singles, "sorkin", signed=True)


def sorkin_reference(slits: SlitArray, a: float) -> float:
    """I_123 at x = 0, the scale the Sorkin residual is judged against."""
    return float(intensity(propagate_state(make_slit_state(slits), a), 0.0))


def compare(p: Pattern, q: Pattern) -> dict:
    if p.grid != q.grid:
        raise GridMismatch("patterns live on different grids")
    diff = p.values - q.values
    i = int(np.argmax(np.abs(diff)))
    linf = float(abs(diff[i]))
    scale = float(np.max(np.abs(q.values)))
    return {
        "linf": linf,
        "linf_rel": linf / scale if scale > 0 else (0.0 if linf == 0 else np.inf),
        "l2": float(np.sqrt(np.trapezoid(diff ** 2, dx=p.grid.dx))),
        "x_at_max": float(p.grid.x[i]),
    }
