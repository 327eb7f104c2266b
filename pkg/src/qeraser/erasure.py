"""
Path-detector readout bases and outcome-conditioned screen patterns.

A readout basis is an n x n unitary whose row j is readout state j written
in the computational (which-slit tag) basis.  Projecting the entangled state
onto readout j multiplies each branch coefficient by ``conj(U[j, tag])``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, NonUnitary
from .propagation import marginal_intensity
from .qstate import EntangledState, Pattern, ScreenGrid, norm_squared

UNITARY_TOL = 1e-10
DEGENERATE_PROB = 1e-300


@dataclass(frozen=True)
class DetectorBasis:
    rows: np.ndarray
    labels: tuple = field(default=())
    name: str = "custom"

    def __post_init__(self):
        u = np.array(self.rows, dtype=complex)
        if u.ndim != 2 or u.shape[0] != u.shape[1]:
            raise DimensionMismatch(f"basis matrix must be square, got shape {u.shape}")
        u.setflags(write=False)
        object.__setattr__(self, "rows", u)
        labels = tuple(self.labels) or tuple(str(j) for j in range(u.shape[0]))
        if len(labels) != u.shape[0]:
            raise ValueError("one label per basis row required")
        object.__setattr__(self, "labels", labels)

    @property
    def dim(self) -> int:
        return self.rows.shape[0]

    def unitarity_error(self) -> float:
        return float(np.max(np.abs(self.rows @ self.rows.conj().T - np.eye(self.dim))))

    def outcomes(self) -> list["ReadoutOutcome"]:
        return [ReadoutOutcome(self, j) for j in range(self.dim)]


@dataclass(frozen=True)
class ReadoutOutcome:
    basis: DetectorBasis
    index: int

    def __post_init__(self):
        if not 0 <= self.index < self.basis.dim:
            raise ValueError(f"outcome index {self.index} outside basis of dim {self.basis.dim}")

    @property
    def label(self) -> str:
        return self.basis.labels[self.index]


def basis_computational(n: int) -> DetectorBasis:
    if n < 1:
        raise ValueError("n must be >= 1")
    labels = ("plus", "zero", "minus") if n == 3 else tuple(f"tag{k}" for k in range(n))
    return DetectorBasis(np.eye(n), labels, "computational")


def basis_sx3() -> DetectorBasis:
    """Spin-1 S_x eigenstates (up, right, down) in the (+, 0, -) tag basis."""
    h, r = 0.5, np.sqrt(0.5)
    rows = [[h, r, h], [r, 0.0, -r], [h, -r, h]]
    return DetectorBasis(rows, ("up", "right", "down"), "sx3")


def basis_eraser(n: int) -> DetectorBasis:
    """Fourier readout basis, unbiased with respect to every tag.

    Row j has entries ``w**(j*k) / sqrt(n)`` with ``w = exp(2 pi i / n)``.
    Rows j >= 1 are rephased so that their tag-1 entry is ``-1/sqrt(n)``;
    for n = 3 this gives alpha = (1, 1, 1), beta = (e^{i pi/3}, -1, e^{-i pi/3})
    and gamma = (e^{-i pi/3}, -1, e^{i pi/3}), all over sqrt(3).
    """
    if n < 2:
        raise ValueError(f"eraser basis needs n >= 2, got {n}")
    j = np.arange(n)[:, None]
    k = np.arange(n)[None, :]
    rows = np.exp(2j * np.pi * j * k / n) / np.sqrt(n)
    # phase rows so entry (j, 1) becomes -1/sqrt(n)
    rows[1:] *= -np.exp(-2j * np.pi * np.arange(1, n) / n)[:, None]
    labels = ("alpha", "beta", "gamma") if n == 3 else tuple(f"f{m}" for m in range(n))
    return DetectorBasis(rows, labels, "eraser")


def basis_custom(matrix, labels=()) -> DetectorBasis:
    basis = DetectorBasis(matrix, labels, "custom")
    err = basis.unitarity_error()
    if not err <= UNITARY_TOL:
        raise NonUnitary(err, UNITARY_TOL)
    return basis


def _check_dim(state: EntangledState, basis: DetectorBasis):
    if basis.dim != state.detector_dim:
        raise DimensionMismatch(
            f"basis dimension {basis.dim} does not match detector dimension {state.detector_dim}"
        )


def _project_raw(state: EntangledState, outcome: ReadoutOutcome) -> EntangledState:
    row = outcome.basis.rows[outcome.index]
    return EntangledState(
        1, tuple((p.with_coeff(p.coeff * np.conj(row[t])), 0) for p, t in state.branches)
    )


def project(state: EntangledState, outcome: ReadoutOutcome) -> EntangledState:
    """Particle state conditioned on ``outcome`` (unnormalized).

    Its squared norm is the outcome probability.  Outcomes with negligible
    probability collapse to an all-zero state instead of raising.
    """
    _check_dim(state, outcome.basis)
    projected = _project_raw(state, outcome)
    if norm_squared(projected) < DEGENERATE_PROB:
        return EntangledState(1, tuple((p.with_coeff(0.0), 0) for p, _ in state.branches))
    return projected


def outcome_probability(state: EntangledState, outcome: ReadoutOutcome) -> float:
    _check_dim(state, outcome.basis)
    return norm_squared(_project_raw(state, outcome))


def joint_patterns(
    state: EntangledState, basis: DetectorBasis, grid: ScreenGrid, normalize: bool = False
) -> list[Pattern]:
    """One screen pattern per readout outcome.

    Unnormalized joint densities p(x, j) by default, so that they add up to
    the marginal; ``normalize=True`` divides each by its outcome probability.
    """
    _check_dim(state, basis)
    patterns = []
    for outcome in basis.outcomes():
        pat = marginal_intensity(project(state, outcome), grid, label=outcome.label)
        if normalize:
            prob = outcome_probability(state, outcome)
            if prob > DEGENERATE_PROB:
                pat = pat.scaled(1.0 / prob)
        patterns.append(pat)
    return patterns


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR of a complex Ginibre matrix."""
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))
