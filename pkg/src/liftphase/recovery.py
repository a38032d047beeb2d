"""Inversion of the lifted system and eigenvector angular synchronization.

``solve_band`` returns the minimum-norm least-squares solution projected to
Hermitian banded form.  The measurement operator is rank-deficient, so that
solution is only one representative of the solution set; ``recover``
optionally refines it by alternating projections between the solution set
and the rank-one positive-semidefinite matrices, which picks the physically
meaningful representative and markedly improves the recovered magnitudes.
``angular_synchronize`` then reads magnitudes off the diagonal and phases
off the leading eigenvector of the phase-normalized band matrix.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass

import numpy as np

from .exceptions import (ConfigError, DegenerateSpectrum, DimensionError,
                         GridError)
from .forward import MeasurementGrid, SpectrogramData
from .kernels import BandedMatrix, leading_eigenvector, min_norm_least_squares
from .lifting import LiftedSystem, assemble_system
from .signals import Window

__all__ = [
    "RecoveryConfig",
    "RecoveryDiagnostics",
    "RecoveredSpectrum",
    "solve_band",
    "angular_synchronize",
    "recover",
    "cached_system",
]


@dataclass(frozen=True)
class RecoveryConfig:
    """Tolerances and knobs for the inversion pipeline.

    ``refine_iterations`` counts alternating-projection sweeps toward the
    rank-one positive-semidefinite representative of the solution set;
    zero disables refinement and keeps the plain minimum-norm solution.
    """

    rank_tol: float = 1e-10
    magnitude_floor: float = 1e-6
    power_tol: float = 1e-10
    max_power_iters: int = 50000
    seed: int = 0
    refine_iterations: int = 30

    def __post_init__(self):
        if self.rank_tol <= 0 or self.power_tol <= 0:
            raise ConfigError("tolerances must be positive")
        if not 0.0 < self.magnitude_floor < 1.0:
            raise ConfigError("magnitude_floor must lie in (0, 1)")
        if self.max_power_iters < 1 or self.refine_iterations < 0:
            raise ConfigError("iteration counts out of range")


@dataclass
class RecoveryDiagnostics:
    residual: float
    eigen_gap: float | None
    rank: int
    clamped_fraction: float = 0.0
    clamp_warning: bool = False
    refine_residual: float | None = None


@dataclass(eq=False)
class RecoveredSpectrum:
    """Recovered Fourier samples (up to one global unimodular factor)."""

    frequencies: np.ndarray
    f_hat: np.ndarray
    diagnostics: RecoveryDiagnostics

    def to_dict(self) -> dict:
        return {
            "frequencies": [float(w) for w in self.frequencies],
            "f_hat": [[float(v.real), float(v.imag)] for v in self.f_hat],
            "diagnostics": {
                "residual": float(self.diagnostics.residual),
                "eigen_gap": (None if self.diagnostics.eigen_gap is None
                              else float(self.diagnostics.eigen_gap)),
                "rank": int(self.diagnostics.rank),
            },
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "RecoveredSpectrum":
        try:
            freqs = np.asarray(doc["frequencies"], dtype=float)
            fh = np.array([complex(re, im) for re, im in doc["f_hat"]])
            diag = doc["diagnostics"]
            return cls(freqs, fh, RecoveryDiagnostics(
                residual=float(diag["residual"]),
                eigen_gap=(None if diag["eigen_gap"] is None
                           else float(diag["eigen_gap"])),
                rank=int(diag["rank"]),
            ))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"invalid spectrum document: {exc}") from exc

    @classmethod
    def load(cls, path) -> "RecoveredSpectrum":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


_system_cache: dict[tuple, LiftedSystem] = {}
_cache_lock = threading.Lock()


def cached_system(window: Window, grid: MeasurementGrid,
                  band: int | None = None) -> LiftedSystem:
    """Assembled system with cached dense matrix, shared per (window, grid).

    Population is single-flight under a lock so concurrent recoveries reuse
    one factorization.
    """
    if band is None:
        band = min(4 * grid.delta, grid.n_frequencies - 1)
    key = (window.key, grid.key, band)
    with _cache_lock:
        system = _system_cache.get(key)
        if system is None:
            system = assemble_system(window, grid, band)
            _system_cache[key] = system
    return system


def solve_band(system: LiftedSystem, data: SpectrogramData,
               cfg: RecoveryConfig | None = None
               ) -> tuple[BandedMatrix, RecoveryDiagnostics]:
    """Minimum-norm least-squares solve for the banded unknown.

    The raw solution is Hermitian-projected (mirror coordinates averaged),
    which preserves the least-squares fit exactly because the measurement
    map commutes with conjugate transposition on real data.  The operator's
    null space can push diagonal entries slightly negative; that mass is
    reported (warning flag above 1% of the trace) but kept in the solution
    so the forward image still reproduces the data, and it is floored at
    zero later when magnitudes are extracted.
    """
    cfg = cfg or RecoveryConfig()
    if data.values.shape != (system.n_measurements,):
        raise DimensionError("measurement vector does not match the system")
    x, residual, rank = min_norm_least_squares(
        system.matrix, data.values, rank_tol=cfg.rank_tol,
        factorization=system.factorization)
    bnorm = float(np.linalg.norm(data.values))
    rel_residual = residual / bnorm if bnorm > 0 else 0.0
    f = system.unpack(x, hermitian=True)
    diag = np.real(f.diagonal(0))
    clamped = float(-diag[diag < 0].sum())
    trace = float(diag[diag > 0].sum())
    frac = clamped / trace if trace > 0 else 0.0
    diagnostics = RecoveryDiagnostics(
        residual=rel_residual, eigen_gap=None, rank=rank,
        clamped_fraction=frac, clamp_warning=frac > 0.01)
    return f, diagnostics


def _dominant_pair(dense: np.ndarray) -> tuple[float, np.ndarray]:
    evals, evecs = np.linalg.eigh(dense)
    return max(float(evals[-1]), 0.0), evecs[:, -1]


def _refine_rank_one(system: LiftedSystem, b: np.ndarray, f: BandedMatrix,
                     cfg: RecoveryConfig) -> tuple[BandedMatrix, float]:
    """Alternate between the least-squares solution set and the banded
    rank-one positive-semidefinite cone.

    Each sweep replaces the iterate by its dominant rank-one part and then
    moves back onto the solution set by subtracting the minimum-norm
    correction of the measurement mismatch.  The final iterate is the banded
    rank-one part, whose diagonal and phases feed synchronization.
    """
    u, s, vh = system.factorization
    keep = s > cfg.rank_tol * s[0] if s.size and s[0] > 0 else np.zeros(s.shape, bool)
    uk = u[:, keep]
    sk = s[keep]
    vhk = vh[keep]

    def to_solution_set(x):
        mismatch = system.matrix @ x - b
        return x - vhk.conj().T @ ((uk.conj().T @ mismatch) / sk)

    x = system.pack(f)
    lam, vec = 0.0, None
    for _ in range(cfg.refine_iterations):
        dense = system.unpack(x, hermitian=True).to_dense()
        lam, vec = _dominant_pair(dense)
        rank_one = lam * np.outer(vec, np.conj(vec))
        x = to_solution_set(system.pack(
            BandedMatrix.from_dense(rank_one, system.band, hermitian=True)))
    dense = system.unpack(x, hermitian=True).to_dense()
    lam, vec = _dominant_pair(dense)
    refined = BandedMatrix.from_dense(lam * np.outer(vec, np.conj(vec)),
                                      system.band, hermitian=True)
    resid = float(np.linalg.norm(system.matrix @ system.pack(refined) - b))
    bnorm = float(np.linalg.norm(b))
    return refined, (resid / bnorm if bnorm > 0 else 0.0)


def angular_synchronize(f: BandedMatrix, cfg: RecoveryConfig | None = None,
                        frequencies=None) -> RecoveredSpectrum:
    """Extract the spectrum from a banded Hermitian outer-product estimate.

    Magnitudes are the square roots of the diagonal.  Phases are the
    entrywise arguments of the leading eigenvector of the phase-normalized
    band matrix: in-band entries at least ``magnitude_floor`` times the
    largest in-band magnitude are replaced by their unit-modulus phases,
    everything else by zero, and the diagonal by ones.  The output is
    defined up to one global unimodular factor.  The residual and rank
    fields of the returned diagnostics belong to the solve stage and stay
    zero when this is called standalone; ``recover`` fills them in.

    Raises
    ------
    DegenerateSpectrum
        If the two leading eigenvalues are too close (ratio below
        1 + 1e-6), e.g. when no off-diagonal phase information survives
        the floor.
    """
    cfg = cfg or RecoveryConfig()
    if not f.hermitian:
        raise DimensionError("synchronization needs structurally Hermitian input")
    n = f.size
    diag = np.maximum(np.real(f.diagonal(0)), 0.0)
    if frequencies is None:
        freqs = np.arange(n, dtype=float)
    else:
        freqs = np.asarray(frequencies, dtype=float)
        if freqs.shape != (n,):
            raise DimensionError("frequency vector length mismatch")

    peak = f.max_abs()
    normalized = BandedMatrix(n, f.half_width, hermitian=True)
    floor = cfg.magnitude_floor * peak
    for d in range(1, f.half_width + 1):
        vals = f.diagonal(d)
        mags = np.abs(vals)
        phases = np.where(mags >= floor, vals / np.where(mags > 0, mags, 1.0), 0.0)
        normalized.set_diagonal(d, phases)
    normalized.set_diagonal(0, np.ones(n, dtype=complex))

    vec, lam1 = leading_eigenvector(normalized, iter_tol=cfg.power_tol,
                                    max_iters=cfg.max_power_iters, seed=cfg.seed)
    _, lam2 = leading_eigenvector(normalized, iter_tol=cfg.power_tol,
                                  max_iters=cfg.max_power_iters, seed=cfg.seed,
                                  deflate=vec)
    gap = float("inf") if lam2 <= 0 else lam1 / lam2
    if gap < 1.0 + 1e-6:
        raise DegenerateSpectrum(
            f"eigen-gap ratio {gap:.9f} leaves synchronization undetermined")

    mags_v = np.abs(vec)
    phases = np.where(mags_v > 0, vec / np.where(mags_v > 0, mags_v, 1.0), 1.0)
    f_hat = np.sqrt(diag) * phases
    diagnostics = RecoveryDiagnostics(residual=0.0, eigen_gap=gap, rank=0)
    return RecoveredSpectrum(freqs, f_hat, diagnostics)


def recover(data: SpectrogramData, window: Window,
            grid: MeasurementGrid | None = None,
            cfg: RecoveryConfig | None = None) -> RecoveredSpectrum:
    """Full inversion: assemble (cached), solve, refine, synchronize.

    Zero measurements short-circuit to the zero spectrum (there is no phase
    information to synchronize).
    """
    cfg = cfg or RecoveryConfig()
    grid = grid or data.grid
    if grid != data.grid:
        raise GridError("measurement grid does not match the requested grid")
    freqs = np.asarray(grid.frequencies, dtype=float)

    if not np.any(data.values > 0):
        diagnostics = RecoveryDiagnostics(residual=0.0, eigen_gap=None, rank=0)
        return RecoveredSpectrum(freqs, np.zeros(freqs.size, dtype=complex),
                                 diagnostics)

    system = cached_system(window, grid)
    f, diagnostics = solve_band(system, data, cfg)
    if cfg.refine_iterations > 0:
        f, refine_residual = _refine_rank_one(system, data.values, f, cfg)
        diagnostics.refine_residual = refine_residual
    spectrum = angular_synchronize(f, cfg, frequencies=freqs)
    diagnostics.eigen_gap = spectrum.diagnostics.eigen_gap
    spectrum.diagnostics = diagnostics
    return spectrum
