"""Assembly of the truncated lifted linear system.

The quadratic measurements become linear in the rank-one outer-product
matrix of the unknown Fourier samples.  Each shift contributes a banded
Toeplitz block built from window-transform samples on the half-integer
lattice; stacking the blocks gives the map whose row for (shift l, frequency
w) reads a window of the outer-product matrix.  Because each Toeplitz row
reaches 2*delta indices either side of its center, the quadratic form
touches products up to 4*delta apart, so the banded unknown carries band
half-width 4*delta by default; the measurement matrix acting on those
in-band coordinates is materialized densely for the least-squares solve
while the per-shift structured form is kept for fast forward application.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .exceptions import DimensionError, GridError
from .forward import MeasurementGrid
from .kernels import BandedMatrix
from .signals import Window

__all__ = [
    "ShiftVector",
    "shift_vector",
    "toeplitz_block",
    "LiftedSystem",
    "assemble_system",
    "forward_lifted",
    "OperationCounter",
    "band_coordinate_count",
    "dump_system",
]


@dataclass(frozen=True, eq=False)
class ShiftVector:
    """Window-transform samples with shift-dependent phases.

    ``values[t + 2*delta]`` holds ``exp(-i pi l t) * ghat(t/2)`` for the
    twice-index ``t`` in ``[-2*delta, 2*delta]`` (half-integer lattice points
    ``t/2``, stored by integer twice-indices to keep lookups exact).
    """

    shift: float
    delta: int
    values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.values, dtype=complex)
        if vals.shape != (4 * self.delta + 1,):
            raise DimensionError("shift vector must have 4*delta + 1 entries")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def at_twice_index(self, t: int) -> complex:
        if abs(t) > 2 * self.delta:
            return 0.0 + 0.0j
        return complex(self.values[t + 2 * self.delta])


def shift_vector(window: Window, shift: float, delta: int) -> ShiftVector:
    """Lattice samples of the window transform, phase-twisted by the shift."""
    bound = 1.0 - window.half_width
    if not -bound <= shift <= bound:
        raise GridError(f"shift {shift} outside [{-bound}, {bound}]")
    t = np.arange(-2 * delta, 2 * delta + 1)
    ghat = np.array([window.fourier(ti / 2.0) for ti in t], dtype=complex)
    return ShiftVector(shift, delta, np.exp(-1j * np.pi * shift * t) * ghat)


def toeplitz_block(x: ShiftVector, n_frequencies: int) -> np.ndarray:
    """Dense banded Toeplitz block: entry (i, j) is the shift-vector value at
    twice-index ``j - i`` when ``|j - i| <= 2*delta``, else zero."""
    if n_frequencies < 4 * x.delta + 1:
        raise DimensionError(
            f"need at least {4 * x.delta + 1} frequencies for delta={x.delta}"
        )
    block = np.zeros((n_frequencies, n_frequencies), dtype=complex)
    for t in range(-2 * x.delta, 2 * x.delta + 1):
        val = x.at_twice_index(t)
        idx = np.arange(n_frequencies - abs(t))
        if t >= 0:
            block[idx, idx + t] = val
        else:
            block[idx - t, idx] = val
    return block


def band_coordinate_count(size: int, half_width: int) -> int:
    """Number of entries (i, j) with ``|i - j| <= half_width`` in a
    size x size matrix."""
    w = min(half_width, size - 1)
    return size * (2 * w + 1) - w * (w + 1)


class OperationCounter:
    """Accumulates complex-multiplication counts of the structured forward."""

    def __init__(self):
        self.multiplications = 0


class LiftedSystem:
    """Structured lifted operator plus its dense materialization.

    The structured state is the K x (4*delta + 1) array of shift-vector
    values (O(K * delta) complex numbers); the dense measurement matrix over
    in-band coordinates is built lazily on first access and its thin SVD is
    cached for repeated solves.
    """

    def __init__(self, window: Window, grid: MeasurementGrid, band: int):
        n = grid.n_frequencies
        if n < 4 * grid.delta + 1:
            raise DimensionError("grid too small for the truncation radius")
        if not 1 <= band <= n - 1:
            raise DimensionError(f"band {band} out of range for {n} frequencies")
        self.window = window
        self.grid = grid
        self.band = band
        self.shift_vectors = [shift_vector(window, l, grid.delta)
                              for l in grid.shifts]
        rows = []
        cols = []
        for i in range(n):
            j = np.arange(max(0, i - band), min(n, i + band + 1))
            rows.append(np.full(j.size, i))
            cols.append(j)
        self.row_index = np.concatenate(rows)
        self.col_index = np.concatenate(cols)
        self._matrix: np.ndarray | None = None
        self._factorization = None

    @property
    def n_measurements(self) -> int:
        return self.grid.n_shifts * self.grid.n_frequencies

    @property
    def n_unknowns(self) -> int:
        return self.row_index.size

    @property
    def key(self) -> tuple:
        return (self.window.key, self.grid.key, self.band)

    def pack(self, f: BandedMatrix) -> np.ndarray:
        """In-band entries of ``f`` in row-major band order."""
        if f.size != self.grid.n_frequencies or f.half_width != self.band:
            raise DimensionError("banded matrix does not match the system band")
        dense_diags = {d: f.diagonal(d) for d in range(-self.band, self.band + 1)}
        x = np.empty(self.n_unknowns, dtype=complex)
        offs = self.col_index - self.row_index
        for d in range(-self.band, self.band + 1):
            sel = offs == d
            pos = np.minimum(self.row_index[sel], self.col_index[sel])
            x[sel] = dense_diags[d][pos]
        return x

    def unpack(self, x: np.ndarray, hermitian: bool = False) -> BandedMatrix:
        """Inverse of :meth:`pack`.  With ``hermitian=True`` the two mirror
        coordinates are averaged into structurally Hermitian storage."""
        x = np.asarray(x, dtype=complex)
        if x.shape != (self.n_unknowns,):
            raise DimensionError("coordinate vector length mismatch")
        n = self.grid.n_frequencies
        out = BandedMatrix(n, self.band, hermitian=hermitian)
        offs = self.col_index - self.row_index
        for d in range(0 if hermitian else -self.band, self.band + 1):
            sel = offs == d
            pos = np.minimum(self.row_index[sel], self.col_index[sel])
            vals = np.zeros(n - abs(d), dtype=complex)
            vals[pos] = x[sel]
            if hermitian:
                mirror = offs == -d
                mpos = np.minimum(self.row_index[mirror], self.col_index[mirror])
                conj_vals = np.zeros(n - abs(d), dtype=complex)
                conj_vals[mpos] = np.conj(x[mirror])
                vals = 0.5 * (vals + conj_vals)
            out.set_diagonal(d, vals)
        return out

    @property
    def matrix(self) -> np.ndarray:
        """Dense measurement matrix (n_measurements x n_unknowns).

        Column for coordinate (i, j) is the stacked value pattern obtained by
        pushing the basis element E_ij through the quadratic form, including
        the overall 1/4 scale.
        """
        if self._matrix is None:
            n = self.grid.n_frequencies
            delta = self.grid.delta
            m = np.zeros((self.n_measurements, self.n_unknowns), dtype=complex)
            for k, sv in enumerate(self.shift_vectors):
                vals = sv.values
                for r in range(n):
                    ti = self.row_index - r
                    tj = self.col_index - r
                    sel = (np.abs(ti) <= 2 * delta) & (np.abs(tj) <= 2 * delta)
                    m[k * n + r, sel] = 0.25 * (
                        vals[ti[sel] + 2 * delta]
                        * np.conj(vals[tj[sel] + 2 * delta])
                    )
            self._matrix = m
        return self._matrix

    @property
    def factorization(self):
        """Cached thin SVD of the dense matrix."""
        if self._factorization is None:
            self._factorization = np.linalg.svd(self.matrix, full_matrices=False)
        return self._factorization

    def materialized(self) -> bool:
        return self._matrix is not None


def assemble_system(window: Window, grid: MeasurementGrid,
                    band: int | None = None) -> LiftedSystem:
    """Build the lifted system for a window and measurement grid.

    ``band`` is the half-width of the banded unknown; the default
    ``4 * delta`` covers every product the quadratic form can reach, which
    makes the structured forward agree with the truncated series exactly.
    """
    if band is None:
        band = min(4 * grid.delta, grid.n_frequencies - 1)
    return LiftedSystem(window, grid, band)


def forward_lifted(system: LiftedSystem, f: BandedMatrix,
                   counter: OperationCounter | None = None) -> np.ndarray:
    """Apply the lifted operator to a banded Hermitian matrix.

    Uses the per-shift structured form: for each measurement row the value is
    one quarter of the local window's quadratic form, so the work is
    O(K * N * (4*delta + 1)^2) complex multiplications and no N x N dense
    product is ever formed.  Equals ``system.matrix @ system.pack(f)``.
    """
    n = system.grid.n_frequencies
    delta = system.grid.delta
    if f.size != n:
        raise DimensionError(f"matrix size {f.size} does not match grid {n}")
    if f.half_width != system.band:
        raise DimensionError("matrix band does not match the system band")
    # window blocks depend only on the row, not the shift
    blocks = [f.window(r, 2 * delta) for r in range(n)]
    out = np.empty(system.n_measurements)
    for k, sv in enumerate(system.shift_vectors):
        vals = sv.values
        for r in range(n):
            lo, block = blocks[r]
            x = vals[(lo - r) + 2 * delta:(lo - r) + 2 * delta + block.shape[0]]
            y = block @ np.conj(x)
            out[k * n + r] = 0.25 * float(np.real(np.dot(x, y)))
            if counter is not None:
                w = block.shape[0]
                counter.multiplications += w * w + w
    return out


def dump_system(system: LiftedSystem, path) -> None:
    """Debug dump of the dense matrix and the band-coordinate map (npz).

    The archive holds a JSON header (N, K, delta, band, ordering), the
    row/column index arrays of the in-band coordinates, and the dense matrix.
    """
    header = json.dumps({
        "N": system.grid.n_frequencies,
        "K": system.grid.n_shifts,
        "delta": system.grid.delta,
        "band": system.band,
        "ordering": "row-major-band",
    })
    np.savez(path, header=np.array(header), rows=system.row_index,
             cols=system.col_index, matrix=system.matrix)
