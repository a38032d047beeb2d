"""Numerical primitives: complex quadrature, minimum-norm least squares,
dominant eigenpairs, and banded Hermitian storage.

Everything here is a pure function of its inputs (no module state), so all
operations are safe to call concurrently.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .exceptions import DecompositionFailure, DimensionError, NonConvergence

__all__ = [
    "QuadratureSpec",
    "integrate_complex",
    "min_norm_least_squares",
    "leading_eigenvector",
    "BandedMatrix",
]


@dataclass(frozen=True)
class QuadratureSpec:
    """Integration interval, absolute tolerance, and subdivision budget."""

    lower: float
    upper: float
    tolerance: float = 1e-10
    max_subdivisions: int = 200

    def __post_init__(self):
        if not self.lower < self.upper:
            raise ValueError(f"empty interval [{self.lower}, {self.upper}]")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")


def integrate_complex(integrand, spec: QuadratureSpec) -> tuple[complex, float]:
    """Adaptive Gauss-Kronrod quadrature of a complex-valued integrand.

    Real and imaginary parts are integrated separately to the spec's
    absolute tolerance.

    Returns
    -------
    (value, error_estimate)
        ``error_estimate`` is the sum of the two parts' estimates.

    Raises
    ------
    NonConvergence
        If the combined error estimate exceeds ``spec.tolerance``.
    """
    # Ask quadpack for an eighth of the tolerance: its refinement stops as
    # soon as the internal estimate crosses the request, so the reported
    # estimate can sit slightly above it; over-requesting keeps the reported
    # estimate safely below the contractual tolerance checked below.
    inner = spec.tolerance * 0.125
    with warnings.catch_warnings():
        # quadpack warns on roundoff-limited refinement; the returned error
        # estimate is still authoritative and checked below.
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        re_val, re_err = integrate.quad(
            lambda t: integrand(t).real, spec.lower, spec.upper,
            epsabs=inner, epsrel=0.0, limit=spec.max_subdivisions,
        )
        im_val, im_err = integrate.quad(
            lambda t: integrand(t).imag, spec.lower, spec.upper,
            epsabs=inner, epsrel=0.0, limit=spec.max_subdivisions,
        )
    err = re_err + im_err
    if err > spec.tolerance:
        raise NonConvergence(
            f"quadrature error estimate {err:.3e} exceeds tolerance "
            f"{spec.tolerance:.3e} on [{spec.lower}, {spec.upper}]"
        )
    return complex(re_val, im_val), err


def _svd(a: np.ndarray):
    try:
        return np.linalg.svd(a, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise DecompositionFailure(f"SVD did not converge: {exc}") from exc


def min_norm_least_squares(
    a: np.ndarray,
    b: np.ndarray,
    rank_tol: float = 1e-10,
    factorization=None,
) -> tuple[np.ndarray, float, int]:
    """Minimum-norm solution of ``min ||a x - b||_2`` via truncated SVD.

    Singular values below ``rank_tol`` times the largest one are dropped;
    the count of retained values is the numerical rank.

    Parameters
    ----------
    factorization
        Optional precomputed ``(u, s, vh)`` thin SVD of ``a``, so repeated
        solves against one matrix can reuse it.

    Returns
    -------
    (x, residual_norm, numerical_rank)
    """
    a = np.asarray(a)
    b = np.asarray(b, dtype=complex).ravel()
    if a.ndim != 2 or a.shape[0] != b.shape[0]:
        raise DimensionError(f"shape mismatch: a is {a.shape}, b has {b.shape[0]} rows")
    if rank_tol <= 0:
        raise ValueError("rank_tol must be positive")
    u, s, vh = factorization if factorization is not None else _svd(a)
    if s.size and s[0] > 0:
        keep = s > rank_tol * s[0]
    else:
        keep = np.zeros(s.shape, dtype=bool)
    rank = int(keep.sum())
    coeffs = u[:, keep].conj().T @ b
    x = vh[keep].conj().T @ (coeffs / s[keep])
    residual = float(np.linalg.norm(a @ x - b))
    return x, residual, rank


class BandedMatrix:
    """Square complex matrix supported on a band, stored by diagonals.

    Diagonal ``d`` holds the entries ``A[i, i + d]`` for valid ``i``.  With
    ``hermitian=True`` only diagonals ``d >= 0`` are stored and reads of
    negative diagonals return the conjugated mirror, so Hermitian symmetry
    holds structurally rather than to a tolerance.
    """

    def __init__(self, size: int, half_width: int, hermitian: bool = False):
        if size < 1:
            raise DimensionError("size must be >= 1")
        if not 0 <= half_width <= size - 1:
            raise DimensionError(
                f"half_width {half_width} out of range for size {size}"
            )
        self.size = size
        self.half_width = half_width
        self.hermitian = hermitian
        lo = 0 if hermitian else -half_width
        self._diags = {
            d: np.zeros(size - abs(d), dtype=complex)
            for d in range(lo, half_width + 1)
        }

    @classmethod
    def from_dense(cls, dense: np.ndarray, half_width: int, hermitian: bool = False):
        """Band-restrict a dense matrix; out-of-band entries are dropped.

        With ``hermitian=True`` the upper triangle is taken as authoritative
        and the diagonal's imaginary part is discarded.
        """
        dense = np.asarray(dense, dtype=complex)
        if dense.ndim != 2 or dense.shape[0] != dense.shape[1]:
            raise DimensionError(f"expected a square matrix, got {dense.shape}")
        out = cls(dense.shape[0], half_width, hermitian=hermitian)
        for d in out._diags:
            vals = np.diagonal(dense, offset=d).copy()
            if hermitian and d == 0:
                vals = vals.real.astype(complex)
            out._diags[d] = vals
        return out

    def diagonal(self, offset: int) -> np.ndarray:
        """Entries of diagonal ``offset`` (``A[i, i+offset]``); a copy."""
        if abs(offset) > self.half_width:
            return np.zeros(max(self.size - abs(offset), 0), dtype=complex)
        if self.hermitian and offset < 0:
            return np.conj(self._diags[-offset])
        return self._diags[offset].copy()

    def set_diagonal(self, offset: int, values: np.ndarray) -> None:
        if abs(offset) > self.half_width:
            raise DimensionError(f"offset {offset} outside band {self.half_width}")
        values = np.asarray(values, dtype=complex)
        if values.shape != (self.size - abs(offset),):
            raise DimensionError("diagonal length mismatch")
        if self.hermitian and offset < 0:
            self._diags[-offset] = np.conj(values)
        else:
            if self.hermitian and offset == 0:
                values = values.real.astype(complex)
            self._diags[offset] = values.copy()

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.size, self.size), dtype=complex)
        for d in range(-self.half_width, self.half_width + 1):
            vals = self.diagonal(d)
            idx = np.arange(vals.size)
            if d >= 0:
                out[idx, idx + d] = vals
            else:
                out[idx - d, idx] = vals
        return out

    def window(self, center: int, radius: int) -> tuple[int, np.ndarray]:
        """Dense block ``A[lo:hi, lo:hi]`` for the index window around
        ``center``; never materializes the full matrix.

        Returns ``(lo, block)`` with ``hi = lo + block.shape[0]``.
        """
        lo = max(0, center - radius)
        hi = min(self.size, center + radius + 1)
        m = hi - lo
        block = np.zeros((m, m), dtype=complex)
        for d in range(-min(self.half_width, m - 1), min(self.half_width, m - 1) + 1):
            vals = self.diagonal(d)
            if d >= 0:
                seg = vals[lo:hi - d]
                idx = np.arange(seg.size)
                block[idx, idx + d] = seg
            else:
                seg = vals[lo:hi + d]
                idx = np.arange(seg.size)
                block[idx - d, idx] = seg
        return lo, block

    def matvec(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=complex)
        if v.shape != (self.size,):
            raise DimensionError("vector length mismatch")
        out = np.zeros(self.size, dtype=complex)
        n = self.size
        for d in range(-self.half_width, self.half_width + 1):
            vals = self.diagonal(d)
            if d >= 0:
                out[: n - d] += vals * v[d:]
            else:
                out[-d:] += vals * v[: n + d]
        return out

    def one_norm(self) -> float:
        """Maximum absolute column sum."""
        col = np.zeros(self.size)
        n = self.size
        for d in range(-self.half_width, self.half_width + 1):
            vals = np.abs(self.diagonal(d))
            if d >= 0:
                col[d:] += vals
            else:
                col[: n + d] += vals
        return float(col.max()) if self.size else 0.0

    def max_abs(self) -> float:
        return max(
            (float(np.abs(self.diagonal(d)).max())
             for d in range(-self.half_width, self.half_width + 1)
             if self.size - abs(d) > 0),
            default=0.0,
        )


def _as_matvec(h):
    """Matvec closure plus (size, one_norm) for a dense array or BandedMatrix."""
    if isinstance(h, BandedMatrix):
        if not h.hermitian:
            raise ValueError("banded operand must carry the hermitian flag")
        return h.matvec, h.size, h.one_norm()
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise DimensionError(f"expected a square matrix, got {h.shape}")
    scale = max(float(np.abs(h).max()), 1.0)
    if not np.allclose(h, h.conj().T, atol=1e-12 * scale):
        raise ValueError("matrix is not Hermitian")
    return (lambda v: h @ v), h.shape[0], float(np.abs(h).sum(axis=0).max())


def leading_eigenvector(
    h,
    iter_tol: float = 1e-10,
    max_iters: int = 20000,
    seed: int = 0,
    deflate: np.ndarray | None = None,
) -> tuple[np.ndarray, float]:
    """Dominant eigenpair of a Hermitian matrix by shifted power iteration.

    The iteration runs on ``H + (||H||_1 + 1) I``, which is positive
    definite, so it converges to the algebraically largest eigenvalue of
    ``H`` (the largest-magnitude eigenvalue of the shifted operator).  The
    start vector is all-ones plus a small pseudo-random perturbation drawn
    from ``numpy.random.default_rng(seed)``, making runs reproducible.

    Parameters
    ----------
    h
        Dense ndarray or a Hermitian :class:`BandedMatrix`.
    deflate
        Optional unit vector; the iteration is confined to its orthogonal
        complement (used to estimate the second eigenvalue).

    Returns
    -------
    (v, lam)
        Unit eigenvector and eigenvalue with ``||H v - lam v|| <= iter_tol``.

    Raises
    ------
    NonConvergence
        If the residual tolerance is not met within ``max_iters``.
    """
    if max_iters < 1:
        raise ValueError("max_iters must be >= 1")
    matvec, n, norm1 = _as_matvec(h)
    shift = norm1 + 1.0

    rng = np.random.default_rng(seed)
    v = np.ones(n, dtype=complex)
    v += 0.01 * (rng.standard_normal(n) + 1j * rng.standard_normal(n))

    def project(w):
        if deflate is not None:
            w = w - deflate * np.vdot(deflate, w)
        return w

    v = project(v)
    nv = np.linalg.norm(v)
    if nv == 0.0:
        raise ValueError("degenerate start vector")
    v /= nv

    lam = 0.0
    for _ in range(max_iters):
        hv = matvec(v)
        lam = float(np.real(np.vdot(v, hv)))
        if np.linalg.norm(hv - lam * v) <= iter_tol:
            return v, lam
        w = project(hv + shift * v)
        nw = np.linalg.norm(w)
        if nw == 0.0:
            raise NonConvergence("power iteration collapsed to the zero vector")
        v = w / nw
    raise NonConvergence(
        f"power iteration: residual above {iter_tol:.1e} after {max_iters} iterations"
    )
