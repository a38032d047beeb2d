#!/usr/bin/env python3
"""Inspect the lifted linear system: banded Toeplitz blocks, the dense
measurement matrix over in-band coordinates, its rank, and the cost of the
structured forward application.

The quadratic measurements are linear in the outer product of the unknown
Fourier samples; each measurement row reads a small window of that matrix,
so only a band of it is observable and the dense matrix is tall-thin-rank
limited by the number of measurements.
"""

import numpy as np

import liftphase as lp

window = lp.get_window("gaussian")
grid = lp.paper_grid()

print("== shift vectors and Toeplitz blocks ==")
sv = lp.shift_vector(window, grid.shifts[0], grid.delta)
print(f"shift vector length {sv.values.size} (= 4*delta + 1)")
block = lp.toeplitz_block(sv, grid.n_frequencies)
nonzero_diags = sum(1 for d in range(-60, 61)
                    if np.any(np.diagonal(block, d) != 0))
print(f"Toeplitz block {block.shape}, {nonzero_diags} nonzero diagonals")

print("\n== assembled system ==")
system = lp.assemble_system(window, grid)
print(f"band half-width of the unknown: {system.band} (= 4*delta)")
print(f"in-band unknowns: {system.n_unknowns} "
      f"(formula: {lp.band_coordinate_count(61, system.band)})")
print(f"measurements: {system.n_measurements} (= N*K)")
print(f"structured state before materialization: "
      f"{sum(s.values.size for s in system.shift_vectors)} complex numbers")

print("\n== singular spectrum ==")
_, s, _ = system.factorization
eps = np.finfo(float).eps
print(f"s_1 = {s[0]:.3e}, s_671 = {s[-1]:.3e} (ratio {s[-1] / s[0]:.2e})")
print(f"rank at relative tolerance 1e-10: {int((s > 1e-10 * s[0]).sum())} "
      f"of {s.size} singular values (full row rank)")
print(f"margin of s_671 over the numerical-zero scale eps*s_1: "
      f"{s[-1] / (eps * s[0]):.2e}")

print("\n== structured forward cost ==")
truth = lp.fourier_samples(lp.get_signal("gaussian"), grid.frequencies)
f = lp.BandedMatrix.from_dense(np.outer(truth, truth.conj()), system.band,
                               hermitian=True)
counter = lp.OperationCounter()
lifted = lp.forward_lifted(system, f, counter=counter)
width = 4 * grid.delta + 1
print(f"complex multiplications: {counter.multiplications} "
      f"(bound 2*K*N*(4d+1)^2 = {2 * 11 * 61 * width**2})")

series = lp.measure(lp.get_signal("gaussian"), window, grid,
                    method="series").values
print(f"forward image vs series measurements, rel l2: "
      f"{np.linalg.norm(lifted - series) / np.linalg.norm(series):.3e}")
