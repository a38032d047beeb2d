#!/usr/bin/env python3
"""Walk through the measurement model: catalog signals, the unit-norm
window, and the two independent routes to a spectrogram value.

The direct route integrates the windowed Fourier integral numerically.
The series route sums window-weighted Fourier samples on the half-integer
lattice; its truncation radius controls the agreement between the two.
"""

import numpy as np

import liftphase as lp

signal = lp.get_signal("gaussian")
window = lp.get_window("gaussian")

print("== catalog ==")
print(f"signals: {lp.signal_names()}")
print(f"signal peak f(0) = {complex(signal.evaluate(0.0)):.6f}")
print(f"window normalization constant = {window.normalization:.12f}")
norm, _ = lp.integrate_complex(
    lambda t: np.abs(window.evaluate(t)) ** 2 + 0j,
    lp.QuadratureSpec(-0.5, 0.5, tolerance=1e-12))
print(f"window L2 norm^2 = {norm.real:.12f} (unit by construction)")

print("\n== window transform decay ==")
print("the truncation radius is chosen where the transform becomes small:")
for x in (0.0, 2.0, 4.0, 6.0, 7.0, 8.5, 10.0):
    print(f"  |ghat({x:4.1f})| = {abs(window.fourier(x)):.3e}")

print("\n== one spectrogram value, two routes ==")
shift, freq = 0.1, 2.5
quad = lp.spectrogram_quadrature(signal, window, shift, freq)
print(f"quadrature value at (l={shift}, w={freq}): {quad:.12e}")
for delta in (3, 5, 7, 10, 15):
    series = lp.spectrogram_series(signal, window, shift, freq, delta)
    print(f"  series, radius {delta:2d}: rel deviation "
          f"{abs(series - quad) / quad:.3e}")

print("\n== full measurement vector ==")
grid = lp.paper_grid()
data = lp.measure(signal, window, grid, method="series")
print(f"grid: {grid.n_frequencies} frequencies x {grid.n_shifts} shifts, "
      f"delta = {grid.delta}")
print(f"vector length {data.values.size}, max entry {data.values.max():.6e}")
print(f"entry (shift 5, frequency 30) = center measurement = "
      f"{data.value_at(5, 30):.6e}")
