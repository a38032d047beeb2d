"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see the per-criterion
lines.  Criterion 3 is known-red: the truncated window's transform has
sinc-level tails (~8e-6/(pi*x)) from its hard support cutoff, so the
truncated series cannot reach the demanded agreement at frequencies within
~7 of the band edge; the README documents the analysis.
"""

import json
import time

import numpy as np
import pytest

import liftphase as lp
from liftphase import cli

from conftest import align_phase, random_lattice_vector, rank_one_banded


def report(number, ok, detail):
    print(f"ACCEPTANCE {number} {'PASS' if ok else 'FAIL'}: {detail}")
    return ok


def run_experiment(name, tmp_path, *extra):
    out = tmp_path / name
    start = time.perf_counter()
    code = cli.main(["experiment", name, "--out", str(out), *extra])
    elapsed = time.perf_counter() - start
    assert code == 0
    metrics = json.loads((out / "metrics.json").read_text())
    return metrics, elapsed, out


def test_criterion_1_first_experiment(tmp_path):
    metrics, elapsed, _ = run_experiment("paper-1", tmp_path)
    err = metrics["aligned_relative_error"]
    ok = err <= 5e-3 and elapsed <= 60.0
    assert report(1, ok, f"paper-1 aligned error {err:.3e} (bound 5e-3), "
                         f"{elapsed:.1f}s (budget 60s)")


def test_criterion_2_second_experiment(tmp_path):
    metrics, elapsed, _ = run_experiment("paper-2", tmp_path)
    err = metrics["aligned_relative_error"]
    ok = err <= 5e-2 and elapsed <= 60.0
    assert report(2, ok, f"paper-2 aligned error {err:.3e} (bound 5e-2), "
                         f"{elapsed:.1f}s (budget 60s)")


def test_criterion_3_series_vs_quadrature(window):
    # Known-red: the bound presumes the window transform decays below 1e-6
    # beyond the truncation radius, but the support-truncated window only
    # reaches ~4e-5 at radius 7 and its tails then decay like 8e-6/(pi*x),
    # so measurements with spectral mass near the dropped zone violate the
    # 1e-6 bound at large |frequency|.  See README for the full analysis.
    rng = np.random.default_rng(2024)
    worst = 0.0
    worst_at = None
    for name in ("gaussian", "modulated"):
        signal = lp.get_signal(name)
        for _ in range(50):
            shift = rng.uniform(-0.5, 0.5)
            freq = rng.uniform(-15.0, 15.0)
            quad = lp.spectrogram_quadrature(signal, window, shift, freq)
            series = lp.spectrogram_series(signal, window, shift, freq, 15)
            ratio = abs(quad - series) / max(quad, 1e-12)
            if ratio > worst:
                worst, worst_at = ratio, (name, shift, freq)
    ok = worst <= 1e-6
    assert report(3, ok,
                  f"worst |quad-series(15)|/max(quad,1e-12) = {worst:.3e} "
                  f"at {worst_at} (bound 1e-6; known-red, see README)")


def test_criterion_4_rank_and_cliff(paper_system):
    _, s, _ = paper_system.factorization
    b = np.ones(paper_system.n_measurements)
    _, _, rank = lp.min_norm_least_squares(
        paper_system.matrix, b, rank_tol=1e-10,
        factorization=paper_system.factorization)
    # the matrix has exactly NK rows, so rank NK means full row rank and no
    # 672nd singular value exists; the operative cliff is the margin of the
    # smallest singular value over the numerical-zero scale eps * s_1
    eps = np.finfo(float).eps
    cliff = s[670] / (eps * s[0])
    ok = rank == 671 and s.size == 671 and cliff >= 1e6
    assert report(4, ok, f"numerical rank {rank} (want 671 = NK), "
                         f"s671/s1 = {s[670] / s[0]:.2e}, "
                         f"cliff over numerical zero {cliff:.2e} (bound 1e6)")


def test_criterion_5_lifted_forward_consistency(paper_system, window, b_series,
                                                b_quad):
    ok = True
    details = []
    for name in ("gaussian", "modulated"):
        signal = lp.get_signal(name)
        truth = lp.fourier_samples(signal, paper_system.grid.frequencies)
        f = rank_one_banded(truth, paper_system.band)
        lifted = lp.forward_lifted(paper_system, f)
        d_series = (np.linalg.norm(lifted - b_series[name].values)
                    / np.linalg.norm(b_series[name].values))
        d_quad = (np.linalg.norm(lifted - b_quad[name].values)
                  / np.linalg.norm(b_quad[name].values))
        ok = ok and d_series <= 1e-10 and d_quad <= 1e-4
        details.append(f"{name}: vs series {d_series:.2e} (1e-10), "
                       f"vs quadrature {d_quad:.2e} (1e-4)")
    assert report(5, ok, "; ".join(details))


def test_criterion_6_synchronization_oracle():
    rng = np.random.default_rng(99)
    n, half_width = 21, 12
    worst = 0.0
    for _ in range(100):
        vec = random_lattice_vector(n, rng, min_mag=0.1)
        spectrum = lp.angular_synchronize(rank_one_banded(vec, half_width))
        aligned = align_phase(spectrum.f_hat, vec)
        worst = max(worst, float(np.linalg.norm(aligned - vec)
                                 / np.linalg.norm(vec)))
    ok = worst <= 1e-10
    assert report(6, ok, f"worst rank-one recovery error over 100 draws "
                         f"{worst:.2e} (bound 1e-10)")


def test_criterion_7_gauge_and_scale(b_quad, b_quad_rotated, b_series, window,
                                     gaussian):
    ref = b_quad["gaussian"].values
    phase_inv = np.linalg.norm(ref - b_quad_rotated.values) / np.linalg.norm(ref)

    pts = lp.default_grid()
    vals = gaussian.evaluate(pts) * (1.0 + 0.03j)
    e1 = lp.aligned_relative_error(lp.PhysicalReconstruction(pts, vals), gaussian)
    e2 = lp.aligned_relative_error(
        lp.PhysicalReconstruction(pts, np.exp(1.2j) * vals), gaussian)
    gauge = abs(e1 - e2)

    data = b_series["gaussian"]
    scaled = lp.SpectrogramData(16.0 * data.values, data.grid, provenance="series")
    base = lp.recover(data, window)
    boosted = lp.recover(scaled, window)
    mag_dev = float(np.max(np.abs(np.abs(boosted.f_hat) - 4.0 * np.abs(base.f_hat))))
    mask = np.abs(base.f_hat) > 1e-6 * np.max(np.abs(base.f_hat))
    phase_dev = float(np.max(np.abs(
        base.f_hat[mask] / np.abs(base.f_hat[mask])
        - boosted.f_hat[mask] / np.abs(boosted.f_hat[mask]))))

    ok = phase_inv <= 1e-12 and gauge <= 1e-12 \
        and mag_dev <= 1e-8 and phase_dev <= 1e-8
    assert report(7, ok,
                  f"measurement phase invariance {phase_inv:.2e} (1e-12), "
                  f"alignment gauge invariance {gauge:.2e} (1e-12), "
                  f"scale equivariance mag {mag_dev:.2e} / phase {phase_dev:.2e} (1e-8)")


def test_criterion_8_structured_cost(paper_system, gaussian):
    grid = paper_system.grid
    width = 4 * grid.delta + 1
    budget = 2 * grid.n_shifts * grid.n_frequencies * width ** 2

    class NoDense(lp.BandedMatrix):
        def to_dense(self):
            raise AssertionError("structured forward must not build dense N x N")

    truth = lp.fourier_samples(gaussian, grid.frequencies)
    f = NoDense(grid.n_frequencies, paper_system.band, hermitian=True)
    dense = rank_one_banded(truth, paper_system.band)
    for d in range(paper_system.band + 1):
        f.set_diagonal(d, dense.diagonal(d))
    counter = lp.OperationCounter()
    lp.forward_lifted(paper_system, f, counter=counter)
    ok = counter.multiplications <= budget
    assert report(8, ok,
                  f"{counter.multiplications} complex multiplications vs budget "
                  f"2*K*N*(4d+1)^2 = {budget} (c = 2), no dense materialization")


def test_criterion_9_determinism(tmp_path):
    runs = []
    for tag in ("first", "second"):
        out = tmp_path / tag
        code = cli.main(["experiment", "paper-1", "--method", "series",
                         "--out", str(out)])
        assert code == 0
        runs.append(out)
    names = ["measurement.json", "spectrum.json", "reconstruction.csv",
             "metrics.json"]
    same = all((runs[0] / n).read_bytes() == (runs[1] / n).read_bytes()
               for n in names)
    assert report(9, same,
                  f"two identical-config runs byte-identical across {names}")
