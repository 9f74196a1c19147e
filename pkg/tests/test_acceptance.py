"""Acceptance suite: one test per criterion, each printing PASS or FAIL.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines and measured margins.
"""

import math
import time

import numpy as np
import pytest

from bethetrace import (
    ModelParams,
    PartitionShape,
    QuantumNumbers,
    GridSpec,
    TraceSettings,
    binomial_identity_check,
    enumerate_spectrum,
    find_peaks,
    match_levels_to_peaks,
    resurgence_profile,
    rho_osc_partition,
    rho_total,
    semiclassical_count,
    solve_state,
    staircase,
    two_body_levels,
    weyl_count,
)
from bethetrace.cli import main as cli_main

TWO_PI = 2.0 * math.pi


def report(criterion, passed, detail):
    marker = "PASS" if passed else "FAIL"
    print(f"criterion {criterion}: {marker} -- {detail}")
    assert passed, detail


class TestCriterion1Combinatorics:
    def test_binomial_identity_exact(self):
        started = time.perf_counter()
        failures = [
            (n, r)
            for n in range(1, 11)
            for r in range(1, 31)
            if not binomial_identity_check(n, r)
        ]
        elapsed = time.perf_counter() - started
        report(1, not failures and elapsed < 1.0,
               f"binom(r,n) identity exact for n<=10, r<=30; "
               f"{len(failures)} failures in {elapsed:.2f}s")


class TestCriterion2SingleParticleExactness:
    def test_counting_function_matches_staircase(self):
        started = time.perf_counter()
        params = ModelParams(1, 10.0)
        settings = TraceSettings(m_max=2000)

        # spot-tie the closed-form count to the generic winding sum
        poisson = sum(
            2.0 * 7.3**-0.5 * math.cos(TWO_PI * m * math.sqrt(7.3))
            for m in range(1, 2001)
        )
        generic = rho_osc_partition(PartitionShape((1,)), 7.3, params, settings)
        assert generic == pytest.approx(poisson, abs=1e-10)

        energies = np.arange(0.5, 100.0 + 1e-9, 0.01)
        levels = np.arange(0, 11, dtype=float) ** 2
        distance = np.min(np.abs(energies[:, None] - levels[None, :]), axis=1)
        sample = energies[distance > 0.05]
        counted = semiclassical_count(params, sample, settings)
        exact = 2.0 * np.floor(np.sqrt(sample)) + 1.0
        worst = float(np.max(np.abs(counted - exact)))
        elapsed = time.perf_counter() - started
        report(2, worst < 0.02 and elapsed < 10.0,
               f"max |counting - staircase| = {worst:.4f} over {sample.size} "
               f"energies in {elapsed:.1f}s (tolerance 0.02, budget 10s)")


class TestCriterion3SolverCorrectness:
    def test_momentum_identity_and_tonks_limit(self):
        started = time.perf_counter()
        rng = np.random.default_rng(20240811)
        couplings = (0.1, 1.0, 10.0, 100.0)
        worst_momentum = 0.0
        solved = 0
        while solved < 200:
            n = int(rng.integers(1, 5))
            params = ModelParams(n, couplings[int(rng.integers(0, 4))])
            pool = [d for d in range(-14, 15) if d % 2 == params.parity_offset]
            doubled = tuple(sorted(rng.choice(pool, size=n, replace=False).tolist()))
            if sum(d * d for d in doubled) / 4.0 > 50.0:
                continue
            state = solve_state(params, PartitionShape((1,) * n),
                                QuantumNumbers(doubled, params.parity_offset))
            target = TWO_PI * (sum(doubled) / 2.0) / params.ring_length
            worst_momentum = max(worst_momentum, abs(state.momentum - target))
            solved += 1

        tonks = ModelParams(3, 1e8)
        table = enumerate_spectrum(tonks, 25.0)
        worst_tonks = 0.0
        for state in table.levels[:50]:
            free = TWO_PI * state.quantum_numbers.values / tonks.ring_length
            worst_tonks = max(worst_tonks, float(np.max(np.abs(
                np.asarray(state.rapidities) - free))))
        elapsed = time.perf_counter() - started
        report(3, worst_momentum <= 1e-10 and worst_tonks <= 1e-6 and elapsed < 30.0,
               f"momentum identity worst {worst_momentum:.2e} (<=1e-10), "
               f"Tonks deviation worst {worst_tonks:.2e} (<=1e-6), {elapsed:.1f}s")


class TestCriterion4TwoBodyOracle:
    def test_vector_solver_vs_secular_roots(self):
        started = time.perf_counter()
        worst = 0.0
        counts = []
        for g in (0.1, 10.0, 100.0):
            params = ModelParams(2, g)
            secular = two_body_levels(params, 50.0)
            table = enumerate_spectrum(params, 50.0)
            assert len(secular) == len(table.levels), (
                f"g={g}: {len(secular)} secular vs {len(table.levels)} solver levels"
            )
            deviations = [
                abs(ref.energy - state.energy)
                for ref, state in zip(secular, table.levels)
            ]
            worst = max(worst, max(deviations))
            counts.append(len(secular))
        elapsed = time.perf_counter() - started
        report(4, worst <= 1e-9 and elapsed < 10.0,
               f"level lists of sizes {counts} agree; worst deviation "
               f"{worst:.2e} (<=1e-9), {elapsed:.1f}s")


class TestCriterion5WeylStaircase:
    def test_smooth_count_tracks_spectrum(self):
        started = time.perf_counter()
        params = ModelParams(3, 10.0)
        table = enumerate_spectrum(params, 200.0)
        worst_excess = -math.inf
        for e in np.arange(50.0, 200.0 + 1e-9, 10.0):
            counted = staircase(table, float(e))
            smooth = weyl_count(params, float(e))
            excess = abs(smooth - counted) - (1.0 + 0.05 * counted)
            worst_excess = max(worst_excess, excess)
        elapsed = time.perf_counter() - started
        report(5, worst_excess <= 0.0 and elapsed < 120.0,
               f"|weyl_count - staircase| within 1 + 5% on [50,200] "
               f"(worst margin {worst_excess:+.2f}), {elapsed:.1f}s")


class TestCriterion6PeakEmergence:
    @pytest.mark.parametrize("n,e_grid_max,level_bound,tol", [
        (2, 30.0, 25.0, 0.15),
        (3, 20.0, 15.0, 0.3),
    ])
    def test_peaks_locate_levels(self, n, e_grid_max, level_bound, tol):
        started = time.perf_counter()
        params = ModelParams(n, 10.0)
        grid = rho_total(params, GridSpec(0.5, e_grid_max, 0.01),
                         TraceSettings(m_max=10))
        table = enumerate_spectrum(params, e_grid_max)
        energies = table.energies
        levels = energies[(energies <= level_bound) & (energies >= grid.e_min)]
        passed, matches = match_levels_to_peaks(levels, find_peaks(grid), tol)
        worst = max(m.distance for m in matches)
        elapsed = time.perf_counter() - started
        report(6, passed and elapsed < 300.0,
               f"N={n}: {levels.size} levels in {len(matches)} resolvable features, "
               f"all matched one-to-one within {tol} (worst {worst:.3f}), {elapsed:.1f}s")


class TestCriterion7Resurgence:
    def test_background_cancellation(self):
        started = time.perf_counter()
        params = ModelParams(2, 10.0)
        rows = resurgence_profile(params, (3, 10, 20), (5.0, 30.0))
        gaps = [row.gap for row in rows]
        monotone = gaps[0] >= gaps[1] >= gaps[2]
        bound = 0.25 * rows[-1].weyl_mean
        elapsed = time.perf_counter() - started
        report(7, monotone and gaps[-1] < bound and elapsed < 300.0,
               f"gaps {[f'{g:.3f}' for g in gaps]} non-increasing, final "
               f"{gaps[-1]:.3f} < 25% of background {rows[-1].weyl_mean:.3f}, {elapsed:.1f}s")


class TestCriterion8Determinism:
    def run_commands(self, outdir, workers):
        outdir.mkdir(parents=True, exist_ok=True)
        base = ["--outdir", str(outdir), "--workers", str(workers)]
        assert cli_main(["trace", "--n", "1", "--g", "10", "--mmax", "2000",
                         "--emin", "0.5", "--emax", "100", "--step", "0.5",
                         "--prefix", "c2", *base]) == 0
        assert cli_main(["trace", "--n", "2", "--g", "10", "--mmax", "10",
                         "--emin", "0.5", "--emax", "30", "--step", "0.01",
                         "--levels-overlay", "--prefix", "c6", *base]) == 0
        assert cli_main(["resurgence", "--n", "2", "--g", "10",
                         "--window", "5,30", "--mmax-ladder", "3,10,20",
                         "--prefix", "c7", *base]) == 0

    def test_outputs_identical_across_worker_counts(self, tmp_path):
        started = time.perf_counter()
        for workers in (1, 4, 8):
            self.run_commands(tmp_path / f"w{workers}", workers)
        names = ["c2.csv", "c2.png", "c6.csv", "c6_levels.csv", "c6.png",
                 "c7.csv", "c7.png"]
        mismatched = [
            name
            for name in names
            if not (
                (tmp_path / "w1" / name).read_bytes()
                == (tmp_path / "w4" / name).read_bytes()
                == (tmp_path / "w8" / name).read_bytes()
            )
        ]
        elapsed = time.perf_counter() - started
        report(8, not mismatched,
               f"all {len(names)} output files byte-identical for 1/4/8 "
               f"workers ({elapsed:.1f}s); mismatches: {mismatched}")
