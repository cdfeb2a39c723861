"""Synthetic problems, landscape scans, dynamic sampling, benchmark grid."""

import json

import numpy as np
import pytest

from evounfold.core import DetectorCounts, EnergyGrid, ResponseMatrix, Spectrum, UnfoldProblem
from evounfold.experiments import (
    DynamicSampler,
    SpectrumLibrary,
    SyntheticSpec,
    benchmark,
    benchmark_problem,
    generate_synthetic,
    generate_synthetic_response,
    noise_free_problem,
    run_solver,
    run_with_dynamic_sampling,
    static_landscape,
)
from evounfold.fileio import FileFormatError
from evounfold.fitness import FITNESS_KINDS, FitnessFunction, penalty_p1
from evounfold.forward import convolve
from evounfold.ga import GaConfig, initialize
from evounfold.dea import DeaConfig
from evounfold.metrics import qs, qs_batch


class TestGenerateSynthetic:
    @pytest.mark.parametrize(
        "shape,target",
        [
            ("double-peak", 1.2),
            ("single-gaussian-in-lethargy", 0.001),
            ("thermal-plus-fast", 0.37),
        ],
    )
    def test_hits_the_smoothness_target_exactly(self, shape, target):
        grid = EnergyGrid.default(53)
        spectrum = generate_synthetic(SyntheticSpec(shape, target, seed=4), grid)
        assert penalty_p1(spectrum.fluence) == pytest.approx(target, rel=1e-12)
        assert np.all(spectrum.fluence > 0.0)

    def test_deterministic_per_seed(self):
        grid = EnergyGrid.default(20)
        spec = SyntheticSpec("double-peak", 1.0, seed=9)
        a = generate_synthetic(spec, grid)
        b = generate_synthetic(spec, grid)
        c = generate_synthetic(SyntheticSpec("double-peak", 1.0, seed=10), grid)
        np.testing.assert_array_equal(a.fluence, b.fluence)
        assert not np.array_equal(a.fluence, c.fluence)

    def test_flat_shape_owns_the_zero_target(self):
        grid = EnergyGrid.default(12)
        flat = generate_synthetic(SyntheticSpec("flat", 0.0), grid)
        assert penalty_p1(flat.fluence) == 0.0
        with pytest.raises(ValueError):
            generate_synthetic(SyntheticSpec("flat", 0.5), grid)
        with pytest.raises(ValueError):
            generate_synthetic(SyntheticSpec("double-peak", 0.0), grid)

    def test_spec_validation(self):
        with pytest.raises(ValueError, match="shape"):
            SyntheticSpec("sawtooth", 1.0)
        with pytest.raises(ValueError, match="target_p1"):
            SyntheticSpec("flat", -1.0)


class TestGenerateSyntheticResponse:
    def test_shape_positivity_and_row_sums(self):
        r = generate_synthetic_response(15, 53, seed=0)
        assert (r.rows, r.cols) == (15, 53)
        assert np.all(r.values > 0.0)
        np.testing.assert_allclose(r.values.sum(axis=1), np.full(15, 2.0), rtol=1e-12)

    def test_row_sum_calibration(self):
        r = generate_synthetic_response(5, 9, seed=1, row_sum=0.5)
        np.testing.assert_allclose(r.values.sum(axis=1), np.full(5, 0.5), rtol=1e-12)
        with pytest.raises(ValueError, match="row_sum"):
            generate_synthetic_response(5, 9, row_sum=0.0)

    def test_manifest_row_sum_override(self, tmp_path):
        manifest = {
            "m": 3,
            "n": 6,
            "seed": 4,
            "row_sum": 1.0,
            "spectra": [{"name": "a", "shape": "flat", "target_p1": 0.0}],
        }
        (tmp_path / "synth.json").write_text(json.dumps(manifest))
        lib = SpectrumLibrary.from_dir(tmp_path)
        np.testing.assert_allclose(lib.response.values.sum(axis=1), np.ones(3), rtol=1e-12)

    def test_full_row_rank(self):
        r = generate_synthetic_response(15, 53, seed=0)
        assert np.linalg.matrix_rank(r.values) == 15

    def test_deterministic_per_seed(self):
        a = generate_synthetic_response(6, 10, seed=2)
        b = generate_synthetic_response(6, 10, seed=2)
        c = generate_synthetic_response(6, 10, seed=3)
        np.testing.assert_array_equal(a.values, b.values)
        assert not np.array_equal(a.values, c.values)

    def test_size_validation(self):
        with pytest.raises(ValueError):
            generate_synthetic_response(0, 10)
        with pytest.raises(ValueError):
            generate_synthetic_response(3, 1)


def tiny_library(m=4, n=6, seed=0):
    grid = EnergyGrid.default(n)
    return SpectrumLibrary(
        response=generate_synthetic_response(m, n, seed),
        spectra={
            "rough": generate_synthetic(SyntheticSpec("double-peak", 1.0, seed + 1), grid),
            "smooth": generate_synthetic(
                SyntheticSpec("single-gaussian-in-lethargy", 0.01, seed + 2), grid
            ),
        },
    )


class TestSpectrumLibrary:
    def test_synthetic_pair_contract(self):
        lib = SpectrumLibrary.synthetic_pair(seed=0, m=15, n=53)
        assert lib.names() == ("spec1", "spec2")
        assert penalty_p1(lib.get("spec1").fluence) == pytest.approx(1.2, rel=1e-12)
        assert penalty_p1(lib.get("spec2").fluence) == pytest.approx(0.001, rel=1e-12)
        assert (lib.response.rows, lib.response.cols) == (15, 53)
        assert lib.source == "synthetic"

    def test_synthetic_ladder_descends_in_roughness(self):
        lib = SpectrumLibrary.synthetic_ladder(seed=0, m=6, n=20)
        values = [penalty_p1(lib.get(name).fluence) for name in lib.names()]
        assert values == sorted(values, reverse=True)
        np.testing.assert_allclose(values, [1.2, 0.1, 0.01, 0.001], rtol=1e-12)

    def test_get_unknown_name(self):
        lib = tiny_library()
        with pytest.raises(ValueError, match="no spectrum"):
            lib.get("missing")

    def test_validation(self):
        grid = EnergyGrid.default(6)
        other = EnergyGrid.default(7)
        resp = generate_synthetic_response(4, 6)
        spec = generate_synthetic(SyntheticSpec("flat", 0.0), grid)
        with pytest.raises(ValueError, match="at least one"):
            SpectrumLibrary(response=resp, spectra={})
        with pytest.raises(ValueError, match="filename-safe"):
            SpectrumLibrary(response=resp, spectra={"bad name": spec})
        with pytest.raises(ValueError, match="share one grid"):
            SpectrumLibrary(
                response=resp,
                spectra={"a": spec, "b": generate_synthetic(SyntheticSpec("flat", 0.0), other)},
            )
        with pytest.raises(ValueError, match="columns"):
            SpectrumLibrary(response=generate_synthetic_response(4, 7), spectra={"a": spec})
        with pytest.raises(ValueError, match="source"):
            SpectrumLibrary(response=resp, spectra={"a": spec}, source="network")

    def test_directory_round_trip(self, tmp_path):
        lib = tiny_library()
        lib.write_dir(tmp_path / "lib")
        loaded = SpectrumLibrary.from_dir(tmp_path / "lib")
        assert loaded.source == "file"
        assert loaded.names() == lib.names()
        np.testing.assert_array_equal(loaded.response.values, lib.response.values)
        for name in lib.names():
            np.testing.assert_array_equal(loaded.get(name).fluence, lib.get(name).fluence)
            np.testing.assert_array_equal(
                loaded.get(name).grid.boundaries, lib.get(name).grid.boundaries
            )

    def test_from_manifest(self, tmp_path):
        manifest = {
            "m": 5,
            "n": 9,
            "seed": 3,
            "spectra": [
                {"name": "a", "shape": "double-peak", "target_p1": 0.8},
                {"name": "b", "shape": "flat", "target_p1": 0.0, "seed": 77},
            ],
        }
        root = tmp_path / "lib"
        root.mkdir()
        (root / "synth.json").write_text(json.dumps(manifest))
        lib = SpectrumLibrary.from_dir(root)
        assert lib.names() == ("a", "b")
        np.testing.assert_array_equal(
            lib.response.values, generate_synthetic_response(5, 9, seed=3).values
        )
        grid = EnergyGrid.default(9)
        np.testing.assert_array_equal(
            lib.get("a").fluence,
            generate_synthetic(SyntheticSpec("double-peak", 0.8, seed=4), grid).fluence,
        )
        np.testing.assert_array_equal(
            lib.get("b").fluence,
            generate_synthetic(SyntheticSpec("flat", 0.0, seed=77), grid).fluence,
        )

    def test_from_dir_errors_name_the_problem(self, tmp_path):
        empty = tmp_path / "empty"
        empty.mkdir()
        with pytest.raises(FileFormatError, match="response.csv or synth.json"):
            SpectrumLibrary.from_dir(empty)
        broken = tmp_path / "broken"
        broken.mkdir()
        (broken / "synth.json").write_text(json.dumps({"m": 3}))
        with pytest.raises(FileFormatError, match="bad synth manifest"):
            SpectrumLibrary.from_dir(broken)


class TestStaticLandscape:
    def test_scan_structure(self):
        lib = tiny_library()
        problem, reference = noise_free_problem(lib, "rough")
        scan = static_landscape(problem, reference, sample_count=200, seed=1)
        assert len(scan) == 200
        assert scan.kinds == FITNESS_KINDS
        assert scan.qs.shape == (200,)
        assert np.all(scan.qs >= 0.0)
        for kind in scan.kinds:
            norm = scan.normalized_fitness[kind]
            assert norm.min() == 0.0 and norm.max() == 1.0
            assert int(np.argmax(norm)) == int(np.argmax(scan.raw_fitness[kind]))
        sample = scan[0]
        assert set(sample.raw_fitness) == set(FITNESS_KINDS)
        assert sample.qs == scan.qs[0]
        assert len(list(scan)) == 200

    def test_kind_subset_and_determinism(self):
        lib = tiny_library()
        problem, reference = noise_free_problem(lib, "smooth")
        a = static_landscape(problem, reference, sample_count=50, fitness_kinds=("f2", "f7"), seed=5)
        b = static_landscape(problem, reference, sample_count=50, fitness_kinds=("f2", "f7"), seed=5)
        c = static_landscape(problem, reference, sample_count=50, fitness_kinds=("f2", "f7"), seed=6)
        assert a.kinds == ("f2", "f7")
        np.testing.assert_array_equal(a.qs, b.qs)
        np.testing.assert_array_equal(a.raw_fitness["f7"], b.raw_fitness["f7"])
        assert not np.array_equal(a.qs, c.qs)

    def test_single_sample_normalizes_to_half(self):
        lib = tiny_library()
        problem, reference = noise_free_problem(lib, "rough")
        scan = static_landscape(problem, reference, sample_count=1, fitness_kinds=("f2",), seed=0)
        assert scan.normalized_fitness["f2"][0] == 0.5

    def test_centered_sampling_hugs_the_center(self):
        lib = tiny_library()
        problem, reference = noise_free_problem(lib, "rough")
        scan = static_landscape(
            problem, reference, sample_count=300, seed=2, center=reference, radius=1e-9
        )
        assert float(scan.qs.max()) < 1e-3

    def test_centered_sampling_grades_quality(self):
        lib = tiny_library()
        problem, reference = noise_free_problem(lib, "rough")
        scan = static_landscape(
            problem, reference, sample_count=2000, seed=2, center=reference, radius=1.0
        )
        # per-sample radii spread candidates from near-perfect to box-wide
        assert float(scan.qs.min()) < 5.0
        assert float(scan.qs.max()) > 50.0

    def test_validation(self):
        lib = tiny_library()
        problem, reference = noise_free_problem(lib, "rough")
        with pytest.raises(ValueError, match="sample_count"):
            static_landscape(problem, reference, sample_count=0)
        with pytest.raises(ValueError, match="fitness kind"):
            static_landscape(problem, reference, sample_count=2, fitness_kinds=("f9",))
        with pytest.raises(ValueError, match="radius"):
            static_landscape(problem, reference, sample_count=2, center=reference, radius=0.0)
        with pytest.raises(ValueError, match="groups"):
            static_landscape(problem, reference, sample_count=2, center=np.ones(3))


class TestDynamicSampler:
    def test_sample_count_rounds_up(self, small_spectrum):
        sampler = DynamicSampler(small_spectrum, fraction=0.1)
        assert sampler.sample_count(200) == 20
        assert sampler.sample_count(10) == 1
        assert sampler.sample_count(5) == 1
        assert DynamicSampler(small_spectrum, fraction=0.5).sample_count(7) == 4

    def test_fraction_validation(self, small_spectrum):
        with pytest.raises(ValueError):
            DynamicSampler(small_spectrum, fraction=0.0)
        with pytest.raises(ValueError):
            DynamicSampler(small_spectrum, fraction=1.5)

    def test_observer_picks_evenly_spaced_ranks(self, small_grid, rng):
        reference = Spectrum(small_grid, np.ones(8))
        sampler = DynamicSampler(reference, fraction=0.5)
        genes = rng.uniform(0.5, 2.0, size=(10, 8))
        fitness = np.arange(10, dtype=float)  # best is index 9
        sampler.observer(0, genes, fitness)
        assert [r[1] for r in sampler.records] == [0, 2, 4, 6, 8]
        assert [r[0] for r in sampler.records] == [1] * 5  # generations are 1-based
        # rank 0 is the fittest individual, and fitness decreases along ranks
        assert sampler.records[0][2] == 9.0
        recorded_fit = [r[2] for r in sampler.records]
        assert recorded_fit == sorted(recorded_fit, reverse=True)
        order = np.argsort(-fitness, kind="stable")
        expected_qs = qs_batch(reference, genes[order[[0, 2, 4, 6, 8]]])
        np.testing.assert_allclose([r[3] for r in sampler.records], expected_qs)

    def test_run_with_dynamic_sampling(self):
        lib = tiny_library()
        problem, reference = noise_free_problem(lib, "rough")
        config = GaConfig(population_size=10, max_iterations=6, seed=1)
        trace, sampler = run_with_dynamic_sampling(
            problem, FitnessFunction("f2"), config, reference, algorithm="ga", fraction=0.2
        )
        assert trace.iterations == 6
        assert len(sampler.records) == 6 * 2
        assert [r[0] for r in sampler.records] == [g for g in range(1, 7) for _ in range(2)]


class TestRunSolverDispatch:
    def test_config_type_checks(self, small_problem):
        with pytest.raises(ValueError, match="GaConfig"):
            run_solver("ga", small_problem, FitnessFunction("f2"), DeaConfig())
        with pytest.raises(ValueError, match="DeaConfig"):
            run_solver("dea", small_problem, FitnessFunction("f2"), GaConfig())
        with pytest.raises(ValueError, match="algorithm"):
            run_solver("annealing", small_problem, FitnessFunction("f2"), GaConfig())

    def test_dispatches_to_both_solvers(self, small_problem):
        ga = run_solver(
            "ga", small_problem, FitnessFunction("f2"), GaConfig(population_size=8, max_iterations=3)
        )
        de = run_solver(
            "dea",
            small_problem,
            FitnessFunction("f2"),
            DeaConfig(population_size=8, max_iterations=3),
        )
        assert ga.slot_fitness is None
        assert de.slot_fitness is not None


class TestBenchmarkProblem:
    def test_noise_free_counts_are_exact(self):
        lib = tiny_library()
        problem, reference = noise_free_problem(lib, "rough")
        np.testing.assert_array_equal(
            problem.counts.values, convolve(lib.response, reference.fluence)
        )
        assert reference is lib.get("rough")

    def test_noisy_problem_is_deterministic_and_spectrum_specific(self):
        lib = tiny_library()
        a1, ref_a = benchmark_problem(lib, "rough", base_seed=3, noise_sigma=0.05)
        a2, _ = benchmark_problem(lib, "rough", base_seed=3, noise_sigma=0.05)
        b, _ = benchmark_problem(lib, "smooth", base_seed=3, noise_sigma=0.05)
        np.testing.assert_array_equal(a1.counts.values, a2.counts.values)
        clean = convolve(lib.response, lib.get("rough").fluence)
        assert not np.array_equal(a1.counts.values, clean)  # noise applied
        assert not np.array_equal(a1.counts.values, b.counts.values)
        assert ref_a is lib.get("rough")


BENCH_KW = dict(
    algorithms=("ga", "dea"),
    fitness_kinds=("f2", "f4"),
    runs_per_cell=2,
    base_seed=1,
    population_size=8,
    max_iterations=4,
    noise_sigma=0.05,
)


class TestBenchmark:
    def test_grid_is_complete_and_deterministic(self):
        lib = tiny_library()
        a = benchmark(lib, **BENCH_KW)
        b = benchmark(lib, **BENCH_KW)
        assert not a.errors
        assert set(a.summaries) == {
            (s, alg, k) for s in lib.names() for alg in ("ga", "dea") for k in ("f2", "f4")
        }
        for key, summary in a.summaries.items():
            assert len(summary.qs_history_best) == 2
            assert summary.qs_history_best == b.summaries[key].qs_history_best
        assert a.settings["runs_per_cell"] == 2
        assert a.settings["spectra"] == ["rough", "smooth"]

    def test_cell_runs_are_reproducible_outside_the_harness(self):
        lib = tiny_library()
        result = benchmark(lib, **BENCH_KW)
        problem, reference = benchmark_problem(lib, "rough", base_seed=1, noise_sigma=0.05)
        # run r uses solver seed base_seed + r
        trace = run_solver(
            "dea",
            problem,
            FitnessFunction("f4"),
            DeaConfig(population_size=8, max_iterations=4, seed=2),
            reference=reference,
        )
        cell = result.get("rough", "dea", "f4")
        assert cell.qs_history_best[1] == qs(reference, trace.history_best.genes)

    def test_ga_and_dea_share_initial_populations(self):
        lib = tiny_library()
        problem, _ = benchmark_problem(lib, "rough", base_seed=1, noise_sigma=0.05)
        ga_init = initialize(problem, GaConfig(population_size=8, max_iterations=4, seed=1))
        de_init = initialize(problem, DeaConfig(population_size=8, max_iterations=4, seed=1))
        np.testing.assert_array_equal(ga_init, de_init)

    def test_persistence_and_resume(self, tmp_path):
        lib = tiny_library()
        out = tmp_path / "bench"
        first = benchmark(lib, out_dir=out, **BENCH_KW)
        cell_csv = out / "cells" / "rough_dea_f4.csv"
        assert cell_csv.exists()
        assert (out / "traces" / "rough_dea_f4_run1.csv").exists()
        assert (out / "summary.json").exists()
        # resume trusts completed cell files: plant a marker value and rerun
        text = cell_csv.read_text().splitlines()
        header, row0, rest = text[0], text[1], text[2:]
        parts = row0.split(",")
        parts[1] = "123.5"
        cell_csv.write_text("\n".join([header, ",".join(parts), *rest]) + "\n")
        resumed = benchmark(lib, out_dir=out, resume=True, **BENCH_KW)
        assert resumed.get("rough", "dea", "f4").qs_history_best[0] == 123.5
        for key, summary in first.summaries.items():
            if key != ("rough", "dea", "f4"):
                assert summary.qs_history_best == resumed.summaries[key].qs_history_best

    def test_failed_cell_is_recorded_and_grid_continues(self, monkeypatch):
        import evounfold.experiments as exp

        real = exp.run_solver

        def flaky(algorithm, problem, fitness_fn, config, reference=None, observer=None):
            if fitness_fn.kind == "f4" and algorithm == "ga":
                raise RuntimeError("injected failure")
            return real(algorithm, problem, fitness_fn, config, reference=reference)

        monkeypatch.setattr(exp, "run_solver", flaky)
        lib = tiny_library()
        result = benchmark(lib, **BENCH_KW)
        assert set(result.errors) == {("rough", "ga", "f4"), ("smooth", "ga", "f4")}
        assert "injected failure" in result.errors[("rough", "ga", "f4")]
        assert ("rough", "dea", "f4") in result.summaries
        payload = result.payload()
        assert payload["errors"]["rough/ga/f4"].startswith("RuntimeError")

    def test_parallel_matches_serial(self):
        lib = tiny_library()
        serial = benchmark(lib, **BENCH_KW)
        parallel = benchmark(lib, workers=2, **BENCH_KW)
        assert not parallel.errors
        for key, summary in serial.summaries.items():
            assert summary.qs_history_best == parallel.summaries[key].qs_history_best

    def test_argument_validation(self):
        lib = tiny_library()
        with pytest.raises(ValueError, match="algorithm"):
            benchmark(lib, algorithms=("sa",))
        with pytest.raises(ValueError, match="fitness kind"):
            benchmark(lib, fitness_kinds=("f0",))
        with pytest.raises(ValueError, match="runs_per_cell"):
            benchmark(lib, runs_per_cell=0)
        with pytest.raises(ValueError, match="workers"):
            benchmark(lib, workers=0)
        with pytest.raises(ValueError, match="resume"):
            benchmark(lib, resume=True)

    def test_payload_shape(self):
        lib = tiny_library()
        result = benchmark(lib, **BENCH_KW)
        payload = result.payload()
        assert set(payload) == {"settings", "cells", "errors"}
        assert len(payload["cells"]) == 8
        cell = payload["cells"][0]
        assert set(cell) >= {"spectrum", "algorithm", "fitness", "runs", "qs_history_best"}
        assert set(cell["qs_history_best"]) == {"mean", "median", "stddev", "min", "max"}
