"""Command-line entry point.

Subcommands: unfold (one solver run), benchmark (multi-run grid), landscape
(static scan or dynamic per-generation sampling), synth (synthetic problem
directory). Exit codes: 0 success, 1 runtime failure, 2 usage or validation
failure.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import fileio
from .core import EnergyGrid, Spectrum, UnfoldProblem
from .dea import MUTATION_SIGNS, DeaConfig
from .experiments import (
    ALGORITHMS,
    SYNTHETIC_SHAPES,
    SpectrumLibrary,
    SyntheticSpec,
    benchmark,
    generate_synthetic,
    generate_synthetic_response,
    run_solver,
    run_with_dynamic_sampling,
    static_landscape,
)
from .fitness import FITNESS_KINDS, FitnessFunction, FitnessParams
from .forward import NoiseSpec, make_problem
from .ga import GaConfig

WORKERS_ENV = "EVOUNFOLD_WORKERS"


def _add_solver_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--pop", type=int, default=200, help="population size (default 200)")
    parser.add_argument("--iters", type=int, default=3000, help="iterations (default 3000)")
    parser.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")


def _add_fitness_param_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--beta1", type=float, default=0.1)
    parser.add_argument("--beta4", type=float, default=100.0)
    parser.add_argument("--beta6", type=float, default=100.0)
    parser.add_argument("--beta8", type=float, default=100.0)
    parser.add_argument("--epsilon", type=float, default=1e-12)


def _fitness_params(args) -> FitnessParams:
    return FitnessParams(
        beta1=args.beta1,
        beta4=args.beta4,
        beta6=args.beta6,
        beta8=args.beta8,
        epsilon=args.epsilon,
    )


def _solver_config(args):
    if args.algo == "ga":
        return GaConfig(
            population_size=args.pop,
            max_iterations=args.iters,
            mutation_prob=args.pm,
            crossover_prob=args.pc,
            seed=args.seed,
            elitism=args.elitism,
        )
    return DeaConfig(
        population_size=args.pop,
        max_iterations=args.iters,
        scale_factor=args.de_f,
        crossover_prob=args.de_cr,
        seed=args.seed,
        mutation_sign=args.de_sign,
    )


def _csv_list(value: str) -> tuple[str, ...]:
    return tuple(tok.strip() for tok in value.split(",") if tok.strip())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="evounfold",
        description="Evolutionary neutron-spectrum unfolding: solvers, "
        "landscape scans, and benchmark grids.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("unfold", help="run one solver on a problem and write the result")
    p.add_argument("--response", required=True, help="response matrix CSV")
    p.add_argument("--counts", required=True, help="measured counts CSV")
    p.add_argument("--reference", help="reference spectrum CSV (enables Qs reporting)")
    p.add_argument("--algo", choices=ALGORITHMS, default="dea")
    p.add_argument("--fitness", choices=FITNESS_KINDS, default="f2")
    p.add_argument("--out", default=".", help="output directory (default .)")
    _add_solver_flags(p)
    p.add_argument("--pm", type=float, default=0.1, help="GA mutation probability")
    p.add_argument("--pc", type=float, default=0.9, help="GA crossover probability")
    p.add_argument("--elitism", action="store_true", help="GA: carry the pool best forward")
    p.add_argument("--de-f", type=float, default=0.5, help="DE scale factor")
    p.add_argument("--de-cr", type=float, default=0.9, help="DE crossover probability")
    p.add_argument("--de-sign", choices=MUTATION_SIGNS, default="difference")
    _add_fitness_param_flags(p)
    p.set_defaults(func=cmd_unfold)

    p = sub.add_parser("benchmark", help="run the full (spectrum, algorithm, fitness) grid")
    p.add_argument("--library", required=True, help="library directory (files or synth.json)")
    p.add_argument("--out", required=True, help="output directory for grid artifacts")
    p.add_argument("--runs", type=int, default=20, help="runs per cell (default 20)")
    p.add_argument("--algos", default="ga,dea", help="comma-separated algorithms")
    p.add_argument(
        "--fitness-set", default=",".join(FITNESS_KINDS), help="comma-separated fitness kinds"
    )
    p.add_argument("--sigma", type=float, default=0.05, help="relative noise sigma (default 0.05)")
    p.add_argument("--resume", action="store_true", help="reuse completed cells in --out")
    _add_solver_flags(p)
    p.set_defaults(func=cmd_benchmark)

    p = sub.add_parser("landscape", help="score sampled populations against every fitness")
    p.add_argument("--response", required=True)
    p.add_argument("--counts", required=True)
    p.add_argument("--reference", required=True)
    p.add_argument("--out", required=True, help="output CSV")
    p.add_argument("--mode", choices=("static", "dynamic"), default="static")
    p.add_argument("--samples", type=int, default=200_000, help="static sample count")
    p.add_argument(
        "--kinds", default=",".join(FITNESS_KINDS), help="static: comma-separated fitness kinds"
    )
    p.add_argument(
        "--center-on-reference",
        action="store_true",
        help="static: grade samples from the reference outward instead of uniform-in-box",
    )
    p.add_argument("--radius", type=float, default=1.0, help="static: largest radius fraction")
    p.add_argument("--fitness", choices=FITNESS_KINDS, default="f2", help="dynamic: fitness kind")
    p.add_argument("--algo", choices=ALGORITHMS, default="ga", help="dynamic: solver")
    p.add_argument("--fraction", type=float, default=0.1, help="dynamic: extracted share")
    _add_solver_flags(p)
    p.set_defaults(func=cmd_landscape)

    p = sub.add_parser("synth", help="write a synthetic problem directory")
    p.add_argument("--shape", choices=SYNTHETIC_SHAPES, required=True)
    p.add_argument("--p1", type=float, default=1.0, help="target smoothness penalty")
    p.add_argument("--m", type=int, default=15, help="detector count (default 15)")
    p.add_argument("--n", type=int, default=53, help="energy group count (default 53)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sigma", type=float, default=0.05, help="relative noise sigma")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_synth)

    return parser


def cmd_unfold(args) -> int:
    response = fileio.read_response(args.response)
    counts = fileio.read_counts(args.counts)
    reference = fileio.read_spectrum(args.reference) if args.reference else None
    problem = UnfoldProblem(response, counts)
    fn = FitnessFunction(args.fitness, _fitness_params(args))
    config = _solver_config(args)
    trace = run_solver(args.algo, problem, fn, config, reference=reference)

    grid = reference.grid if reference is not None else EnergyGrid.default(problem.n_groups)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    spectrum_path = out / "unfolded.spectrum.csv"
    trace_path = out / "trace.csv"
    fileio.write_spectrum(spectrum_path, Spectrum(grid, trace.history_best.genes))
    fileio.write_trace_csv(trace_path, trace)
    print(f"wrote {spectrum_path}")
    print(f"wrote {trace_path}")
    if reference is not None:
        print(f"Qs = {fileio.fmt(trace.hist_best_qs[-1])}")
    return 0


def cmd_benchmark(args) -> int:
    library = SpectrumLibrary.from_dir(args.library)
    workers = int(os.environ.get(WORKERS_ENV, "1"))
    result = benchmark(
        library,
        algorithms=_csv_list(args.algos),
        fitness_kinds=_csv_list(args.fitness_set),
        runs_per_cell=args.runs,
        base_seed=args.seed,
        population_size=args.pop,
        max_iterations=args.iters,
        noise_sigma=args.sigma,
        out_dir=args.out,
        resume=args.resume,
        workers=workers,
    )
    for key, message in result.errors.items():
        print(f"cell {'/'.join(key)} failed: {message}", file=sys.stderr)
    print(f"cells: {len(result.summaries)} ok, {len(result.errors)} failed")
    print(f"wrote {Path(args.out) / 'summary.json'}")
    return 1 if not result.summaries else 0


def cmd_landscape(args) -> int:
    response = fileio.read_response(args.response)
    counts = fileio.read_counts(args.counts)
    reference = fileio.read_spectrum(args.reference)
    problem = UnfoldProblem(response, counts)
    if args.mode == "static":
        scan = static_landscape(
            problem,
            reference,
            args.samples,
            _csv_list(args.kinds),
            args.seed,
            center=reference if args.center_on_reference else None,
            radius=args.radius,
        )
        fileio.write_landscape_csv(args.out, scan)
        print(f"wrote {args.out} ({len(scan)} samples)")
        return 0
    if args.algo == "ga":
        config = GaConfig(population_size=args.pop, max_iterations=args.iters, seed=args.seed)
    else:
        config = DeaConfig(population_size=args.pop, max_iterations=args.iters, seed=args.seed)
    _, sampler = run_with_dynamic_sampling(
        problem,
        FitnessFunction(args.fitness),
        config,
        reference,
        algorithm=args.algo,
        fraction=args.fraction,
    )
    fileio.write_dynamic_csv(args.out, sampler.records)
    print(f"wrote {args.out} ({len(sampler.records)} samples)")
    return 0


def cmd_synth(args) -> int:
    grid = EnergyGrid.default(args.n)
    reference = generate_synthetic(SyntheticSpec(args.shape, args.p1, args.seed), grid)
    response = generate_synthetic_response(args.m, args.n, args.seed)
    noise = NoiseSpec(relative_sigma=args.sigma, seed=args.seed + 1)
    problem, _ = make_problem(response, reference, noise)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    fileio.write_response(out / "response.csv", response)
    fileio.write_spectrum(out / "reference.spectrum.csv", reference)
    fileio.write_counts(out / "counts.csv", problem.counts)
    for name in ("response.csv", "reference.spectrum.csv", "counts.csv"):
        print(f"wrote {out / name}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except fileio.FileFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # pragma: no cover - last-resort guard
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
