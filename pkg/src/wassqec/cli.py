"""Command line: ``wassqec {baseline,run,two-stage,verify}``."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

import numpy as np

from .ansatz import exact_code_params
from .cost import COST_KINDS, CostHamiltonian, PipelineSpec, average_fidelity, cost_value
from .engine import Evaluator
from .experiment import (
    THRESHOLD_MODES,
    ConfigError,
    ExperimentConfig,
    prepare_output,
    report_baselines,
    run_batch,
    run_two_stage,
    write_batch,
    write_two_stage,
)
from .noise import NOISE_AXIS, NoiseSpec
from .optimize import CountingCost, grad_alpha, grad_beta, random_angles

EXIT_OK, EXIT_FAILED, EXIT_CONFIG, EXIT_IO = 0, 1, 2, 3


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="YAML or JSON config file; flags override its values")
    p.add_argument("--noise-kind", choices=sorted(NOISE_AXIS))
    p.add_argument("--p", type=float, help="noise probability")
    p.add_argument("--layers", type=int, nargs=2, metavar=("V", "W"))
    p.add_argument("--ring-axis", choices=("x", "y", "z"))
    p.add_argument("--learning-rate", type=float)
    p.add_argument("--momentum", type=float)
    p.add_argument("--max-iters", type=int)
    p.add_argument("--window", type=int, dest="convergence_window")
    p.add_argument("--tolerance", type=float, dest="cost_tolerance")
    p.add_argument("--weights", type=float, nargs="+", help="H_full weights, one per QA qubit")
    p.add_argument("--num-restarts", type=int)
    p.add_argument("--threshold-mode", choices=THRESHOLD_MODES)
    p.add_argument("--threshold", type=float, help="value for --threshold-mode custom")
    p.add_argument("--master-seed", type=int)
    p.add_argument("--init", choices=("random", "exact"))
    p.add_argument("--bins", type=int)
    p.add_argument("--workers", type=int, help="worker processes (default: all cores)")
    p.add_argument("--output", "-o", help="output directory")


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wassqec", description="Variational search for QEC encoders and recoveries.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("baseline", help="do-nothing fidelities and the identity residual")
    p.add_argument("--noise-kind", choices=sorted(NOISE_AXIS), default="phase_flip")
    p.add_argument("--p", type=float, default=0.8)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("run", help="batch of restarts for each cost kind")
    _add_common(p)
    p.add_argument("--cost-kinds", nargs="+", choices=COST_KINDS)

    p = sub.add_parser("two-stage", help="descend with one cost, then continue with the other")
    _add_common(p)
    p.add_argument("--first", choices=COST_KINDS, required=True)
    p.add_argument("--second", choices=COST_KINDS, required=True)

    p = sub.add_parser("verify", help="exact-code and gradient self-checks")
    p.add_argument("--points", type=int, default=3, help="random points for the gradient check")
    p.add_argument("--seed", type=int, default=0)
    return parser


def build_config(args: argparse.Namespace) -> ExperimentConfig:
    try:
        config = ExperimentConfig.from_file(args.config) if args.config else ExperimentConfig()
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {args.config}") from exc
    noise = config.noise
    if args.noise_kind is not None or args.p is not None:
        noise = NoiseSpec(args.noise_kind or noise.kind, noise.p if args.p is None else args.p, noise.n)
    opt = {k: getattr(args, k) for k in ("learning_rate", "momentum", "max_iters", "convergence_window", "cost_tolerance")}
    optimizer = replace(config.optimizer, **{k: v for k, v in opt.items() if v is not None})
    flat = {
        "layers": None if args.layers is None else tuple(args.layers),
        "ring_axis": args.ring_axis,
        "weights": None if args.weights is None else tuple(args.weights),
        "num_restarts": args.num_restarts,
        "threshold_mode": args.threshold_mode,
        "threshold": args.threshold,
        "master_seed": args.master_seed,
        "init": args.init,
        "bins": args.bins,
        "workers": args.workers,
        "output": args.output,
        "cost_kinds": None if getattr(args, "cost_kinds", None) is None else tuple(args.cost_kinds),
    }
    return replace(config, noise=noise, optimizer=optimizer, **{k: v for k, v in flat.items() if v is not None})


def _baseline(args) -> int:
    report = report_baselines(NoiseSpec(args.noise_kind, args.p, args.n))
    if args.json:
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        print(f"noise        {args.noise_kind}  p={args.p}  n={args.n}")
        print(f"F0           {report['f0']:.5f}   (closed form {report['f0_closed_form']:.5f})")
        print(f"F0 strong    {report['f0_strong']:.5f}   (closed form {report['f0_strong_closed_form']:.5f})")
        print(f"residual     {report['footnote_residual']:.3e}")
    return EXIT_OK


def _require_output(config: ExperimentConfig) -> str:
    if not config.output:
        raise ConfigError("an output directory is required (--output or experiment.output)")
    prepare_output(config.output)
    return config.output


def _run(args) -> int:
    config = build_config(args)
    out = _require_output(config)
    summaries = run_batch(config)
    write_batch(out, config, summaries)
    for s in summaries:
        print(f"{s.cost_kind:5s} success {s.success_rate:.3f} ({s.passing}/{len(s.records)}) threshold {s.threshold:.5f}")
    return EXIT_OK


def _two_stage(args) -> int:
    config = build_config(args)
    out = _require_output(config)
    result = run_two_stage(config, args.first, args.second)
    write_two_stage(out, config, result)
    d = result.to_dict()
    print(f"{d['first']} -> {d['second']}: improvement median {d['improvement_median']:.3e} "
          f"max {d['improvement_max']:.3e} min {d['improvement_min']:.3e}")
    return EXIT_OK


def _verify(args) -> int:
    ok = True

    def report(name, passed, detail):
        nonlocal ok
        ok &= passed
        print(f"{'PASS' if passed else 'FAIL'}  {name}: {detail}")

    for kind in ("bit_flip", "phase_flip"):
        alpha, beta = exact_code_params(kind)
        for p in (0.0, 0.4, 0.8, 1.0):
            spec = PipelineSpec.default(NoiseSpec(kind, p))
            err = abs(1 - average_fidelity(spec, alpha, beta))
            report(f"exact code {kind} p={p}", err < 1e-9, f"|1 - F| = {err:.1e}")

    spec = PipelineSpec.default()
    for kind in ("fid", "wass"):
        h = CostHamiltonian(kind, spec.layout.n)
        ev = Evaluator(spec, h)
        worst, calls_ok = 0.0, True
        for i in range(args.points):
            alpha, beta = random_angles(spec, args.seed + i)
            _, ga, gb = ev.value_and_grad(alpha, beta)
            counter = CountingCost(spec, h)
            j, k = i % spec.V.param_count, (7 * i) % spec.W.param_count
            worst = max(worst, abs(grad_alpha(spec, alpha, beta, h, j, counter) - ga[j]))
            calls_ok &= counter.calls == 4
            worst = max(worst, abs(grad_beta(spec, alpha, beta, h, k, counter) - gb[k]))
            calls_ok &= counter.calls == 6
            step = 1e-5
            e = np.zeros_like(beta)
            e[k] = step
            fd = (cost_value(spec, alpha, beta + e, h) - cost_value(spec, alpha, beta - e, h)) / (2 * step)
            worst = max(worst, abs(fd - gb[k]))
        report(f"gradients {kind}", worst < 1e-6 and calls_ok, f"max deviation {worst:.1e}, shift calls 2/4: {calls_ok}")
    return EXIT_OK if ok else EXIT_FAILED


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    handlers = {"baseline": _baseline, "run": _run, "two-stage": _two_stage, "verify": _verify}
    try:
        return handlers[args.command](args)
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
