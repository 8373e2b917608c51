"""Command-line interface for the experiment harness and demos."""

from __future__ import annotations

import argparse
import json
import logging
import sys

import numpy as np

from . import harness, inner, los
from .harness import ExperimentConfig


def _load_config(args) -> ExperimentConfig:
    cfg = (ExperimentConfig.from_file(args.config) if args.config
           else ExperimentConfig())
    overrides = {}
    if getattr(args, "seed", None) is not None:
        overrides["seed"] = args.seed
    if getattr(args, "trials", None) is not None:
        overrides["trials"] = args.trials
    if getattr(args, "threads", None) is not None:
        overrides["threads"] = args.threads
    if getattr(args, "schemes", None):
        overrides["schemes"] = [s.strip() for s in args.schemes.split(",") if s.strip()]
    if getattr(args, "record_timings", False):
        overrides["record_timings"] = True
    if overrides:
        data = cfg.to_dict()
        data.update(overrides)
        cfg = ExperimentConfig.from_dict(data)
    return cfg


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--config", help="flat JSON config file")
    p.add_argument("--seed", type=int, help="root random seed")
    p.add_argument("--trials", type=int, help="number of channel draws")
    p.add_argument("--threads", type=int, help="worker threads over trials")
    p.add_argument("--schemes", help="comma-separated scheme list")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--record-timings", action="store_true",
                   help="write wall times into the records CSV "
                        "(makes output bytes run-dependent)")


def cmd_region(args) -> int:
    cfg = _load_config(args)
    curves, records = harness.run_region_sweep(cfg)
    paths = harness.write_results(records, curves, args.out, cfg)
    print(f"wrote {paths['records']}")
    return 0


def cmd_sweep(args) -> int:
    cfg = _load_config(args)
    values = [float(v) for v in args.values.split(",")]
    results = harness.run_parameter_sweep(cfg, args.axis, values)
    all_records = []
    for v, (curves, records) in results.items():
        tag = f"{args.axis}{v:g}_"
        harness.write_results(records, curves, args.out, cfg, prefix=tag)
        all_records.extend(records)
    curves = harness.aggregate_curves(all_records)
    paths = harness.write_results(all_records, curves, args.out, cfg)
    print(f"wrote {paths['records']} and per-value files")
    return 0


def cmd_single_ma(args) -> int:
    cfg = _load_config(args)
    curves, records, crossovers = harness.run_single_ma_demo(cfg)
    paths = harness.write_results(records, curves, args.out, cfg,
                                  extra_meta={"ts_crossover_trials": crossovers})
    print(f"wrote {paths['records']}; "
          f"{len(crossovers)} trial(s) with a two-slot crossover")
    return 0


def cmd_inner(args) -> int:
    with open(args.channel_file) as fh:
        data = json.load(fh)
    h1 = np.array([complex(re, im) for re, im in data["h1"]])
    h2 = np.array([complex(re, im) for re, im in data["h2"]])
    problem = inner.InnerProblem(
        h1=h1, h2=h2, power=float(data["power"]),
        multicast_req=float(args.r_ms if args.r_ms is not None
                            else data.get("r_ms", 0.0)),
        noise=float(data["noise_power"]))
    sol = inner.solve_inner(problem)
    print(f"status        : {sol.status}")
    if sol.status == inner.OPTIMAL:
        from .rates import multicast_rate
        print(f"secrecy rate  : {sol.secrecy_rate_bits:.6f} bits/s/Hz")
        print(f"common rate   : "
              f"{multicast_rate(h1, h2, sol.w0, sol.wc, problem.noise):.6f} bits/s/Hz")
        print(f"xi            : {sol.xi:.6e}")
        print(f"rank ratios   : Z {sol.rank_ratio_Z:.2e}  "
              f"Gamma {sol.rank_ratio_Gamma:.2e}"
              + ("  (rank warning)" if sol.rank_warning else ""))
        print(f"solver gap    : {sol.rel_gap:.2e} in {sol.iterations} iterations")
    return 0 if sol.status == inner.OPTIMAL else 1


def cmd_los_demo(args) -> int:
    rng = np.random.default_rng(args.seed)
    wavelength = 0.0599584916 if args.wavelength is None else args.wavelength
    scen = los.random_scenario(rng, wavelength)
    rs = los.residuals(scen)
    print(f"residuals     : c1={rs.r_c1:+.4f} c2={rs.r_c2:+.4f} "
          f"01={rs.r_01:+.4f} 02={rs.r_02:+.4f} (1/m)")
    found = los.find_spacing(rs, args.antennas, args.eps, wavelength, args.d_max)
    if found is None:
        print(f"no spacing multiple up to {args.d_max} meets eps={args.eps}")
        return 1
    d, dev = found
    print(f"spacing       : d={d} wavelengths (worst phase deviation {dev:.4f})")
    apv = los.lemma_apv(d, wavelength, args.antennas)
    gains = los.beam_gains(apv, scen)
    print("beam gains    : " + "  ".join(f"{k}={v:.6f}" for k, v in gains.items()))
    power, noise = 1.0, 1e-3
    pc = 0.4 * power
    rc_cf, r0_cf = los.closed_form_rates(pc, power - pc, scen.beta1, scen.beta2,
                                         args.antennas, noise)
    wc = los_unit_beam(scen, apv, "c")
    w0 = los_unit_beam(scen, apv, "0")
    rc, r0 = los.achieved_rates(apv, scen, wc, w0, pc, power - pc, noise)
    print(f"closed form   : Rc={rc_cf:.6f}  R0={r0_cf:.6f}")
    print(f"achieved      : Rc={rc:.6f}  R0={r0:.6f}")
    return 0


def los_unit_beam(scen: los.LosScenario, apv: np.ndarray, which: str) -> np.ndarray:
    from .channel import array_response
    a = array_response(apv, *scen.beam_angles(which), scen.wavelength)
    return a / np.sqrt(len(apv))


def cmd_config(args) -> int:
    if args.action == "print-default":
        print(json.dumps(ExperimentConfig().to_dict(), indent=2, sort_keys=True))
        return 0
    raise SystemExit(f"unknown config action {args.action}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mapsi",
                                description="secrecy rate regions with movable antennas")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    pr = sub.add_parser("region", help="rate-region sweep over one configuration")
    _add_common(pr)
    pr.set_defaults(func=cmd_region)

    ps = sub.add_parser("sweep", help="region sweeps along M, A or N")
    _add_common(ps)
    ps.add_argument("--axis", required=True, choices=["M", "A", "N"])
    ps.add_argument("--values", required=True,
                    help="comma-separated axis values")
    ps.set_defaults(func=cmd_sweep)

    pm = sub.add_parser("single-ma", help="single-antenna comparison study")
    _add_common(pm)
    pm.set_defaults(func=cmd_single_ma)

    pi = sub.add_parser("inner", help="one-shot beamforming solve from a channel file")
    pi.add_argument("channel_file", help="JSON with h1, h2 ([re, im] pairs), "
                                         "power, noise_power, optional r_ms")
    pi.add_argument("--r-ms", type=float, default=None)
    pi.set_defaults(func=cmd_inner)

    pl = sub.add_parser("los-demo", help="aligned-beam placement construction demo")
    pl.add_argument("--antennas", type=int, default=4)
    # the four beam/user phase offsets obey an exact alternating-sum identity,
    # so the joint alignment targets only become reachable for loose tolerances
    pl.add_argument("--eps", type=float, default=2.0)
    pl.add_argument("--d-max", type=int, default=1_000_000)
    pl.add_argument("--seed", type=int, default=0)
    pl.add_argument("--wavelength", type=float, default=None)
    pl.set_defaults(func=cmd_los_demo)

    pc = sub.add_parser("config", help="configuration helpers")
    pc.add_argument("action", choices=["print-default"])
    pc.set_defaults(func=cmd_config)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
