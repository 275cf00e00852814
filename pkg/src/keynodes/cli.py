"""Command-line front end.

Exit codes: 0 ok, 2 configuration error, 3 unreachable threshold,
4 numerical failure, 5 every replicate censored on some target.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import keychain, meanfield, netsim, tables
from .config import RunConfig, load_config, with_overrides
from .csvio import fmt, write_rows
from .errors import (
    ConfigError,
    HorizonExceeded,
    InvalidK,
    InvalidParams,
    KeynodesError,
    ModeError,
    NumericalFailure,
    SpecError,
    UnknownPreset,
    UnreachableGamma,
)

EXIT_OK, EXIT_CONFIG, EXIT_UNREACHABLE, EXIT_NUMERICAL, EXIT_CENSORED = 0, 2, 3, 4, 5

log = logging.getLogger("keynodes")


def _out(cfg: RunConfig, name: str):
    return None if cfg.out is None else cfg.out / name


def _emit(cfg, name, header, rows, footer=()):
    """Write to ``--out``/name when an output directory is set, else stdout."""
    write_rows(_out(cfg, name), header, rows, footer)


def _trigger_or_raise(rates, cfg):
    trig = meanfield.trigger_time(rates, cfg.gamma, cfg.rtol, cfg.atol)
    if not trig.reached:
        raise UnreachableGamma(cfg.gamma, trig.fixed_point)
    return trig.tau_hat


def cmd_meanfield(cfg: RunConfig) -> int:
    rates = cfg.require_rates()
    fps = meanfield.fixed_points(rates)
    trig = meanfield.trigger_time(rates, cfg.gamma, cfg.rtol, cfg.atol)
    horizon = cfg.horizon or meanfield.default_horizon(rates)
    traj = meanfield.solve_activation(rates, horizon, cfg.rtol, cfg.atol)
    _emit(cfg, "meanfield.csv", ["t", "a_hat"], zip(traj.times, traj.values))
    for fp in fps:
        print(f"fixed_point,{fmt(fp)}")
    if not trig.reached:
        print(f"threshold gamma={cfg.gamma:g} is unreachable; activation "
              f"saturates at fixed point {trig.fixed_point:.10g}", file=sys.stderr)
        return EXIT_UNREACHABLE
    print(f"tau_hat_gamma,{fmt(trig.tau_hat)}")
    return EXIT_OK


def cmd_hitting(cfg: RunConfig) -> int:
    rates = cfg.require_rates()
    rows = []
    for k in cfg.k_range():
        mode = cfg.mode if k == 1 else keychain.ABSORBING
        ht = keychain.expected_hitting_time(rates, k, cfg.rtol, cfg.eps_tail, mode,
                                            cfg.atol)
        rows.append((k, ht.value, ht.tail_bound))
    _emit(cfg, "hitting.csv", ["k", "E_tau_k", "tail_bound"], rows)
    if cfg.out is not None:
        write_rows(None, ["k", "E_tau_k", "tail_bound"], rows)
    return EXIT_OK


def cmd_kc(cfg: RunConfig) -> int:
    rates = cfg.require_rates()
    summary = keychain.optimal_k(rates, cfg.gamma, cfg.k_max, cfg.mode, cfg.rtol,
                                 cfg.atol, cfg.eps_tail)
    other = (keychain.LITERAL_K1 if cfg.mode == keychain.ABSORBING
             else keychain.ABSORBING)
    e1_other = keychain.expected_hitting_time(rates, 1, cfg.rtol, cfg.eps_tail,
                                              other, cfg.atol).value
    times = summary.times()
    kc_other = keychain.select_k(summary.tau_hat_gamma, [e1_other, *times[1:]])[2]
    rows = [(r.k, r.expected_hitting_time, r.tail_bound) for r in summary.records]
    footer = [
        ("tau_hat_gamma", summary.tau_hat_gamma),
        ("k_c_minus", summary.k_c_minus),
        ("k_c_plus", summary.k_c_plus),
        ("k_c", summary.k_c),
        (f"k_c_{other.replace('-', '_')}", kc_other),
        ("modes_disagree", int(kc_other != summary.k_c)),
    ]
    _emit(cfg, "kc.csv", ["k", "E_tau_k", "tail_bound"], rows, footer)
    if cfg.out is not None:
        write_rows(None, ["k", "E_tau_k", "tail_bound"], rows, footer)
    if kc_other != summary.k_c:
        print(f"warning: k_c is {summary.k_c} in {cfg.mode} mode but {kc_other} "
              f"in {other} mode", file=sys.stderr)
    return EXIT_OK


def cmd_rate(cfg: RunConfig) -> int:
    rates = cfg.require_rates()
    k = cfg.k if cfg.k is not None else 2
    t_max = cfg.t_max
    if t_max is None:
        t_max = 2.0 * _trigger_or_raise(rates, cfg)
    grid = np.linspace(0.0, t_max, cfg.points)
    m = keychain.activation_rate(rates, k, grid, cfg.mode if k == 1 else keychain.ABSORBING,
                                 cfg.rtol, cfg.atol)
    _emit(cfg, f"rate_k{k}.csv", ["t", "m_k"], zip(grid[:m.size], m))
    return EXIT_OK


def cmd_simulate(cfg: RunConfig) -> int:
    rates = cfg.require_rates()
    net = cfg.network
    k = net.k if net.k is not None else (cfg.k if cfg.k is not None else 2)
    if net.edgelist:
        graph = netsim.read_edgelist(net.edgelist)
        n = graph.n
    else:
        graph, n = None, net.n
    horizon = net.horizon
    if horizon is None:
        horizon = 10.0 * _trigger_or_raise(rates, cfg)
    t_end = net.curve_t_max if net.curve_t_max is not None else horizon / 5.0
    curve = tuple(np.linspace(0.0, min(t_end, horizon), net.curve_points))
    sc = netsim.SimConfig(rates, cfg.gamma, k, net.replicates, net.seed, n=n,
                          m=net.m, assortativity_target=net.assortativity_target,
                          horizon=horizon, curve_times=curve, max_swaps=net.max_swaps)
    if graph is None:
        graph = netsim.build_graph(sc)
    est = netsim.simulate(graph, sc, threads=net.threads)

    summary = [(name, s.mean, s.std, s.stderr, s.censored)
               for name, s in est.targets.items()]
    header = ["target", "mean", "std", "stderr", "censored"]
    _emit(cfg, "sim_summary.csv", header, summary)
    if cfg.out is not None:
        write_rows(None, header, summary)
        samples = [(r, est.targets["tau_gamma"].samples[r], *est.key_times[r])
                   for r in range(est.replicates)]
        write_rows(cfg.out / "sim_samples.csv",
                   ["replicate", "tau_gamma"] + [f"tau_{j + 1}" for j in range(k)],
                   samples)
        write_rows(cfg.out / "sim_curve.csv", ["t", "a_bar"],
                   zip(est.curve_t, est.curve_a_bar))
        netsim.write_edgelist(graph, cfg.out / "graph.edgelist")
    print(f"assortativity,{fmt(est.assortativity)}")
    print(f"key_nodes,{' '.join(map(str, est.key_nodes))}")
    if est.all_censored():
        print("every replicate hit the horizon before at least one target",
              file=sys.stderr)
        return EXIT_CENSORED
    return EXIT_OK


def cmd_tables(cfg: RunConfig, which: int) -> int:
    out_dir = cfg.out if cfg.out is not None else Path(".")
    if which == 1:
        t = tables.table1(cfg.rtol, cfg.atol)
        print(tables.format_table1(t))
        rows = tables.table1_rows(t)
        footer = []
        bad = t.mode_disagreements()
        if bad:
            footer.append(("k_c_mode_disagreement", " ".join(bad)))
        write_rows(out_dir / "table1.csv", ["k", *t.presets], rows, footer)
    elif which == 2:
        t = tables.table2(cfg.rtol, cfg.atol)
        print(tables.format_table2(t))
        write_rows(out_dir / "table2.csv", ["k", "E_tau_k"], t.items())
    else:
        t = tables.table3(cfg.rtol, cfg.atol)
        print(tables.format_table3(t))
        write_rows(out_dir / "table3.csv", ["gamma", "tau_hat_gamma"], t.items())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    # SUPPRESS keeps a flag given before the subcommand from being reset
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--config", type=Path, help="INI-style run configuration")
    common.add_argument("--out", type=Path, help="directory for CSV output")
    common.add_argument("--rtol", type=float)
    common.add_argument("--atol", type=float)
    common.add_argument("--mode", choices=keychain.MODES)
    common.add_argument("--preset", help="named rate pair (overrides [rates])")
    common.add_argument("--gamma", type=float)
    common.add_argument("--k", type=int)
    common.add_argument("--k-max", type=int, dest="k_max")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="keynodes", description=__doc__.splitlines()[0],
                                parents=[common])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("meanfield", parents=[common], help="activation trajectory and trigger time")
    sub.add_parser("hitting", parents=[common], help="expected key-node hitting times")
    sub.add_parser("kc", parents=[common], help="optimal number of key nodes")
    sub.add_parser("rate", parents=[common], help="key-node activation rate curve")
    sub.add_parser("simulate", parents=[common], help="Gillespie network simulation")
    tp = sub.add_parser("tables", parents=[common], help="recompute the reference tables")
    tp.add_argument("which", type=int, choices=(1, 2, 3))
    return p


def _config_from(args) -> RunConfig:
    opt = lambda name: getattr(args, name, None)
    cfg = load_config(args.config) if opt("config") else RunConfig()
    return with_overrides(cfg, out=opt("out"), rtol=opt("rtol"), atol=opt("atol"),
                          mode=opt("mode"), preset=opt("preset"), gamma=opt("gamma"),
                          k=opt("k"), k_max=opt("k_max"))


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    verbose = getattr(args, "verbose", False)
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = _config_from(args)
        if args.command == "tables":
            return cmd_tables(cfg, args.which)
        return {
            "meanfield": cmd_meanfield,
            "hitting": cmd_hitting,
            "kc": cmd_kc,
            "rate": cmd_rate,
            "simulate": cmd_simulate,
        }[args.command](cfg)
    except UnreachableGamma as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNREACHABLE
    except (NumericalFailure, HorizonExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ConfigError, SpecError, UnknownPreset, InvalidParams, InvalidK,
            ModeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except KeynodesError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
