"""``photon-link`` command line.

Subcommands::

    photon-link table     background photon budget per modulation
    photon-link curve     BER versus photons per bit
    photon-link simulate  Monte Carlo PPM run next to the analytic SER/BER
    photon-link compare   photons per bit needed to hit target BERs

Exit status is 0 on success, 2 for usage or scenario errors and 3 if a
computed value is not finite.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys

from photonlink import __version__
from photonlink.curves import (
    DEFAULT_TARGETS,
    ber_curve,
    compare,
    default_grid,
    parse_modulation,
)
from photonlink.linkbudget import DEFAULT_ORDERS, LinkScenario, background_breakdown
from photonlink.mcsim import SimConfig, simulate_ppm
from photonlink.ppm import DEFAULT_TOL, PpmChannel, ber_mppm
from photonlink.scenario import ScenarioError, ScenarioFile, load_scenario

log = logging.getLogger("photonlink")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3


class NumericError(RuntimeError):
    """A computed output value is NaN or infinite."""


def _check_finite(obj, where="output"):
    if isinstance(obj, float):
        if not math.isfinite(obj):
            raise NumericError(f"non-finite value in {where}")
    elif isinstance(obj, dict):
        for k, v in obj.items():
            _check_finite(v, f"{where}.{k}")
    elif isinstance(obj, (list, tuple)):
        for v in obj:
            _check_finite(v, where)


def _scenario_from_args(args) -> ScenarioFile:
    sf = load_scenario(args.scenario) if args.scenario else ScenarioFile(LinkScenario())
    sc = sf.scenario
    if getattr(args, "qswitch", None) is not None:
        if not 0.0 < args.qswitch <= 1.0:
            raise ScenarioError(f"--qswitch must lie in (0, 1], got {args.qswitch}")
        sc = sc.replace(qswitch_efficiency=args.qswitch)
    if getattr(args, "ideal", False):
        sc = sc.idealized()
    return ScenarioFile(sc, sf.radiance_levels, sf.modulations)


def _parse_list(text, convert):
    try:
        return tuple(convert(item) for item in text.split(",") if item.strip())
    except ValueError as exc:
        raise ScenarioError(str(exc)) from None


# -- commands: each returns (csv header, csv rows, json document) -----------


def cmd_table(args):
    sf = _scenario_from_args(args)
    orders = _parse_list(args.orders, int) if args.orders else DEFAULT_ORDERS
    try:
        rows = background_breakdown(sf.scenario, orders)
    except ValueError as exc:
        raise ScenarioError(str(exc)) from None
    header = ["modulation", "symbol_rate_msps", "photons_per_symbol_in_pol", "photons_per_slot"]
    table = [
        [str(r.modulation), r.symbol_rate / 1e6, r.photons_per_symbol_in_pol, r.photons_per_slot]
        for r in rows
    ]
    doc = {"rows": [dict(zip(header, row)) for row in table]}
    return header, table, doc


def cmd_curve(args):
    sf = _scenario_from_args(args)
    mods = _parse_list(args.modulations, parse_modulation) if args.modulations else sf.modulations
    if not (0 < args.grid_min < args.grid_max) or args.points < 2:
        raise ScenarioError("photon grid needs 0 < --grid-min < --grid-max and --points >= 2")
    grid = default_grid(args.grid_min, args.grid_max, args.points)
    series = [ber_curve(sf.scenario, m, grid, args.tol) for m in mods]
    header = ["label", "photons_per_bit", "ber"]
    table = [[s.label, n, b] for s in series for n, b in s.points]
    doc = {"series": [{"label": s.label, "points": [list(p) for p in s.points]} for s in series]}
    return header, table, doc


def cmd_simulate(args):
    try:
        ch = PpmChannel(args.order, args.ks, args.kb)
        cfg = SimConfig(ch, args.symbols, args.seed, args.chunk_size)
    except ValueError as exc:
        raise ScenarioError(str(exc)) from None
    report = simulate_ppm(cfg, workers=args.workers)
    rates = ber_mppm(ch, args.tol)
    sigma = math.sqrt(rates.ser * (1.0 - rates.ser) / report.symbols_run)
    if sigma > 0:
        z = (report.ser_hat - rates.ser) / sigma
    else:
        z = 0.0 if report.symbol_errors == 0 else None
    doc = {
        "channel": {
            "order": ch.order,
            "signal_counts": ch.signal_counts,
            "background_counts": ch.background_counts,
        },
        "report": report.to_dict(),
        "analytic": {
            "ser": rates.ser,
            "ber": rates.ber,
            "bound_ser": rates.bound_ser,
            "truncation_residual": rates.truncation_residual,
        },
        "z_score": z,
    }
    header = [
        "order", "signal_counts", "background_counts", "seed", "symbols_run", "symbol_errors",
        "bit_errors", "ser_hat", "ber_hat", "ser_ci95_low", "ser_ci95_high", "ser", "ber", "z_score",
    ]
    table = [[
        ch.order, ch.signal_counts, ch.background_counts, report.seed, report.symbols_run,
        report.symbol_errors, report.bit_errors, report.ser_hat, report.ber_hat,
        report.ser_ci95[0], report.ser_ci95[1], rates.ser, rates.ber, "" if z is None else z,
    ]]
    return header, table, doc


def cmd_compare(args):
    sf = _scenario_from_args(args)
    targets = _parse_list(args.targets, float) if args.targets else DEFAULT_TARGETS
    if any(not 0.0 < t < 0.5 for t in targets):
        raise ScenarioError("--targets must lie in (0, 0.5)")
    levels = compare(sf.scenario, sf.radiance_levels, sf.modulations, targets, args.tol)
    header = ["spectral_radiance", "target_ber", "modulation", "rank", "photons_per_bit", "photons_per_symbol"]
    table = []
    for level in levels:
        for t in level["targets"]:
            for rank, label in enumerate(t["ranking"], start=1):
                req = t["required"][label]
                if req["reachable"]:
                    table.append([level["spectral_radiance"], t["target_ber"], label, rank,
                                  req["photons_per_bit"], req["photons_per_symbol"]])
                else:
                    table.append([level["spectral_radiance"], t["target_ber"], label, rank,
                                  "unreachable", "unreachable"])
    return header, table, {"levels": levels}


# -- output ------------------------------------------------------------------


def _cell(value):
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render_csv(header, table) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in table:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def _emit(text, out):
    if out in (None, "-", "stdout"):
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


_COMMANDS = {
    "table": cmd_table,
    "curve": cmd_curve,
    "simulate": cmd_simulate,
    "compare": cmd_compare,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="photon-link",
        description="Error-rate analysis of photon-counting PPM and pre-amplified DPSK links.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default="-", help="output path, or - for stdout")
    common.add_argument("--tol", type=float, default=DEFAULT_TOL, help="analytic truncation tolerance")

    scen = argparse.ArgumentParser(add_help=False)
    scen.add_argument("--scenario", help="scenario JSON file (default: built-in 10 uW scenario)")
    scen.add_argument("--ideal", action="store_true", help="eta = 1, n_sp = 1, infinite gain")
    scen.add_argument("--qswitch", type=float, help="override Q-switch efficiency")

    p = sub.add_parser("table", parents=[common, scen], help="background photon breakdown")
    p.add_argument("--orders", help="comma-separated PPM orders (default 2,4,8,16,32)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("curve", parents=[common, scen], help="BER curves")
    p.add_argument("--modulations", help="comma-separated, e.g. DPSK,2,4,16")
    p.add_argument("--grid-min", type=float, default=1.0)
    p.add_argument("--grid-max", type=float, default=150.0)
    p.add_argument("--points", type=int, default=150)
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("simulate", parents=[common], help="Monte Carlo PPM run")
    p.add_argument("--order", "-M", type=int, required=True)
    p.add_argument("--ks", type=float, required=True, help="mean signal counts per pulsed slot")
    p.add_argument("--kb", type=float, required=True, help="mean background counts per slot")
    p.add_argument("--symbols", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--chunk-size", type=int, default=SimConfig.__dataclass_fields__["chunk_size"].default)
    p.add_argument("--format", choices=("csv", "json"), default="json")

    p = sub.add_parser("compare", parents=[common, scen], help="photons needed per target BER")
    p.add_argument("--targets", help="comma-separated target BERs (default 1e-4,1e-6,1e-9)")
    p.add_argument("--format", choices=("csv", "json"), default="json")
    return parser


def run(argv=None) -> tuple[str, str]:
    """Parse ``argv`` and run the command; return ``(rendered_output, out_path)``."""
    args = build_parser().parse_args(argv)
    meta = {"command": args.command, "tol": args.tol, "version": __version__}
    if getattr(args, "ideal", False):
        meta["ideal"] = True
    if getattr(args, "qswitch", None) is not None:
        meta["qswitch"] = args.qswitch
    if args.command == "simulate" and args.workers < 1:
        raise ScenarioError("--workers must be >= 1")
    if not 0.0 < args.tol <= 1e-6:
        raise ScenarioError("--tol must lie in (0, 1e-6]")

    header, table, doc = _COMMANDS[args.command](args)
    _check_finite(doc)
    if args.format == "json":
        return json.dumps({"meta": meta, **doc}, indent=2, allow_nan=False) + "\n", args.out
    # CSV keeps the header as its first line; metadata goes to stderr.
    log.info("meta %s", json.dumps(meta))
    return render_csv(header, table), args.out


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(message)s", stream=sys.stderr)
    try:
        text, out = run(argv)
        _emit(text, out)
    except ScenarioError as exc:
        print(f"photon-link: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericError as exc:
        print(f"photon-link: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"photon-link: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # argparse usage errors, --help, --version
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
