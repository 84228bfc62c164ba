"""Command-line interface: generation, fitting, metrics and sweeps.

Subcommands write delimited files into an output directory (and, with
``--plot``, figures next to them) and print short summaries to stdout.
Every run with fixed parameters and seed is byte-deterministic.

Exit codes: 0 success, 2 usage or invalid parameters, 3 input/output
failure, 4 malformed input file, 5 numerical failure (insufficient data,
rank deficiency, degenerate signals, values out of domain).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import fileio, metrics
from .dynamics import LogisticParams, add_noise, logistic_series, make_driving_force
from .embedding import embed, window_restrict
from .errors import (
    CsvParseError,
    InvalidParameterError,
    SfaDriveError,
)
from .experiments import (
    DEFAULT_NU_GRID,
    ETA_TABLE_M,
    ETA_TABLE_NU_F,
    ETA_TABLE_Q,
    RunConfig,
    eta_table,
    noise_study,
    phase_transition_scan,
    run_single,
    sweep_qm,
)
from .sfa import expanded_dim, fit

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_PARSE = 4
EXIT_NUMERIC = 5

_EPILOG = """exit codes:
  0  success
  2  usage error or invalid parameter
  3  input/output failure
  4  malformed input file
  5  numerical failure (insufficient data, rank deficiency, degenerate signal)
"""

_DEFAULTS = RunConfig()

# flag dest -> (RunConfig field, converter)
_CONFIG_KEYS = {
    "nu_f": ("nu_f", float),
    "q": ("q", float),
    "m": ("m", int),
    "tau": ("tau", int),
    "points": ("points", int),
    "degree": ("degree", int),
    "k": ("k", int),
    "u0": ("u0", float),
    "burn_in": ("burn_in", int),
    "noise_pct": ("noise_percent", float),
    "seed": ("seed", int),
    "svd_eps": ("svd_cutoff", float),
}
_FILE_ONLY_KEYS = {"out": str, "format": str}


def _add_run_flags(parser: argparse.ArgumentParser) -> None:
    g = parser.add_argument_group("run parameters (defaults follow the reference protocol)")
    g.add_argument("--nu-f", dest="nu_f", type=float, help=f"base frequency (default {_DEFAULTS.nu_f:g})")
    g.add_argument("--q", type=float, help=f"logistic-map predictability shift (default {_DEFAULTS.q:g})")
    g.add_argument("--m", type=int, help=f"embedding dimension (default {_DEFAULTS.m})")
    g.add_argument("--tau", type=int, help=f"embedding delay (default {_DEFAULTS.tau})")
    g.add_argument("--points", type=int, help=f"series length (default {_DEFAULTS.points})")
    g.add_argument("--degree", type=int, choices=(1, 2), help=f"expansion degree (default {_DEFAULTS.degree})")
    g.add_argument("--k", type=int, help=f"number of output signals (default {_DEFAULTS.k})")
    g.add_argument("--u0", type=float, help=f"logistic-map initial value (default {_DEFAULTS.u0:g})")
    g.add_argument("--burn-in", dest="burn_in", type=int, help=f"discarded leading samples (default {_DEFAULTS.burn_in})")
    g.add_argument("--noise-pct", dest="noise_pct", type=float, help=f"additive noise percent (default {_DEFAULTS.noise_percent:g})")
    g.add_argument("--seed", type=int, help=f"noise seed (default {_DEFAULTS.seed})")
    g.add_argument("--svd-eps", dest="svd_eps", type=float, help=f"relative singular-value cutoff (default {_DEFAULTS.svd_cutoff:g})")
    parser.add_argument("--config", help="key=value file; explicit flags win over it")
    parser.add_argument("--out", help="output directory (default out)")
    parser.add_argument("--format", choices=("csv", "tsv"), help="delimited format (default csv)")
    parser.add_argument("--plot", action="store_true", help="also render figures next to the data files")
    parser.add_argument("-v", "--verbose", action="store_true", help="progress output on stderr")


def _comma_list(conv):
    def parse(text: str):
        try:
            return tuple(conv(part) for part in text.split(",") if part != "")
        except ValueError:
            raise argparse.ArgumentTypeError(f"not a comma-separated list: {text!r}") from None
    return parse


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sfadrive",
        description="Driving-force detection via slow feature analysis on driven logistic maps.",
        epilog=_EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "generate", help="write driving force and driven series files",
        epilog=_EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    _add_run_flags(p)

    p = sub.add_parser(
        "fit", help="run SFA and write signals, alignments and a summary row",
        epilog=_EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p.add_argument("--series", help="series file to analyze (needs --force; otherwise data is generated)")
    p.add_argument("--force", help="force file matching --series")
    _add_run_flags(p)

    p = sub.add_parser(
        "sweep", help="parameter sweeps: pt-scan, qm-grid, eta-table, noise",
        epilog=_EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p.add_argument("--mode", required=True, choices=("pt-scan", "qm-grid", "eta-table", "noise"))
    p.add_argument("--nu-min", type=float, default=10.0, help="scan grid start (default 10)")
    p.add_argument("--nu-max", type=float, default=80.0, help="scan grid end (default 80)")
    p.add_argument("--nu-step", type=float, default=1.0, help="scan grid step (default 1)")
    p.add_argument("--q-grid", type=_comma_list(float), default=ETA_TABLE_Q,
                   help="q values for grids (default 0.1,0.3,0.5,0.6,0.7)")
    p.add_argument("--m-grid", type=_comma_list(int), default=ETA_TABLE_M,
                   help="m values for grids (default 5,10,15,20,30)")
    p.add_argument("--percents", type=_comma_list(float), default=(1.0, 2.0, 5.0),
                   help="noise percents (default 1,2,5)")
    p.add_argument("--seeds", type=_comma_list(int), default=(0, 1, 2, 3, 4),
                   help="noise seeds (default 0,1,2,3,4)")
    p.add_argument("--full-scan", action="store_true",
                   help="qm-grid: scan entire grid per cell instead of stopping at the transition")
    _add_run_flags(p)

    p = sub.add_parser(
        "eta", help="slowness indicator of one column of a delimited file",
        epilog=_EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p.add_argument("input", help="delimited input file")
    p.add_argument("--column", default="value", help="column name (default value)")
    p.add_argument("--format", choices=("csv", "tsv"), default="csv", help="delimited format (default csv)")

    p = sub.add_parser(
        "align", help="least-squares alignment of one column to another",
        epilog=_EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p.add_argument("input", help="delimited input file")
    p.add_argument("--y-column", required=True, help="column to rescale")
    p.add_argument("--target-column", required=True, help="column to align to")
    p.add_argument("--out", help="optional output file for the aligned sequence")
    p.add_argument("--format", choices=("csv", "tsv"), default="csv", help="delimited format (default csv)")

    return parser


def _read_config_file(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    text = Path(path).read_text(encoding="utf-8")
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidParameterError(f"{path}:{line_no}: expected key=value, got {raw!r}")
        key, value = line.split("=", 1)
        key = key.strip().replace("-", "_")
        if key not in _CONFIG_KEYS and key not in _FILE_ONLY_KEYS:
            raise InvalidParameterError(f"{path}:{line_no}: unknown key {key!r}")
        values[key] = value.strip()
    return values


def _resolve(args: argparse.Namespace) -> tuple[RunConfig, Path, str, bool]:
    """Merge flags, config file and protocol defaults into a RunConfig."""
    file_values = _read_config_file(args.config) if args.config else {}
    overrides = {}
    explicit = set()
    for dest, (field_name, conv) in _CONFIG_KEYS.items():
        flag_value = getattr(args, dest, None)
        if flag_value is not None:
            overrides[field_name] = flag_value
            explicit.add(field_name)
        elif dest in file_values:
            try:
                overrides[field_name] = conv(file_values[dest])
            except ValueError:
                raise InvalidParameterError(
                    f"config key {dest}: cannot convert {file_values[dest]!r}"
                ) from None
    config = RunConfig(**overrides)

    out = args.out if getattr(args, "out", None) else file_values.get("out", "out")
    fmt = args.format if getattr(args, "format", None) else file_values.get("format", "csv")
    if fmt not in ("csv", "tsv"):
        raise InvalidParameterError(f"unknown format {fmt!r}, expected csv or tsv")
    nu_f_explicit = "nu_f" in explicit or "nu_f" in file_values
    return config, Path(out), fmt, nu_f_explicit


def _generate_data(config: RunConfig):
    force = make_driving_force(config.nu_f, config.points)
    params = LogisticParams(q=config.q, initial_value=config.u0, burn_in=config.burn_in)
    series = logistic_series(force, params)
    if config.noise_percent > 0:
        series = add_noise(series, config.noise_percent, config.seed)
    return force, series


def _print(line: str) -> None:
    print(line)


def _f17(value: float) -> str:
    return format(float(value), ".17g")


def cmd_generate(args: argparse.Namespace) -> int:
    config, out, fmt, _ = _resolve(args)
    force, series = _generate_data(config)
    out.mkdir(parents=True, exist_ok=True)
    fileio.write_force(force, out / "force.csv", fmt)
    fileio.write_series(series, out / "series.csv", fmt)
    _print(f"eta_gamma={_f17(metrics.eta(force.values))}")
    _print(f"eta_gamma_slow={_f17(metrics.eta(force.slow))}")
    if args.plot:
        from . import plots

        plots.render_force_figure(force, series, out / "force.png")
    return EXIT_OK


def cmd_fit(args: argparse.Namespace) -> int:
    config, out, fmt, _ = _resolve(args)
    if (args.series is None) != (args.force is None):
        raise InvalidParameterError("--series and --force must be given together")
    if args.series:
        series = fileio.read_series(args.series, fmt)
        force = fileio.read_force(args.force, fmt)
    else:
        force, series = _generate_data(config)

    rows = embed(series, config.m, config.tau)
    # k can never exceed the expansion dimension; clamp so tiny models run.
    k = min(config.k, expanded_dim(config.m, config.degree))
    _, output = fit(rows, degree=config.degree, k=k, svd_cutoff=config.svd_cutoff)
    gamma = window_restrict(force, rows.window, "full")
    gamma_slow = window_restrict(force, rows.window, "slow")
    y1 = output.y(1)
    _, aligned_full = metrics.align(y1, gamma)
    _, aligned_slow = metrics.align(y1, gamma_slow)

    corr_full = abs(metrics.correlation(y1, gamma))
    corr_slow = abs(metrics.correlation(y1, gamma_slow))
    eta_y1 = metrics.eta(y1)
    eta_force = metrics.eta(gamma)

    out.mkdir(parents=True, exist_ok=True)
    fileio.write_signals(output, out / "signals.csv", fmt)
    fileio.write_aligned(
        rows.window, gamma, gamma_slow, aligned_full, aligned_slow, out / "aligned.csv", fmt
    )
    summary_header = ["corr_full", "corr_slow", "eta_y1", "eta_force", "eta_slow", "eta_ratio"]
    summary_row = [
        corr_full, corr_slow, eta_y1, eta_force,
        metrics.eta(gamma_slow), eta_y1 / eta_force,
    ]
    fileio.write_rows(out / "summary.csv", fmt, summary_header, [summary_row])
    _print(f"corr_full={_f17(corr_full)}")
    _print(f"corr_slow={_f17(corr_slow)}")
    _print(f"eta_y1={_f17(eta_y1)}")
    if args.plot:
        from . import plots

        plots.render_fit_figure(
            series, rows.window, y1, gamma, gamma_slow,
            aligned_full, aligned_slow, out / "fit.png",
        )
    return EXIT_OK


def _scan_grid(args: argparse.Namespace) -> tuple[float, ...]:
    if args.nu_step <= 0:
        raise InvalidParameterError("--nu-step must be positive")
    grid = []
    nu = args.nu_min
    while nu <= args.nu_max + 1e-9:
        grid.append(round(nu, 9))
        nu += args.nu_step
    if not grid:
        raise InvalidParameterError("empty frequency grid")
    return tuple(grid)


def cmd_sweep(args: argparse.Namespace) -> int:
    config, out, fmt, nu_f_explicit = _resolve(args)
    out.mkdir(parents=True, exist_ok=True)
    verbose = args.verbose

    if args.mode == "pt-scan":
        grid = _scan_grid(args)
        if verbose:
            print(f"scanning {len(grid)} frequencies", file=sys.stderr)
        scan = phase_transition_scan(config, grid)
        fileio.write_records(scan.records, out / "records.csv", fmt)
        _print(f"nu_pt={'none' if scan.nu_pt is None else _f17(scan.nu_pt)}")
        if args.plot:
            from . import plots

            plots.render_scan_figure(scan.records, out / "pt_scan.png")

    elif args.mode == "qm-grid":
        grid = _scan_grid(args)
        cells = sweep_qm(args.q_grid, args.m_grid, config, grid, early_stop=not args.full_scan)
        fileio.write_qm_table(cells, out / "qm_table.csv", fmt)
        records = [r for c in cells for r in c.records]
        fileio.write_records(records, out / "records.csv", fmt)
        for cell in cells:
            nu_pt = "none" if cell.nu_pt is None else _f17(cell.nu_pt)
            _print(f"q={cell.q:g} m={cell.m} nu_pt={nu_pt}")
        if args.plot:
            from . import plots

            plots.render_qm_figure(cells, out / "qm_grid.png")

    elif args.mode == "eta-table":
        nu_f = config.nu_f if nu_f_explicit else ETA_TABLE_NU_F
        cells = eta_table(args.m_grid, args.q_grid, config, nu_f=nu_f)
        fileio.write_eta_table(cells, out / "eta_table.csv", fmt)
        for cell in cells:
            _print(f"m={cell.m} q={cell.q:g} eta_y1={_f17(cell.eta_y1)}")
        if args.plot:
            from . import plots

            plots.render_eta_table_figure(cells, out / "eta_table.png")

    else:  # noise
        cells, records = noise_study(config, args.percents, args.seeds)
        fileio.write_noise_table(cells, out / "noise_table.csv", fmt)
        fileio.write_records(records, out / "records.csv", fmt)
        for cell in cells:
            _print(
                f"noise_pct={cell.noise_percent:g} m={cell.m} "
                f"mean_corr_slow={_f17(cell.mean_corr_slow)}"
            )
        if args.plot:
            from . import plots

            plots.render_noise_figure(cells, out / "noise.png")

    return EXIT_OK


def cmd_eta(args: argparse.Namespace) -> int:
    table = fileio.read_table(args.input, args.format)
    values = fileio.numeric_column(table, args.column, args.input)
    _print(f"eta={_f17(metrics.eta(values))}")
    return EXIT_OK


def cmd_align(args: argparse.Namespace) -> int:
    table = fileio.read_table(args.input, args.format)
    y = fileio.numeric_column(table, args.y_column, args.input)
    target = fileio.numeric_column(table, args.target_column, args.input)
    alignment, aligned = metrics.align(y, target)
    _print(f"a={_f17(alignment.scale)}")
    _print(f"b={_f17(alignment.offset)}")
    _print(f"mse={_f17(alignment.mse)}")
    _print(f"corr={_f17(metrics.correlation(y, target))}")
    if args.out:
        header, _ = table
        if "t" in header:
            t = fileio.numeric_column(table, "t", args.input).astype(int)
        else:
            t = range(1, len(y) + 1)
        fileio.write_rows(
            args.out, args.format,
            ["t", args.y_column, args.target_column, "aligned"],
            zip(t, y, target, aligned),
        )
    return EXIT_OK


_COMMANDS = {
    "generate": cmd_generate,
    "fit": cmd_fit,
    "sweep": cmd_sweep,
    "eta": cmd_eta,
    "align": cmd_align,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except InvalidParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CsvParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except SfaDriveError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
