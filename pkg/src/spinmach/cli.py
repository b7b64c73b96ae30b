"""Command-line front end.

Commands: decompose, hhsa, backtest, compare, states. All take the same
flags (--config, --input, --out, --seed, --set key=value, --dump-config);
data goes to CSV/JSON files in --out, diagnostics to stderr. Exit codes:
0 success, 1 runtime error, 2 usage/IO/config error.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import backtest, config, emd, hhsa, spectral, states
from .errors import ConfigError, SpinmachError
from .ingest import parse_csv

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinmach",
        description="Adaptive decomposition and directional-prediction pipeline",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("decompose", "write the IMF/residual table of the input closes"),
        ("hhsa", "write per-layer envelope/frequency/amplitude tables"),
        ("backtest", "run one strategy out of sample and write its reports"),
        ("compare", "run two strategies and write a side-by-side summary"),
        ("states", "write the state/gate timeline and the complex embedding"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="key=value config file")
        p.add_argument("--input", help="input CSV (header: date,close)")
        p.add_argument("--out", help="output directory")
        p.add_argument("--seed", type=int, help="random seed (training order)")
        p.add_argument(
            "--set",
            dest="overrides",
            action="append",
            default=[],
            metavar="KEY=VALUE",
            help="override one config key (repeatable)",
        )
        p.add_argument(
            "--dump-config",
            action="store_true",
            help="print the effective configuration and exit",
        )
    return parser


def _load_config(ns: argparse.Namespace) -> config.RunConfig:
    cfg = config.RunConfig()
    if ns.config:
        try:
            text = Path(ns.config).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}") from exc
        config.apply_file(cfg, text)
    if ns.input is not None:
        cfg.input_path = ns.input
    if ns.out is not None:
        cfg.out_dir = ns.out
    if ns.seed is not None:
        cfg.seed = ns.seed
    for item in ns.overrides:
        if "=" not in item:
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        key, _, value = item.partition("=")
        config.set_key(cfg, key.strip(), value.strip())
    return cfg


def _read_series(cfg: config.RunConfig):
    if not cfg.input_path:
        raise ConfigError("no input file; pass --input or set input= in the config")
    path = Path(cfg.input_path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise ConfigError(f"cannot read input file: {exc}") from exc
    return parse_csv(raw, symbol=path.stem)


def _write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def _cmd_decompose(cfg: config.RunConfig) -> int:
    series = _read_series(cfg)
    result = emd.decompose(series.closes(), config.sift_config(cfg))
    _write_atomic(Path(cfg.out_dir) / "imfs.csv", emd.to_csv(result))
    print(f"imfs={len(result.imfs)} samples={len(series)}")
    return EXIT_OK


def _cmd_hhsa(cfg: config.RunConfig) -> int:
    series = _read_series(cfg)
    sift = config.sift_config(cfg)
    z = spectral.ichain_embed(series, sift)
    stack = hhsa.holo_decompose(z.re, cfg.hhsa_layers, sift)
    out = Path(cfg.out_dir)
    for layer in stack.am_layers:
        _write_atomic(out / f"am_layer{layer.layer_index}.csv", hhsa.layer_to_csv(layer))
    for layer in stack.fm_layers:
        _write_atomic(out / f"fm_layer{layer.layer_index}.csv", hhsa.layer_to_csv(layer))
    print(f"am_depth={stack.am_depth} fm_depth={stack.fm_depth}")
    return EXIT_OK


def _run_backtest(cfg: config.RunConfig, prefix: str) -> backtest.BacktestReport:
    series = _read_series(cfg)
    strategy = config.strategy_spec(cfg, prefix)
    return backtest.run(
        strategy, series, config.split_spec(cfg, series), config.backtest_config(cfg)
    )


def _cmd_backtest(cfg: config.RunConfig) -> int:
    report = _run_backtest(cfg, "strategy")
    out = Path(cfg.out_dir)
    _write_atomic(out / "report.csv", backtest.summary_csv(report))
    _write_atomic(out / "ledger.csv", backtest.ledger_csv(report))
    _write_atomic(out / "report.json", backtest.report_json(report))
    acc = "undefined" if report.n_signals == 0 else f"{report.accuracy:.2f}"
    print(f"accuracy={acc} profit={report.profit:.2f} signals={report.n_signals}")
    return EXIT_OK


def _cmd_compare(cfg: config.RunConfig) -> int:
    base = _run_backtest(cfg, "strategy")
    new = _run_backtest(cfg, "compare")
    _write_atomic(Path(cfg.out_dir) / "compare.csv", backtest.compare_csv(base, new))
    return EXIT_OK


def _cmd_states(cfg: config.RunConfig) -> int:
    series = _read_series(cfg)
    sift = config.sift_config(cfg)
    z = spectral.ichain_embed(series, sift)
    timeline, _ = states.physiology_timeline(z)
    hidden = states.hidden_timeline(emd.decompose(series.closes(), sift))
    stack = hhsa.holo_decompose(z.re, cfg.hhsa_layers, sift)

    lines = ["t,physiology,hidden,gate_score,emit"]
    ordinals = series.ordinals()
    for k in range(len(series)):
        if k == 0:
            score, emit = 0.0, False
        else:
            decision = states.gate(stack, k, cfg.hhsa_gate_window, cfg.hhsa_gate_tau)
            score, emit = decision.score, decision.emit
        lines.append(
            f"{ordinals[k]},{timeline[k].value},{hidden[k].bits},{score!r},{str(emit).lower()}"
        )
    out = Path(cfg.out_dir)
    _write_atomic(out / "states.csv", "\n".join(lines) + "\n")
    _write_atomic(out / "embedding.csv", spectral.to_csv(z))
    print(f"samples={len(series)}")
    return EXIT_OK


_COMMANDS = {
    "decompose": _cmd_decompose,
    "hhsa": _cmd_hhsa,
    "backtest": _cmd_backtest,
    "compare": _cmd_compare,
    "states": _cmd_states,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = _load_config(ns)
    except ConfigError as exc:
        print(f"spinmach: config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if ns.dump_config:
        sys.stdout.write(config.dump(cfg))
        return EXIT_OK
    try:
        return _COMMANDS[ns.command](cfg)
    except ConfigError as exc:
        print(f"spinmach: config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SpinmachError as exc:
        print(f"spinmach: error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except OSError as exc:
        print(f"spinmach: io error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
