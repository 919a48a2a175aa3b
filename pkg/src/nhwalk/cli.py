"""
Command-line entry point.

    nhwalk --experiment fig4 --out fig4.csv
    nhwalk --config run.cfg --lambda 0.5 --format json --out run.json
    nhwalk --experiment custom --sweep lambda:0:4:9 --sweep tau:0.1:1:10 --observable entropy

Config files hold one ``key = value`` per line; ``#`` starts a comment.
Command-line flags override the file. Exit status is 0 on success, 1 for a
configuration error and 2 for a failure while running or writing.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path

from .coin import CoinConsistencyError
from .experiments import EXPERIMENTS, OBSERVABLES, ConfigError, RunConfig, SweepAxis, SweepResult, run_experiment
from .hilbert import BoundaryError

__all__ = ["main", "emit", "render", "load_config_file", "build_config"]

log = logging.getLogger("nhwalk")

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2


def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(x) for x in text.split(",") if x.strip())


def _ints(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.split(",") if x.strip())


# config key -> (RunConfig field, parser)
_KEYS = {
    "experiment": ("experiment", str),
    "steps": ("steps", _ints),
    "alpha": ("alpha", float),
    "alpha1": ("alpha1", float),
    "alpha2": ("alpha2", float),
    "v": ("V", float),
    "lambda": ("lambdas", _floats),
    "tau": ("taus", _floats),
    "tau_prime": ("tau_prime", float),
    "shift": ("shift", str),
    "initial": ("initial", str),
    "observable": ("observable", str),
    "out": ("out", str),
    "format": ("format", str),
}


def load_config_file(path) -> dict:
    """Read a flat ``key = value`` file into RunConfig keyword arguments.

    ``sweep`` may be repeated; each value is ``name:start:stop:count``.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc.strerror}", str(path)) from None
    values: dict = {}
    sweeps = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        where = f"{path}:{lineno}"
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", where)
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.lower()
        if key == "sweep":
            try:
                sweeps.append(SweepAxis.parse(value))
            except ConfigError as exc:
                raise ConfigError(str(exc), where) from None
            continue
        if key not in _KEYS:
            raise ConfigError(f"unknown key {key!r}", where)
        name, parse = _KEYS[key]
        try:
            values[name] = parse(value)
        except ValueError:
            raise ConfigError(f"bad value {value!r} for {key}", where) from None
    if sweeps:
        values["sweeps"] = tuple(sweeps)
    return values


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="nhwalk",
        description="Quantum walks with leaky non-Hermitian coins: figure and table reproduction.",
    )
    p.add_argument("--config", help="flat key = value config file")
    p.add_argument("--experiment", choices=EXPERIMENTS)
    p.add_argument("--steps", help="step count, or comma list for multi-panel experiments")
    p.add_argument("--alpha", type=float, help="Hermitian coin parameter")
    p.add_argument("--alpha1", type=float)
    p.add_argument("--alpha2", type=float)
    p.add_argument("--V", type=float, dest="V", help="tunneling energy (default 1)")
    p.add_argument("--lambda", dest="lambdas", help="leak rate, or comma list")
    p.add_argument("--tau", dest="taus", help="walk time per step, or comma list")
    p.add_argument("--tau-prime", type=float, dest="tau_prime")
    p.add_argument("--shift", choices=("generalized", "conditional"))
    p.add_argument("--initial", choices=("localized", "symmetric"))
    p.add_argument("--observable", choices=OBSERVABLES, help="payload for the custom experiment")
    p.add_argument("--sweep", action="append", metavar="NAME:START:STOP:COUNT",
                   help="grid axis; repeat for a second axis")
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def build_config(args: argparse.Namespace) -> RunConfig:
    values = load_config_file(args.config) if args.config else {}
    try:
        if args.steps is not None:
            values["steps"] = _ints(args.steps)
        if args.lambdas is not None:
            values["lambdas"] = _floats(args.lambdas)
        if args.taus is not None:
            values["taus"] = _floats(args.taus)
    except ValueError as exc:
        raise ConfigError(f"bad numeric list: {exc}", "flags") from None
    for name in ("experiment", "alpha", "alpha1", "alpha2", "V", "tau_prime", "shift",
                 "initial", "observable", "out", "format"):
        v = getattr(args, name)
        if v is not None:
            values[name] = v
    if args.sweep:
        values["sweeps"] = tuple(SweepAxis.parse(s) for s in args.sweep)
    try:
        return RunConfig(**values)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None


def _fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def render(result: SweepResult, fmt: str) -> str:
    """Serialize ``result`` deterministically."""
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(result.columns)
        for row in result.rows:
            w.writerow([_fmt(x) for x in row])
        return buf.getvalue()
    if fmt == "json":
        doc = {
            "metadata": result.metadata,
            "axes": result.axes,
            "columns": list(result.columns),
            "rows": [list(r) for r in result.rows],
        }
        return json.dumps(doc, indent=1, allow_nan=False) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def emit(result: SweepResult, path, fmt: str = "csv") -> None:
    """Write ``result`` to ``path`` (``None`` or ``-`` for stdout)."""
    text = render(result, fmt)
    if path is None or str(path) == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write {path}: {exc.strerror}") from None


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        config = build_config(args)
    except ConfigError as exc:
        print(f"nhwalk: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        result = run_experiment(config)
        emit(result, config.out, config.format)
    except ConfigError as exc:
        print(f"nhwalk: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (BoundaryError, CoinConsistencyError, ValueError, OSError) as exc:
        print(f"nhwalk: run error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    if config.out:
        log.info("wrote %d rows to %s", len(result.rows), config.out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
