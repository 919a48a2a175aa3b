"""
Named experiments and free-form sweeps.

Every experiment produces a :class:`SweepResult` in long format: one row per
grid cell (and per position, for distribution payloads). Rows are ordered by
grid index regardless of how many worker threads evaluated them.
"""

from __future__ import annotations

import dataclasses
import itertools
import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .analysis import measure, nm_witness_grid, von_neumann_entropy_avg, DEFAULT_TAU_PRIME
from .coin import dimer_coin, hermitian_coin, nonhermitian_coin
from .hilbert import InitialStateKind, new_state, norm2, position_distribution
from .walk import ShiftKind, evolve

__all__ = [
    "ConfigError",
    "SweepAxis",
    "RunConfig",
    "SweepResult",
    "EXPERIMENTS",
    "run_experiment",
    "table1_expected",
]

log = logging.getLogger(__name__)

EXPERIMENTS = ("fig1", "fig2", "fig3", "fig4", "fig5", "table1", "fig6", "custom")
OBSERVABLES = ("distribution", "entropy", "norm", "measurement")
CUSTOM_AXES = ("alpha", "alpha1", "alpha2", "lambda", "tau", "inv_tau", "V", "steps")

# default grids; each can be replaced with a sweep axis of the same name
DEFAULT_AXES = {
    "fig1": {"alpha": (0.0, 1.0, 51)},
    "fig2": {"inv_tau": (1.0, 10.0, 46)},
    "fig3": {"lambda": (0.0, 4.0, 41)},
    "fig4": {"lambda": (0.0, 4.5, 91)},
    "fig6": {"T": (0.01, 1.0, 100), "tau": (0.01, 1.0, 100)},
}


class ConfigError(ValueError):
    """Invalid run configuration. ``where`` names the offending field or line."""

    def __init__(self, message: str, where: str | None = None):
        self.where = where
        super().__init__(f"{where}: {message}" if where else message)


@dataclass(frozen=True)
class SweepAxis:
    name: str
    start: float
    stop: float
    count: int

    def __post_init__(self):
        if isinstance(self.count, bool) or int(self.count) != self.count or self.count < 1:
            raise ConfigError(f"sweep count must be a positive integer, got {self.count!r}",
                              f"sweep {self.name}")
        if not (math.isfinite(self.start) and math.isfinite(self.stop)):
            raise ConfigError("sweep bounds must be finite", f"sweep {self.name}")

    @classmethod
    def parse(cls, text: str) -> SweepAxis:
        """Parse ``name:start:stop:count``."""
        parts = [p.strip() for p in text.split(":")]
        if len(parts) != 4:
            raise ConfigError(f"expected name:start:stop:count, got {text!r}", "sweep")
        name, start, stop, count = parts
        try:
            return cls(name, float(start), float(stop), int(count))
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"cannot parse {text!r}: {exc}", "sweep") from None

    def values(self) -> list[float]:
        return [float(v) for v in np.linspace(self.start, self.stop, self.count)]


@dataclass(frozen=True)
class RunConfig:
    """Everything needed to reproduce one output file.

    ``None`` for a parameter means "use the experiment's default".
    """

    experiment: str = "fig1"
    steps: tuple[int, ...] | None = None
    alpha: float | None = None
    alpha1: float | None = None
    alpha2: float | None = None
    V: float = 1.0
    lambdas: tuple[float, ...] | None = None
    taus: tuple[float, ...] | None = None
    tau_prime: float = DEFAULT_TAU_PRIME
    shift: str = "generalized"
    initial: str = "localized"
    observable: str = "distribution"
    sweeps: tuple[SweepAxis, ...] = ()
    out: str | None = None
    format: str = "csv"

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}; choose from {EXPERIMENTS}",
                              "experiment")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.format!r}", "format")
        if self.observable not in OBSERVABLES:
            raise ConfigError(f"observable must be one of {OBSERVABLES}", "observable")
        try:
            ShiftKind(self.shift)
        except ValueError:
            raise ConfigError(f"unknown shift {self.shift!r}", "shift") from None
        try:
            InitialStateKind(self.initial)
        except ValueError:
            raise ConfigError(f"unknown initial state {self.initial!r}", "initial") from None
        if not self.V > 0:
            raise ConfigError("V must be positive", "V")
        if self.steps is not None and any(s < 1 for s in self.steps):
            raise ConfigError("steps must be positive integers", "steps")
        if self.lambdas is not None and any(x < 0 for x in self.lambdas):
            raise ConfigError("lambda must be non-negative", "lambda")
        if self.taus is not None and any(x < 0 for x in self.taus):
            raise ConfigError("tau must be non-negative", "tau")
        if not self.tau_prime > 0:
            raise ConfigError("tau_prime must be positive", "tau_prime")
        if len(self.sweeps) > 2:
            raise ConfigError("at most two sweep axes are supported", "sweep")
        names = [ax.name for ax in self.sweeps]
        if len(set(names)) != len(names):
            raise ConfigError("duplicate sweep axis", "sweep")
        if self.experiment == "custom":
            for n in names:
                if n not in CUSTOM_AXES:
                    raise ConfigError(f"unknown custom axis {n!r}; choose from {CUSTOM_AXES}",
                                      f"sweep {n}")
        else:
            allowed = DEFAULT_AXES.get(self.experiment, {})
            for n in names:
                if n not in allowed:
                    raise ConfigError(
                        f"experiment {self.experiment} has no axis {n!r} (axes: {tuple(allowed)})",
                        f"sweep {n}",
                    )

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["sweeps"] = [dataclasses.asdict(ax) for ax in self.sweeps]
        for k in ("steps", "lambdas", "taus"):
            if d[k] is not None:
                d[k] = list(d[k])
        d.pop("out")
        return d


@dataclass
class SweepResult:
    experiment: str
    axes: dict[str, list]
    columns: tuple[str, ...]
    rows: list[tuple]
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        width = len(self.columns)
        for i, row in enumerate(self.rows):
            if len(row) != width:
                raise ValueError(f"row {i} has {len(row)} entries, expected {width}")

    def column(self, name: str) -> list:
        k = self.columns.index(name)
        return [row[k] for row in self.rows]


def _threads() -> int:
    raw = os.environ.get("NHWALK_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        log.warning("ignoring non-integer NHWALK_THREADS=%r", raw)
        return 1
    return max(n, 1)


def _map_cells(fn, cells):
    """``map`` over grid cells; output order always follows ``cells``."""
    cells = list(cells)
    n = min(_threads(), len(cells))
    if n <= 1:
        return [fn(c) for c in cells]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, cells))


def _axis(config: RunConfig, name: str) -> list[float]:
    for ax in config.sweeps:
        if ax.name == name:
            return ax.values()
    start, stop, count = DEFAULT_AXES[config.experiment][name]
    return SweepAxis(name, start, stop, count).values()


def _final_state(coin, steps: int, config: RunConfig):
    start = new_state(InitialStateKind(config.initial), steps)
    return evolve(start, coin, ShiftKind(config.shift), steps).final


def _distribution_rows(prefix, coin, steps, config):
    dist = position_distribution(_final_state(coin, steps, config))
    return [(*prefix, m, float(p)) for m, p in zip(range(-steps, steps + 1), dist)]


def _lossless_leak_note(lambdas, taus, V) -> list[str]:
    notes = []
    if 0.0 in lambdas:
        for tau in taus:
            c = dimer_coin(V, 0.0, tau)
            if c.norm_factor < 1 - 1e-12:
                notes.append(
                    "dimer coin leaks norm at lambda=0 "
                    f"(alpha1^2+alpha2^2 = {c.norm_factor:.6g} at tau={tau:.6g})"
                )
                break
    for note in notes:
        log.warning(note)
    return notes


def _fig1(config):
    steps = (config.steps or (50,))[0]
    alphas = _axis(config, "alpha")
    rows = _map_cells(lambda a: _distribution_rows((a,), hermitian_coin(a), steps, config), alphas)
    return {"alpha": alphas}, ("alpha", "position", "probability"), list(itertools.chain(*rows)), {}


def _fig2(config):
    steps = (config.steps or (40,))[0]
    lambdas = list(config.lambdas or (0.0, 0.15))
    inv = _axis(config, "inv_tau")
    if any(x <= 0 for x in inv):
        raise ConfigError("inv_tau values must be positive", "sweep inv_tau")
    cells = list(itertools.product(lambdas, inv))
    rows = _map_cells(
        lambda c: _distribution_rows(c, dimer_coin(config.V, c[0], 1.0 / c[1]), steps, config), cells
    )
    notes = _lossless_leak_note(lambdas, [1.0 / x for x in inv], config.V)
    return ({"lambda": lambdas, "inv_tau": inv}, ("lambda", "inv_tau", "position", "probability"),
            list(itertools.chain(*rows)), {"notes": notes})


def _fig3(config):
    steps_list = list(config.steps or (20, 30, 40, 50))
    tau = (config.taus or (1.0,))[0]
    lambdas = _axis(config, "lambda")
    cells = list(itertools.product(steps_list, lambdas))
    rows = _map_cells(
        lambda c: _distribution_rows(c, dimer_coin(config.V, c[1], tau), c[0], config), cells
    )
    return ({"steps": steps_list, "lambda": lambdas}, ("steps", "lambda", "position", "probability"),
            list(itertools.chain(*rows)), {"tau": tau})


def _entropy_cell(coin, steps, config):
    dist = position_distribution(_final_state(coin, steps, config))
    return von_neumann_entropy_avg(dist, steps)


def _fig4(config):
    steps = (config.steps or (50,))[0]
    taus = list(config.taus or (1 / 5, 1 / 25, 1 / 50))
    lambdas = _axis(config, "lambda")
    cells = list(itertools.product(taus, lambdas))
    vals = _map_cells(lambda c: _entropy_cell(dimer_coin(config.V, c[1], c[0]), steps, config), cells)
    rows = [(t, lam, s) for (t, lam), s in zip(cells, vals)]
    return {"tau": taus, "lambda": lambdas}, ("tau", "lambda", "entropy"), rows, {"steps": steps}


def _measurement_rows(prefix, state):
    return [
        (*prefix, r.coin_outcome, r.position_outcome, r.probability, r.state_sign)
        for r in measure(state)
    ]


def _fig5(config):
    steps_list = list(config.steps or (2, 5))
    lam = (config.lambdas or (3.9,))[0]
    taus = list(config.taus or (0.1, 0.5))
    cells = list(itertools.product(steps_list, taus))
    rows = _map_cells(
        lambda c: _measurement_rows(c, _final_state(dimer_coin(config.V, lam, c[1]), c[0], config)),
        cells,
    )
    return ({"steps": steps_list, "tau": taus},
            ("steps", "tau", "coin", "position", "probability", "sign"),
            list(itertools.chain(*rows)), {"lambda": lam})


def table1_expected(alpha1: float, alpha2: float) -> dict[tuple[int, int], tuple[float, int]]:
    """Closed-form two-step outcome table: ``(coin, position) -> (probability, sign)``."""
    a1, a2 = alpha1, alpha2
    beta2 = (a1**2 + a2**2) ** 2
    corner = a1**4 / (4 * beta2)
    cross = a1**2 * a2**2 / (4 * beta2)
    centre = (a1**2 / 2 + a2**2) ** 2 / beta2
    return {
        (0, -2): (corner, 1),
        (0, -1): (cross, -1),
        (0, 0): (centre, 1),
        (0, 1): (cross, 1),
        (1, -1): (corner, 1),
        (1, 0): (cross, 1),
        (1, 1): (corner, -1),
        (1, 2): (cross, -1),
    }


def _table1(config):
    a1 = 0.6 if config.alpha1 is None else config.alpha1
    a2 = 0.3 if config.alpha2 is None else config.alpha2
    try:
        coin = nonhermitian_coin(a1, a2)
    except ValueError as exc:
        raise ConfigError(str(exc), "alpha1/alpha2") from None
    state = evolve(new_state(InitialStateKind.LOCALIZED, 2), coin, ShiftKind.GENERALIZED, 2).final
    expected = table1_expected(a1, a2)
    rows = []
    for r in measure(state):
        p_tab, s_tab = expected.get((r.coin_outcome, r.position_outcome), (0.0, 0))
        rows.append((r.coin_outcome, r.position_outcome, r.probability, p_tab, r.state_sign, s_tab))
    return ({}, ("coin", "position", "probability", "table_probability", "sign", "table_sign"),
            rows, {"alpha1": a1, "alpha2": a2, "beta2": (a1**2 + a2**2) ** 2})


def _fig6(config):
    lambdas = list(config.lambdas or (0.0, 3.0))
    Ts = _axis(config, "T")
    taus = _axis(config, "tau")
    grids = _map_cells(
        lambda lam: nm_witness_grid(config.V, lam, Ts, taus, config.tau_prime), lambdas
    )
    rows = []
    for lam, grid in zip(lambdas, grids):
        for i, T in enumerate(Ts):
            for j, tau in enumerate(taus):
                rows.append((lam, T, tau, float(grid[i, j])))
    return ({"lambda": lambdas, "T": Ts, "tau": taus}, ("lambda", "T", "tau", "D"), rows,
            {"tau_prime": config.tau_prime})


def _custom_family(config) -> str:
    names = {ax.name for ax in config.sweeps}
    if "alpha" in names or config.alpha is not None:
        return "hermitian"
    if names & {"alpha1", "alpha2"} or config.alpha1 is not None or config.alpha2 is not None:
        return "nonhermitian"
    return "dimer"


def _custom(config):
    family = _custom_family(config)
    fixed = {
        "alpha": 1 / math.sqrt(2) if config.alpha is None else config.alpha,
        "alpha1": 1 / math.sqrt(2) if config.alpha1 is None else config.alpha1,
        "alpha2": 1 / math.sqrt(2) if config.alpha2 is None else config.alpha2,
        "lambda": (config.lambdas or (0.0,))[0],
        "tau": (config.taus or (1.0,))[0],
        "V": config.V,
        "steps": (config.steps or (50,))[0],
    }
    axis_names = [ax.name for ax in config.sweeps]
    axis_values = [ax.values() for ax in config.sweeps]
    if "steps" in axis_names:
        k = axis_names.index("steps")
        axis_values[k] = [int(round(v)) for v in axis_values[k]]
        if any(v < 1 for v in axis_values[k]):
            raise ConfigError("steps axis values must be >= 1", "sweep steps")
    if "inv_tau" in axis_names and any(v <= 0 for v in axis_values[axis_names.index("inv_tau")]):
        raise ConfigError("inv_tau values must be positive", "sweep inv_tau")

    def params_for(cell):
        p = dict(fixed)
        for name, v in zip(axis_names, cell):
            if name == "inv_tau":
                p["tau"] = 1.0 / v
            else:
                p[name] = v
        return p

    def coin_for(p):
        if family == "hermitian":
            return hermitian_coin(p["alpha"])
        if family == "nonhermitian":
            return nonhermitian_coin(p["alpha1"], p["alpha2"])
        return dimer_coin(p["V"], p["lambda"], p["tau"])

    def evaluate(cell):
        p = params_for(cell)
        steps = int(p["steps"])
        state = _final_state(coin_for(p), steps, config)
        if config.observable == "distribution":
            dist = position_distribution(state)
            return [(*cell, m, float(x)) for m, x in zip(range(-steps, steps + 1), dist)]
        if config.observable == "entropy":
            return [(*cell, von_neumann_entropy_avg(position_distribution(state), steps))]
        if config.observable == "norm":
            return [(*cell, norm2(state))]
        return _measurement_rows(cell, state)

    payload = {
        "distribution": ("position", "probability"),
        "entropy": ("entropy",),
        "norm": ("norm2",),
        "measurement": ("coin", "position", "probability", "sign"),
    }[config.observable]
    cells = list(itertools.product(*axis_values)) if axis_values else [()]
    rows = _map_cells(evaluate, cells)
    return (dict(zip(axis_names, axis_values)), (*axis_names, *payload),
            list(itertools.chain(*rows)), {"coin_family": family, "fixed": fixed})


_RUNNERS = {
    "fig1": _fig1,
    "fig2": _fig2,
    "fig3": _fig3,
    "fig4": _fig4,
    "fig5": _fig5,
    "table1": _table1,
    "fig6": _fig6,
    "custom": _custom,
}


def run_experiment(config: RunConfig) -> SweepResult:
    """Evaluate ``config`` and return its table plus reproducibility metadata."""
    axes, columns, rows, extra = _RUNNERS[config.experiment](config)
    metadata = {
        "experiment": config.experiment,
        "software_version": __version__,
        "hbar": 1,
        "V": config.V,
        "units_note": "time in inverse energy units",
        "config": config.to_dict(),
        "columns": list(columns),
        **extra,
    }
    return SweepResult(config.experiment, axes, tuple(columns), rows, metadata)
