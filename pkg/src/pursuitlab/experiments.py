"""Deterministic Monte Carlo studies over the pursuits and the oracle.

Four study layouts are supported, each sweeping a different slice of the
(sparsity, system perturbation, measurement noise) space:

- ``sweep-k``: exactly sparse signals, fixed perturbation pair, K on a grid;
- ``sweep-perturbations``: fixed K values, both epsilons on a shared grid;
- ``sweep-eps-a-fixed-noise``: fixed K values, system perturbation on a
  grid, measurement noise held fixed;
- ``compressible-k``: one power-law signal class, recovery sparsity K on a
  grid (the signal itself has no sparsity to match).

Every trial derives its own random stream from a stable 64-bit hash of the
master seed, the study name, the grid coordinates, and the trial index, so
results do not depend on scheduling and parallel runs reproduce serial ones
byte for byte.  Records carry raw per-trial results (diverged runs included,
never censored); ``aggregate`` reduces them per grid point.
"""

import csv
import struct
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields, replace
from hashlib import blake2b

import numpy as np
from threadpoolctl import threadpool_limits

from . import svgplot
from .oracle import oracle_ls
from .pursuits import PursuitOptions, cosamp, iht, sp
from .sensing import SCENARIOS, gen_gaussian_sensing, make_system
from .signals import best_k_split, gen_power_law, gen_sparse

STUDIES = (
    "sweep-k", "sweep-perturbations", "sweep-eps-a-fixed-noise",
    "compressible-k",
)
ALGORITHMS = ("cosamp", "sp", "iht", "oracle")

_PURSUIT_FNS = {"cosamp": cosamp, "sp": sp, "iht": iht}
#: Iteration caps per solver; the thresholding-only solver converges slower.
_MAX_ITERS = {"cosamp": 100, "sp": 100, "iht": 300}

RECORD_COLUMNS = (
    "study", "k", "eps_a", "eps_y", "trial", "seed", "algorithm",
    "rel_error", "iterations", "diverged",
)
AGGREGATE_COLUMNS = (
    "study", "k", "eps_a", "eps_y", "algorithm", "trials", "mean_error",
    "median_error", "std_error", "divergence_rate",
)


@dataclass(frozen=True)
class ExperimentConfig:
    """Full description of one study run."""

    study: str
    m: int = 512
    n: int = 2048
    trials: int = 100
    master_seed: int = 0
    k_range: tuple = ()
    eps_grid: tuple = ()
    eps_a: float = 0.0
    eps_y: float = 0.0
    radius: float = 1.0
    p: float = 2.0
    algorithms: tuple = ALGORITHMS
    scenario: str = "model-mismatch"

    def validate(self):
        if self.study not in STUDIES:
            raise ValueError(f"unknown study {self.study!r}, expected one of {STUDIES}")
        if self.m < 1 or self.n < 1:
            raise ValueError(f"dimensions must be positive, got {self.m}x{self.n}")
        if self.trials < 1:
            raise ValueError(f"need at least one trial, got {self.trials}")
        if not self.k_range:
            raise ValueError("k_range must be a nonempty list of sparsity levels")
        if min(self.k_range) < 1 or max(self.k_range) > min(self.m, self.n):
            raise ValueError(
                f"k_range must lie in [1, {min(self.m, self.n)}], got {self.k_range}"
            )
        if self.study in ("sweep-perturbations", "sweep-eps-a-fixed-noise"):
            if not self.eps_grid:
                raise ValueError(f"study {self.study} needs a nonempty eps_grid")
            bad = [e for e in self.eps_grid if not 0 <= e < 1]
            if bad:
                raise ValueError(f"eps_grid values must lie in [0, 1), got {bad}")
        if not 0 <= self.eps_a < 1 or not 0 <= self.eps_y < 1:
            raise ValueError("fixed eps_a and eps_y must lie in [0, 1)")
        if self.study == "compressible-k" and (self.p <= 1 or self.radius <= 0):
            raise ValueError(
                f"compressible-k needs p > 1 and radius > 0, got p={self.p}, "
                f"radius={self.radius}"
            )
        unknown = set(self.algorithms) - set(ALGORITHMS)
        if not self.algorithms or unknown:
            raise ValueError(
                f"algorithms must be a nonempty subset of {ALGORITHMS}, "
                f"got {self.algorithms}"
            )
        if self.scenario not in SCENARIOS:
            raise ValueError(
                f"unknown scenario {self.scenario!r}, expected one of {SCENARIOS}"
            )

    def grid(self):
        """Deterministic (k, eps_a, eps_y) grid points for this study."""
        if self.study == "sweep-perturbations":
            return [
                (k, ea, ey)
                for k in self.k_range
                for ea in self.eps_grid
                for ey in self.eps_grid
            ]
        if self.study == "sweep-eps-a-fixed-noise":
            return [
                (k, ea, self.eps_y) for k in self.k_range for ea in self.eps_grid
            ]
        return [(k, self.eps_a, self.eps_y) for k in self.k_range]


@dataclass(frozen=True)
class TrialRecord:
    """One (trial, algorithm) result at one grid point."""

    study: str
    k: int
    eps_a: float
    eps_y: float
    trial: int
    seed: int
    algorithm: str
    rel_error: float
    iterations: int
    diverged: bool


@dataclass(frozen=True)
class AggregateRow:
    """Per-(grid point, algorithm) summary statistics."""

    study: str
    k: int
    eps_a: float
    eps_y: float
    algorithm: str
    trials: int
    mean_error: float
    median_error: float
    std_error: float
    divergence_rate: float


def derive_seed(master_seed, study, k, eps_a, eps_y, trial):
    """Stable 64-bit stream seed for one trial at one grid point.

    Hashes the coordinates through blake2b so neighboring grid points and
    trial indices get statistically unrelated streams, independently of
    execution order.
    """
    payload = struct.pack(
        "<Qqddq", master_seed & (2 ** 64 - 1), k, eps_a, eps_y, trial
    ) + study.encode("utf-8")
    return int.from_bytes(blake2b(payload, digest_size=8).digest(), "little")


def _run_trial(config, k, eps_a, eps_y, trial):
    """All per-algorithm records for one trial; pure given its arguments."""
    seed = derive_seed(config.master_seed, config.study, k, eps_a, eps_y, trial)
    rng = np.random.default_rng(seed)
    with threadpool_limits(limits=1):
        phi = gen_gaussian_sensing(config.m, config.n, rng)
        if config.study == "compressible-k":
            s = gen_power_law(config.n, config.radius, config.p, rng)
        else:
            s = gen_sparse(config.n, k, rng)
        system = make_system(
            phi, None, s, eps_y, eps_a, config.scenario, rng
        )
        a_run = system.recovery_matrix
        snorm = np.linalg.norm(s)

        records = []
        for algorithm in config.algorithms:
            if algorithm == "oracle":
                support = np.flatnonzero(best_k_split(s, k).head)
                estimate = oracle_ls(a_run, system.y_tilde, support)
                iterations, diverged = 0, False
            else:
                opts = PursuitOptions(k=k, max_iters=_MAX_ITERS[algorithm])
                out = _PURSUIT_FNS[algorithm](a_run, system.y_tilde, opts)
                estimate = out.estimate
                iterations, diverged = out.iterations, out.diverged
            records.append(TrialRecord(
                study=config.study, k=k, eps_a=eps_a, eps_y=eps_y,
                trial=trial, seed=seed, algorithm=algorithm,
                rel_error=float(np.linalg.norm(s - estimate) / snorm),
                iterations=iterations, diverged=diverged,
            ))
    return records


def _trial_task(args):
    return _run_trial(*args)


def _warm_kernels():
    """Trigger kernel compilation once before any worker pool forks."""
    rng = np.random.default_rng(0)
    a = rng.standard_normal((8, 6))
    y = a @ np.array([1.0, 0, 0, -1.0, 0, 0])
    opts = PursuitOptions(k=2, max_iters=3)
    for fn in (cosamp, sp, iht):
        fn(a, y, opts)


def run_study(config, workers=1):
    """Run every (grid point, trial) of a study and return all records.

    Records come back in grid-major, trial-minor, algorithm-minor order
    regardless of ``workers``; parallel execution cannot change any value
    because each trial owns a hash-derived random stream.

    Parameters
    ----------
    config : ExperimentConfig
    workers : int
        Process count; 1 runs inline.

    Returns
    -------
    list of TrialRecord
    """
    config.validate()
    tasks = [
        (config, k, ea, ey, trial)
        for (k, ea, ey) in config.grid()
        for trial in range(config.trials)
    ]
    records = []
    if workers <= 1:
        for task in tasks:
            records.extend(_trial_task(task))
    else:
        _warm_kernels()
        chunk = max(1, len(tasks) // (workers * 8))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for chunk_records in pool.map(_trial_task, tasks, chunksize=chunk):
                records.extend(chunk_records)
    return records


def aggregate(records):
    """Reduce records to per-(grid point, algorithm) summary rows.

    Group order follows first appearance in the record list, which is
    deterministic by the run_study ordering contract.
    """
    if not records:
        raise ValueError("cannot aggregate an empty record list")
    groups = {}
    for rec in records:
        key = (rec.study, rec.k, rec.eps_a, rec.eps_y, rec.algorithm)
        groups.setdefault(key, []).append(rec)
    rows = []
    for (study, k, eps_a, eps_y, algorithm), grp in groups.items():
        errors = np.array([r.rel_error for r in grp])
        rows.append(AggregateRow(
            study=study, k=k, eps_a=eps_a, eps_y=eps_y, algorithm=algorithm,
            trials=len(grp),
            mean_error=float(errors.mean()),
            median_error=float(np.median(errors)),
            std_error=float(errors.std()),
            divergence_rate=float(np.mean([r.diverged for r in grp])),
        ))
    return rows


def _cell(value):
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def emit_csv(rows, path):
    """Write records or aggregate rows as CSV with round-trip-exact floats.

    The schema is chosen by the row type; an empty list writes the
    record-schema header only.
    """
    columns = RECORD_COLUMNS
    if rows and isinstance(rows[0], AggregateRow):
        columns = AGGREGATE_COLUMNS
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_cell(getattr(row, col)) for col in columns])


def read_csv(path):
    """Parse a CSV written by emit_csv back into typed rows."""
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader))
        if header == RECORD_COLUMNS:
            return [
                TrialRecord(
                    study=row[0], k=int(row[1]), eps_a=float(row[2]),
                    eps_y=float(row[3]), trial=int(row[4]), seed=int(row[5]),
                    algorithm=row[6], rel_error=float(row[7]),
                    iterations=int(row[8]), diverged=bool(int(row[9])),
                )
                for row in reader
            ]
        if header == AGGREGATE_COLUMNS:
            return [
                AggregateRow(
                    study=row[0], k=int(row[1]), eps_a=float(row[2]),
                    eps_y=float(row[3]), algorithm=row[4], trials=int(row[5]),
                    mean_error=float(row[6]), median_error=float(row[7]),
                    std_error=float(row[8]), divergence_rate=float(row[9]),
                )
                for row in reader
            ]
    raise ValueError(f"unrecognized CSV header {header!r} in {path}")


PLOT_KINDS = (
    "line-vs-k", "surface-vs-eps", "line-vs-eps", "line-vs-k-compressible",
)


def _ordered_unique(values):
    seen = {}
    for v in values:
        seen.setdefault(v, None)
    return list(seen)


def emit_plot(aggregates, kind, path):
    """Render aggregate rows as the requested SVG chart.

    ``line-vs-k`` and ``line-vs-k-compressible`` plot mean error against the
    sparsity level (the latter with a log error axis and each algorithm's
    curve truncated once its divergence rate passes 1/2).  ``line-vs-eps``
    plots mean error against the system perturbation with one series per
    (algorithm, k).  ``surface-vs-eps`` renders one heat map per
    (k, algorithm) over the two perturbation axes.

    Returns
    -------
    str
        The SVG document (also written to path).
    """
    if kind not in PLOT_KINDS:
        raise ValueError(f"unknown plot kind {kind!r}, expected one of {PLOT_KINDS}")
    if not aggregates:
        raise ValueError("nothing to plot: empty aggregate list")
    algorithms = _ordered_unique(r.algorithm for r in aggregates)
    ks = sorted(set(r.k for r in aggregates))
    eps_as = sorted(set(r.eps_a for r in aggregates))
    eps_ys = sorted(set(r.eps_y for r in aggregates))

    if kind in ("line-vs-k", "line-vs-k-compressible"):
        if len(eps_as) > 1 or len(eps_ys) > 1:
            raise ValueError(
                f"{kind} needs one fixed perturbation pair, got "
                f"eps_a={eps_as}, eps_y={eps_ys}"
            )
        by_key = {(r.algorithm, r.k): r for r in aggregates}
        series = []
        for alg in algorithms:
            xs, ys = [], []
            for k in ks:
                row = by_key.get((alg, k))
                if row is None:
                    continue
                if kind == "line-vs-k-compressible" and row.divergence_rate > 0.5:
                    break
                xs.append(k)
                ys.append(row.mean_error)
            if xs:
                series.append((alg, xs, ys))
        return svgplot.line_chart(
            series, title=aggregates[0].study, xlabel="sparsity level K",
            ylabel="mean relative error",
            logy=(kind == "line-vs-k-compressible"), path=path,
        )

    if kind == "line-vs-eps":
        if len(eps_ys) > 1:
            raise ValueError(
                f"line-vs-eps needs a fixed measurement-noise level, got "
                f"eps_y={eps_ys}"
            )
        if len(eps_as) < 2:
            raise ValueError("line-vs-eps needs eps_a on a grid")
        by_key = {(r.algorithm, r.k, r.eps_a): r for r in aggregates}
        series = []
        for alg in algorithms:
            for k in ks:
                pts = [
                    (ea, by_key[(alg, k, ea)].mean_error)
                    for ea in eps_as
                    if (alg, k, ea) in by_key
                ]
                if pts:
                    label = f"{alg} K={k}" if len(ks) > 1 else alg
                    series.append(
                        (label, [p[0] for p in pts], [p[1] for p in pts])
                    )
        return svgplot.line_chart(
            series, title=aggregates[0].study,
            xlabel="relative system perturbation",
            ylabel="mean relative error", path=path,
        )

    # surface-vs-eps
    if len(eps_as) < 2 or len(eps_ys) < 2:
        raise ValueError(
            "surface-vs-eps needs both perturbation levels on grids, got "
            f"eps_a={eps_as}, eps_y={eps_ys}"
        )
    by_key = {(r.algorithm, r.k, r.eps_a, r.eps_y): r for r in aggregates}
    panels = {}
    for k in ks:
        for alg in algorithms:
            grid = np.full((len(eps_ys), len(eps_as)), np.nan)
            for iy, ey in enumerate(eps_ys):
                for ix, ea in enumerate(eps_as):
                    row = by_key.get((alg, k, ea, ey))
                    if row is None:
                        raise ValueError(
                            f"missing grid point (k={k}, eps_a={ea}, "
                            f"eps_y={ey}) for {alg}"
                        )
                    grid[iy, ix] = row.mean_error
            panels[(k, alg)] = grid
    return svgplot.heat_grid(
        ks, algorithms, panels, eps_as, eps_ys,
        title=f"{aggregates[0].study}: mean relative error",
        xlabel="relative system perturbation",
        ylabel="relative measurement noise", row_title="K", path=path,
    )


def config_from_text(text):
    """Parse the flat key=value config format into an ExperimentConfig.

    Lines are ``key = value`` with ``#`` comments; list-valued fields take
    comma-separated entries.  Unknown keys are rejected.
    """
    known = {f.name: f for f in fields(ExperimentConfig)}
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno} is not 'key = value': {raw!r}")
        key, _, val = (part.strip() for part in line.partition("="))
        if key not in known:
            raise ValueError(f"unknown config key {key!r} on line {lineno}")
        if key in values:
            raise ValueError(f"duplicate config key {key!r} on line {lineno}")
        values[key] = val
    if "study" not in values:
        raise ValueError("config must set 'study'")

    parsed = {}
    for key, val in values.items():
        if key in ("study", "scenario"):
            parsed[key] = val
        elif key in ("m", "n", "trials", "master_seed"):
            parsed[key] = int(val)
        elif key in ("eps_a", "eps_y", "radius", "p"):
            parsed[key] = float(val)
        elif key == "k_range":
            parsed[key] = tuple(int(v) for v in val.split(",") if v.strip())
        elif key == "eps_grid":
            parsed[key] = tuple(float(v) for v in val.split(",") if v.strip())
        elif key == "algorithms":
            parsed[key] = tuple(v.strip() for v in val.split(",") if v.strip())
    config = ExperimentConfig(**parsed)
    config.validate()
    return config


def config_to_text(config):
    """Inverse of config_from_text, for writing config files."""
    lines = []
    for f in fields(config):
        value = getattr(config, f.name)
        if isinstance(value, tuple):
            value = ",".join(str(v) for v in value)
        lines.append(f"{f.name} = {value}")
    return "\n".join(lines) + "\n"


def small_profile(config):
    """Shrink a config to the 128x512 quick-run profile."""
    kmax = min(128, 512)
    k_range = tuple(k for k in config.k_range if k <= kmax)
    return replace(config, m=128, n=512, k_range=k_range)
