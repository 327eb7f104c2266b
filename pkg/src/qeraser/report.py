"""Pattern tables for a configured experiment and their CSV/JSON serialization."""
from __future__ import annotations

import csv
import io
import json
import os
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .config import ExperimentConfig
from .erasure import DEGENERATE_PROB, outcome_probability, project
from .oracle import cross_validate
from .propagation import marginal_intensity, propagate_state
from .qstate import ScreenGrid, make_slit_state, make_tagged_state

THREADS_ENV = "QERASER_THREADS"


def max_workers() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def initial_state(config: ExperimentConfig):
    if config.detector_enabled:
        return make_tagged_state(config.slits)
    return make_slit_state(config.slits)


def compute_table(config: ExperimentConfig) -> dict:
    """Ordered columns ``x, p_total[, p_<outcome>...]`` as float arrays."""
    state = propagate_state(initial_state(config), config.propagation)
    grid = config.grid
    table = {"x": grid.x, "p_total": marginal_intensity(state, grid).values}
    if config.detector_enabled:
        outcomes = config.basis.outcomes()

        def one(outcome):
            values = marginal_intensity(project(state, outcome), grid).values
            if config.output.normalize:
                prob = outcome_probability(state, outcome)
                if prob > DEGENERATE_PROB:
                    values = values / prob
            return values

        workers = min(max_workers(), len(outcomes))
        if workers > 1:
            with ThreadPoolExecutor(workers) as pool:
                columns = list(pool.map(one, outcomes))
        else:
            columns = [one(o) for o in outcomes]
        for outcome, values in zip(outcomes, columns):
            table[f"p_{outcome.label}"] = values
    return table


def sum_rule_residual(table: dict) -> float:
    """Max per-row |sum of outcome columns - p_total| (0 when no outcomes)."""
    outcome_cols = [k for k in table if k not in ("x", "p_total")]
    if not outcome_cols:
        return 0.0
    total = np.sum([table[k] for k in outcome_cols], axis=0)
    return float(np.max(np.abs(total - table["p_total"])))


def resolved_parameters(config: ExperimentConfig) -> dict:
    eps = config.slits.width_param
    return {
        "n": config.slits.n,
        "d": config.slits.spacing,
        "epsilon": eps,
        "a": config.a,
        "omega": config.omega,
        "ct_sq": config.propagation.ct_sq(eps),
        "basis": config.basis_name if config.detector_enabled else None,
        "normalize": config.output.normalize,
    }


def fmt(v: float) -> str:
    return format(float(v), ".17g")


def table_to_csv(table: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(list(table))
    for row in zip(*table.values()):
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def table_to_json(table: dict, config: ExperimentConfig, extra: dict | None = None) -> str:
    doc = {
        "parameters": resolved_parameters(config),
        "columns": {k: [float(v) for v in vals] for k, vals in table.items()},
    }
    if extra:
        doc.update(extra)
    return json.dumps(doc, indent=1) + "\n"


def write_table(table: dict, config: ExperimentConfig, path, extra: dict | None = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if config.output.format == "json":
        text = table_to_json(table, config, extra)
    else:
        text = table_to_csv(table)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return path


def read_csv_table(path) -> dict:
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], np.array(rows[1:], dtype=float)
    return {name: body[:, i] for i, name in enumerate(header)}


def oracle_grid(config: ExperimentConfig) -> ScreenGrid:
    """Config span on a power-of-two grid fine enough to resolve the slits."""
    grid = config.grid
    need = (grid.xmax - grid.xmin) / (config.slits.width_param / 4.0)
    points = 1024
    while points < max(grid.points, need):
        points *= 2
    return ScreenGrid(grid.xmin, grid.xmax, points)


def run_oracle(config: ExperimentConfig):
    """Cross-validate the configured state; propagates AliasingRisk."""
    return cross_validate(initial_state(config), config.a, oracle_grid(config))
