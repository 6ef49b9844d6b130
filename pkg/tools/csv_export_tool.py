import csv
import logging
from pathlib import Path
from typing import Iterable, List, Sequence, Union

from optimizers.base import RunResult, best_at
from tools.lattice_tool import Snapshot
from tools.objective_tool import MinimaCatalog

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

MINIMA_HEADER = ["rank", "argmin", "value"]
RUNS_HEADER = ["algorithm", "config_id", "seed", "evals_used", "best_x", "best_f"]
TRACE_HEADER = ["algorithm", "config_id", "seed", "eval_index", "best_f"]
CURVE_HEADER = ["algorithm", "config_id", "eval_index", "mean_best_f", "std_best_f"]
PHASE_HEADER = ["dims", "beta", "step", "rel_std"]
ENSEMBLE_HEADER = ["algorithm", "config_id", "seed", "found_count"]
SNAPSHOT_HEADER = ["beta", "step", "i", "j", "value"]


def fmt_real(value: float) -> str:
    """Scientific notation with 13 significant digits."""
    return f"{value:.12e}"


def _write(path: PathLike, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    count = 0
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(row)
            count += 1
    logger.info("Wrote %d rows to %s", count, path)
    return path


def write_minima_csv(catalog: MinimaCatalog, path: PathLike) -> Path:
    rows = ([m.rank, m.argmin, fmt_real(m.value)] for m in catalog.minima)
    return _write(path, MINIMA_HEADER, rows)


def write_runs_csv(
    algorithm: str, config_id: str, seeds: Sequence[int], runs: Sequence[RunResult], path: PathLike
) -> Path:
    rows = (
        [algorithm, config_id, seed, run.evals_used, run.best_x, fmt_real(run.best_f)]
        for seed, run in zip(seeds, runs)
    )
    return _write(path, RUNS_HEADER, rows)


def trace_rows(
    algorithm: str,
    config_id: str,
    seeds: Sequence[int],
    runs: Sequence[RunResult],
    checkpoints: Sequence[int] = (),
) -> List[list]:
    """Improvement events per run, or best-so-far sampled at `checkpoints` when given."""
    rows = []
    for seed, run in zip(seeds, runs):
        if checkpoints:
            points = [(c, best_at(run, c)) for c in checkpoints]
        else:
            points = list(run.trace)
        rows.extend([algorithm, config_id, seed, idx, fmt_real(f)] for idx, f in points)
    return rows


def write_trace_csv(rows: Sequence[Sequence], path: PathLike) -> Path:
    return _write(path, TRACE_HEADER, rows)


def write_curve_csv(rows: Sequence[Sequence], path: PathLike) -> Path:
    return _write(path, CURVE_HEADER, rows)


def write_phase_csv(entries: Iterable, path: PathLike) -> Path:
    rows = ([e.dims, fmt_real(e.beta), e.step, fmt_real(e.rel_std)] for e in entries)
    return _write(path, PHASE_HEADER, rows)


def write_ensemble_csv(
    algorithm: str, config_id: str, seeds: Sequence[int], found: Sequence[int], path: PathLike
) -> Path:
    rows = ([algorithm, config_id, seed, n] for seed, n in zip(seeds, found))
    return _write(path, ENSEMBLE_HEADER, rows)


def write_snapshot_csv(snapshots: Iterable[Snapshot], path: PathLike) -> Path:
    def rows():
        for snap in snapshots:
            width, height = snap.cells.shape
            for i in range(width):
                for j in range(height):
                    yield [fmt_real(snap.beta), snap.step, i, j, int(snap.cells[i, j])]

    return _write(path, SNAPSHOT_HEADER, rows())
