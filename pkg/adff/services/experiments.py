"""
Experiment commands.

Each ``cmd_*`` takes a validated RunConfig, does its work, writes its
artifacts under ``run.output_dir`` and returns a small summary object. They
never call ``sys.exit``; the CLI maps results and exceptions to exit codes.
"""

import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import pandas as pd
import structlog
from tqdm import tqdm

from adff.audio.cache import FeatureCache
from adff.audio.frontend import extract, load_audio
from adff.core.enums import DatasetMode, SweepAxis, Variant
from adff.core.exceptions import ADFFError, DatasetError
from adff.core.settings import settings
from adff.data.corpus import ChorusRecord, load_pmemo
from adff.data.segments import build_segments
from adff.data.synth import synth_generate
from adff.schemas.config import RunConfig, dump_config
from adff.schemas.report import CVReport, ResultRow
from adff.services.cross_validation import cross_validate
from adff.services.reference import attach_reference
from adff.services.report import emit_report, write_table
from adff.utils.common import content_hash, format_pm, seed_everything

logger = structlog.get_logger(__name__)

FAILURE_MANIFEST = "failures.json"


@dataclass
class ExtractSummary:
    computed: List[str] = field(default_factory=list)
    skipped: List[str] = field(default_factory=list)
    failed: Dict[str, str] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failed


@dataclass
class CVRun:
    report: CVReport
    rows: List[ResultRow]
    run_dir: Path
    csv_path: Path
    json_path: Path


@dataclass
class TableRun:
    """Outcome of a multi-run command (sweep, ablation)."""
    rows: List[ResultRow]
    csv_path: Path
    summary_path: Path
    failures: Dict[str, str] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures


def write_failure_manifest(out_dir: Path, failures: Dict[str, str]) -> Path:
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / FAILURE_MANIFEST
    path.write_text(json.dumps(failures, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


# =============================== extract ===============================

def _extract_one(record: ChorusRecord, cache: FeatureCache) -> Tuple[str, Optional[str]]:
    """Returns (status, error) for one chorus; status is computed/skipped/failed."""
    try:
        audio_hash = content_hash(record.audio_path)
        if cache.is_fresh(record.song_id, audio_hash):
            return "skipped", None
        mel = extract(load_audio(record.audio_path), source=str(record.audio_path))
        cache.save(record.song_id, mel, audio_hash)
        return "computed", None
    except (ADFFError, OSError) as e:
        logger.warning("Extraction failed", song_id=record.song_id, error=str(e))
        return "failed", str(e)


def cmd_extract(config: RunConfig, records: Optional[List[ChorusRecord]] = None) -> ExtractSummary:
    """Cache one spectrogram per chorus, skipping entries whose audio is unchanged."""
    records = records if records is not None else load_pmemo(config.run.dataset_root, config.dataset)
    cache = FeatureCache(config.run.feature_dir)
    summary = ExtractSummary()

    with ThreadPoolExecutor(max_workers=settings.EXTRACT_WORKERS) as pool:
        results = pool.map(lambda r: _extract_one(r, cache), records)
        for record, (status, error) in tqdm(
            zip(records, results), total=len(records), desc="extract",
            disable=not settings.SHOW_PROGRESS,
        ):
            if status == "computed":
                summary.computed.append(record.song_id)
            elif status == "skipped":
                summary.skipped.append(record.song_id)
            else:
                summary.failed[record.song_id] = error

    logger.info("Extraction finished", computed=len(summary.computed),
                skipped=len(summary.skipped), failed=len(summary.failed))
    return summary


# =============================== cv ===============================

def run_dir_for(config: RunConfig) -> Path:
    spec, model = config.dataset, config.model
    seg_len = int(spec.seg_len) if float(spec.seg_len).is_integer() else spec.seg_len
    name = f"{model.task.value}_{spec.mode.value}_len{seg_len}_num{spec.seg_num}_{model.variant.value}"
    return Path(config.run.output_dir) / name


def _usable_records(config: RunConfig) -> List[ChorusRecord]:
    records = load_pmemo(config.run.dataset_root, config.dataset)
    summary = cmd_extract(config, records)
    if summary.failed:
        logger.warning("Choruses without features are left out", count=len(summary.failed),
                       song_ids=sorted(summary.failed)[:10])
    usable = [r for r in records if r.song_id not in summary.failed]
    if not usable:
        raise DatasetError("no chorus could be extracted")
    return usable


def cmd_cv(config: RunConfig, records: Optional[List[ChorusRecord]] = None) -> CVRun:
    """Build the dataset, run k-fold CV and write fold + aggregate rows."""
    seed_everything(config.train.seed)
    records = records if records is not None else _usable_records(config)
    run_dir = run_dir_for(config)
    run_dir.mkdir(parents=True, exist_ok=True)
    (run_dir / "config.toml").write_text(dump_config(config), encoding="utf-8")

    segments = build_segments(records, config.dataset, FeatureCache(config.run.feature_dir))
    report = cross_validate(
        segments, config.dataset, config.model, config.train, checkpoint_dir=run_dir / "checkpoints"
    )

    rows = report.to_rows(record_timing=config.report.record_timing)
    if config.report.published_reference:
        rows = [
            attach_reference(row, config.model.task, config.dataset.mode, config.model.variant)
            if row.fold == "mean" else row
            for row in rows
        ]
    csv_path, json_path = emit_report(rows, run_dir, "results", config.report.published_reference)
    logger.info("✅ Cross-validation written", run_dir=str(run_dir),
                segments=report.n_segments, **report.summary())
    return CVRun(report=report, rows=rows, run_dir=run_dir, csv_path=csv_path, json_path=json_path)


# =============================== sweep ===============================

def _grid_config(config: RunConfig, axis: SweepAxis, value: float, mode: DatasetMode) -> RunConfig:
    data = config.model_dump(mode="python")
    data["dataset"]["mode"] = mode
    data["dataset"][axis.value] = int(value) if axis == SweepAxis.SEG_NUM else value
    return RunConfig.model_validate(data)


def cmd_sweep(config: RunConfig, axis: SweepAxis) -> TableRun:
    """One CV run per grid value (and mode); failures are recorded, not fatal."""
    axis = SweepAxis(axis)
    grid = config.sweep.seg_nums if axis == SweepAxis.SEG_NUM else config.sweep.seg_lens
    modes = config.sweep.modes or [config.dataset.mode]
    records = _usable_records(config)
    points = [(mode, value) for mode in modes for value in sorted(grid)]

    def run_point(point) -> Tuple[Tuple[DatasetMode, float], Optional[CVRun], Optional[str]]:
        mode, value = point
        try:
            return point, cmd_cv(_grid_config(config, axis, value, mode), records), None
        except ADFFError as e:
            logger.error("Sweep point failed", axis=axis.value, value=value, mode=mode.value, error=str(e))
            return point, None, str(e)

    started = time.perf_counter()
    if config.sweep.parallel and len(points) > 1:
        with ThreadPoolExecutor(max_workers=settings.FOLD_WORKERS) as pool:
            outcomes = list(pool.map(run_point, points))
    else:
        outcomes = [run_point(p) for p in tqdm(points, desc=f"sweep {axis.value}", disable=not settings.SHOW_PROGRESS)]

    rows: List[ResultRow] = []
    summary = []
    failures: Dict[str, str] = {}
    for (mode, value), run, error in outcomes:
        if run is None:
            failures[f"{mode.value}:{axis.value}={value}"] = error
            continue
        rows.extend(run.rows)
        mean = next(r for r in run.rows if r.fold == "mean")
        entry = {"mode": mode.value, axis.value: value}
        entry.update({k: v for k, v in mean.model_dump().items()
                      if k.startswith(("rmse", "r2", "acc")) and v is not None})
        if config.report.record_timing:
            entry["wall_seconds"] = run.report.total_seconds
            entry["wall_hours"] = run.report.total_seconds / 3600
        summary.append(entry)

    out_dir = Path(config.run.output_dir)
    csv_path, _ = emit_report(rows, out_dir, f"sweep_{axis.value}", config.report.published_reference)
    frame = pd.DataFrame(summary)
    if not frame.empty:
        frame = frame.sort_values(["mode", axis.value], kind="stable")
    summary_path = write_table(frame, out_dir / f"sweep_{axis.value}_summary.csv")
    if failures:
        write_failure_manifest(out_dir, failures)
    logger.info("✅ Sweep finished", axis=axis.value, points=len(points), failed=len(failures),
                seconds=round(time.perf_counter() - started, 1))
    return TableRun(rows=rows, csv_path=csv_path, summary_path=summary_path, failures=failures)


# =============================== ablate ===============================

def cmd_ablate(config: RunConfig) -> TableRun:
    """Full model and both ablations on the same data, seeds and folds."""
    records = _usable_records(config)
    rows: List[ResultRow] = []
    summary = []
    for variant in Variant:
        data = config.model_dump(mode="python")
        data["model"]["variant"] = variant
        run = cmd_cv(RunConfig.model_validate(data), records)
        rows.extend(run.rows)
        means, stds = run.report.mean(), run.report.std()
        entry = {"variant": variant.label}
        entry.update({name: format_pm(means[name], stds[name]) for name in run.report.metric_names})
        summary.append(entry)

    out_dir = Path(config.run.output_dir)
    csv_path, _ = emit_report(rows, out_dir, "ablation", config.report.published_reference)
    summary_path = write_table(pd.DataFrame(summary), out_dir / "ablation_summary.csv")
    logger.info("✅ Ablation finished", variants=[v.label for v in Variant])
    return TableRun(rows=rows, csv_path=csv_path, summary_path=summary_path)


# =============================== synth ===============================

def cmd_synth(root: Path, n: int, seed: int, duration_s: float, max_duration_s: Optional[float] = None) -> List[ChorusRecord]:
    return synth_generate(n, seed, duration_s, root, max_duration_s=max_duration_s)
