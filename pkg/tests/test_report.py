import json

import pandas as pd
import pytest

from adff.core.enums import DatasetMode, Task, Variant
from adff.schemas.report import REFERENCE_FIELDS, CVReport, FoldResult, ResultRow
from adff.services.reference import attach_reference, published_values
from adff.services.report import emit_report, write_table
from adff.utils.common import format_pm


def _report(values, task: Task = Task.AROUSAL) -> CVReport:
    folds = [
        FoldResult(fold=k, metrics={"rmse_a": 0.2, "r2_a": v}, wall_seconds=1.5,
                   n_train=8, n_test=2, test_song_ids=[str(k)])
        for k, v in enumerate(values)
    ]
    return CVReport(task=task, seg_len=20, seg_num=6, folds=folds, total_seconds=7.5)


class TestCVReport:
    """Test fold aggregation."""

    def test_mean_and_sample_std(self):
        report = _report([0.1, 0.2, 0.3])
        assert report.mean()["r2_a"] == pytest.approx(0.2)
        assert report.std()["r2_a"] == pytest.approx(0.1)
        assert report.metric_names == ["rmse_a", "r2_a"]

    def test_rows(self):
        rows = _report([0.1, 0.2, 0.3, 0.4, 0.5]).to_rows()
        assert [r.fold for r in rows] == ["0", "1", "2", "3", "4", "mean", "std"]
        assert rows[0].variant == "ADFF"
        assert rows[5].wall_seconds == 7.5
        assert rows[6].wall_seconds is None
        assert rows[0].r2_v is None and rows[0].acc_four is None

    def test_rows_without_timing(self):
        rows = _report([0.1, 0.2]).to_rows(record_timing=False)
        assert all(r.wall_seconds is None for r in rows)

    def test_summary_format(self):
        assert format_pm(0.63941, 0.0213) == "0.6394±0.02"
        assert _report([0.6, 0.7]).summary()["r2_a"].startswith("0.6500±")


class TestEmitReport:
    """Test CSV/JSON result tables."""

    @pytest.fixture
    def rows(self):
        return [
            ResultRow(task="arousal", mode="simple", seg_len=20.0, seg_num=6, fold="0",
                      rmse_a=0.22131, r2_a=0.63941),
            ResultRow(task="arousal", mode="simple", seg_len=20.0, seg_num=6, fold="mean",
                      rmse_a=0.2213, r2_a=0.6394, wall_seconds=12.0),
        ]

    def test_four_decimals_and_empty_cells(self, rows, tmp_path):
        csv_path, _ = emit_report(rows, tmp_path)
        lines = csv_path.read_text(encoding="utf-8").splitlines()
        assert lines[0].split(",") == ResultRow.columns()
        first = dict(zip(lines[0].split(","), lines[1].split(",")))
        assert first["r2_a"] == "0.6394"
        assert first["seg_len"] == "20"
        assert first["rmse_v"] == "" and first["wall_seconds"] == ""

    def test_csv_and_json_agree(self, rows, tmp_path):
        csv_path, json_path = emit_report(rows, tmp_path, stem="run")
        frame = pd.read_csv(csv_path, dtype=str, keep_default_na=False)
        records = json.loads(json_path.read_text(encoding="utf-8"))
        assert len(records) == len(frame) == 2
        for record, (_, line) in zip(records, frame.iterrows()):
            for name, value in record.items():
                if value is None:
                    assert line[name] == ""
                elif isinstance(value, float):
                    assert float(line[name]) == pytest.approx(value, abs=1e-9)
                else:
                    assert line[name] == str(value)

    def test_empty_rows(self, tmp_path):
        csv_path, json_path = emit_report([], tmp_path)
        assert csv_path.read_text(encoding="utf-8").splitlines() == [",".join(ResultRow.columns())]
        assert json.loads(json_path.read_text(encoding="utf-8")) == []

    def test_reference_columns(self, rows, tmp_path):
        csv_path, _ = emit_report(rows, tmp_path, include_reference=True)
        header = csv_path.read_text(encoding="utf-8").splitlines()[0].split(",")
        assert header[-len(REFERENCE_FIELDS):] == REFERENCE_FIELDS

    def test_write_table(self, tmp_path):
        path = write_table(pd.DataFrame({"seg_num": [1, 2], "r2_a": [0.123456, 0.5]}), tmp_path / "t.csv")
        assert path.read_text(encoding="utf-8").splitlines() == ["seg_num,r2_a", "1,0.1235", "2,0.5000"]


class TestPublishedReference:
    """Test attaching published figures to mean rows."""

    def test_single_task_lookup(self):
        values = published_values(Task.AROUSAL, DatasetMode.SIMPLE, 20, 6, Variant.FULL)
        assert values == {"rmse_a": 0.2213, "r2_a": 0.6394}

    def test_simple_twenty_second_valence_uses_variant_comparison_figures(self):
        values = published_values(Task.VALENCE, DatasetMode.SIMPLE, 20, 6, Variant.FULL)
        assert values == {"rmse_v": 0.2379, "r2_v": 0.4575}
        ablated = published_values(Task.VALENCE, DatasetMode.SIMPLE, 20, 6, Variant.NO_SE)
        assert ablated == {"rmse_v": 0.2429, "r2_v": 0.4332}

    def test_unknown_configuration(self):
        assert published_values(Task.AROUSAL, DatasetMode.SIMPLE, 20, 4, Variant.FULL) is None
        assert published_values(Task.FOUR, DatasetMode.SIMPLE, 20, 6, Variant.FULL) is None

    def test_attach(self):
        row = ResultRow(task="four", mode="full", seg_len=10, seg_num=6, fold="mean", acc_four=0.6)
        attached = attach_reference(row, Task.FOUR, DatasetMode.FULL, Variant.FULL)
        assert attached.ref_acc_four == 0.7190
        assert attached.ref_r2_v is None
