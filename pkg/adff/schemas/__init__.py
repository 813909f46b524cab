from adff.schemas.config import (
    DatasetSpec,
    ModelConfig,
    ReportConfig,
    RunConfig,
    SweepConfig,
    TrainConfig,
    dump_config,
    parse_config,
)
from adff.schemas.report import CVReport, FoldResult, ResultRow

__all__ = [
    # Configuration
    "DatasetSpec",
    "ModelConfig",
    "TrainConfig",
    "SweepConfig",
    "ReportConfig",
    "RunConfig",
    "parse_config",
    "dump_config",
    # Reports
    "CVReport",
    "FoldResult",
    "ResultRow",
]
