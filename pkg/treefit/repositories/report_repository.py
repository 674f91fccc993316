"""Repository for optimization traces and run reports."""

import csv
import json
import logging
from collections.abc import Sequence
from functools import cache
from pathlib import Path
from typing import Any

from jsonschema import Draft202012Validator

from treefit.common.format_utils import dump_json, format_float
from treefit.models.fit import EpochRecord
from treefit.models.report import RunReport

logger = logging.getLogger(__name__)

SCHEMA_PATH = Path(__file__).resolve().parent.parent / "schemas" / "run_report.schema.json"

TRACE_COLUMNS = ("epoch", "loss", "fidelity", "delta_term", "linf")


@cache
def load_report_schema() -> dict[str, Any]:
    """Load and check the shipped report schema."""
    schema = json.loads(SCHEMA_PATH.read_text(encoding="utf-8"))
    Draft202012Validator.check_schema(schema)
    return schema


def validate_report_payload(payload: dict[str, Any]) -> None:
    """
    Validate a serialized report against the schema.

    Raises:
        jsonschema.ValidationError: If the payload does not conform.
    """
    Draft202012Validator(load_report_schema()).validate(payload)


class ReportRepository:
    """Write trace CSV files and schema-validated report JSON files."""

    def __init__(self, encoding: str = "utf-8") -> None:
        """
        Initialize the repository.

        Args:
            encoding: Text encoding of written files.
        """
        self.encoding = encoding

    def save_trace(self, trace: Sequence[EpochRecord], path: str | Path) -> None:
        """Write one CSV row per epoch with shortest round-trip floats."""
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        with target.open("w", encoding=self.encoding, newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(TRACE_COLUMNS)
            for r in trace:
                writer.writerow(
                    [r.epoch, format_float(r.loss), format_float(r.fidelity), format_float(r.delta_term), format_float(r.linf)],
                )
        logger.info("Wrote %s (%d epochs)", target, len(trace))

    def save_report(self, report: RunReport, path: str | Path) -> None:
        """Validate the report against the schema, then write it."""
        payload = report.model_dump(by_alias=True, mode="json")
        validate_report_payload(payload)
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(dump_json(payload) + "\n", encoding=self.encoding)
        logger.info("Wrote %s", target)
