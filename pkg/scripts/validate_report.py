import argparse
import json
import logging
from pathlib import Path
from typing import Any

from jsonschema import Draft7Validator


DEFAULT_SCHEMA = Path(__file__).resolve().parents[1] / "config" / "report_schema.json"

_validators: dict[Path, Draft7Validator] = {}


def _validator(schema_path: Path) -> Draft7Validator:
    if schema_path not in _validators:
        schema = json.loads(schema_path.read_text(encoding="utf-8"))
        Draft7Validator.check_schema(schema)
        _validators[schema_path] = Draft7Validator(schema)
    return _validators[schema_path]


def validate_report(obj: Any, schema_path: Path = DEFAULT_SCHEMA, name: str = "report") -> None:
    if not isinstance(obj, dict):
        raise ValueError(f"{name}: expected object")
    errors = sorted(_validator(schema_path).iter_errors(obj), key=lambda e: list(e.absolute_path))
    if errors:
        first = errors[0]
        where = "/".join(str(x) for x in first.absolute_path) or "<root>"
        raise ValueError(f"{name}: {len(errors)} schema errors, first at {where}: {first.message}")


def validate_report_file(json_path: Path, schema_path: Path = DEFAULT_SCHEMA) -> None:
    obj = json.loads(json_path.read_text(encoding="utf-8"))
    reports = obj if isinstance(obj, list) else [obj]
    for i, item in enumerate(reports):
        validate_report(item, schema_path, name=f"{json_path}[{i}]" if isinstance(obj, list) else str(json_path))
    logging.info("Validated %s (%d reports)", json_path, len(reports))


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("json", nargs="+")
    parser.add_argument("--schema", default=str(DEFAULT_SCHEMA))
    args = parser.parse_args()

    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(levelname)s %(message)s")
    for path in args.json:
        validate_report_file(Path(path), Path(args.schema))


if __name__ == "__main__":
    main()
