#!/usr/bin/env python3
"""Validate every JSON report emitted by the CLI against the published schemas.

Usage: validate_reports.py <report.schema.json> <config.schema.json>
                           <output tree> <config file>
Exit codes: 0 all valid, 1 a file failed validation, 3 jsonschema unavailable.
"""
import json
import pathlib
import sys

try:
    import jsonschema
except ImportError:
    sys.exit(3)


def main() -> int:
    report_schema_path, config_schema_path, tree, config_file = sys.argv[1:5]
    report_schema = json.loads(pathlib.Path(report_schema_path).read_text())
    config_schema = json.loads(pathlib.Path(config_schema_path).read_text())

    failures = []
    jsonschema.validate(json.loads(pathlib.Path(config_file).read_text()), config_schema)

    checked = 0
    config_names = {pathlib.Path(config_file).name, "bad.json", "garbled.json"}
    for path in sorted(pathlib.Path(tree).rglob("*.json")):
        if path.name in config_names:
            continue
        try:
            document = json.loads(path.read_text())
        except json.JSONDecodeError:
            continue  # deliberately garbled fixtures
        try:
            jsonschema.validate(document, report_schema)
            checked += 1
        except jsonschema.ValidationError as exc:
            failures.append(f"{path}: {exc.message}")

    if failures:
        print("\n".join(failures))
        return 1
    print(f"validated {checked} report files against the schema")
    return 0


if __name__ == "__main__":
    sys.exit(main())
