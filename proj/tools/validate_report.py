#!/usr/bin/env python3
"""Validate toral JSON reports (one document, or one per line) against the schema."""
import json
import sys

import jsonschema


def documents(text):
    text = text.strip()
    if not text:
        return []
    try:
        return [json.loads(text)]
    except json.JSONDecodeError:
        return [json.loads(line) for line in text.splitlines() if line.strip()]


def main():
    if len(sys.argv) < 3:
        print("usage: validate_report.py SCHEMA FILE|- [FILE ...]", file=sys.stderr)
        return 2
    with open(sys.argv[1]) as f:
        schema = json.load(f)
    jsonschema.Draft202012Validator.check_schema(schema)
    validator = jsonschema.Draft202012Validator(schema)
    bad = 0
    for path in sys.argv[2:]:
        text = sys.stdin.read() if path == "-" else open(path).read()
        for i, doc in enumerate(documents(text)):
            errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.path))
            for e in errors:
                print(f"{path}[{i}]: {'/'.join(map(str, e.path))}: {e.message}", file=sys.stderr)
            bad += bool(errors)
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
