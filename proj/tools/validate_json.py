#!/usr/bin/env python3
"""Validate planefield JSON documents against the shipped schemas.

Each document names its schema in the top-level "schema" field
("planefield.<name>/1"); the matching file is <schemas>/<name>.schema.json.

usage: validate_json.py SCHEMA_DIR FILE...
"""
import json
import pathlib
import sys

import jsonschema
from referencing import Registry, Resource


def load_registry(schema_dir):
    schemas = {}
    for path in sorted(pathlib.Path(schema_dir).glob("*.schema.json")):
        schemas[path.name[: -len(".schema.json")]] = json.loads(path.read_text())
    registry = Registry().with_resources(
        (s["$id"], Resource.from_contents(s)) for s in schemas.values()
    )
    return schemas, registry


def validate(doc, schemas, registry):
    tag = doc.get("schema") if isinstance(doc, dict) else None
    if not isinstance(tag, str) or not tag.startswith("planefield.") or "/" not in tag:
        return [f"missing or malformed 'schema' field: {tag!r}"]
    name = tag[len("planefield."):].split("/")[0]
    if name not in schemas:
        return [f"no schema shipped for {tag}"]
    validator = jsonschema.Draft202012Validator(schemas[name], registry=registry)
    return [f"{'/'.join(map(str, e.absolute_path)) or '<root>'}: {e.message}" for e in validator.iter_errors(doc)]


def main(argv):
    if len(argv) < 3:
        print(__doc__.strip().splitlines()[-1], file=sys.stderr)
        return 2
    schemas, registry = load_registry(argv[1])
    bad = 0
    for path in argv[2:]:
        try:
            doc = json.loads(pathlib.Path(path).read_text())
        except (OSError, json.JSONDecodeError) as e:
            print(f"{path}: cannot read JSON: {e}")
            bad += 1
            continue
        errors = validate(doc, schemas, registry)
        for e in errors:
            print(f"{path}: {e}")
        bad += bool(errors)
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
