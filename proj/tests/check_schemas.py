"""Runs each subspace-ent subcommand that emits JSON and validates the output
against the schema for its kind.

usage: check_schemas.py BINARY SCHEMA_DIR WORK_DIR
"""

import json
import pathlib
import shutil
import subprocess
import sys

import jsonschema


def main() -> int:
    binary, schema_dir, work = sys.argv[1], pathlib.Path(sys.argv[2]), pathlib.Path(sys.argv[3])
    shutil.rmtree(work, ignore_errors=True)
    work.mkdir(parents=True)
    schemas = {}
    for path in sorted((schema_dir / "v1").glob("*.schema.json")):
        schema = json.loads(path.read_text())
        jsonschema.Draft202012Validator.check_schema(schema)
        schemas[schema["properties"]["kind"]["const"]] = schema

    def run(*args, ok=(0,)):
        proc = subprocess.run([binary, *args], capture_output=True, text=True)
        if proc.returncode not in ok:
            raise SystemExit(f"{' '.join(args)} exited {proc.returncode}: {proc.stderr}")
        return proc.stdout

    ghz = work / "ghz.txt"
    gw = work / "gw.txt"
    rot = work / "rot.txt"
    run("make-state", "--family", "ghz", "--n", "3", "--d", "2", "--out", str(ghz))
    run("make-subspace", "--family", "ghz-w", "--n", "3", "--out", str(gw))
    run("make-subspace", "--family", "ghz-w-rotated", "--n", "3", "--out", str(rot))

    outputs = [
        run("measure", "--state", str(ghz), "--kind", "gm"),
        run("measure", "--state", str(ghz), "--kind", "producibility:2"),
        run("check", "--subspace", str(gw), "--claim", "ces"),
        run("check", "--subspace", str(rot), "--claim", "ces", "--restarts", "8", ok=(3,)),
        run("oracle", "--subspace", str(gw), "--measure", "gm", "--method", "hybrid", "--resolution", "64",
            "--restarts", "8"),
        run("fig2", "--dmax", "10", "--out-dir", str(work)),
        run("figD", "--d", "3", "--nmax", "6", "--format", "json", "--out-dir", str(work)),
        (work / "figD.json").read_text(),
        run("validate", "--suite", "quick", "--timing"),
    ]

    seen = set()
    for text in outputs:
        doc = json.loads(text)
        kind = doc.get("kind")
        if kind not in schemas:
            print(f"FAIL: no schema for kind {kind!r}")
            return 1
        jsonschema.validate(doc, schemas[kind])
        seen.add(kind)
        print(f"ok: {kind}")
    missing = set(schemas) - seen
    if missing:
        print(f"FAIL: kinds never exercised: {sorted(missing)}")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
