#!/usr/bin/env python3
"""Replay every golden output in tests/goldens/manifest.toml through the CLI.

Usage:
    uv run python scripts/replay_goldens.py            # diff, exit 1 on mismatch
    uv run python scripts/replay_goldens.py --update   # rewrite the golden files
"""
import argparse
import contextlib
import difflib
import io
import sys
import tomllib
from pathlib import Path

from padiclab.cli import EXIT_OK, main

ROOT = Path(__file__).resolve().parent.parent
GOLDENS = ROOT / "tests" / "goldens"
MANIFEST = GOLDENS / "manifest.toml"


def load_manifest(path: Path = MANIFEST) -> list[dict]:
    with path.open("rb") as f:
        return tomllib.load(f)["golden"]


def replay(entry: dict) -> tuple[int, str]:
    """Exit status and standard output of the entry's CLI invocation."""
    out = io.StringIO()
    saved_stdin = sys.stdin
    sys.stdin = io.StringIO(entry.get("stdin", ""))
    try:
        with contextlib.redirect_stdout(out):
            status = main(entry["argv"])
    finally:
        sys.stdin = saved_stdin
    return status, out.getvalue()


def create_argument_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Replay golden CLI outputs")
    parser.add_argument("--update", action="store_true", help="Rewrite golden files")
    return parser


def main_replay(argv: list[str] | None = None) -> int:
    args = create_argument_parser().parse_args(argv)
    failures = 0
    for entry in load_manifest():
        path = GOLDENS / entry["file"]
        status, output = replay(entry)
        if status != EXIT_OK:
            print(f"[goldens] {entry['file']}: exit status {status}", flush=True)
            failures += 1
            continue
        if args.update:
            path.write_text(output)
            print(f"[goldens] wrote {entry['file']}", flush=True)
            continue
        expected = path.read_text() if path.exists() else ""
        if output != expected:
            failures += 1
            print(f"[goldens] {entry['file']}: mismatch", flush=True)
            sys.stdout.writelines(
                difflib.unified_diff(
                    expected.splitlines(keepends=True),
                    output.splitlines(keepends=True),
                    fromfile=f"golden/{entry['file']}",
                    tofile="replayed",
                )
            )
    print(f"[goldens] {failures} failure(s)")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main_replay())
