#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Compares per-callable cc and sloc from the C++ front end (dump_callables)
against cc_oracle.py.

    compare_cc.py <dump_callables> <corpus dir>   corpus files plus manifest.tsv
    compare_cc.py <dump_callables> --stdlib       the interpreter's stdlib
"""
import ast
import subprocess
import sys
import sysconfig
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))
import cc_oracle  # noqa: E402


def oracle_rows(paths):
    import contextlib
    import io

    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        cc_oracle.main(paths)
    return buf.getvalue().splitlines()


def parseable(path):
    try:
        src = path.read_text(encoding="utf-8")
        ast.parse(src)
        return True
    except (SyntaxError, UnicodeDecodeError, ValueError):
        return False


def compare(dump, paths):
    failures = 0
    for i in range(0, len(paths), 200):
        chunk = [str(p) for p in paths[i:i + 200]]
        got = subprocess.run([dump, *chunk], capture_output=True, text=True)
        if got.returncode != 0:
            print(got.stderr, end="")
            failures += 1
        want = oracle_rows(chunk)
        mine = got.stdout.splitlines()
        if mine != want:
            w, m = set(want), set(mine)
            for row in sorted(w - m)[:20]:
                print("oracle only:", row)
            for row in sorted(m - w)[:20]:
                print("c++ only:   ", row)
            failures += 1
    return failures


def main(argv):
    dump = argv[0]
    if argv[1] == "--stdlib":
        root = Path(sysconfig.get_paths()["stdlib"])
        paths = sorted(p for p in root.rglob("*.py")
                       if "site-packages" not in p.parts and "dist-packages" not in p.parts
                       and "lib2to3" not in p.parts and parseable(p))
        failures = compare(dump, paths)
        print(f"{len(paths)} stdlib files, {failures} mismatching chunks")
        return 1 if failures else 0

    corpus = Path(argv[1])
    paths = sorted(corpus.glob("*.py"))
    failures = compare(dump, paths)
    rows = {r.split("\t")[1]: int(r.split("\t")[4]) for r in oracle_rows([str(p) for p in paths])}
    manifest = {}
    for line in (corpus / "manifest.tsv").read_text().splitlines():
        if line.startswith("#") or not line.strip():
            continue
        name, cc, _ = line.split("\t", 2)
        manifest[name] = int(cc)
    if manifest != rows:
        print("manifest and oracle disagree:", sorted(set(manifest.items()) ^ set(rows.items())))
        failures += 1
    print(f"{len(rows)} corpus callables, {failures} failures")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
