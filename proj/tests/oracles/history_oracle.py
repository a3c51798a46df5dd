#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Writes the per-commit oracle manifest for the history fixture.

Erosion comes from cc_oracle (Python ast), clone lines from a brute-force
comparison of token-normalized line windows (Python tokenize), and flagged
lines from the hand-reviewed FLAGGED table below. Nothing here calls the
C++ implementation.

    history_oracle.py <fixture repo> > manifest.json
    history_oracle.py <fixture repo> --check manifest.json
"""
import io
import json
import keyword
import math
import subprocess
import sys
import tokenize
from collections import defaultdict
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))
import cc_oracle  # noqa: E402

CUTOFF = 10
MIN_WINDOW = 6

# Lines flagged by the starter rules, per commit subject, reviewed by hand:
#   core.py:6     len(parts) == 0              len-equals-zero
#   report.py:9   value == None                compare-to-none
#   dispatch.py / legacy.py:24
#                 response if response else .. redundant-or-ternary
FLAGGED = {
    "core parsing": {"pkg/core.py": [6]},
    "summaries": {"pkg/core.py": [6], "pkg/report.py": [9]},
    "classification": {"pkg/core.py": [6], "pkg/report.py": [9]},
    "labels": {"pkg/core.py": [6], "pkg/report.py": [9]},
    "routing": {"pkg/core.py": [6], "pkg/report.py": [9], "pkg/dispatch.py": [24], "pkg/legacy.py": [24]},
}


def git(repo, *args):
    return subprocess.run(["git", "-C", repo, *args], check=True, capture_output=True, text=True).stdout


def normalized_lines(src):
    out = []  # [first_line, last_line, [pieces]]
    for tok in tokenize.generate_tokens(io.StringIO(src).readline):
        if tok.type == tokenize.NAME:
            if tok.string in ("True", "False", "None"):
                piece = "L"
            elif keyword.iskeyword(tok.string):
                piece = tok.string
            else:
                piece = "I"
        elif tok.type in (tokenize.NUMBER, tokenize.STRING):
            piece = "L"
        elif tok.type == tokenize.OP:
            piece = tok.string
        else:
            continue
        if not out or out[-1][0] != tok.start[0]:
            out.append([tok.start[0], tok.end[0], []])
        out[-1][1] = max(out[-1][1], tok.end[0])
        out[-1][2].append(piece)
    return [(a, b, " ".join(p)) for a, b, p in out]


def clone_lines(files):
    occurrences = defaultdict(list)
    for path, lines in files.items():
        for i in range(len(lines) - MIN_WINDOW + 1):
            key = tuple(text for _, _, text in lines[i:i + MIN_WINDOW])
            occurrences[key].append((path, i))
    marked = defaultdict(set)
    for where in occurrences.values():
        if len(where) < 2:
            continue
        for path, i in where:
            window = files[path][i:i + MIN_WINDOW]
            marked[path].update(range(window[0][0], max(b for _, b, _ in window) + 1))
    return marked


def measure(repo, commit, subject):
    paths = sorted(p for p in git(repo, "ls-tree", "-r", "--name-only", commit).splitlines() if p.endswith(".py"))
    total_mass = high_mass = 0.0
    high = max_cc = callables = loc = 0
    code = {}
    norm = {}
    for path in paths:
        src = git(repo, "show", f"{commit}:{path}")
        code[path] = cc_oracle.code_lines(src)
        loc += len(code[path])
        norm[path] = normalized_lines(src)
        out = []
        cc_oracle.walk(__import__("ast").parse(src), "", out)
        for _, func in out:
            start = cc_oracle.def_line(cc_oracle.physical_lines(src), func)
            sloc = max(1, sum(1 for n in range(start, func.end_lineno + 1) if n in code[path]))
            cc = cc_oracle.cc(func)
            mass = cc * math.sqrt(sloc)
            total_mass += mass
            callables += 1
            max_cc = max(max_cc, cc)
            if cc > CUTOFF:
                high += 1
                high_mass += mass
    clones = clone_lines(norm)
    flagged_n = clone_n = union_n = 0
    for path in paths:
        flagged = set(FLAGGED[subject].get(path, [])) & code[path]
        cloned = clones.get(path, set()) & code[path]
        flagged_n += len(flagged)
        clone_n += len(cloned)
        union_n += len(flagged | cloned)
    return {
        "subject": subject,
        "files": len(paths),
        "callables": callables,
        "loc": loc,
        "max_cc": max_cc,
        "high_cc_count": high,
        "erosion": high_mass / total_mass if total_mass else 0.0,
        "flagged_lines": flagged_n,
        "clone_lines": clone_n,
        "union_lines": union_n,
        "verbosity": union_n / loc if loc else 0.0,
    }


def main(repo, check=None):
    log = git(repo, "log", "--reverse", "--format=%H %ct %s").splitlines()
    commits = []
    for line in log:
        commit, ts, subject = line.split(" ", 2)
        row = measure(repo, commit, subject)
        row["timestamp"] = int(ts)
        commits.append(row)
    doc = {
        "commits": commits,
        "rising_erosion": commits[-1]["erosion"] > commits[0]["erosion"],
        "rising_verbosity": commits[-1]["verbosity"] > commits[0]["verbosity"],
    }
    if check is None:
        json.dump(doc, sys.stdout, indent=2, sort_keys=True)
        sys.stdout.write("\n")
        return 0
    with open(check) as fh:
        committed = json.load(fh)
    if committed != doc:
        print("fixture repository no longer reproduces", check)
        return 1
    print(f"{len(commits)} commits reproduce {check}")
    return 0


if __name__ == "__main__":
    args = sys.argv[1:]
    sys.exit(main(args[0], args[2] if len(args) > 2 and args[1] == "--check" else None))
