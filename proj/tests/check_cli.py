"""End-to-end checks of the oddterw executable: exit codes, report schema, build outputs."""

import itertools
import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema
import networkx as nx
import numpy as np
import scipy.io

EXE = sys.argv[1]
SCHEMAS = pathlib.Path(sys.argv[2])

REPORT_SCHEMA = json.loads((SCHEMAS / "report.schema.json").read_text())
VERTICES_SCHEMA = json.loads((SCHEMAS / "vertices.schema.json").read_text())

failures = []


def run(*args):
    return subprocess.run([EXE, *args], capture_output=True, text=True)


def check(cond, what):
    print(("ok   " if cond else "FAIL ") + what)
    if not cond:
        failures.append(what)


def check_build(m, out):
    proc = run("build", "--m", str(m), "--out", str(out))
    check(proc.returncode == 0, f"build m={m} exits 0")
    manifest = json.loads((out / "vertices.json").read_text())
    jsonschema.validate(manifest, VERTICES_SCHEMA)
    verts = [frozenset(v) for v in manifest["vertices"]]
    n = 2 * m + 1
    expected = {frozenset(c) for c in itertools.combinations(range(n), m)}
    check(set(verts) == expected and len(verts) == len(expected), f"m={m} vertices are the m-subsets of a {n}-set")

    a = scipy.io.mmread(str(out / "adjacency.mtx")).toarray().astype(np.int64)
    want = np.array([[int(not (y & z)) for z in verts] for y in verts], dtype=np.int64)
    check(np.array_equal(a, want), f"m={m} adjacency is disjointness")

    x = verts[0]
    dist = nx.single_source_shortest_path_length(nx.from_numpy_array(a), 0)
    offsets = manifest["class_offsets"]
    check(len(offsets) == m + 2 and offsets[-1] == len(verts), f"m={m} class offsets cover every vertex")
    for c in range(m + 1):
        e = scipy.io.mmread(str(out / f"E{c}.mtx")).toarray()
        members = set(np.nonzero(np.diag(e))[0])
        in_range = set(range(offsets[c], offsets[c + 1]))
        by_distance = {k for k, d in dist.items() if d == c}
        meet = m - c // 2 if c % 2 == 0 else c // 2
        by_meet = {k for k, y in enumerate(verts) if len(x & y) == meet}
        check(members == in_range == by_distance == by_meet, f"m={m} E{c} is distance class {c}")


def check_verify(m, checks, extra=()):
    with tempfile.TemporaryDirectory() as d:
        proc = run("verify", "--m", str(m), "--checks", checks, "--out", d, *extra)
        report = json.loads((pathlib.Path(d) / "report.json").read_text())
        jsonschema.validate(report, REPORT_SCHEMA)
        all_pass = all(c["status"] == "pass" for c in report["checks"])
        check(proc.returncode == 0 and all_pass, f"verify m={m} checks={checks} {' '.join(extra)} passes")
        check(json.loads(proc.stdout) == report, f"verify m={m} stdout matches report.json")


with tempfile.TemporaryDirectory() as tmp:
    tmp = pathlib.Path(tmp)
    for m in (1, 2, 3, 4):
        check_build(m, tmp / f"b{m}")

    for m in (1, 2, 3):
        check_verify(m, "all")
    check_verify(4, "all", ("--primes", "1000000007,998244353", "--jobs", "2"))
    check_verify(5, "lemma2,dimension")

    bad = [
        ("verify", "--m", "9999", "--out", str(tmp / "x")),
        ("verify", "--m", "2", "--primes", "12", "--out", str(tmp / "x")),
        ("verify", "--m", "2", "--checks", "bogus", "--out", str(tmp / "x")),
        ("verify", "--m", "6", "--checks", "closure", "--out", str(tmp / "x")),
        ("build", "--m", "2"),
        ("frobnicate",),
    ]
    for args in bad:
        check(run(*args).returncode == 2, "usage error exit 2: " + " ".join(args[:3]))

    blocker = tmp / "file"
    blocker.write_text("x")
    check(run("build", "--m", "2", "--out", str(blocker / "sub")).returncode == 2, "unwritable out dir exits 2")

    proc = run("tdim", "--max", "6", "--closure-max", "2")
    lines = proc.stdout.strip().splitlines()[1:]
    check(proc.returncode == 0 and [l.split()[2] for l in lines] == ["5", "15", "35", "70", "126", "210"],
          "tdim lists C(m+4,4)")

sys.exit(1 if failures else 0)
