#!/usr/bin/env python3
# Copyright 2026 The xplain Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Runs every xplain command on small configs and validates what it writes."""

import argparse
import csv
import json
import pathlib
import re
import subprocess
import sys

import jsonschema
from referencing import Registry, Resource


def load_registry(schema_dir):
    schemas = {}
    for p in sorted(schema_dir.glob("*.schema.json")):
        doc = json.loads(p.read_text())
        schemas[p.name.removesuffix(".schema.json")] = doc
    registry = Registry().with_resources(
        (doc["$id"], Resource.from_contents(doc)) for doc in schemas.values())
    return schemas, registry


class Checker:
    def __init__(self, schemas, registry):
        self.schemas = schemas
        self.registry = registry
        self.failures = []

    def validate(self, path, schema):
        doc = json.loads(pathlib.Path(path).read_text())
        v = jsonschema.Draft202012Validator(self.schemas[schema], registry=self.registry)
        errors = sorted(v.iter_errors(doc), key=lambda e: list(e.path))
        for e in errors[:5]:
            self.fail(f"{path}: {schema}: {'/'.join(map(str, e.path))}: {e.message}")
        return doc

    def fail(self, msg):
        print("FAIL", msg)
        self.failures.append(msg)

    def expect(self, cond, msg):
        if not cond:
            self.fail(msg)


DOT_EDGE = re.compile(r'^\s*"([^"\\]|\\.)*"\s*->\s*"([^"\\]|\\.)*"\s*\[.*\];\s*$')
DOT_NODE = re.compile(r'^\s*"([^"\\]|\\.)*"\s*\[.*\];\s*$')


def check_dot(text, n_edges, chk, where):
    lines = text.strip().splitlines()
    chk.expect(lines and lines[0].startswith("digraph") and lines[0].rstrip().endswith("{"),
               f"{where}: no digraph header")
    chk.expect(lines and lines[-1].strip() == "}", f"{where}: unterminated graph")
    edges = sum(1 for l in lines[1:-1] if DOT_EDGE.match(l))
    chk.expect(edges == n_edges, f"{where}: {edges} edge statements, expected {n_edges}")
    for l in lines[1:-1]:
        s = l.strip()
        if not s or DOT_EDGE.match(l) or DOT_NODE.match(l) or re.match(r"^\w+\s*(\[.*\])?;?$", s) \
                or re.match(r"^\w+\s*=.*;$", s):
            continue
        chk.fail(f"{where}: unparsed DOT line: {s}")
    try:
        import pydot  # optional
    except ImportError:
        return
    graphs = pydot.graph_from_dot_data(text)
    chk.expect(graphs and len(graphs[0].get_edges()) == n_edges, f"{where}: pydot disagrees")


def inside(sub, x, tol=1e-9):
    rows = list(zip(sub["A"], sub["C"])) + list(zip(sub["T"], sub["V"]))
    return all(sum(a * b for a, b in zip(r, x)) <= c + tol for r, c in rows)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--xplain", required=True)
    ap.add_argument("--root", required=True)
    ap.add_argument("--work", required=True)
    args = ap.parse_args()
    root = pathlib.Path(args.root).resolve()
    work = pathlib.Path(args.work).resolve()
    work.mkdir(parents=True, exist_ok=True)
    chk = Checker(*load_registry(root / "docs" / "schemas"))

    for p in sorted((root / "configs").glob("*.json")):
        chk.validate(p, "config")
    for p in sorted((root / "scenarios").glob("*.json")):
        chk.validate(p, "scenario")
    for p in sorted((root / "milps").glob("*.json")):
        chk.validate(p, "milp")

    def run(name, cmd, cfg, expect_rc=0, extra=()):
        out = work / name
        cfg_path = work / f"{name}.config.json"
        cfg = dict(cfg, output=str(out))
        cfg_path.write_text(json.dumps(cfg, indent=2))
        chk.validate(cfg_path, "config")
        r = subprocess.run([args.xplain, cmd, "--config", str(cfg_path), "--seed", "11", *extra],
                           capture_output=True, text=True)
        chk.expect(r.returncode == expect_rc,
                   f"{name}: exit {r.returncode}, expected {expect_rc}\n{r.stderr}")
        return out

    five_node = str(root / "scenarios" / "dp_five_node.json")
    ff4 = str(root / "scenarios" / "ff4.json")

    out = run("run_five_node", "run-heuristic", {"scenario": five_node})
    doc = chk.validate(out / "run_heuristic.json", "run_heuristic")
    chk.expect(doc["heuristic_total"] == 150 and doc["benchmark_total"] == 250, "five_node totals")

    out = run("run_ff4", "run-heuristic", {"scenario": ff4})
    chk.validate(out / "run_heuristic.json", "run_heuristic")

    out = run("analyze_ff4", "analyze", {"scenario": ff4, "analyzer": {"budget": 400}})
    chk.validate(out / "adversarial.json", "adversarial")
    with open(out / "analyze_samples.csv") as f:
        rows = list(csv.reader(f))
    chk.expect(rows[0] == ["B0", "B1", "B2", "B3", "gap"], f"csv header {rows[0]}")
    chk.expect(len(rows) == 401, f"csv has {len(rows) - 1} samples, expected 400")

    out = run("analyze_none", "analyze",
              {"scenario": five_node, "analyzer": {"budget": 200, "min_gap": 2}}, expect_rc=3)
    doc = chk.validate(out / "adversarial.json", "adversarial")
    chk.expect(doc["found"] is False, "impossible min_gap reported a point")

    out = run("subspaces_ff4", "subspaces",
              {"scenario": ff4, "analyzer": {"budget": 400}, "subspace": {"max_subspaces": 2}})
    rep = chk.validate(out / "subspaces.json", "subspaces_report")
    chk.expect(len(rep["subspaces"]) == 2, "expected two subspaces")
    for i, sub in enumerate(rep["subspaces"]):
        chk.expect(inside(sub, sub["seed"]["x"]), f"subspace {i} does not contain its seed")

    sub_file = out / "subspaces.json"
    out = run("explain_ff4", "explain",
              {"scenario": ff4, "explainer": {"samples": 300, "subspace_file": str(sub_file)}})
    hm = chk.validate(out / "heatmap.json", "heatmap")
    check_dot((out / "heatmap.dot").read_text(), len(hm["edges"]), chk, "heatmap.dot")

    out = run("generalize_line", "generalize",
              {"generalizer": {"predicate": "increasing(pinned_shortest_path_length)",
                               "budget": 300,
                               "family": {"kind": "te-line", "size_min": 2, "size_max": 6,
                                          "count": 5}}})
    chk.validate(out / "trend.json", "trend")

    out = run("encode_milp", "encode-milp", {"milp": str(root / "milps" / "two_var.json")})
    chk.validate(out / "network.json", "network")
    rep = chk.validate(out / "milp_report.json", "milp_report")
    chk.expect(rep["agree"] is True, "encoded network disagrees with the MILP")

    run("bad_config", "analyze", {"scenario": five_node, "stats": {"alpha": 0.05}, "heuristic": "ff"},
        expect_rc=1)

    if chk.failures:
        print(f"{len(chk.failures)} failure(s)")
        return 1
    print("all outputs valid")
    return 0


if __name__ == "__main__":
    sys.exit(main())
