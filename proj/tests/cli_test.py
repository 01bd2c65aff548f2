#!/usr/bin/env python3
"""End-to-end checks of the treeaut command line: exit codes, output shapes
against the JSON schemas, and byte-identical repeated runs.

usage: cli_test.py <treeaut executable> <source dir>
"""

import json
import subprocess
import sys
import tempfile
import unittest
from pathlib import Path

import jsonschema
import referencing
import referencing.jsonschema

EXE = ""
SRC = Path(".")


def run(*args, env=None):
    return subprocess.run([EXE, *map(str, args)], capture_output=True, text=True, env=env, timeout=240)


def spec(name):
    return SRC / "specs" / name


def validator(name):
    schemas = {}
    for p in (SRC / "schemas").glob("*.schema.json"):
        schemas[p.name] = referencing.jsonschema.DRAFT202012.create_resource(json.loads(p.read_text()))
    registry = referencing.Registry().with_resources(schemas.items())
    return jsonschema.Draft202012Validator(json.loads((SRC / "schemas" / name).read_text()), registry=registry)


class Cli(unittest.TestCase):
    def check(self, schema, payload):
        validator(schema).validate(payload)

    def test_sample_specs_match_schema(self):
        for p in (SRC / "specs").glob("*.json"):
            if p.name.endswith(".config.json"):
                self.check("config.schema.json", json.loads(p.read_text()))
            else:
                self.check("group_spec.schema.json", json.loads(p.read_text()))

    def test_classify_word(self):
        r = run("element", "classify", "--word", "1.2")
        self.assertEqual(r.returncode, 0, r.stderr)
        out = json.loads(r.stdout)
        self.assertEqual(out, {"class": "loxodromic", "length": 2})
        self.check("classify.schema.json", out)
        inv = json.loads(run("element", "classify", "--word", "1.2.1").stdout)
        self.assertEqual(inv["class"], "inversion")
        self.check("classify.schema.json", inv)

    def test_tree_dot(self):
        r = run("tree", "dot", "--d", "3", "--radius", "2")
        self.assertEqual(r.returncode, 0, r.stderr)
        lines = [l.strip() for l in r.stdout.splitlines()]
        nodes = [l for l in lines if l.startswith('"') and "--" not in l]
        edges = [l for l in lines if "--" in l]
        self.assertEqual(len(nodes), 10)
        self.assertEqual(len(edges), 9)
        self.assertTrue(all("label=" in e for e in edges))

    def test_qm_eval(self):
        qm = '{"segment":{"start":"e","colors":[1,2]}}'
        r = run("qm", "eval", "--spec", spec("c4_d4.json"), "--qm", qm, "--word", "1.2.1.2", "--d", "4")
        self.assertEqual(r.returncode, 0, r.stderr)
        out = json.loads(r.stdout)
        self.check("qm_eval.schema.json", out)
        self.assertEqual(out, {"value": 0, "forward_count": 3, "backward_count": 3})
        ident = json.loads(run("qm", "eval", "--spec", spec("c4_d4.json"), "--qm", qm, "--element", '{"op":"identity","d":4}').stdout)
        self.assertEqual(ident["value"], 0)

    def test_qm_homogenize_witness(self):
        qm = '{"segment":{"start":"e","colors":[1,2,1,3,1]}}'
        r = run("qm", "homogenize", "--spec", spec("c4_d4.json"), "--qm", qm, "--word", "1.2.1.2.4.2.3", "--d", "4",
                "--limit", "8")
        self.assertEqual(r.returncode, 0, r.stderr)
        out = json.loads(r.stdout)
        self.assertNotEqual(out["homogenization"], 0)
        self.assertEqual(out["limit"][-1], str(out["homogenization"]))

    def test_validate_exit_codes(self):
        for name, code in [("c3_sym3.json", 0), ("c4_d4.json", 0), ("intransitive.json", 0), ("equal_groups.json", 1),
                           ("orbits_broken.json", 1), ("malformed_cycle.json", 1)]:
            r = run("group", "validate", spec(name))
            self.assertEqual(r.returncode, code, name + r.stderr)
            self.check("validation_report.schema.json", json.loads(r.stdout))
        r = run("group", "validate", SRC / "specs" / "missing.json")
        self.assertEqual(r.returncode, 1)

    def test_branch_reports(self):
        expected = {"c3_sym3.json": "BoundedlyAcyclic", "c4_d4.json": "InfiniteH2", "intransitive.json": "InfiniteH2"}
        for name, branch in expected.items():
            r = run("branch", spec(name), "--config", spec("quick.config.json"))
            self.assertEqual(r.returncode, 0, name + r.stderr)
            out = json.loads(r.stdout)
            self.check("branch_report.schema.json", out)
            self.assertEqual(out["branch"], branch)
            self.assertTrue(out["complete"])

    def test_branch_incomplete_and_invalid(self):
        r = run("branch", spec("c3_sym3.json"), "--config", spec("zero_bounds.config.json"), "--evidence", "summary")
        self.assertEqual(r.returncode, 2, r.stderr)
        out = json.loads(r.stdout)
        self.check("branch_report.schema.json", out)
        self.assertFalse(out["complete"])
        self.assertEqual(run("branch", spec("equal_groups.json")).returncode, 1)
        with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as f:
            json.dump({"bogus": 1}, f)
        self.assertEqual(run("branch", spec("c3_sym3.json"), "--config", f.name).returncode, 1)

    def test_branch_config_from_environment(self):
        import os
        env = dict(os.environ, TREEAUT_CONFIG=str(spec("zero_bounds.config.json")))
        self.assertEqual(run("branch", spec("c3_sym3.json"), env=env).returncode, 2)

    def test_branch_deterministic(self):
        a = run("branch", spec("c4_d4.json"), "--seed", "7", "--config", spec("quick.config.json"))
        b = run("branch", spec("c4_d4.json"), "--seed", "7", "--config", spec("quick.config.json"))
        self.assertEqual(a.returncode, 0)
        self.assertEqual(a.stdout, b.stdout)

    def test_bad_input_exits_one(self):
        self.assertEqual(run("element", "classify", "--word", "1.1").returncode, 1)
        self.assertEqual(run("chains", "exactness", "--points", "e,1,2,3,1.2,1.3,2.1").returncode, 1)
        self.assertEqual(run("nonsense").returncode, 1)

    def test_chains(self):
        r = run("chains", "exactness", "--points", "e,1,2,3", "--max-degree", "2")
        self.assertEqual(r.returncode, 0, r.stderr)
        self.assertTrue(json.loads(r.stdout)["exact"])


if __name__ == "__main__":
    EXE, SRC = sys.argv[1], Path(sys.argv[2])
    unittest.main(argv=sys.argv[:1], verbosity=2)
