#!/usr/bin/env python3
"""End-to-end checks of the structcalc CLI: exit codes and report schemas.

usage: cli_test.py <structcalc> <schemas dir> <work dir>
"""
import json
import pathlib
import shutil
import subprocess
import sys

import jsonschema

CLI, SCHEMAS, WORK = sys.argv[1], pathlib.Path(sys.argv[2]), pathlib.Path(sys.argv[3])
failures = []


def run(*args):
    return subprocess.run([CLI, *args], capture_output=True, text=True, timeout=300)


def check(name, cond, detail=""):
    print(("ok   " if cond else "FAIL ") + name + (f"  ({detail})" if detail and not cond else ""))
    if not cond:
        failures.append(name)


def validate(name, text, schema):
    try:
        doc = json.loads(text)
        jsonschema.validate(doc, json.loads((SCHEMAS / f"{schema}.schema.json").read_text()))
        check(name, True)
        return doc
    except (json.JSONDecodeError, jsonschema.ValidationError) as e:
        check(name, False, str(e).splitlines()[0])
        return None


def write(name, text):
    p = WORK / name
    p.write_text(text)
    return str(p)


shutil.rmtree(WORK, ignore_errors=True)
WORK.mkdir(parents=True)

path_a = write("a.struct", "part a t\npart b t\npart c t\nrel a b e\nrel b c e\n")
path_b = write("b.struct", "part z t\npart y t\npart x t\nrel z x e\nrel x y e\n")
cycle = write("c.struct", "part a t\npart b t\npart c t\nrel a b e\nrel b c e\nrel c a e\n")
broken = write("bad.struct", "part a t\nrel a nowhere e\n")

r = run("iso", path_a, path_b)
check("iso of relabelled paths exits 0", r.returncode == 0, r.stderr)
doc = validate("iso report matches schema", r.stdout, "iso")
if doc:
    check("iso witness covers every part", len(doc["witness"]) == 3)
r = run("iso", cycle, path_a)
check("iso cycle vs path exits 1", r.returncode == 1, r.stderr)
validate("negative iso report matches schema", r.stdout, "iso")
r = run("iso", broken, path_a)
check("malformed .struct exits 2", r.returncode == 2, r.stderr)
check("parse error names the line", "line 2" in r.stderr, r.stderr)
check("missing file exits 2", run("iso", str(WORK / "nope.struct"), path_a).returncode == 2)
check("unknown subcommand exits 2", run("frobnicate").returncode == 2)

# derive: sidecar with blocks and a mask
sidecar = write("a.sidecar", "block a b\nblock c\nmask drop-attr count\n")
r = run("derive", path_a, sidecar)
check("derive with a sidecar exits 0", r.returncode == 0, r.stderr)
check("derived quotient has two parts", r.stdout.count("part ") == 2, r.stdout)
r = run("derive", path_a)
check("derive without a sidecar lists partitions", r.returncode == 0 and "partitions" in json.loads(r.stdout))

# analyze: a blank image and a triangle
blank = write("blank.pbm", "P1\n4 3\n" + "0 0 0 0\n" * 3)
r = run("analyze", blank)
doc = validate("blank analysis matches schema", r.stdout, "analysis")
if doc:
    check("blank image is one region", len(doc["blocks"]) == 1)
    check("blank image has no chains", doc["chains"] == [])
check("blank image is not a polygon (exit 1)", r.returncode == 1, r.stderr)

demo = WORK / "demo"
r = run("--seed", "42", "--out", str(demo), "demo-polygons")
check("demo-polygons exits 0", r.returncode == 0, r.stdout + r.stderr)
doc = validate("corpus report matches schema", (demo / "report.json").read_text(), "corpus")
if doc:
    check("corpus has 60 items", doc["summary"]["items"] == 60)
    first = next(demo.glob("eq-triangle-*-s1.pbm"))
    r = run("analyze", str(first))
    doc = validate("triangle analysis matches schema", r.stdout, "analysis")
    check("triangle analysis exits 0", r.returncode == 0, r.stderr)
    if doc:
        fired = {s["subject"] for s in doc["signatures"] if s["fired"]}
        check("triangle signature fires", fired == {"triangle", "regular-polygon"}, str(fired))
        whole = {a["feature"]: a for a in doc["assertions"] if a["target"] == "whole"}
        check("triangle has side-count 3", whole["side-count"]["value"] == 3)
        check("triangle is closed", whole["is-closed-cycle"]["score"] == 1)
    firings = []
    for scale in (1, 3):
        hexagon = next(demo.glob(f"hexagon-0-*-s{scale}.pbm"))
        doc = json.loads(run("analyze", str(hexagon)).stdout)
        firings.append(sorted(s["subject"] for s in doc["signatures"] if s["fired"]))
    check("hexagon fires the same signatures at two scales", firings[0] == firings[1] == ["hexagon", "regular-polygon"],
          str(firings))

# mine: planted log
lines = []
for k in range(60):
    t = 20 * (k + 1)
    lines.append(f"t={t} subj=A score=0.9")
    lines.append(f"t={t + 2} subj=X score=0.9")
log = write("planted.log", "\n".join(lines) + "\n")
r = run("mine", log)
check("mine exits 0 with rules", r.returncode == 0, r.stderr)
doc = validate("rules report matches schema", r.stdout, "rules")
if doc:
    check("planted rule ranked first", doc["rules"][0]["name"] == "A => X", doc["rules"][0]["name"])
r = run("mine", write("bad.log", "t=1 subj=A score=7\n"))
check("bad log exits 2", r.returncode == 2, r.stderr)

# solve: a tiny fact problem, an unsolvable one and a malformed one
problem = {
    "start": {"facts": ["hungry"]},
    "goal": [{"subject": "nourished"}],
    "productions": [{"name": "eat", "guard": [{"subject": "hungry"}], "add": ["nourished"], "remove": ["hungry"]}],
}
r = run("solve", write("p.json", json.dumps(problem)))
check("solvable problem exits 0", r.returncode == 0, r.stderr)
doc = validate("plan report matches schema", r.stdout, "plan")
if doc:
    check("plan is [eat]", doc["plan"] == ["eat"], str(doc["plan"]))
trivial = dict(problem, goal=[{"subject": "hungry"}])
r = run("solve", write("t.json", json.dumps(trivial)))
check("start satisfying the goal gives an empty plan", r.returncode == 0 and json.loads(r.stdout)["plan"] == [])
problem["productions"][0]["guard"] = [{"subject": "nourished"}]
r = run("solve", write("q.json", json.dumps(problem)))
check("unsolvable problem exits 1", r.returncode == 1, r.stderr)
validate("unsolvable plan report matches schema", r.stdout, "plan")
problem["goal"] = [{"subject": "flying"}]
check("unknown goal subject exits 2", run("solve", write("u.json", json.dumps(problem))).returncode == 2)
check("malformed JSON exits 2", run("solve", write("m.json", "{")).returncode == 2)

blocks = {
    "start": {"struct": "oriented\npart table table\npart b1 red length=2\npart b2 blue length=3\n"
                        "rel b1 table on\nrel b2 b1 on\n"},
    "goal": [{"subject": "red-on-blue"}],
    "productions": [{"builtin": "move-block"}],
    "subjects": [{"id": "red-on-blue", "pattern": "oriented\npart x red\npart y blue\nrel x y on\n",
                  "drop_attrs": ["length"]}],
}
r = run("solve", write("blocks.json", json.dumps(blocks)))
check("block problem exits 0", r.returncode == 0, r.stderr)
doc = validate("block plan matches schema", r.stdout, "plan")
if doc:
    check("block plan", doc["plan"] == ["move(b2,table)", "move(b1,b2)"], str(doc["plan"]))

print(f"{len(failures)} failure(s)")
sys.exit(1 if failures else 0)
