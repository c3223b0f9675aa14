import csv
import io
import json
import pathlib
import subprocess
import sys

import jsonschema

cli, root = sys.argv[1], pathlib.Path(sys.argv[2])
schemas = {p.name.split(".")[0]: json.loads(p.read_text()) for p in (root / "schemas").glob("*.schema.json")}
cfg = root / "configs"
failures = 0


def run(*args):
    out = subprocess.run([cli, *map(str, args)], capture_output=True, text=True, check=True)
    return out.stdout


def check(name, doc, label):
    global failures
    try:
        jsonschema.validate(doc, schemas[name])
        print(f"ok   {label}")
    except jsonschema.ValidationError as e:
        failures += 1
        print(f"FAIL {label}: {e.message} at {list(e.absolute_path)}")


def header(text, want, label):
    global failures
    got = next(csv.reader(io.StringIO(text)))
    if got != want:
        failures += 1
        print(f"FAIL {label}: header {got}")
    else:
        print(f"ok   {label}")


for p in sorted(cfg.glob("*.json")):
    check("config", json.loads(p.read_text()), f"config {p.name}")
check("catalog", json.loads(run("catalog")), "catalog")
for name in ["double_well", "hip1", "triple_well", "two_well_2d"]:
    check("analyze", json.loads(run("analyze", cfg / f"{name}.json")), f"analyze {name}")
for name in ["double_well", "tilted_double_well", "two_well_2d"]:
    check("predict", json.loads(run("predict", cfg / f"{name}.json", "--h", 0.3)), f"predict {name}")
header(run("predict", cfg / "double_well.json", "--h", 0.3, "--format", "csv"),
       ["z_coordinate", "a_i", "f_at_z", "dnf", "det_tangential_hess"], "predict csv")
check("simulate", json.loads(run("simulate", cfg / "harmonic_tilted.json", "--h", 0.5, "--paths", 10000)),
      "simulate qsd")
check("simulate", json.loads(run("simulate", cfg / "two_well_2d.json", "--h", 0.3, "--paths", 500, "--start", "-1,0")),
      "simulate 2d")
header(run("simulate", cfg / "harmonic_tilted.json", "--h", 0.5, "--paths", 500, "--start", 0, "--format", "csv"),
       ["region", "lo", "hi", "count", "p", "ci_low", "ci_high"], "simulate csv")
check("spectrum", json.loads(run("spectrum", cfg / "double_well.json", "--h", 0.4)), "spectrum")
check("oracle", json.loads(run("oracle", cfg / "hip4.json", "--h", 0.05)), "oracle qsd")
check("oracle", json.loads(run("oracle", cfg / "double_well.json", "--h", 0.3, "--x", -1)), "oracle point")
check("compare", json.loads(run("compare", cfg / "double_well.json", "--h-list", "0.5,0.4", "--paths", 0,
                                "--format", "json")), "compare")
header(run("compare", cfg / "two_well_2d.json", "--h-list", "0.3", "--paths", 500),
       ["quantity", "h", "predicted", "measured", "uncertainty", "tolerance", "criterion", "verdict", "source"],
       "compare csv")
sys.exit(1 if failures else 0)
