"""Runs a handful of CLI commands and validates their JSON against the output schema."""
import json
import subprocess
import sys

import jsonschema

cli, schema_path = sys.argv[1], sys.argv[2]
with open(schema_path) as f:
    schema = json.load(f)
defs = schema["$defs"]


def sub(name):
    return {"$ref": f"#/$defs/{name}", "$defs": defs}


def run(*args):
    out = subprocess.run([cli, *args], check=True, capture_output=True, text=True).stdout
    doc = json.loads(out)
    jsonschema.validate(doc, schema)
    return doc["results"]


cases = [
    (("gap-exact", "--model", "zero-range", "--g", "identity", "--N", "2", "--omega-range", "1:3"), "gap_record"),
    (("gap-exact", "--model", "simple-average", "--graph", "lattice", "--d", "2", "--N", "2", "--omega", "2"), "gap_record"),
    (("gap-galerkin", "--model", "kac", "--N", "3", "--degree", "4"), "galerkin_record"),
    (("gap-galerkin", "--model", "gamma-exchange", "--gamma", "2", "--N", "3", "--degree", "4"), "galerkin_record"),
    (("bounds", "--lambda3", "4/9", "--lambda2", "1", "--d", "1"), "bound_chain"),
    (("gap-mc", "--model", "zero-range", "--N", "3", "--omega", "2", "--T", "2000"), "mc_record"),
]
failures = 0
for args, kind in cases:
    try:
        for rec in run(*args):
            jsonschema.validate(rec, sub(kind))
        print("ok  ", " ".join(args))
    except (jsonschema.ValidationError, subprocess.CalledProcessError, json.JSONDecodeError) as e:
        failures += 1
        print("FAIL", " ".join(args), "->", str(e).splitlines()[0])

for args in [("graph", "--graph", "lattice", "--d", "2", "--N", "3"), ("kernel", "--g", "identity", "--n-max", "10"),
             ("two-site", "--model", "kac", "--n-max", "8"), ("audit", "--omega", "2", "--draws", "5")]:
    try:
        run(*args)
        print("ok  ", " ".join(args))
    except (jsonschema.ValidationError, subprocess.CalledProcessError, json.JSONDecodeError) as e:
        failures += 1
        print("FAIL", " ".join(args), "->", str(e).splitlines()[0])

exit_codes = [
    (("gap-exact", "--model", "zero-range", "--omega", "1", "--bogus"), 2),
    (("gap-exact", "--model", "kac", "--omega", "1"), 2),
    (("gap-exact", "--model", "zero-range", "--g", "nope", "--omega", "1"), 2),
    (("bounds", "--lambda3", "1/3", "--lambda2", "1"), 1),
    (("bounds", "--lambda3", "4/9", "--lambda2", "1"), 0),
    (("--help",), 0),
]
for args, expected in exit_codes:
    code = subprocess.run([cli, *args], capture_output=True).returncode
    if code != expected:
        failures += 1
        print("FAIL", " ".join(args), f"-> exit {code}, expected {expected}")
    else:
        print("ok  ", " ".join(args), f"-> exit {code}")

csv = subprocess.run([cli, "gap-exact", "--model", "zero-range", "--N", "2", "--omega-range", "1:2", "--format", "csv"],
                     check=True, capture_output=True, text=True).stdout.splitlines()
if csv[0] != "model,graph.kind,graph.d,graph.N,omega,gap,kappa,dim,method" or len(csv) != 3:
    failures += 1
    print("FAIL csv layout", csv[:1])
else:
    print("ok   csv layout")

sys.exit(1 if failures else 0)
