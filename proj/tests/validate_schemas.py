"""Run each CLI subcommand and validate its stdout against the shipped schemas."""

import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema
from referencing import Registry, Resource

EXAMPLE = {
    "measure": {"breaks": [0, 0.8660254037844386], "values": [0.99]},
    "open_set": {"components": [[-1, 1]]},
}


def main(tool: str, schema_dir: str) -> int:
    schemas = {}
    for path in pathlib.Path(schema_dir).glob("*.schema.json"):
        schemas[path.name] = json.loads(path.read_text())
    registry = Registry().with_resources(
        (name, Resource.from_contents(body)) for name, body in schemas.items()
    )

    work = pathlib.Path(tempfile.mkdtemp(prefix="stefan1d_schema_"))

    def dump(name, obj):
        p = work / name
        p.write_text(json.dumps(obj))
        return str(p)

    solve_in = dump("solve.json", EXAMPLE)
    order_in = dump("order.json", {
        "mu": {"breaks": [-0.5, 0.5], "values": [1]},
        "nu": {"breaks": [-1, -0.5, 0.5, 1], "values": [1, 0, 1]},
        "open_set": {"components": [[-1, 0], [0, 1]]},
    })
    sim_in = dump("sim.json", dict(EXAMPLE, config={"n_particles": 1000, "seed": 5}))

    cases = [
        (["solve", "--input", solve_in], "solution.schema.json"),
        (["order", "--input", order_in], "certificate.schema.json"),
        (["potential", "--input", solve_in], "potential.schema.json"),
        (["simulate", "--input", sim_in], "run_report.schema.json"),
        (["stability", "--family", "lipschitz"], "stability.schema.json"),
        (["stability", "--family", "monotone"], "stability.schema.json"),
        (["stability", "--family", "weak"], "stability.schema.json"),
        (["repro", "--json"], "repro_manifest.schema.json"),
    ]
    # The input files themselves follow the measure and open-set schemas.
    inputs = [
        (EXAMPLE["measure"], "measure.schema.json"),
        (EXAMPLE["open_set"], "open_set.schema.json"),
    ]

    failures = 0
    for args, schema in cases:
        proc = subprocess.run([tool, *args], capture_output=True, text=True)
        label = " ".join(args[:3])
        if proc.returncode != 0:
            print(f"FAIL {label}: exit {proc.returncode}: {proc.stderr.strip()}")
            failures += 1
            continue
        try:
            doc = json.loads(proc.stdout)
            jsonschema.Draft202012Validator(schemas[schema], registry=registry).validate(doc)
            print(f"ok   {label} -> {schema}")
        except (json.JSONDecodeError, jsonschema.ValidationError) as e:
            print(f"FAIL {label}: {e}")
            failures += 1
    for doc, schema in inputs:
        try:
            jsonschema.Draft202012Validator(schemas[schema], registry=registry).validate(doc)
            print(f"ok   input -> {schema}")
        except jsonschema.ValidationError as e:
            print(f"FAIL input {schema}: {e}")
            failures += 1
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1], sys.argv[2]))
