#!/usr/bin/env python3
"""End-to-end checks of the fneumann command line tool.

Usage: cli_cases.py <fneumann binary> <schema dir> <case>
"""

import csv
import io
import json
import os
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema
from referencing import Registry, Resource

BINARY = sys.argv[1]
SCHEMAS = Path(sys.argv[2])


def registry():
    resources = []
    for path in SCHEMAS.glob("*.json"):
        doc = json.loads(path.read_text())
        if "$schema" in doc:
            resources.append((path.name, Resource.from_contents(doc)))
    return Registry().with_resources(resources)


REGISTRY = registry()


def run(*args, env=None):
    full_env = dict(os.environ)
    if env:
        full_env.update(env)
    result = subprocess.run([BINARY, *args], capture_output=True, env=full_env, timeout=900)
    result.stdout = result.stdout.decode()
    result.stderr = result.stderr.decode()
    return result


def expect_code(result, code):
    if result.returncode != code:
        raise AssertionError(
            f"exit {result.returncode}, expected {code}\nstdout:\n{result.stdout}\nstderr:\n{result.stderr}")


def report(result, schema):
    doc = json.loads(result.stdout)
    validator = jsonschema.Draft202012Validator(
        json.loads((SCHEMAS / schema).read_text()), registry=REGISTRY)
    validator.validate(doc)
    return doc


def check(cond, message):
    if not cond:
        raise AssertionError(message)


def csv_header(name):
    return json.loads((SCHEMAS / "csv_headers.json").read_text())[name]["header"]


def case_symbol_trivial_zeros():
    r = run("symbol", "--s", "0.5", "--beta", "0", "--which", "f")
    expect_code(r, 0)
    doc = report(r, "symbol.json")
    check(doc["modulus"] == 0.0 and "exact zero" in doc["note"], doc)
    r = run("symbol", "--s", "0.75", "--beta", "0.5", "--which", "f")
    expect_code(r, 0)
    check(report(r, "symbol.json")["modulus"] <= 1e-12, r.stdout)


def case_symbol_half_root():
    r = run("symbol", "--s", "0.5", "--beta", "1.193292+0.4406488i", "--which", "f")
    expect_code(r, 0)
    check(report(r, "symbol.json")["modulus"] <= 1e-4, r.stdout)


def case_symbol_all_kinds():
    for which in ["f", "g", "F", "f1", "f2", "C"]:
        r = run("symbol", "--s", "0.3", "--beta", "0.2-0.7i", "--which", which)
        expect_code(r, 0)
        doc = report(r, "symbol.json")
        check(doc["which"] == which and doc["beta"] == {"re": 0.2, "im": -0.7}, r.stdout)
        re, im = doc["value"]["re"], doc["value"]["im"]
        check(abs(complex(doc["value_text"].replace("i", "j")) - complex(re, im)) <= 1e-14 * max(1.0, abs(complex(re, im))),
              r.stdout)


def case_symbol_pole():
    r = run("symbol", "--s", "0.4", "--beta", "0.8", "--which", "f")
    expect_code(r, 2)
    doc = report(r, "symbol.json")
    check(doc["pole"] is True and doc["value"] is None, r.stdout)


def case_symbol_usage():
    for beta in ["1+2", "1 + 2i", "abc", "2i+1"]:
        r = run("symbol", "--s", "0.5", "--beta", beta)
        expect_code(r, 1)
        check(r.stderr.strip() != "", f"no message for {beta!r}")
    expect_code(run("symbol", "--s", "1.2", "--beta", "0"), 1)
    expect_code(run("symbol", "--s", "0.5", "--beta", "0", "--which", "h"), 1)
    expect_code(run("no-such-command"), 1)


def case_b0_curve():
    r = run("b0-curve", "--s", "0.05:0.95:0.05")
    expect_code(r, 0)
    check(r.stdout.endswith("\r\n"), "CSV rows end with CRLF")
    rows = list(csv.reader(io.StringIO(r.stdout, newline="")))
    check(rows[0] == csv_header("b0-curve"), rows[0])
    data = [dict(zip(rows[0], row)) for row in rows[1:]]
    check(len(data) == 19, len(data))
    by_s = {round(float(row["s"]), 6): row for row in data}
    half = by_s[0.5]
    check(abs(float(half["B0"]) - 1.19329) <= 1e-5, half)
    check(float(half["lower_theory"]) == 1.0 and float(half["upper_theory"]) == 1.5, half)
    check(half["within_theory"] == "true", half)
    check(float(by_s[0.95]["B0"]) < 1.90, by_s[0.95])
    check(float(by_s[0.05]["B0"]) < 0.55, by_s[0.05])
    check(all(row["status"] == "ok" for row in data), "status column")
    check([float(row["s"]) for row in data] == sorted(float(row["s"]) for row in data), "rows sorted by s")


def case_b0_curve_deterministic():
    outputs = set()
    for workers in ["1", "3", "8"]:
        r = run("b0-curve", "--s", "0.1:0.9:0.1", env={"FNEUMANN_WORKERS": workers})
        expect_code(r, 0)
        outputs.add(r.stdout)
    check(len(outputs) == 1, "output depends on worker count")
    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "curve.csv"
        expect_code(run("b0-curve", "--s", "0.1:0.9:0.1", "--out", str(path)), 0)
        check(path.read_bytes() == next(iter(outputs)).encode(), "file output differs from stdout")


def case_b0_curve_usage():
    expect_code(run("b0-curve", "--s", "0.01:0.5:0.1"), 1)
    expect_code(run("b0-curve", "--s", "0.1:0.5:-0.1"), 1)
    expect_code(run("b0-curve", "--s", "0.1:0.5:0"), 1)


def case_certify_zero_free():
    r = run("certify", "--s", "0.3", "--re-min", "0.001", "--re-max", "0.62", "--im-min", "0.001")
    expect_code(r, 0)
    check(report(r, "certify.json")["verdict"] == "ZERO_FREE", r.stdout)


def case_certify_contains():
    r = run("certify", "--s", "0.7", "--re-min", "1.21", "--re-max", "1.69")
    expect_code(r, 0)
    doc = report(r, "certify.json")
    check(doc["verdict"].startswith("CONTAINS_ZEROS(") and doc["winding"] >= 1, r.stdout)


def case_certify_exclusions():
    r = run("certify", "--s", "0.5", "--re-min", "-0.5", "--re-max", "0.5", "--im-min", "0", "--im-max", "0.5",
            "--exclude-trivial")
    expect_code(r, 0)
    doc = report(r, "certify.json")
    check(len(doc["exclusions"]) >= 1 and doc["verdict"] == "ZERO_FREE", r.stdout)


def case_certify_usage():
    expect_code(run("certify", "--s", "0.3", "--re-min", "0.5", "--re-max", "0.5"), 1)
    expect_code(run("certify", "--s", "0.3", "--re-min", "0.1", "--re-max", "0.5", "--im-min", "0.4", "--im-max", "0.2"), 1)


def case_verify_kernel():
    r = run("verify", "--suite", "kernel", "--s", "0.5")
    expect_code(r, 0)
    doc = report(r, "verify.json")
    check(doc["passed"] and all(c["defect"] <= c["threshold"] for c in doc["checks"]), r.stdout)


def case_verify_mellin():
    r = run("verify", "--suite", "mellin", "--s", "0.3")
    expect_code(r, 0)
    doc = report(r, "verify.json")
    magic = [c for c in doc["checks"] if c["name"] == "operator_identity"]
    check(len(magic) == 1 and magic[0]["defect"] <= 1e-2, r.stdout)


def case_verify_symbols():
    r = run("verify", "--suite", "symbols", "--s", "0.65")
    expect_code(r, 0)
    doc = report(r, "verify.json")
    check({c["suite"] for c in doc["checks"]} == {"special", "symbols"}, r.stdout)


def case_verify_usage():
    expect_code(run("verify", "--suite", "nope", "--s", "0.3"), 1)


def case_solve_linear():
    with tempfile.TemporaryDirectory() as tmp:
        field = Path(tmp) / "field.csv"
        r = run("solve", "--s", "0.75", "--h", "linear", "--N", "512", "--field-out", str(field))
        expect_code(r, 0)
        doc = report(r, "solve.json")
        check(doc["fitted_exponent_left"] >= 1.15 and doc["fitted_exponent_right"] >= 1.15, r.stdout)
        check(doc["warnings"] == [], r.stdout)
        rows = list(csv.reader(field.open(newline="")))
        check(rows[0] == csv_header("solve-field"), rows[0])
        check(len(rows) == 513, len(rows))
        widths = sum(float(row[1]) for row in rows[1:])
        check(abs(widths - 1.0) <= 1e-12, widths)


def case_solve_resolution():
    r = run("solve", "--s", "0.5", "--N", "8")
    expect_code(r, 3)
    check("InsufficientResolution" in r.stderr, r.stderr)


def case_solve_projection():
    with tempfile.TemporaryDirectory() as tmp:
        source = Path(tmp) / "h.csv"
        source.write_text("x,h\n0,1\n0.5,2\n1,4\n")
        r = run("solve", "--s", "0.4", "--h", "custom-file", "--file", str(source), "--N", "64")
        expect_code(r, 0)
        doc = report(r, "solve.json")
        check("projected to mean-zero" in doc["warnings"], r.stdout)
    r = run("solve", "--s", "0.4", "--h", "sine", "--N", "64")
    expect_code(r, 0)
    check(report(r, "solve.json")["warnings"] == [], r.stdout)
    expect_code(run("solve", "--s", "0.4", "--h", "custom-file", "--N", "64"), 1)


def case_deterministic_json():
    commands = [
        ["symbol", "--s", "0.3", "--beta", "0.7+1.1i", "--which", "F"],
        ["certify", "--s", "0.7", "--re-min", "1.21", "--re-max", "1.69"],
        ["solve", "--s", "0.3", "--h", "sine", "--N", "128"],
    ]
    for args in commands:
        first = run(*args)
        second = run(*args, env={"FNEUMANN_WORKERS": "2"})
        check(first.stdout == second.stdout, f"{args} not reproducible")


def main():
    name = sys.argv[3]
    fn = globals().get("case_" + name)
    if fn is None:
        print(f"unknown case {name}", file=sys.stderr)
        return 2
    fn()
    print(f"{name}: ok")
    return 0


if __name__ == "__main__":
    sys.exit(main())
