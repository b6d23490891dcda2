#!/usr/bin/env python3
"""End-to-end checks of the qudit command-line tool."""

import json
import os
import subprocess
import sys
import tempfile

QUDIT = sys.argv[1]
failures = []


def run(*args, expect=0):
    proc = subprocess.run([QUDIT, *args], capture_output=True, text=True)
    if proc.returncode != expect:
        failures.append(f"{' '.join(args)}: exit {proc.returncode}, wanted {expect}\n{proc.stderr}")
    return proc


def check(cond, what):
    if not cond:
        failures.append(what)


with tempfile.TemporaryDirectory() as tmp:
    p = lambda name: os.path.join(tmp, name)

    out = run("decompose", "--gate", "H3").stdout
    check("# verified: yes" in out, "H3 decomposition not verified")

    out = run("decompose", "--identity", "--dim", "5").stdout
    body = [l for l in out.splitlines() if l and not l.startswith("#")]
    check(body == ["dims: 5", "logical: 5"], f"identity circuit not empty: {body}")

    run("decompose", "--gate", "CINC", "--dim", "3", "--out", p("cinc3.qc"), "--report", p("r.json"))
    report = json.load(open(p("r.json")))
    check(report["verified"], "CINC3 decomposition not verified")
    check(report["resources"]["ms_pi_half_equivalents"] == 4.0, "CINC3 entangling count")

    summary = json.loads(run("run", "--circuit", p("cinc3.qc"), "--input", "2,0", "--shots", "1").stdout)
    check(summary["histogram"] == [{"count": 1, "outcome": [2, 1]}], f"CINC |2,0>: {summary['histogram']}")

    # Round trip: the emitted circuit re-parses and runs from stdout as well.
    with open(p("h5.qc"), "w") as f:
        f.write(run("decompose", "--gate", "H5", "--physical", "--graph", "native").stdout)
    run("run", "--circuit", p("h5.qc"), "--shots", "10")

    fit = json.loads(run("rb", "--dim", "3", "--lengths", "1,5,10,20", "--noise", "p=2e-4",
                         "--shots", "10000").stdout)
    check(0.99 < fit["fit"]["p"] < 1.0, f"rb p = {fit['fit']['p']}")
    check(abs(fit["error_per_pulse"] / 2e-4 - 1) < 0.15, f"rb error per pulse {fit['error_per_pulse']}")
    check("mean_pulses_per_clifford" in fit, "rb pulse stats missing")

    tomo = json.loads(run("tomo", "state", "--target", "(|0>+|1>+|2>)/sqrt(3)", "--shots", "1000").stdout)
    check(tomo["fidelity"] > 0.99, f"tomo fidelity {tomo['fidelity']}")
    check(tomo["bootstrap"]["lower"] <= tomo["fidelity"] <= tomo["bootstrap"]["upper"], "bootstrap interval")

    # Determinism under a fixed seed, including written files.
    for d in ("a", "b"):
        run("run", "--circuit", p("cinc3.qc"), "--input", "2,0", "--shots", "200", "--seed", "9",
            "--noise", "p=1e-2", "--out", p(d))
        run("tomo", "process", "--target", "T3", "--shots", "300", "--bootstrap", "3", "--out", p("t" + d))
        run("stark", "--tones=-3e6,-1e6", "--out", p("s" + d))
    for a, b in (("a", "b"), ("ta", "tb"), ("sa", "sb")):
        for name in os.listdir(p(a)):
            check(open(os.path.join(p(a), name)).read() == open(os.path.join(p(b), name)).read(),
                  f"{name} differs between seeded runs")

    # Error paths and exit codes.
    with open(p("bad.qc"), "w") as f:
        f.write("dims: 3\nR 0 0 1 pi\n")
    err = run("run", "--circuit", p("bad.qc"), expect=3).stderr
    check(json.loads(err)["message"].find("line 2") >= 0, "parse error lacks line number")
    run("run", "--circuit", p("missing.qc"), expect=4)
    with open(p("noise.json"), "w") as f:
        json.dump({"schema_version": 1, "pulse_depolarizing": 0.1, "bogus": 1}, f)
    run("rb", "--noise", p("noise.json"), expect=3)
    run("rb", "--dim", "4", expect=6)
    run("stark", "--tones", "0", "--levels", "0,1", expect=6)
    run("rb", "--no-such-flag", expect=2)

if failures:
    print("\n".join(failures))
    sys.exit(1)
print("cli: all checks passed")
