"""End-to-end checks of the ltlab command line: exit codes, CSV layout,
report schema, byte determinism and fault injection.

usage: cli_checks.py LTLAB_BINARY SOURCE_DIR SCRATCH_DIR
"""
import csv
import io
import json
import math
import os
import shutil
import subprocess
import sys

try:
    import jsonschema
except ImportError:  # schema validation is skipped, everything else runs
    jsonschema = None

BIN, SRC, SCRATCH = sys.argv[1:4]
FIX = os.path.join(SRC, "fixtures")
REPORT_SCHEMA = json.load(open(os.path.join(SRC, "schemas", "report.schema.json")))
CONFIG_SCHEMA = json.load(open(os.path.join(SRC, "schemas", "config.schema.json")))
failures = []


def run(*args, env=None):
    e = dict(os.environ)
    e.pop("LTLAB_BUDGET", None)
    e.update(env or {})
    p = subprocess.run([BIN, *args], capture_output=True, text=True, env=e)
    return p.returncode, p.stdout, p.stderr


def check(cond, what):
    print(("ok   " if cond else "FAIL ") + what)
    if not cond:
        failures.append(what)


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def out_dir(name):
    d = os.path.join(SCRATCH, name)
    shutil.rmtree(d, ignore_errors=True)
    return d


def valid_report(path):
    doc = json.load(open(path))
    if jsonschema is not None:
        try:
            jsonschema.validate(doc, REPORT_SCHEMA)
        except jsonschema.ValidationError as e:
            check(False, f"{path} validates: {e.message}")
            return doc
    check(True, f"{os.path.basename(path)} validates against the report schema")
    return doc


def fixture(name):
    return os.path.join(FIX, name)


# fixtures themselves are schema-valid
if jsonschema is not None:
    for f in sorted(os.listdir(FIX)):
        jsonschema.validate(json.load(open(fixture(f))), CONFIG_SCHEMA)
    check(True, "fixtures validate against the config schema")

# constants
rc, out, _ = run("constants", "--d-min", "1", "--d-max", "3")
r = rows(out)
check(rc == 0 and len(r) == 3, "constants d=1..3 gives 3 rows")
check(all(float(x["duality_residual"]) < 1e-12 for x in r), "constants duality residual < 1e-12")
check(list(r[0].keys()) == ["d", "q", "mu", "k_sc", "l_sc", "rho0", "kinetic_density", "duality_residual"],
      "constants header")
rc, out, _ = run("constants", "--d-min", "3", "--d-max", "2")
check(rc == 0 and out.strip().count("\n") == 0, "empty range: header only, exit 0")
rc, _, _ = run("constants", "--q-min", "0", "--q-max", "0")
check(rc == 2, "q=0 exits 2")
rc, _, _ = run("constants", "--d-max", "notanumber")
check(rc == 2, "malformed flag exits 2")
rc, _, _ = run("--help")
check(rc == 0, "--help exits 0")

# response
rc, out, _ = run("response", "--fn", "psi", "--d", "3", "--k", "0", "--k", "1", "--k", "2", "--k", "3")
r = rows(out)
check(rc == 0 and len(r) == 4, "psi d=3 gives 4 rows")
check(abs(float(r[0]["value"]) - 1 / (8 * math.pi ** 2)) < 1e-8, "psi_3(0) = 1/(8 pi^2)")
rc, out, _ = run("response", "--fn", "psi", "--d", "1", "--k", "1", "--k", "2")
r = rows(out)
check(rc == 0 and r[1]["flag"] == "log_divergence", "psi d=1 at k=2 is flagged, exit 0")
rc, out, _ = run("response", "--fn", "phi", "--d", "3", "--k", "0")
check(rc == 0 and abs(float(rows(out)[0]["value"]) - math.pi ** 2) < 1e-6, "phi_3(0) = pi^2")
rc, _, _ = run("response", "--fn", "phi", "--d", "0", "--k", "0")
check(rc == 2, "phi with d=0 exits 2")
rc, _, _ = run("response", "--fn", "weight1d", "--d", "2", "--k", "1")
check(rc == 2, "weight1d with d=2 exits 2")
d = out_dir("response")
rc, _, _ = run("--out", d, "response", "--fn", "phi", "--d", "2", "--k-count", "5")
plot = open(os.path.join(d, "phi_d2.dat")).read().splitlines()
check(rc == 0 and len(plot) == 6 and all(len(l.split()) == 2 for l in plot[1:]), "two-column plot file")

# CSV numbers re-parse to the same doubles
with open(os.path.join(d, "phi_d2.csv")) as f:
    vals = [row["value"] for row in csv.DictReader(f)]
check(all(repr(float(v)) == v or float(repr(float(v))) == float(v) for v in vals), "CSV numbers round-trip")

# box-run
d = out_dir("box_zero")
rc, _, _ = run("--config", fixture("zero_potential.json"), "--out", d, "box-run")
rep = valid_report(os.path.join(d, "box_report.json"))
check(rc == 0 and rep["results"]["relative_energy"] == 0.0, "V=0 box-run: E_rel = 0")
check(all(a["pass"] for a in rep["assertions"]), "V=0 box-run: all checks pass")

d = out_dir("box_cos")
rc, _, _ = run("--config", fixture("cosine_d1.json"), "--out", d, "box-run")
rep = valid_report(os.path.join(d, "box_report.json"))
res = rep["results"]
check(rc == 0 and res["relative_energy"] < 0, "cosine fixture: E_rel < 0")
check(res["trace_relation"]["deviation"] <= 1e-9, "cosine fixture: trace relation <= 1e-9")
check("expanded_potential" in rep["config"], "config echo carries the expanded Fourier modes")
dens = rows(open(os.path.join(d, "density.csv")).read())
check(list(dens[0].keys()) == ["x", "rho_Q"] and len(dens) > 10, "density CSV written")

rc2, _, _ = run("--config", fixture("cosine_d1.json"), "--out", d + "_again", "box-run")
same = open(os.path.join(d, "box_report.json"), "rb").read() == open(
    os.path.join(d + "_again", "box_report.json"), "rb").read()
check(rc2 == 0 and same, "box-run report is byte-identical across runs")

rc, _, err = run("--strict", "--config", fixture("degenerate_d1.json"), "box-run")
check(rc == 4, "degenerate config in strict mode exits 4")
rc, out, _ = run("--config", fixture("degenerate_d1.json"), "box-run")
check(rc == 0 and json.loads(out)["results"]["degenerate"] is True, "degenerate config is flagged without --strict")

tmp = os.path.join(SCRATCH, "tight_cutoff.json")
os.makedirs(SCRATCH, exist_ok=True)
cfg = json.load(open(fixture("cosine_d1.json")))
cfg["box"]["n_max"] = 2
json.dump(cfg, open(tmp, "w"))
rc, _, _ = run("--config", tmp, "box-run")
check(rc == 3, "insufficient cutoff exits 3")
rc, _, _ = run("--config", fixture("modes_d2.json"), "box-run", env={"LTLAB_BUDGET": "20"})
check(rc == 3, "LTLAB_BUDGET below the basis size exits 3")

cfg = json.load(open(fixture("cosine_d1.json")))
cfg["physics"]["spin"] = 2
json.dump(cfg, open(tmp, "w"))
rc, _, _ = run("--config", tmp, "box-run")
check(rc == 2, "unknown config field exits 2")
open(tmp, "w").write("{ not json")
rc, _, _ = run("--config", tmp, "box-run")
check(rc == 2, "unparsable config exits 2")
rc, _, _ = run("--config", os.path.join(SCRATCH, "missing.json"), "box-run")
check(rc == 2, "missing config exits 2")

# sweeps
d = out_dir("thermo")
rc, _, _ = run("--config", fixture("thermo_d1.json"), "--out", d, "--jobs", "2", "sweep")
t = rows(open(os.path.join(d, "thermo_sweep.csv")).read())
gaps = [float(x["gap"]) for x in t[1:]]
check(rc == 0 and len(gaps) == 3 and all(b < a for a, b in zip(gaps, gaps[1:])), "thermo: decreasing gaps")
valid_report(os.path.join(d, "thermo_sweep_report.json"))
d1 = out_dir("thermo_serial")
run("--config", fixture("thermo_d1.json"), "--out", d1, "--jobs", "1", "sweep")
check(open(os.path.join(d, "thermo_sweep.csv")).read() == open(os.path.join(d1, "thermo_sweep.csv")).read(),
      "thermo sweep CSV independent of --jobs")

verdicts = {}
for dim in (1, 2):
    d = out_dir(f"peierls{dim}")
    rc, _, _ = run("--config", fixture(f"peierls_d{dim}.json"), "--out", d, "sweep")
    rep = valid_report(os.path.join(d, "peierls_sweep_report.json"))
    verdicts[dim] = rep["results"]["summary"]["verdict"]
    check(rc == 0, f"peierls d={dim} exits 0")
check(verdicts == {1: "divergent", 2: "bounded"}, "peierls verdicts: d=1 divergent, d=2 bounded")

d = out_dir("rumin3")
rc, _, _ = run("--config", fixture("rumin_d3.json"), "--out", d, "sweep")
s = valid_report(os.path.join(d, "rumin_sweep_report.json"))["results"]["summary"]
check(rc == 0 and 0 < s["khat"] <= s["k_sc"], "rumin d=3: 0 < khat <= K_sc")
check(abs(s["small_rho_ratio"] / s["small_rho_coefficient"] - 1) < 0.01, "rumin d=3: small-density ratio")
check(abs(s["large_rho_ratio"] / s["large_rho_coefficient"] - 1) < 0.01, "rumin d=3: large-density ratio")

for name, kind in (("second_order_d1.json", "second-order"), ("li_yau_d1.json", "li-yau"),
                   ("cosine_d1_temperature.json", "temperature")):
    d = out_dir(kind)
    rc, _, _ = run("--config", fixture(name), "--out", d, "sweep")
    rep = valid_report(os.path.join(d, f"{kind}_sweep_report.json"))
    check(rc == 0 and all(a["pass"] for a in rep["assertions"]), f"{kind} sweep passes its checks")

rc, _, _ = run("--config", fixture("zero_potential.json"), "sweep", "--kind", "wobble")
check(rc == 2, "unknown sweep kind exits 2")

# rumin subcommand
d = out_dir("rumin_cmd")
rc, _, _ = run("--out", d, "rumin", "--d", "2")
rep = valid_report(os.path.join(d, "rumin_report.json"))
check(rc == 0 and abs(rep["results"]["khat"] - math.pi / 3) < 1e-3, "rumin d=2 khat")

# matrix oracle
d = out_dir("matrix")
rc, _, _ = run("--out", d, "--seed", "3", "matrix-oracle", "--pairs", "40")
rep = valid_report(os.path.join(d, "matrix_oracle_report.json"))
check(rc == 0 and all(a["pass"] for a in rep["assertions"]), "matrix-oracle passes")
rc, out_a, _ = run("--seed", "3", "matrix-oracle", "--pairs", "10")
rc, out_b, _ = run("--seed", "3", "matrix-oracle", "--pairs", "10")
check(out_a == out_b, "matrix-oracle deterministic for a fixed seed")

# fault injection: a corrupted constant must fail the suite
rc, out, _ = run("accept", "--inject-fault", "k_sc")
check(rc == 1 and "C01 FAIL" in out, "injected fault fails acceptance with exit 1")

print(f"{len(failures)} failure(s)")
sys.exit(1 if failures else 0)
