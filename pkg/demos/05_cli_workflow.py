"""
The end-to-end workflow, driven through the command line
========================================================

generate -> evaluate (baseline) -> fit (on the labeled split) -> apply (to the
holdout) -> evaluate (repaired).  Every step reads and writes plain CSV/JSON,
so the same flow works from a shell; this script drives the CLI entry point
in-process and prints what lands on disk.
"""

import json
import tempfile
from pathlib import Path

from fairrepair.cli import main

out = Path(tempfile.mkdtemp(prefix="fairrepair-demo-"))
print("working in", out)

##############################################################################
# 1. Synthesize a 4-group dataset from the bundled joint spec and split it.

assert main(["generate", "--output", str(out / "credit"), "--n", "8000", "--seed", "1"]) == 0
print("\nwrote:", *[p.name for p in sorted(out.iterdir())], sep="\n  ")

##############################################################################
# 2. Baseline disparity on the holdout: selection rate and TPR.

assert main([
    "evaluate", "--input", str(out / "credit_holdout.csv"), "--output", str(out / "before.json"),
    "--metric", "pr:1,tpr:1", "--domain", "0:100", "--grid", "1001",
]) == 0
before = json.loads((out / "before.json").read_text())
for rep in before["reports"]:
    print(f"baseline {rep['metric']}: mean pairwise gap {rep['expected_gap']:.4f}"
          f"  worst threshold gap {rep['max_gap']:.3f}")

##############################################################################
# 3. Fit a lexicographically fair repair vector for TPR on the labeled split.

assert main([
    "fit", "--input", str(out / "credit_labeled.csv"), "--output", str(out / "plan.json"),
    "--solver", "lex", "--metric", "tpr", "--domain", "0:100",
]) == 0
solution = json.loads((out / "plan.json.solution.json").read_text())
print("\nsolved lambdas:", {g: round(l, 3) for g, l in solution["lambdas"].items()})

##############################################################################
# 4. Apply the plan to the holdout and re-evaluate.

assert main([
    "apply", "--input", str(out / "credit_holdout.csv"), "--plan", str(out / "plan.json"),
    "--output", str(out / "repaired.csv"),
]) == 0
assert main([
    "evaluate", "--input", str(out / "repaired.csv"), "--output", str(out / "after.json"),
    "--metric", "pr:1,tpr:1", "--domain", "0:100", "--grid", "1001",
]) == 0
after = json.loads((out / "after.json").read_text())
for b, a in zip(before["reports"], after["reports"]):
    print(f"{a['metric']}: gap {b['expected_gap']:.4f} -> {a['expected_gap']:.4f}")

##############################################################################
# 5. The lambda-sweep command (two-group data) emits the convex objective
#    curve as plot data.

two_group = {
    "domain": {"lo": 0.0, "hi": 1.0},
    "groups": [{"name": "a", "proportion": 0.45}, {"name": "b", "proportion": 0.55}],
    "score_support": [round(0.05 + 0.1 * i, 2) for i in range(10)],
    "score_pmf": {
        "a": [0.16, 0.16, 0.16, 0.13, 0.11, 0.09, 0.07, 0.05, 0.04, 0.03],
        "b": [0.03, 0.04, 0.05, 0.07, 0.09, 0.11, 0.13, 0.16, 0.16, 0.16],
    },
    "label1_prob": {
        "a": [0.05, 0.1, 0.2, 0.35, 0.5, 0.65, 0.8, 0.9, 0.95, 0.98],
        "b": [0.02, 0.05, 0.1, 0.2, 0.3, 0.45, 0.6, 0.7, 0.8, 0.9],
    },
}
(out / "two_group_spec.json").write_text(json.dumps(two_group))
assert main([
    "generate", "--spec", str(out / "two_group_spec.json"),
    "--output", str(out / "duo"), "--n", "2000", "--seed", "4",
]) == 0
assert main([
    "lambda-sweep", "--input", str(out / "duo_labeled.csv"), "--output", str(out / "sweep.csv"),
    "--metric", "tpr", "--steps", "21",
]) == 0
print("\nlambda sweep written to", out / "sweep.csv")
for line in (out / "sweep.csv").read_text().splitlines()[:4]:
    print(" ", line)
