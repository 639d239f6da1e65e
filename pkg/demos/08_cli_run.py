"""Driving an experiment from a run configuration.

The same configuration file works for every subcommand; the experiment
table that matches the subcommand supplies its parameters.  Outputs land
in a directory named by the hash of the resolved configuration.
"""

import tempfile
from pathlib import Path

from ckdv.cli import load_config, run
from ckdv.records import read_jsonl, read_tsv

CONFIG = """
output_dir = "{out}"

[system]
preset = "majda-biello"
a2 = 1.0

[grid]
n_points = 256
length = 50.26548245743669

[initial_data]
profile = "sech2"
amplitude_u = 0.1
amplitude_v = 0.1

[acl-scan]
rho = 0.7
"""

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "run.toml"
    path.write_text(CONFIG.format(out=Path(tmp) / "runs"))
    outcome = run(load_config(path, experiment="acl-scan"))
    print(outcome.summary)
    print("files:", sorted(p.relative_to(outcome.run_dir).as_posix() for p in outcome.run_dir.rglob("*")))
    sigma, defect = read_tsv(outcome.run_dir / "curves" / "defect.tsv")
    for s, d in zip(sigma, defect):
        print(f"  sigma {s:.4f}  D {d:.3e}")
    print("record kinds:", [row["kind"] for row in read_jsonl(outcome.run_dir / "record.jsonl")])
