"""Drive the command line from Python: a design query and a small analytic sweep."""
import subprocess
import sys
import tempfile
from pathlib import Path

import yaml

run = [sys.executable, "-m", "upblockade"]
subprocess.run(run + ["design", "--out", tempfile.mkdtemp()], check=True)

with tempfile.TemporaryDirectory() as tmp:
    cfg = Path(tmp, "run.yaml")
    cfg.write_text(yaml.safe_dump({
        "engine": "analytic",
        "params": {"gamma1": 0.4, "gamma2": 0.01},
        "grid": {"e1_range": [-2, 2], "e2_range": [-2, 2], "resolution": 41},
    }))
    out = Path(tmp, "sweep")
    code = subprocess.run(run + ["sweep", "--config", str(cfg), "--out", str(out)]).returncode
    print("exit code", code)
    for f in sorted(out.iterdir()):
        print(f.name, f.stat().st_size, "bytes")
    print(Path(out, "minima.csv").read_text())
