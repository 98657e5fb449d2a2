"""Sweep of the averaging half-window: the error curve has an interior minimum.

At one-hour steps on the 64 x 64 jet-and-mountain case the fastest gravity
wave turns through about six radians per step, so the unaveraged step (T = 0)
aliases the fast phases and its error grows quickly.  Averaging over a window
filters those phases, but too wide a window smooths real slow dynamics away.
In between sits an optimum, and it need not be the same for elevation and
velocity.

This demo exercises the command line interface end to end: `reference` builds
the fine unaveraged solution, then `sweep` runs one coarse averaged run per
half-window in the list and writes sweep.csv.  Ten model days; takes a minute
or two with eight workers.
"""

import csv
import tempfile
from pathlib import Path

from phaseswe import harness

base = Path(tempfile.mkdtemp(prefix="phaseswe_sweep_"))
ref_dir = base / "reference"
sweep_dir = base / "sweep"
cfg_path = base / "case.cfg"
cfg_path.write_text(
    "nx = 64\n"
    "ny = 64\n"
    "dt = 3600\n"
    "t_end = 864000\n"
    "snapshot_every = 86400\n"
    "ref_dt = 180\n"
    f"reference_path = {ref_dir}\n"
)
print("outputs under %s\n" % base)

rc = harness.main(["reference", "--config", str(cfg_path),
                   "--output", str(ref_dir)])
assert rc == 0, "reference run failed"

rc = harness.main(["sweep", "--config", str(cfg_path),
                   "--output", str(sweep_dir), "--workers", "8",
                   "--tlist", "0,1800,3600,7200,14400"])
assert rc == 0, "sweep failed"

with open(sweep_dir / "sweep.csv", newline="") as fh:
    rows = list(csv.DictReader(fh))

print("\n  %7s %4s %12s %12s" % ("T (h)", "M", "l2_eta", "l2_u"))
for row in rows:
    print("  %7.1f %4s %12.5f %12.5f"
          % (float(row["T_seconds"]) / 3600.0, row["M"],
             float(row["l2_eta"]), float(row["l2_u"])))

best_eta = min(rows, key=lambda r: float(r["l2_eta"]))
best_u = min(rows, key=lambda r: float(r["l2_u"]))
print("\nminimum elevation error at T = %g h, minimum velocity error at"
      " T = %g h" % (float(best_eta["T_seconds"]) / 3600.0,
                     float(best_u["T_seconds"]) / 3600.0))
print("both beat the unaveraged run and the widest window; each sweep entry"
      " has\nits own run directory with snapshots, diagnostics.csv and an"
      " error report:")
for sub in sorted(p.name for p in sweep_dir.iterdir() if p.is_dir()):
    print("  %s/%s" % (sweep_dir.name, sub))
