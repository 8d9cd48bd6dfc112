"""
Parameter sweeps
================

Warm-started sweeps over the amplitude or the dark current, exported to CSV.
The same runs are available as ``poisson-capacity sweep``.
"""

# %%
import tempfile
from pathlib import Path

from poisson_capacity.sweep import SweepSpec, export_records, parse_grid, read_records, run_sweep

spec = SweepSpec("amplitude", 0.0, tuple(parse_grid("1:16:10,log")))
records, manifest = run_sweep(spec, checkpoints=2)
for r in records:
    print(f"A={r.amplitude:8.4f}  C={r.capacity_nats:.6f}  n={r.n_points}")

# %%
path = Path(tempfile.mkdtemp()) / "sweep.csv"
export_records(records, "csv", path)
print(path.read_text().splitlines()[0])
assert read_records(path)[-1].capacity_nats == records[-1].capacity_nats

# %%
spec = SweepSpec("dark-current", 8.0, tuple(parse_grid("0:20:5")))
for r in run_sweep(spec, checkpoints=0)[0]:
    print(f"lambda={r.dark_current:5.1f}  C={r.capacity_nats:.6f}  n={r.n_points}")
