"""
Driving the command line from a scenario file
=============================================

Writes a scenario JSON file and runs each ``photon-link`` subcommand on
it through :func:`photonlink.cli.main`, exactly as the shell would.
"""

# %%
import json
import tempfile
from pathlib import Path

from photonlink.cli import main

workdir = Path(tempfile.mkdtemp())
scenario = workdir / "dim_sky.json"
scenario.write_text(json.dumps({
    "spectral_radiance": 0.5,
    "qswitch_efficiency": 0.5,
    "radiance_levels": [1.0, 0.5],
    "modulations": ["DPSK", 2, 4, 16],
}, indent=2))

# %%
main(["table", "--scenario", str(scenario)])

# %%
main(["curve", "--scenario", str(scenario), "--points", "5", "--out", str(workdir / "curves.csv")])
print((workdir / "curves.csv").read_text())

# %%
main(["simulate", "-M", "4", "--ks", "3", "--kb", "0.2", "--symbols", "100000", "--seed", "7"])

# %%
status = main(["compare", "--scenario", str(scenario), "--targets", "1e-6", "--format", "csv"])
print("exit status", status)

# %%
# A misspelled key is refused with exit status 2.
bad = workdir / "typo.json"
bad.write_text(json.dumps({"spectral_radiance_uw": 1.0}))
print("exit status", main(["table", "--scenario", str(bad)]))
