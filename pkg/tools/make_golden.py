"""Produce the golden CSVs consumed by the figures package tests.

Runs the production sweep/CLI machinery on coarse grids so the outputs
carry the exact shipped schema.  Writes into golden/ at the repo root.
"""

import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
GOLDEN = ROOT / "golden"

sys.path.insert(0, str(ROOT / "tests"))

from magnomech.cli import main as cli_main  # noqa: E402
from magnomech.sweep import emit, load_params, parse_spec, run_sweep  # noqa: E402

BASE = ROOT / "specs" / "base.params"


def sweep_to(spec_name: str, out_name: str, jobs: int = 1):
    base = load_params(BASE)
    spec = parse_spec((ROOT / "specs" / spec_name).read_text(), base)
    result = run_sweep(spec, jobs=jobs)
    emit(result, "csv", GOLDEN / out_name)
    bad = sum(1 for p in result.points if p.status != "ok")
    print(f"{out_name}: {len(result.points)} points, {bad} not ok", flush=True)


def inline_sweep(text: str, out_name: str):
    base = load_params(BASE)
    spec = parse_spec(text, base)
    result = run_sweep(spec)
    emit(result, "csv", GOLDEN / out_name)
    bad = sum(1 for p in result.points if p.status != "ok")
    print(f"{out_name}: {len(result.points)} points, {bad} not ok", flush=True)


GOLDEN.mkdir(exist_ok=True)

# heatmap input (coarse optical-pump map)
sweep_to("opa_map_coarse.sweep", "opa_map.csv")

# detuning curves (baseline and optical pump)
inline_sweep(
    "sweep.axis1.name = delta_a\nsweep.axis1.min = 0.4\nsweep.axis1.max = 1.0\n"
    "sweep.axis1.count = 25\nxi_c = 0.0\nxi_m = 0.0\noutputs = r_max\n",
    "detuning_ori.csv",
)
inline_sweep(
    "sweep.axis1.name = delta_a\nsweep.axis1.min = 0.4\nsweep.axis1.max = 1.0\n"
    "sweep.axis1.count = 13\nxi_c = 0.1\nxi_m = 0.0\nomega_c_prime = 1.0\n"
    "outputs = r_max\nsamples_per_period = 128\n",
    "detuning_opa.csv",
)

# polar input (phase-difference sweep, 13 points)
inline_sweep(
    "sweep.axis1.name = theta_c\nsweep.axis1.min = 0.0\n"
    "sweep.axis1.max = 6.283185307179586\nsweep.axis1.count = 13\n"
    "xi_c = 0.05\nxi_m = 0.05\nomega_c_prime = 1.2\nomega_m = 1.2\n"
    "outputs = r_max\nsamples_per_period = 128\n",
    "phase.csv",
)

# grouped-bars inputs (temperature sweeps, four pump configurations)
for tag, overrides in (
    ("ori", "xi_c = 0.0\nxi_m = 0.0\n"),
    ("opa", "xi_c = 0.05\nxi_m = 0.0\nomega_c_prime = 1.2\n"),
    ("mpa", "xi_c = 0.0\nxi_m = 0.05\nomega_m = 1.2\n"),
    ("ompa", "xi_c = 0.05\nxi_m = 0.05\nomega_c_prime = 1.2\nomega_m = 1.2\n"),
):
    inline_sweep(
        "sweep.axis1.name = temperature\nsweep.axis1.min = 0.01\n"
        "sweep.axis1.max = 0.21\nsweep.axis1.count = 6\n" + overrides +
        "outputs = r_max\nsamples_per_period = 96\n",
        f"thermal_{tag}.csv",
    )

# timeseries inputs: entanglement trace and cavity-amplitude trace
trace_params = GOLDEN / "_trace.params"
trace_params.write_text(
    BASE.read_text()
    .replace("xi_c_over_omega_b = 0.0", "xi_c_over_omega_b = 0.05")
    .replace("xi_m_over_omega_b = 0.0", "xi_m_over_omega_b = 0.1")
    .replace("omega_c_prime_over_omega_b = 1.0", "omega_c_prime_over_omega_b = 1.2")
    .replace("omega_m_over_omega_b = 1.8", "omega_m_over_omega_b = 1.2")
)
rc = cli_main(["entangle", "--params", str(trace_params),
               "--out", str(GOLDEN / "entanglement_trace.csv"), "--samples", "128"])
assert rc == 0
amp_params = GOLDEN / "_amp.params"
amp_params.write_text(
    BASE.read_text()
    .replace("delta_a_over_omega_b = 0.73", "delta_a_over_omega_b = 1.0")
    .replace("epsilon_d_over_omega_b = 4.3e4", "epsilon_d_over_omega_b = 6e4")
    .replace("temperature = 0.01", "temperature = 0.0")
    .replace("xi_c_over_omega_b = 0.0", "xi_c_over_omega_b = 0.01")
    .replace("omega_c_prime_over_omega_b = 1.0", "omega_c_prime_over_omega_b = 1.2")
)
rc = cli_main(["meanfield", "--params", str(amp_params),
               "--out", str(GOLDEN / "amplitude_trace.csv"), "--samples", "256"])
assert rc == 0
trace_params.unlink()
amp_params.unlink()
print("golden set complete")
