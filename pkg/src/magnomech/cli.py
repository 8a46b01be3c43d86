"""Command-line interface: one verb per pipeline stage.

    magnomech meanfield --params FILE --out out.csv
    magnomech steady    --params FILE --out out.csv
    magnomech entangle  --params FILE --out out.csv [--summary-out s.json]
    magnomech sweep     --params FILE --spec SPEC --out out.csv [--jobs N]
    magnomech stability --params FILE

Parameter files and sweep specs are flat ``name = value`` documents; see
the specs/ directory of the repository for worked examples.  All outputs
are CSV (JSON mirrors available via --format json where noted); exit code
is 0 on completion (including sweeps with per-point failures) and nonzero
on configuration or I/O errors.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import fluctuations, meanfield
from .params import CommensurabilityError, ParameterError
from .pipeline import evaluate_point
from .sweep import SpecError, emit, load_params, parse_spec, run_sweep

CSV_FLOAT = ".12g"


def _write_csv(path, header, rows):
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(",".join(header) + "\n")
            for row in rows:
                fh.write(",".join(format(v, CSV_FLOAT) if isinstance(v, float) else str(v) for v in row))
                fh.write("\n")
    except OSError as err:
        raise SpecError(f"cannot write {path}: {err}") from err


def _orbit_or_transient(p, args):
    if args.transient is not None:
        initial = np.zeros(3, dtype=complex)
        return meanfield.integrate_meanfield(
            p, (0.0, args.transient), initial, n_samples=args.samples
        )
    if p.xi_c == 0 and p.xi_m == 0:
        fp = meanfield.find_fixed_point(p)
        return meanfield.MeanTrajectory(
            times=np.array([0.0]), states=fp.as_array()[np.newaxis], period=None
        )
    return meanfield.find_periodic_orbit(p, n_samples=args.samples)


def cmd_meanfield(args) -> int:
    p = load_params(args.params)
    traj = _orbit_or_transient(p, args)
    rows = [
        [float(t), s[0].real, s[0].imag, s[1].real, s[1].imag, s[2].real, s[2].imag, abs(s[0])]
        for t, s in zip(traj.times, traj.states)
    ]
    _write_csv(args.out, ["t", "re_a", "im_a", "re_b", "im_b", "re_m", "im_m", "abs_a"], rows)
    if traj.period is not None:
        print(f"period = {traj.period:.12g} (scaled time), max |<a>| = "
              f"{meanfield.orbit_max_abs_a(traj):.12g}")
    return 0


_VECH_NAMES = [
    f"v_{a}_{b}"
    for i, a in enumerate(fluctuations.ORDERING)
    for b in fluctuations.ORDERING[i:]
]


def cmd_steady(args) -> int:
    p = load_params(args.params)
    result = evaluate_point(p, samples_per_period=args.samples)
    if result.status != "ok":
        print(f"status = {result.status}; no steady covariance emitted", file=sys.stderr)
        print(_stability_line(result))
        return 0 if result.status == "unstable" else 1
    if p.xi_c == 0 and p.xi_m == 0:
        fp = meanfield.find_fixed_point(p)
        A = fluctuations.drift_matrix(0.0, fp, p)
        times = np.array([0.0])
        Vs = fluctuations.steady_cm_autonomous(A, fluctuations.diffusion_matrix(p))[np.newaxis]
    else:
        orbit = meanfield.find_periodic_orbit(p)
        times, Vs = fluctuations.periodic_steady_cm(p, orbit, orbit.period, n_samples=args.samples)
    rows = [[float(t)] + list(fluctuations.vech(V)) for t, V in zip(times, Vs)]
    _write_csv(args.out, ["t"] + _VECH_NAMES, rows)
    print(_stability_line(result))
    return 0


def _stability_line(result) -> str:
    radius = "nan" if result.floquet_radius is None else format(result.floquet_radius, ".6g")
    return (
        f"status={result.status} rh_stable={result.rh_stable} "
        f"floquet_stable={result.floquet_stable} floquet_radius={radius} "
        f"physical={result.physical}"
    )


def cmd_entangle(args) -> int:
    p = load_params(args.params)
    result = evaluate_point(p, samples_per_period=args.samples)
    if result.status != "ok":
        print(f"status = {result.status}; no entanglement report", file=sys.stderr)
        return 0 if result.status == "unstable" else 1
    header = ["t", "en_ab", "en_am", "en_bm", "en_a_bm", "en_b_am", "en_m_ab",
              "res_a", "res_b", "res_m", "r_min"]
    rows = []
    for rep in result.reports:
        rows.append([
            float(rep.time),
            rep.pairwise_logneg[("cavity", "mechanics")],
            rep.pairwise_logneg[("cavity", "magnon")],
            rep.pairwise_logneg[("mechanics", "magnon")],
            rep.one_vs_two_logneg["cavity"],
            rep.one_vs_two_logneg["mechanics"],
            rep.one_vs_two_logneg["magnon"],
            rep.residuals["cavity"],
            rep.residuals["mechanics"],
            rep.residuals["magnon"],
            rep.r_min,
        ])
    _write_csv(args.out, header, rows)
    summary = {
        "r_max": result.r_max,
        "r_max_time": result.r_max_time,
        "tau": result.tau,
        "monogamy_ok": result.monogamy_ok,
        "en_ab_max": result.en_ab,
        "en_am_max": result.en_am,
        "en_bm_max": result.en_bm,
        "floquet_radius": result.floquet_radius,
    }
    text = json.dumps(summary, sort_keys=True)
    print(text)
    if args.summary_out:
        with open(args.summary_out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    return 0


def cmd_sweep(args) -> int:
    base = load_params(args.params)
    with open(args.spec, "r", encoding="utf-8") as fh:
        spec = parse_spec(fh.read(), base)
    result = run_sweep(spec, jobs=args.jobs)
    emit(result, fmt=args.format, path=args.out)
    n_bad = sum(1 for pt in result.points if pt.status != "ok")
    print(f"{len(result.points)} points -> {args.out} ({n_bad} not ok)")
    return 0


def cmd_stability(args) -> int:
    p = load_params(args.params)
    result = evaluate_point(p, samples_per_period=args.samples)
    line = _stability_line(result)
    print(line)
    if args.out:
        payload = {
            "status": result.status,
            "rh_stable": result.rh_stable,
            "floquet_stable": result.floquet_stable,
            "floquet_radius": result.floquet_radius,
            "physical": result.physical,
        }
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, sort_keys=True)
            fh.write("\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="magnomech",
        description="Periodic steady states and tripartite entanglement of a "
                    "parametrically driven cavity-magnon optomechanical system.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    mf = sub.add_parser("meanfield", help="mean-field orbit or transient as CSV")
    mf.add_argument("--params", required=True)
    mf.add_argument("--out", required=True)
    mf.add_argument("--samples", type=int, default=512)
    mf.add_argument("--transient", type=float, default=None,
                    help="integrate this long (scaled time) from rest instead of the orbit")
    mf.set_defaults(func=cmd_meanfield)

    st = sub.add_parser("steady", help="one period of the steady covariance as CSV")
    st.add_argument("--params", required=True)
    st.add_argument("--out", required=True)
    st.add_argument("--samples", type=int, default=256)
    st.set_defaults(func=cmd_steady)

    en = sub.add_parser("entangle", help="entanglement measures over one period")
    en.add_argument("--params", required=True)
    en.add_argument("--out", required=True)
    en.add_argument("--samples", type=int, default=256)
    en.add_argument("--summary-out", default=None)
    en.set_defaults(func=cmd_entangle)

    sw = sub.add_parser("sweep", help="evaluate a parameter grid")
    sw.add_argument("--params", required=True)
    sw.add_argument("--spec", required=True)
    sw.add_argument("--out", required=True)
    sw.add_argument("--jobs", type=int, default=1)
    sw.add_argument("--format", choices=("csv", "json"), default="csv")
    sw.set_defaults(func=cmd_sweep)

    sb = sub.add_parser("stability", help="stability and physicality summary")
    sb.add_argument("--params", required=True)
    sb.add_argument("--out", default=None)
    sb.add_argument("--samples", type=int, default=64)
    sb.set_defaults(func=cmd_stability)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (SpecError, ParameterError, CommensurabilityError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
