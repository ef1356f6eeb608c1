"""Command-line experiment runner.

Every randomized quantity is drawn from ``numpy.random.default_rng(seed)``
(PCG64): first the generating vector (complex normal entries, normalized),
then a random index set if one was requested. Reports are JSON with sorted
keys; the only nondeterministic field is ``generated_at``.
"""
from __future__ import annotations

import argparse
import csv
import io as _io
import json
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import io as fio
from .density import (beurling_density, density_theorem_check, frame_measure,
                      fundamental_identity_report)
from .errors import FrameError, NotAFrame, NotOvercomplete
from .frames import analyze, make_system
from .groups import (box_window, ball_window, canonical_windows, full_window,
                     generating_set, identity_window, validate_group)
from .removal import (RemovalConfig, excess, necessary_condition_check,
                      remove_positive_density)
from .reps import check_irreducible, random_unit_vector

RNG_ID = "numpy.random.PCG64 via default_rng(seed); g ~ complex normal, normalized; then lambda"
OPERATIONS = ("gen", "analyze", "density", "identity", "remove", "verify", "sweep")
SWEEP_COLUMNS = ("N", "seed", "n_lambda", "is_frame", "d_pi", "D_minus", "D_plus",
                 "M_minus", "M_plus", "A", "B", "excess", "removed", "cert_norm")


@dataclass
class ExperimentSpec:
    operation: str
    system: str = "gabor:2"
    g: str = "random"
    lam: str = "full"
    q_radius: int = 0
    windows: str = "canonical"
    seed: int = 0
    alpha: float | None = None
    epsilon: float | None = None
    shrink: str = "drop-largest-pairing"
    emit_trace: bool = False
    out: str | None = None
    sweep_N: list = field(default_factory=lambda: [2, 4])
    sweep_lambda: list = field(default_factory=lambda: ["full"])
    sweep_seeds: list = field(default_factory=lambda: [0])


def _parse_g(text, dim, rng):
    if text == "random":
        return random_unit_vector(dim, rng)
    if text.startswith("e") and text[1:].isdigit():
        v = np.zeros(dim, dtype=complex)
        v[int(text[1:])] = 1
        return v
    data = json.loads(text)
    arr = np.asarray(data)
    return fio.complex_from_json(data) if arr.ndim == 2 else arr.astype(complex)


def _parse_lambda(text, order, rng):
    if text == "full":
        return tuple(range(order))
    if text.startswith("random:"):
        k = int(text.split(":", 1)[1])
        return tuple(sorted(int(x) for x in rng.choice(order, size=k, replace=False)))
    return tuple(json.loads(text))


def _q_window(group, radius):
    if radius == 0:
        return identity_window(group)
    if group.kind == "cyclic":
        return box_window(group, radius)
    return ball_window(group, generating_set(group), radius)


def build_system(spec):
    rng = np.random.default_rng(spec.seed)
    if spec.system.endswith(".json"):
        doc = fio.load_json(spec.system)
        if "lambda" in doc:
            return fio.system_from_dict(doc)
        rep = fio.rep_from_dict(doc)
    else:
        rep = fio.resolve_rep_ref(spec.system)
    g = _parse_g(spec.g, rep.dim, rng)
    lam = _parse_lambda(spec.lam, rep.group.order, rng)
    return make_system(rep, g, lam, _q_window(rep.group, spec.q_radius))


def build_windows(spec, group):
    if spec.windows == "canonical":
        return canonical_windows(group)
    if spec.windows == "full":
        return (full_window(group),)
    return fio.windows_from_json(group, json.loads(spec.windows), "/windows")


def _density_dict(rep):
    return {"sizes": rep.sizes, "inf": rep.inf, "sup": rep.sup,
            "D_minus": rep.D_minus, "D_plus": rep.D_plus}


def _measure_dict(rep):
    return {"sizes": rep.sizes, "inf": rep.inf, "sup": rep.sup,
            "M_minus": rep.M_minus, "M_plus": rep.M_plus}


def _analysis_dict(an):
    return {"A": an.A, "B": an.B, "is_frame": an.is_frame, "eigenvalues": an.eigenvalues,
            "pairings": an.pairings, "pairing_sum": float(an.pairings.sum()),
            "dual_bounds": list(an.dual_bounds), "lambda": list(an.lam), "excess": excess(an)}


def run(spec):
    """Execute one experiment; returns the report dict (or CSV text for sweeps)."""
    if spec.operation == "sweep":
        return sweep(spec)
    sysm = build_system(spec)
    windows = build_windows(spec, sysm.group)
    op = spec.operation
    report = {"operation": op, "system": spec.system, "seed": spec.seed, "rng": RNG_ID}
    if op == "gen":
        report["system_data"] = fio.system_to_dict(sysm)
    elif op == "analyze":
        report["analysis"] = _analysis_dict(analyze(sysm))
    elif op == "density":
        an = analyze(sysm)
        report["density"] = _density_dict(beurling_density(sysm.group, sysm.lam, windows))
        report["measure"] = _measure_dict(frame_measure(an, sysm.group, windows))
    elif op == "identity":
        idr = fundamental_identity_report(sysm, windows)
        report.update(r1=idr.r1, r2=idr.r2, d_pi=idr.d_pi,
                      density=_density_dict(idr.density), measure=_measure_dict(idr.measure))
    elif op == "remove":
        cfg = RemovalConfig(spec.alpha, spec.epsilon, shrink_strategy=spec.shrink)
        cert = remove_positive_density(sysm, windows, cfg)
        nec = necessary_condition_check(sysm, cert.gamma, windows)
        report["certificate"] = fio.certificate_to_dict(cert)
        report["necessary_condition"] = vars(nec) | {"passed": nec.passed}
        if spec.emit_trace:
            report["_trace_matrices"] = cert.matrices
    elif op == "verify":
        report["verify"] = verify(sysm, windows)
    else:
        raise ValueError(f"unknown operation {op!r}")
    return report


def verify(sysm, windows):
    grp = validate_group(sysm.group)
    ext = sysm.rep.validate()
    irreducible, _ = check_irreducible(sysm.rep)
    dt = density_theorem_check(sysm, windows)
    idr = fundamental_identity_report(sysm, windows)
    out = {
        "group_violations": grp.violations,
        "cocycle_residual": ext.residual,
        "irreducible": irreducible,
        "d_pi": sysm.d_pi,
        "density_theorem": vars(dt) | {"passed": dt.passed},
        "identity_residuals": [idr.r1, idr.r2],
    }
    out["passed"] = bool(grp.ok and irreducible and dt.passed and max(idr.r1, idr.r2) <= 1e-9)
    return out


def _fmt(v):
    return "" if v is None else repr(v) if isinstance(v, float) else str(v)


def sweep(spec):
    """One CSV row per (N, lambda, seed) grid point, in grid order."""
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_COLUMNS)
    for N in spec.sweep_N:
        for lam_spec in spec.sweep_lambda:
            for seed in spec.sweep_seeds:
                point = ExperimentSpec("analyze", system=f"gabor:{N}", g=spec.g, lam=lam_spec,
                                       q_radius=spec.q_radius, windows=spec.windows, seed=seed)
                w.writerow([_fmt(v) for v in _sweep_row(point, N, seed)])
    return buf.getvalue()


def _sweep_row(point, N, seed):
    sysm = build_system(point)
    windows = build_windows(point, sysm.group)
    dens = beurling_density(sysm.group, sysm.lam, windows)
    row = {"N": N, "seed": seed, "n_lambda": len(sysm.lam), "d_pi": sysm.d_pi,
           "D_minus": dens.D_minus, "D_plus": dens.D_plus}
    try:
        an = analyze(sysm)
    except NotAFrame:
        row["is_frame"] = False
        return [row.get(c) for c in SWEEP_COLUMNS]
    meas = frame_measure(an, sysm.group, windows)
    row.update(is_frame=True, M_minus=meas.M_minus, M_plus=meas.M_plus, A=an.A, B=an.B,
               excess=excess(an))
    try:
        cert = remove_positive_density(sysm, windows)
        row.update(removed=len(cert.gamma), cert_norm=cert.certificate_norm)
    except NotOvercomplete:
        row["removed"] = 0
    return [row.get(c) for c in SWEEP_COLUMNS]


def write_report(report, out, emit_trace=False):
    if isinstance(report, str):
        text = report
    else:
        mats = report.pop("_trace_matrices", None)
        report["generated_at"] = datetime.now(timezone.utc).isoformat()
        text = fio.dumps(report) + "\n"
        if emit_trace and mats is not None:
            target = Path(out).with_suffix(".trace.json") if out else None
            if target is None:
                report["trace_matrices"] = mats
                text = fio.dumps(report) + "\n"
            else:
                fio.save_json(mats, target)
    if out:
        try:
            Path(out).write_text(text)
        except OSError as exc:
            raise fio.InputError(f"cannot write {out}: {exc}") from exc
    else:
        sys.stdout.write(text)


def _int_list(text):
    return [int(t) for t in text.split(",") if t]


def build_parser():
    p = argparse.ArgumentParser(prog="coherent-frames",
                                description="Finite coherent frames: density, frame measure and removal.")
    sub = p.add_subparsers(dest="operation", required=True)
    for op in OPERATIONS:
        sp = sub.add_parser(op)
        sp.add_argument("--system", default="gabor:2",
                        help="gabor:N, heisenberg:N, or a system/rep JSON file")
        sp.add_argument("--g", default="random", help="random, eK, or a JSON vector")
        sp.add_argument("--lambda", dest="lam", default="full",
                        help="full, random:K, or a JSON index array")
        sp.add_argument("--q-radius", type=int, default=0)
        sp.add_argument("--windows", default="canonical",
                        help="canonical, full, or a JSON array of index arrays")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out", default=None)
        if op == "remove":
            sp.add_argument("--alpha", type=float, default=None)
            sp.add_argument("--epsilon", type=float, default=None)
            sp.add_argument("--shrink", default="drop-largest-pairing",
                            choices=["drop-largest-pairing", "drop-largest-row-sum"])
            sp.add_argument("--emit-trace", action="store_true")
        if op == "sweep":
            sp.add_argument("--N", dest="sweep_N", type=_int_list, default=[2, 4])
            sp.add_argument("--lambdas", dest="sweep_lambda", default="full",
                            help="';'-separated lambda specs")
            sp.add_argument("--seeds", dest="sweep_seeds", type=_int_list, default=[0])
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    kw = vars(args)
    if "sweep_lambda" in kw:
        kw["sweep_lambda"] = kw["sweep_lambda"].split(";")
    spec = ExperimentSpec(**kw)
    try:
        report = run(spec)
        write_report(report, spec.out, spec.emit_trace)
    except FrameError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except (ValueError, json.JSONDecodeError) as exc:
        print(f"error: invalid input: {exc}", file=sys.stderr)
        return 4
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 5
    return 0


if __name__ == "__main__":
    sys.exit(main())
