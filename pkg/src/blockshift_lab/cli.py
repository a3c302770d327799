"""Command-line front end.

Case files bundle a spec (block shift or kernel) with a window, tolerances,
and a list of checks; `blockshift-lab check` runs them and emits both a
human-readable pass table and a machine-readable JSON report.  Re-running a
case with identical inputs produces a byte-identical report body apart from
the timestamp field.

Exit codes: 0 when every check passes, 1 when any check fails, 2 on parse
or configuration errors and on inapplicable checks.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from datetime import datetime, timezone
from importlib import resources

import numpy as np

from . import __version__, irreducibility, oracle, similarity
from .blockshift import (
    BlockShiftSpec,
    IdentityMap,
    Reflection,
    scalar_shift_matrix,
    trace_pairing,
    truncate,
)
from .jsonio import (
    SchemaError,
    blockshift_from_json,
    check_keys,
    complex_from_json,
    kernel_from_json,
    matrix_from_json,
    mobius_from_json,
    seq_from_json,
)
from .kernels import (
    LambdaKernel,
    curvature,
    eval_diag,
    jk_kernel,
    kernel_ratio_profile,
    metric_det_ratio,
    multiplier_bound_witness,
)
from .seqcore import DEFAULT_TOL, Constant, Window, eval_seq

PASS = "pass"
FAIL = "fail"
INAPPLICABLE = "inapplicable"


class CaseError(ValueError):
    """A case file is malformed or requests an impossible configuration."""


@dataclass
class CaseFile:
    name: str
    description: str
    tags: tuple[str, ...]
    window: Window
    tol: float
    blockshift: BlockShiftSpec | None
    kernel: object | None
    checks: list[dict]
    raw_bytes: bytes


def _parse_window(value) -> Window:
    if isinstance(value, str):
        lo, _, hi = value.partition(":")
        return Window(int(lo), int(hi))
    if isinstance(value, list) and len(value) == 2:
        return Window(int(value[0]), int(value[1]))
    raise CaseError(f"bad window {value!r}: expected [a, b] or 'a:b'")


def load_case(path: str, window: Window | None = None, tol: float | None = None) -> CaseFile:
    with open(path, "rb") as handle:
        raw = handle.read()
    obj = json.loads(raw.decode("utf-8"))
    check_keys(
        obj,
        {"name", "checks"},
        {"description", "tags", "window", "tol", "blockshift", "kernel"},
    )
    if ("blockshift" in obj) == ("kernel" in obj):
        raise CaseError("case needs exactly one of 'blockshift' or 'kernel'")
    spec = blockshift_from_json(obj["blockshift"]) if "blockshift" in obj else None
    kernel = kernel_from_json(obj["kernel"]) if "kernel" in obj else None
    win = window or (_parse_window(obj["window"]) if "window" in obj else Window(-16, 16))
    checks = obj["checks"]
    if not isinstance(checks, list) or not checks:
        raise CaseError("'checks' must be a non-empty list")
    return CaseFile(
        name=str(obj["name"]),
        description=str(obj.get("description", "")),
        tags=tuple(obj.get("tags", ())),
        window=win,
        tol=tol if tol is not None else float(obj.get("tol", DEFAULT_TOL)),
        blockshift=spec,
        kernel=kernel,
        checks=checks,
        raw_bytes=raw,
    )


def _verdict_result(name: str, verdict: irreducibility.Verdict) -> dict:
    status = {
        irreducibility.HOLDS: PASS,
        irreducibility.FAILS: FAIL,
        irreducibility.INAPPLICABLE: INAPPLICABLE,
    }[verdict.status]
    return {"check": name, "status": status, "verdict": verdict.to_json()}


def _pairing_from(params: dict):
    if params.get("identity"):
        return IdentityMap()
    if "reflection" in params and params["reflection"] is not None:
        return Reflection(int(params["reflection"]))
    return None


def _need_blockshift(case: CaseFile) -> BlockShiftSpec:
    if case.blockshift is None:
        raise CaseError("this check needs a 'blockshift' payload")
    return case.blockshift


def _need_kernel(case: CaseFile):
    if case.kernel is None:
        raise CaseError("this check needs a 'kernel' payload")
    return case.kernel


def _run_trace_pairing(case: CaseFile, params: dict) -> dict:
    spec = _need_blockshift(case)
    g = _pairing_from(params)
    if g is None:
        raise CaseError("trace-pairing needs 'reflection' or 'identity'")
    report = trace_pairing(spec, g, case.window, case.tol)
    require_exclusive = params.get("require_exclusive", isinstance(g, Reflection))
    ok = report.holds and (not require_exclusive or bool(report.exclusive))
    return {
        "check": "trace-pairing",
        "status": PASS if ok else FAIL,
        "holds": report.holds,
        "exclusive": report.exclusive,
        "max_mismatch": report.max_mismatch,
        "collisions": [list(c) for c in report.collisions],
        "checked": report.checked,
        "skipped": report.skipped,
    }


def _run_alpha(case: CaseFile, params: dict) -> dict:
    spec = _need_blockshift(case)
    if not spec.class_td:
        raise CaseError("alpha-criterion needs a reciprocal-class spec")
    if not isinstance(spec.d, Constant):
        raise CaseError("alpha-criterion needs a constant coupling diagonal")
    verdict = irreducibility.check_alpha_criterion(
        spec.w, spec.d.value, int(params["i0"]), case.window, case.tol
    )
    return _verdict_result("alpha-criterion", verdict)


def _run_complex_weights(case: CaseFile, params: dict) -> dict:
    spec = _need_blockshift(case)
    verdict = irreducibility.check_complex_weights(
        spec, _pairing_from(params), case.window, case.tol
    )
    return _verdict_result("complex-weights", verdict)


def _run_unimodular(case: CaseFile, params: dict) -> dict:
    spec = _need_blockshift(case)
    verdict = irreducibility.check_unimodular(
        spec, _pairing_from(params), case.window, case.tol
    )
    return _verdict_result("unimodular", verdict)


def _run_decay(case: CaseFile, params: dict) -> dict:
    spec = _need_blockshift(case)
    verdict = irreducibility.check_decay_criterion(
        spec,
        case.window,
        k_max=int(params.get("k_max", 24)),
        tol=case.tol,
        grid_step=params.get("grid_step"),
    )
    return _verdict_result("decay", verdict)


def _run_shields(case: CaseFile, params: dict) -> dict:
    spec = _need_blockshift(case)
    report = similarity.shields_diagnostic(
        spec.w,
        spec.v,
        range(int(params.get("k_min", -8)), int(params.get("k_max", 8)) + 1),
        case.window,
    )
    expected = params.get("expect")
    ok = report.verdict == expected if expected else report.verdict != "diverging"
    if "expect_k" in params:
        ok = ok and report.k == int(params["expect_k"])
    return {
        "check": "shields",
        "status": PASS if ok else FAIL,
        "verdict": report.verdict,
        "k": report.k,
        "inf_ratio": report.inf_ratio,
        "sup_ratio": report.sup_ratio,
        "trend": report.trend,
    }


def _run_identity(case: CaseFile, params: dict) -> dict:
    spec = _need_blockshift(case)
    bound = float(params.get("bound", 1e-13))
    deviation = oracle.similarity_identity_check(spec, case.window)
    return {
        "check": "identity",
        "status": PASS if deviation <= bound else FAIL,
        "interior_deviation": deviation,
        "bound": bound,
    }


def _run_reduce(case: CaseFile, params: dict) -> dict:
    spec = _need_blockshift(case)
    mode = params.get("mode", "hard")
    band = int(params.get("band", 0))
    if params.get("scalar"):
        matrix = scalar_shift_matrix(spec.w, case.window, mode)
    else:
        matrix = truncate(spec, case.window, mode).m
    result = oracle.reducing_search(matrix, tol=case.tol, boundary_band=band)
    found = result.nontrivial_projection is not None
    expect = params.get("expect", "none")
    ok = found if expect == "projection" else not found
    return {
        "check": "reduce",
        "status": PASS if ok else FAIL,
        "commutant_dim": result.commutant_dim,
        "hermitian_dim": result.hermitian_dim,
        "projection_found": found,
        "residuals": result.residuals,
        "artifacts_filtered": result.artifacts_filtered,
    }


def _run_curvature_grid(case: CaseFile, params: dict) -> dict:
    kernel = _need_kernel(case)
    if not isinstance(kernel, LambdaKernel):
        raise CaseError("curvature-grid compares against the binomial-kernel value")
    max_radius = float(params.get("max_radius", 0.8))
    step = float(params.get("step", 0.05))
    bound = float(params.get("bound", 1e-6))
    worst = 0.0
    for x in np.arange(-max_radius, max_radius + step / 2, step):
        for y in np.arange(-max_radius, max_radius + step / 2, step):
            w = complex(x, y)
            if abs(w) > max_radius:
                continue
            got = curvature(kernel, w)
            want = -kernel.lam / (1.0 - abs(w) ** 2) ** 2
            worst = max(worst, abs(got - want))
    return {
        "check": "curvature-grid",
        "status": PASS if worst < bound else FAIL,
        "max_error": worst,
        "bound": bound,
    }


def _radii_from(params: dict) -> list[float]:
    start, stop, count = params.get("radii", [0.1, 0.9, 40])
    return list(np.linspace(float(start), float(stop), int(count)))


def _run_kernel_profile(case: CaseFile, params: dict) -> dict:
    kernel = _need_kernel(case)
    other = kernel_from_json(params["denominator"])
    report = kernel_ratio_profile(kernel, other, _radii_from(params))
    expected = params.get("expect_limit")
    ok = report.limit_class == expected if expected else True
    return {
        "check": "kernel-profile",
        "status": PASS if ok else FAIL,
        "limit_class": report.limit_class,
        "bounded_above": report.bounded_above,
        "bounded_from_zero": report.bounded_from_zero,
        "first_value": report.values[0],
        "last_value": report.values[-1],
    }


def _run_jk_gram(case: CaseFile, params: dict) -> dict:
    kernel = _need_kernel(case)
    other = kernel_from_json(params["other"])
    order = int(params.get("k", 1))
    points = [complex_from_json(p) for p in params["points"]]
    bound = float(params.get("min_eig_bound", -1e-9))
    gram = jk_kernel(kernel, other, order).gram(points)
    min_eig = float(np.linalg.eigvalsh(gram)[0])
    return {
        "check": "jk-gram",
        "status": PASS if min_eig >= bound else FAIL,
        "min_eigenvalue": min_eig,
        "gram_size": gram.shape[0],
        "bound": bound,
    }


def _run_multiplier_witness(case: CaseFile, params: dict) -> dict:
    kernel = _need_kernel(case)
    phi = params.get("phi", "coordinate")
    if isinstance(phi, dict):
        phi = mobius_from_json(phi)
    points = [complex_from_json(p) for p in params["points"]]
    report = multiplier_bound_witness(kernel, phi, float(params["c"]), points)
    return {
        "check": "multiplier-witness",
        "status": PASS if report.nonnegative else FAIL,
        "min_eigenvalue": report.min_eigenvalue,
        "samples": report.sample_count,
    }


def _run_metric_ratio(case: CaseFile, params: dict) -> dict:
    kernel = _need_kernel(case)
    mu = float(params.get("mu", 1.0))
    x = seq_from_json(params["x"])
    radii = _radii_from(params)
    sup_x = max(abs(eval_seq(x, n)) for n in range(kernel.truncation + 1))
    low = float(params.get("low", 1.0)) - 1e-9
    high = float(params.get("high", 1.0 + sup_x**2)) + 1e-9
    values = [metric_det_ratio(mu, kernel, x, complex(r, 0.0)) for r in radii]
    ok = all(low <= v <= high for v in values)
    return {
        "check": "metric-ratio",
        "status": PASS if ok else FAIL,
        "min_ratio": min(values),
        "max_ratio": max(values),
        "low": low,
        "high": high,
    }


CHECK_RUNNERS = {
    "trace-pairing": _run_trace_pairing,
    "alpha-criterion": _run_alpha,
    "complex-weights": _run_complex_weights,
    "unimodular": _run_unimodular,
    "decay": _run_decay,
    "shields": _run_shields,
    "identity": _run_identity,
    "reduce": _run_reduce,
    "curvature-grid": _run_curvature_grid,
    "kernel-profile": _run_kernel_profile,
    "jk-gram": _run_jk_gram,
    "multiplier-witness": _run_multiplier_witness,
    "metric-ratio": _run_metric_ratio,
}


def run_case(case: CaseFile) -> dict:
    results = []
    for check in case.checks:
        if not isinstance(check, dict) or "kind" not in check:
            raise CaseError("each check needs a 'kind' field")
        kind = check["kind"]
        if kind not in CHECK_RUNNERS:
            raise CaseError(f"unknown check kind {kind!r}")
        params = {k: v for k, v in check.items() if k != "kind"}
        results.append(CHECK_RUNNERS[kind](case, params))
    return {
        "name": case.name,
        "tool_version": __version__,
        "input_sha256": hashlib.sha256(case.raw_bytes).hexdigest(),
        "window": [case.window.n_min, case.window.n_max],
        "tol": case.tol,
        "checks": results,
    }


def report_exit_code(report: dict) -> int:
    statuses = [c["status"] for c in report["checks"]]
    if any(s == FAIL for s in statuses):
        return 1
    if any(s == INAPPLICABLE for s in statuses):
        return 2
    return 0


def _print_report(report: dict, stream) -> None:
    print(f"case: {report['name']}  (window {report['window']}, tol {report['tol']:g})",
          file=stream)
    for check in report["checks"]:
        status = check["status"].upper()
        extras = []
        for key in ("verdict", "max_error", "interior_deviation", "min_eigenvalue",
                    "limit_class", "k", "max_ratio", "projection_found", "max_mismatch"):
            if key in check:
                value = check[key]
                if key == "verdict" and isinstance(value, dict):
                    extras.append(f"status={value['status']}")
                    for note in value.get("notes", []):
                        extras.append(f"note: {note}")
                else:
                    extras.append(f"{key}={value}")
        print(f"  [{status:>4}] {check['check']}  " + "; ".join(extras), file=stream)


def _json_report(report: dict, timestamp: bool = True) -> str:
    body = dict(report)
    if timestamp:
        body["generated_at"] = datetime.now(timezone.utc).isoformat()
    return json.dumps(body, indent=2, sort_keys=True, default=_json_default)


def _json_default(value):
    if isinstance(value, complex):
        return {"re": value.real, "im": value.imag}
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    raise TypeError(f"cannot serialize {type(value).__name__}")


def _cmd_check(args) -> int:
    window = _parse_window(args.window) if args.window else None
    workers = int(os.environ.get("BLOCKSHIFT_LAB_THREADS", "0")) or min(
        8, max(1, len(args.case))
    )

    def run_one(path: str) -> tuple[str, dict | None, str | None]:
        try:
            case = load_case(path, window, args.tol)
            return path, run_case(case), None
        except (json.JSONDecodeError, SchemaError, CaseError, OSError, ValueError) as exc:
            return path, None, f"{type(exc).__name__}: {exc}"

    if len(args.case) == 1:
        outcomes = [run_one(args.case[0])]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(run_one, args.case))

    code = 0
    for path, report, error in outcomes:
        if error is not None:
            print(f"error: {path}: {error}", file=sys.stderr)
            code = max(code, 2)
            continue
        _print_report(report, sys.stdout)
        if args.json:
            with open(args.json, "w", encoding="utf-8") as handle:
                handle.write(_json_report(report))
        code = max(code, report_exit_code(report))
    return code


def _cmd_similar(args) -> int:
    try:
        with open(args.spec_a, encoding="utf-8") as handle:
            spec_a = blockshift_from_json(json.load(handle))
        with open(args.spec_b, encoding="utf-8") as handle:
            spec_b = blockshift_from_json(json.load(handle))
    except (json.JSONDecodeError, SchemaError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    window = _parse_window(args.window)
    verdict = similarity.compare_similarity(spec_a, spec_b, window, args.tol)
    print(f"similarity verdict: {verdict.status}")
    if verdict.fail_clause:
        print(f"  clause: {verdict.fail_clause} at rank {verdict.fail_index}")
    if verdict.reason:
        print(f"  reason: {verdict.reason}")
    for note in verdict.notes:
        print(f"  note: {note}")
    if verdict.holds:
        return 0
    return 2 if verdict.status == irreducibility.INAPPLICABLE else 1


def _cmd_kernel_profile(args) -> int:
    try:
        with open(args.kernel, encoding="utf-8") as handle:
            num = kernel_from_json(json.load(handle))
        den = None
        if args.denominator:
            with open(args.denominator, encoding="utf-8") as handle:
                den = kernel_from_json(json.load(handle))
    except (json.JSONDecodeError, SchemaError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    start, stop, count = args.radii.split(":")
    radii = list(np.linspace(float(start), float(stop), int(count)))
    if den is None:
        rows = [(r, eval_diag(num, r)) for r in radii]
        print("# r, K(r,r)")
    else:
        report = kernel_ratio_profile(num, den, radii)
        rows = list(zip(report.radii, report.values))
        print(f"# r, ratio   (limit class: {report.limit_class})")
    buffer = io.StringIO()
    writer = csv.writer(buffer)
    writer.writerow(["r", "value"])
    for r, value in rows:
        writer.writerow([f"{r:.12g}", f"{value:.12g}"])
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as handle:
            handle.write(buffer.getvalue())
    else:
        sys.stdout.write(buffer.getvalue())
    return 0


def _load_matrix_file(path: str) -> np.ndarray:
    with open(path, encoding="utf-8") as handle:
        return matrix_from_json(json.load(handle))


def _cmd_oracle(args) -> int:
    try:
        if args.oracle_cmd == "gram":
            with open(args.spec, encoding="utf-8") as handle:
                spec = blockshift_from_json(json.load(handle))
            deviation = oracle.dense_gram_check(spec, args.n)
            print(f"max closed-form deviation at n={args.n}: {deviation:.3e}")
            return 0 if deviation <= 1e-12 else 1
        if args.oracle_cmd == "commutator":
            with open(args.spec, encoding="utf-8") as handle:
                spec = blockshift_from_json(json.load(handle))
            matrix = oracle.commutator_direct(spec, args.n)
            print(json.dumps(
                [[{"re": z.real, "im": z.imag} for z in row] for row in matrix], indent=2
            ))
            return 0
        if args.oracle_cmd == "identity":
            with open(args.spec, encoding="utf-8") as handle:
                spec = blockshift_from_json(json.load(handle))
            window = _parse_window(args.window)
            deviation = oracle.similarity_identity_check(spec, window)
            print(f"interior deviation on {window}: {deviation:.3e}")
            return 0 if deviation <= 1e-13 else 1
        if args.oracle_cmd == "reduce":
            matrix = _load_matrix_file(args.matrix)
            result = oracle.reducing_search(matrix, boundary_band=args.band)
            found = result.nontrivial_projection is not None
            print(
                f"commutant dim {result.commutant_dim}, hermitian dim "
                f"{result.hermitian_dim}, projection found: {found}, "
                f"artifacts filtered: {result.artifacts_filtered}"
            )
            if found:
                print(f"residuals: {result.residuals}")
            return 0
        if args.oracle_cmd == "mobius":
            matrix = _load_matrix_file(args.matrix)
            phi = mobius_from_json({"theta": args.theta, "a": {"re": args.a_re, "im": args.a_im}})
            out = oracle.mobius_of_matrix(phi, matrix)
            print(json.dumps(
                [[{"re": z.real, "im": z.imag} for z in row] for row in out], indent=2
            ))
            return 0
        if args.oracle_cmd == "conjugation":
            u = _load_matrix_file(args.u)
            v = _load_matrix_file(args.v)
            x = _load_matrix_file(args.x)
            report = oracle.unitary_conjugation_check(u, v, x, args.tol)
            print(
                f"conjugation unitary: {report.conjugation_unitary} "
                f"(unitarity residual {report.unitarity_residual:.3e}, "
                f"intertwining residual {report.intertwining_residual:.3e}, "
                f"iff consistent: {report.iff_consistent})"
            )
            return 0 if report.iff_consistent else 1
    except (json.JSONDecodeError, SchemaError, OSError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    raise AssertionError("unreachable")


def builtin_cases() -> list[dict]:
    """Shipped case files, in deterministic name order."""
    entries = []
    for item in sorted(resources.files("blockshift_lab.cases").iterdir(), key=lambda p: p.name):
        if not item.name.endswith(".json"):
            continue
        obj = json.loads(item.read_text(encoding="utf-8"))
        entries.append(
            {
                "file": item.name,
                "name": obj.get("name", item.name),
                "tags": obj.get("tags", []),
                "description": obj.get("description", ""),
            }
        )
    return entries


def _cmd_cases(args) -> int:
    rows = builtin_cases()
    if args.tag:
        rows = [r for r in rows if args.tag in r["tags"]]
    for row in rows:
        tags = ",".join(row["tags"])
        print(f"{row['file']:<40} [{tags}] {row['description']}")
    if args.copy_to:
        os.makedirs(args.copy_to, exist_ok=True)
        for row in rows:
            text = (
                resources.files("blockshift_lab.cases").joinpath(row["file"]).read_text()
            )
            with open(os.path.join(args.copy_to, row["file"]), "w") as handle:
                handle.write(text)
        print(f"copied {len(rows)} case files to {args.copy_to}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="blockshift-lab",
        description="window-scoped checks for block-shift operators and disc kernels",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="run the checks listed in case files")
    p_check.add_argument("case", nargs="+", help="case file path(s)")
    p_check.add_argument("--window", help="override window, e.g. -20:20")
    p_check.add_argument("--tol", type=float, default=None, help="override tolerance")
    p_check.add_argument("--json", help="write the JSON report here")
    p_check.set_defaults(func=_cmd_check)

    p_sim = sub.add_parser("similar", help="compare two block-shift specs")
    p_sim.add_argument("spec_a")
    p_sim.add_argument("spec_b")
    p_sim.add_argument("--window", default="-16:16")
    p_sim.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p_sim.set_defaults(func=_cmd_similar)

    p_kernel = sub.add_parser("kernel", help="kernel utilities")
    kernel_sub = p_kernel.add_subparsers(dest="kernel_cmd", required=True)
    p_profile = kernel_sub.add_parser("profile", help="radial diagonal profile")
    p_profile.add_argument("kernel", help="kernel spec JSON file")
    p_profile.add_argument("--denominator", help="optional second kernel for a ratio")
    p_profile.add_argument("--radii", default="0.1:0.9:40", help="start:stop:count")
    p_profile.add_argument("--csv", help="write CSV here instead of stdout")
    p_profile.set_defaults(func=_cmd_kernel_profile)

    p_oracle = sub.add_parser("oracle", help="dense brute-force recomputations")
    oracle_sub = p_oracle.add_subparsers(dest="oracle_cmd", required=True)
    p_gram = oracle_sub.add_parser("gram", help="closed forms vs direct Gram blocks")
    p_gram.add_argument("spec")
    p_gram.add_argument("-n", type=int, required=True)
    p_comm = oracle_sub.add_parser("commutator", help="direct Gram commutator")
    p_comm.add_argument("spec")
    p_comm.add_argument("-n", type=int, required=True)
    p_ident = oracle_sub.add_parser("identity", help="triangular conjugation identity")
    p_ident.add_argument("spec")
    p_ident.add_argument("--window", default="-12:12")
    p_reduce = oracle_sub.add_parser("reduce", help="reducing-projection search")
    p_reduce.add_argument("matrix")
    p_reduce.add_argument("--band", type=int, default=0)
    p_mob = oracle_sub.add_parser("mobius", help="disc automorphism of a matrix")
    p_mob.add_argument("matrix")
    p_mob.add_argument("--theta", type=float, default=0.0)
    p_mob.add_argument("--a-re", type=float, default=0.0)
    p_mob.add_argument("--a-im", type=float, default=0.0)
    p_conj = oracle_sub.add_parser("conjugation", help="unitarity vs intertwining")
    p_conj.add_argument("u")
    p_conj.add_argument("v")
    p_conj.add_argument("x")
    p_conj.add_argument("--tol", type=float, default=1e-8)
    for sp in (p_gram, p_comm, p_ident, p_reduce, p_mob, p_conj):
        sp.set_defaults(func=_cmd_oracle)

    p_cases = sub.add_parser("cases", help="list shipped case files")
    p_cases.add_argument("--tag", help="filter by tag")
    p_cases.add_argument("--copy-to", help="copy the listed case files to a directory")
    p_cases.set_defaults(func=_cmd_cases)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


def console_main() -> None:
    sys.exit(main())
