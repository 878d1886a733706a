"""Batch command-line front end.

Subcommands operate on JSON barcode/complex files and CSV vertex values,
emit JSON on stdout (or aligned text with --table), and optionally render
persistence diagrams next to the delimited output via --svg.  Exit codes:
0 on success, 1 when a theorem-backed check fails on the given data, 2 on
malformed input.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from .barcode import Barcode, CauchyBarcodeSequence, cauchy_limit, dprime_distance
from .demos import DEMO_NAMES, demo_bundle
from .errors import CheckFailed, InputError
from .fcomplex import InterleavingCertificate, cone_torsion_bound_check
from .specinv import gamma_duality_check, ls_check
from .sublevel import CellComplex, SampledFunction, dual_function, spec_of_function
from .suites import run_cone_suite, run_kernel_suite


def _num(x):
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    return x


def _emit(args, payload: dict, table_lines=None):
    if args.table and table_lines is not None:
        for line in table_lines:
            print(line)
    else:
        print(json.dumps(payload, indent=2, default=_num))


def _read_json(path: str):
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from exc


def _load_complex(data: dict, p: int) -> CellComplex:
    kind = data.get("type")
    if kind == "simplicial":
        return CellComplex.simplicial(
            data["cells"], p=p, fibered=bool(data.get("fibered", False))
        )
    if kind == "cubical":
        return CellComplex.cubical(
            data["shape"], data.get("periodic"), p=p,
            fibered=bool(data.get("fibered", False)),
        )
    raise InputError(f"unknown complex type {kind!r}")


def _load_values(path: str, k: CellComplex) -> SampledFunction:
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    mapping = {}
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        a, b = [x.strip() for x in line.split(",")[:2]]
        try:
            mapping[int(a)] = float(b)
        except ValueError:
            continue  # header row
    return SampledFunction.from_mapping(mapping, k.n_vertices)


def _load_mesh(args):
    if args.bundle:
        data = _read_json(args.bundle)
        k = _load_complex(data["complex"], args.field)
        s = SampledFunction(tuple(float(v) for v in data["values"]),
                            clamp=bool(data.get("clamp", False)))
        if len(s.values) != k.n_vertices:
            raise InputError("bundle values do not match the complex")
        return k, s
    if not args.complex or not args.values:
        raise InputError("need COMPLEX and VALUES paths (or --bundle)")
    k = _load_complex(_read_json(args.complex), args.field)
    return k, _load_values(args.values, k)


def _resolve_action(args, k: CellComplex):
    if args.action == "compute":
        return "compute"
    if args.action == "none":
        return None
    return "compute" if (k.kind == "simplicial" and not k.fibered) else None


def sheaf_normalized(b: Barcode) -> Barcode:
    """Flip a function-value barcode to the sheaf sign convention.

    Rays negate their birth; finite bars negate and drop one degree.
    """
    from .barcode import Bar

    out: dict[int, list[Bar]] = {}
    for n, bar in b.all_bars():
        if bar.infinite:
            out.setdefault(n, []).append(Bar(-bar.birth, math.inf))
        else:
            out.setdefault(n - 1, []).append(Bar(-bar.death, -bar.birth))
    return Barcode(out)


def _maybe_svg(args, barcodes, titles):
    if args.svg:
        from .plotting import plot_barcodes

        plot_barcodes(barcodes, args.svg, titles)


# -- command handlers --------------------------------------------------------


def _cmd_dist(args) -> int:
    b1 = Barcode.from_json(_read_json(args.barcode1))
    b2 = Barcode.from_json(_read_json(args.barcode2))
    d = dprime_distance(b1, b2, args.tol)
    payload = {"dprime": d, "d_lower": d / 2.0, "d_upper": d}
    _maybe_svg(args, [b1, b2], ["input 1", "input 2"])
    _emit(args, payload, [
        f"dprime      {d}",
        f"d bracket   [{d / 2.0}, {d}]",
    ])
    return 0


def _cmd_limit(args) -> int:
    seq = CauchyBarcodeSequence.from_json(_read_json(args.sequence))
    limit, cert = cauchy_limit(seq, args.tol)
    payload = {"limit": limit.to_json(), "certificate": cert.to_json()}
    _maybe_svg(args, [limit], ["limit"])
    lines = [f"stages      {len(seq)}", f"certificate {'ok' if cert.ok else 'FAILED'}"]
    lines += [
        f"  n={n:3d} achieved={a:.3e} bound={b:.3e}"
        for n, (a, b) in enumerate(zip(cert.achieved, cert.bounds))
    ]
    _emit(args, payload, lines)
    return 0 if cert.ok else 1


def _cmd_spec(args) -> int:
    k, s = _load_mesh(args)
    res = spec_of_function(k, s, _resolve_action(args, k), args.tol)
    barcode, values = res.barcode, list(res.spec.values)
    if args.sheaf_sign:
        barcode = sheaf_normalized(barcode)
        values = sorted(-v for v in values)
    payload = {
        "spec": values,
        "multiplicities": list(res.spec.multiplicities),
        "barcode": barcode.to_json(),
        "module": res.module.to_json(),
    }
    _maybe_svg(args, [barcode], ["sublevel barcode"])
    _emit(args, payload, [f"spec        {values}"])
    return 0


def _cmd_ls_check(args) -> int:
    k, s = _load_mesh(args)
    res = spec_of_function(k, s, _resolve_action(args, k), args.tol)
    report = ls_check(res.module, tol=args.tol)
    _maybe_svg(args, [res.barcode], ["sublevel barcode"])
    _emit(args, report.to_json(), [
        f"#spec            {report.n_spec}",
        f"cup length       {report.cl_total}",
        f"counting rhs     {report.counting_rhs}",
        f"inequality       {'holds' if report.inequality_holds else 'FAILED'}",
        f"degenerate level {report.degenerate_level}",
    ])
    return 0 if report.inequality_holds else 1


def _cmd_gamma(args) -> int:
    k, s = _load_mesh(args)
    action = _resolve_action(args, k)
    fwd = spec_of_function(k, s, action, args.tol)
    bwd = spec_of_function(k, dual_function(s), action, args.tol)
    report = gamma_duality_check(fwd.barcode, fwd.module, bwd.module, args.tol)
    payload = report.to_json()
    payload["oscillation"] = s.max - s.min
    _maybe_svg(args, [fwd.barcode, bwd.barcode], ["forward", "backward"])
    _emit(args, payload, [
        f"gamma            {report.gamma}",
        f"barcode distance {report.barcode_distance}",
        f"oscillation      {payload['oscillation']}",
        f"duality          {'ok' if report.ok else 'FAILED'}",
    ])
    return 0 if report.ok else 1


def _cmd_cone_check(args) -> int:
    if args.random:
        reports, summary = run_cone_suite(args.random, args.seed)
        payload = {"suite": "cone", **summary.to_json()}
        if args.kernel:
            _, ksummary = run_kernel_suite(args.random, args.seed)
            payload["kernel"] = ksummary.to_json()
        _emit(args, payload, [
            f"pairs     {summary.n_pairs}",
            f"failures  {summary.n_failures}",
            f"max ratio {summary.max_ratio}",
        ])
        ok = summary.ok and (not args.kernel or payload["kernel"]["ok"])
        return 0 if ok else 1
    if not args.certificate:
        raise InputError("need a certificate file or --random N")
    cert = InterleavingCertificate.from_json(_read_json(args.certificate))
    report = cone_torsion_bound_check(cert, args.tol)
    _emit(args, report.to_json(), [
        f"a, b         {report.a}, {report.b}",
        f"cone torsion {report.cone_torsion}",
        f"bound        {report.bound}",
        f"status       {'ok' if report.ok else 'FAILED'}",
    ])
    return 0 if report.ok else 1


def _cmd_demo(args) -> int:
    bundle = demo_bundle(args.name)
    if args.dir:
        out = Path(args.dir)
        out.mkdir(parents=True, exist_ok=True)
        written = []
        if "sequence" in bundle:
            path = out / "sequence.json"
            path.write_text(json.dumps(bundle["sequence"], indent=2))
            written.append(str(path))
        else:
            cpath = out / "complex.json"
            cpath.write_text(json.dumps(bundle["complex"], indent=2))
            vpath = out / "values.csv"
            vpath.write_text(
                "vertex_id,value\n"
                + "\n".join(f"{i},{v}" for i, v in enumerate(bundle["values"]))
                + "\n"
            )
            written.extend([str(cpath), str(vpath)])
        print(json.dumps({"demo": args.name, "files": written}, indent=2))
    else:
        print(json.dumps(bundle, indent=2, default=_num))
    return 0


# -- parser ------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", type=int, default=2, metavar="P",
                        help="prime field characteristic (default 2)")
    common.add_argument("--tol", type=float, default=1e-9,
                        help="comparison tolerance (default 1e-9)")
    common.add_argument("--seed", type=int, default=0,
                        help="seed for randomized suites")
    common.add_argument("--table", action="store_true",
                        help="human-readable output instead of JSON")
    common.add_argument("--svg", metavar="PATH",
                        help="render persistence diagrams to this file")
    common.add_argument("--sheaf-sign", action="store_true",
                        help="report barcodes and spectra in the sheaf sign convention")

    parser = argparse.ArgumentParser(
        prog="barspec",
        description="barcode distances, limits, and spectral invariants",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dist", parents=[common],
                       help="isomorphism distance between two barcode files")
    p.add_argument("barcode1")
    p.add_argument("barcode2")
    p.set_defaults(handler=_cmd_dist)

    p = sub.add_parser("limit", parents=[common],
                       help="limit of a Cauchy sequence of barcodes")
    p.add_argument("sequence")
    p.set_defaults(handler=_cmd_limit)

    for name, handler in (("spec", _cmd_spec), ("ls-check", _cmd_ls_check),
                          ("gamma", _cmd_gamma)):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("complex", nargs="?")
        p.add_argument("values", nargs="?")
        p.add_argument("--bundle", help="demo bundle JSON ('-' for stdin)")
        p.add_argument("--action", choices=["auto", "compute", "none"], default="auto",
                       help="ring action handling (default auto)")
        p.set_defaults(handler=handler)

    p = sub.add_parser("cone-check", parents=[common],
                       help="cone-torsion report for a certificate or random suite")
    p.add_argument("certificate", nargs="?")
    p.add_argument("--random", type=int, metavar="N",
                   help="run the seeded random suite with N pairs")
    p.add_argument("--kernel", action="store_true",
                   help="also run the shift-kernel suite")
    p.set_defaults(handler=_cmd_cone_check)

    p = sub.add_parser("demo", parents=[common],
                       help="emit a worked example dataset")
    p.add_argument("name", choices=DEMO_NAMES)
    p.add_argument("--dir", help="write files here instead of stdout")
    p.set_defaults(handler=_cmd_demo)
    return parser


def _validate_config(args):
    if getattr(args, "field", 2) < 2 or any(
        args.field % q == 0 for q in range(2, int(math.isqrt(args.field)) + 1)
    ):
        raise InputError(f"--field {args.field} is not prime")
    if getattr(args, "tol", 1e-9) <= 0:
        raise InputError("--tol must be positive")


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        _validate_config(args)
        return args.handler(args)
    except CheckFailed as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}),
              file=sys.stderr)
        return 1
    except (InputError, FileNotFoundError, ValueError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}),
              file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
