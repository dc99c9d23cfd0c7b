"""Command-line front end: ``kmsspec <subcommand> ...``.

Exit codes: 0 success, 1 usage error, 2 numerical failure, 3 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import approx
from .chebpoly import ZeroType
from .classify import classify_params
from .complexspectrum import complex_spectrum, double_eigen_loci
from .errors import InvalidParameterError, KmsError, SizeLimitError
from .matrix import KmsParams, build_kms
from .oracle import SYMMETRIC_LIMIT, oracle_eig
from .realspectrum import RootKind, real_spectrum
from .verify import run_checks

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL, EXIT_VERIFY = 0, 1, 2, 3

SWEEP_COLUMNS = ["rho_re", "rho_im", "k", "lambda_re", "lambda_im", "mu_re", "mu_im", "klass", "zero_type"]

_NUM = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_REAL = re.compile(rf"^\s*([+-]?{_NUM})\s*$")
_COMPLEX = re.compile(rf"^\s*([+-]?{_NUM})\s*([+-])\s*({_NUM})?\s*i\s*$")


class UsageError(Exception):
    pass


def parse_rho(text: str) -> float | complex:
    """``<float>`` or ``<float><sign><float>i`` (the imaginary magnitude may be omitted: ``1+i``)."""
    m = _REAL.match(text)
    if m:
        return float(m.group(1))
    m = _COMPLEX.match(text)
    if m:
        im = float(m.group(3)) if m.group(3) else 1.0
        return complex(float(m.group(1)), im if m.group(2) == "+" else -im)
    raise UsageError(f"cannot parse rho {text!r}; expected e.g. 0.5 or 1.5-0.25i")


def _fmt(x: float) -> str:
    return "%.17g" % x


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_common(p, rho=True, fmt=True):
    p.add_argument("--n", type=int, required=True)
    if rho:
        p.add_argument("--rho", type=str, required=True)
    p.add_argument("--tol", type=float, default=1e-12, help="largest accepted relative residual")
    if fmt:
        p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--out", default="-", help="output path, '-' for stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="kmsspec", description="Structured eigensolver for KMS matrices rho^|j-k|.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("spectrum", help="all eigenpairs of K_n(rho)")
    _add_common(p)
    p.add_argument("--no-vectors", action="store_true")

    p = sub.add_parser("sweep", help="lambda_k(rho) over a real rho range, CSV")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--rho-start", type=float, required=True)
    p.add_argument("--rho-end", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--workers", type=int, default=4)
    p.add_argument("--out", default="-")

    p = sub.add_parser("classify", help="matrix-class flags for K_n(rho)")
    _add_common(p)

    p = sub.add_parser("double-locus", help="rho values with a double eigenvalue -n")
    _add_common(p, rho=False)
    p.add_argument("--type", choices=["1", "2", "both"], default="both")

    p = sub.add_parser("approx", help="approximation errors")
    _add_common(p, fmt=False)
    p.add_argument("--kind", choices=["large", "regula-falsi", "near-one"], required=True)

    p = sub.add_parser("bench", help="structured vs oracle timings, CSV")
    p.add_argument("--n-list", required=True, help="comma-separated sizes")
    p.add_argument("--rho", type=str, required=True)
    p.add_argument("--out", default="-")

    p = sub.add_parser("verify", help="run the self-verification suite")
    p.add_argument("--level", choices=["quick", "full"], default="quick")
    p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    return parser


# ------------------------------------------------------------ output helpers


def _write(text: str, out: str) -> None:
    if out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="") as fh:
            fh.write(text)


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _cplx(z) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


# ------------------------------------------------------------ commands


def _real_rows(res):
    rho = res.params.rho
    rows = []
    for pr in res.pairs:
        hyp = pr.mu.kind is RootKind.HYPERBOLIC
        mu_re, mu_im = (0.0, pr.mu.value) if hyp else (pr.mu.value, 0.0)
        rows.append([_fmt(rho), _fmt(0.0), pr.k, _fmt(pr.lam), _fmt(0.0), _fmt(mu_re), _fmt(mu_im), pr.klass.value, pr.zero_type.value])
    return rows


def _complex_rows(p, pairs):
    rows = []
    for k, pr in enumerate(pairs):
        zt = pr.zero_type.value if pr.zero_type is not None else "n/a"
        rows.append(
            [_fmt(p.rho.real), _fmt(p.rho.imag), k, _fmt(pr.lam.real), _fmt(pr.lam.imag), _fmt(pr.mu.real), _fmt(pr.mu.imag), "n/a", zt]
        )
    return rows


def _relative_residual(p, lams, vecs) -> float | None:
    if p.n > 2000:
        return None
    k = build_kms(p)
    knorm = float(np.max(np.sum(np.abs(k), axis=1)))
    worst = 0.0
    for lam, y in zip(lams, vecs):
        if not np.all(np.isfinite(y)):
            return math.inf
        worst = max(worst, float(np.max(np.abs(k @ y - lam * y)) / (knorm * np.max(np.abs(y)))))
    return worst


def cmd_spectrum(args) -> int:
    p = KmsParams(args.n, parse_rho(args.rho))
    classes = classify_params(p).as_dict()
    if p.is_real:
        res = real_spectrum(p, vectors=not args.no_vectors)
        residual = res.diagnostics.get("max_residual")
        if args.format == "csv":
            text = _csv_text(SWEEP_COLUMNS, _real_rows(res))
        else:
            body = res.to_dict()
            body["classes"] = classes
            text = json.dumps(body) + "\n"
    else:
        pairs, flags = complex_spectrum(p, with_flags=True)
        residual = None if args.no_vectors else _relative_residual(p, [q.lam for q in pairs], [q.vector for q in pairs])
        if args.format == "csv":
            text = _csv_text(SWEEP_COLUMNS, _complex_rows(p, pairs))
        else:
            body = {
                "n": p.n,
                "rho": _cplx(p.rho),
                "pairs": [
                    {
                        "lambda": _cplx(q.lam),
                        "z": _cplx(q.z),
                        "mu": _cplx(q.mu),
                        "vector": None if args.no_vectors else [_cplx(v) for v in q.vector],
                        "zero_type": q.zero_type.value if q.zero_type is not None else None,
                    }
                    for q in pairs
                ],
                "diagnostics": {"max_residual": residual, **flags},
                "classes": classes,
            }
            text = json.dumps(body) + "\n"
    if residual is not None and residual > args.tol:
        print(f"residual {residual:.3g} exceeds --tol {args.tol:g}", file=sys.stderr)
        return EXIT_NUMERICAL
    _write(text, args.out)
    return EXIT_OK


def sweep_rows(n: int, start: float, end: float, steps: int, workers: int = 4):
    if steps < 1:
        raise UsageError("--steps must be >= 1")
    rhos = [start] if steps == 1 else list(np.linspace(start, end, steps))

    def one(rho):
        return _real_rows(real_spectrum(KmsParams(n, float(rho)), vectors=False))

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        chunks = list(pool.map(one, rhos))
    return [row for chunk in chunks for row in chunk]


def cmd_sweep(args) -> int:
    rows = sweep_rows(args.n, args.rho_start, args.rho_end, args.steps, args.workers)
    _write(_csv_text(SWEEP_COLUMNS, rows), args.out)
    return EXIT_OK


def cmd_classify(args) -> int:
    p = KmsParams(args.n, parse_rho(args.rho))
    flags = classify_params(p).as_dict()
    if args.format == "csv":
        text = _csv_text(["flag", "value"], [[k, str(v).lower()] for k, v in flags.items()])
    else:
        rho = p.rho if p.is_real else _cplx(p.rho)
        text = json.dumps({"n": p.n, "rho": rho, "classes": flags}) + "\n"
    _write(text, args.out)
    return EXIT_OK


def cmd_double_locus(args) -> int:
    types = {"1": [ZeroType.TYPE1], "2": [ZeroType.TYPE2], "both": [ZeroType.TYPE1, ZeroType.TYPE2]}[args.type]
    loci = []
    for t in types:
        need = 4 if t is ZeroType.TYPE1 else 3
        if args.n >= need:
            loci.extend(double_eigen_loci(args.n, t))
    if args.format == "csv":
        header = ["n", "type", "t0_re", "t0_im", "rho_re", "rho_im", "residual", "derivative_residual"]
        rows = [
            [l.n, l.type_tag.value, _fmt(l.t0.real), _fmt(l.t0.imag), _fmt(l.rho.real), _fmt(l.rho.imag), _fmt(l.residual), _fmt(l.derivative_residual)]
            for l in loci
        ]
        text = _csv_text(header, rows)
    else:
        text = json.dumps(
            {
                "n": args.n,
                "loci": [
                    {
                        "type": l.type_tag.value,
                        "t0": _cplx(l.t0),
                        "rho": _cplx(l.rho),
                        "residual": l.residual,
                        "derivative_residual": l.derivative_residual,
                    }
                    for l in loci
                ],
            }
        ) + "\n"
    _write(text, args.out)
    return EXIT_OK


def cmd_approx(args) -> int:
    rho = parse_rho(args.rho)
    if args.kind == "large":
        rep = approx.large_eigs_report(args.n, rho)
    else:
        if isinstance(rho, complex):
            raise InvalidParameterError(f"{args.kind} needs real rho")
        fn = approx.regula_falsi_report if args.kind == "regula-falsi" else approx.near_one_report
        rep = fn(args.n, rho)
    enc = [_cplx(v) if np.iscomplexobj(rep.approx_values) else float(v) for v in rep.approx_values]
    exact = [_cplx(v) if np.iscomplexobj(rep.exact_values) else float(v) for v in rep.exact_values]
    text = json.dumps({"kind": args.kind, "n": args.n, "approx": enc, "exact": exact, "max_rel_error": rep.max_rel_error})
    _write(text + "\n", args.out)
    return EXIT_OK


def bench_rows(ns, rho):
    rows = []
    for n in ns:
        p = KmsParams(n, rho)
        t0 = time.perf_counter()
        real_spectrum(p, vectors=False)
        t_struct = (time.perf_counter() - t0) * 1e3
        try:
            if n > SYMMETRIC_LIMIT:
                raise SizeLimitError(f"n={n} exceeds the oracle limit")
            a = build_kms(p)
            t0 = time.perf_counter()
            oracle_eig(a)
            t_oracle = _fmt((time.perf_counter() - t0) * 1e3)
        except (SizeLimitError, MemoryError):
            t_oracle = "size limit"
        except KmsError as exc:
            t_oracle = f"skipped: {type(exc).__name__}"
        rows.append([n, "%.3f" % t_struct, t_oracle])
    return rows


def cmd_bench(args) -> int:
    rho = parse_rho(args.rho)
    if isinstance(rho, complex):
        raise UsageError("bench needs real rho")
    try:
        ns = [int(x) for x in args.n_list.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"bad --n-list: {exc}") from exc
    _write(_csv_text(["n", "t_structured_ms", "t_oracle_ms"], bench_rows(ns, rho)), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    results = run_checks(args.level, inject_fault=args.inject_fault)
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'} {r.name}: {r.detail} ({r.seconds:.2f}s)")
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_VERIFY


COMMANDS = {
    "spectrum": cmd_spectrum,
    "sweep": cmd_sweep,
    "classify": cmd_classify,
    "double-locus": cmd_double_locus,
    "approx": cmd_approx,
    "bench": cmd_bench,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvalidParameterError as exc:
        print(f"invalid parameter: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (KmsError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
