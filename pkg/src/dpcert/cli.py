"""Command-line front end: ``dpcert suite | certify | explain``.

Exit codes: 0 certified (or all suites pass), 1 fails / not established,
2 undecided, 3 input error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional

from . import __version__
from .certify.report import CERTIFIED, FAILS, NOT_ESTABLISHED, UNDECIDED
from .certify.saturation import SCHEMA, Certificate, Derived, Replayer, ReplayError, SaturationConfig
from .certify.verdict import InputError, main_theorem_verdict
from .derivations import WindowError
from .exactpoly import PolySyntaxError
from .hypersurface import SurfabShorthand, SurfaceSpec
from .suites import SUITES, SuiteOptions, UnknownSuite, run_suites

EXIT = {CERTIFIED: 0, FAILS: 1, NOT_ESTABLISHED: 1, UNDECIDED: 2}
INPUT_ERROR = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return v


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="dpcert", description="Certify identities and density criteria for "
                                           "surfaces x^2*y = a(z) + x*b(z).")
    p.add_argument("--version", action="version", version=f"dpcert {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def output(sp):
        sp.add_argument("--format", choices=("json", "md"), default="json")
        sp.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")
        sp.add_argument("--timings", action="store_true",
                        help="include wall times (makes the report run-dependent)")

    s = sub.add_parser("suite", help="run the registered identity suites")
    s.add_argument("--suite", action="append", metavar="NAME",
                   help="run only this suite (repeatable); one of: " + ", ".join(SUITES))
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--vz", choices=("catalogue", "printed"), default="catalogue",
                   help="v_z variant used by the tangency suite")
    output(s)

    c = sub.add_parser("certify", help="run the density / volume density pipeline")
    c.add_argument("--a", help="a(z0..zn), e.g. '-(z0^2+z1^3)'")
    c.add_argument("--b", help="b(z0..zn)")
    c.add_argument("--n", type=_nonneg, default=None)
    c.add_argument("--alpha", help="x^2*y = z^2 - beta + alpha*x")
    c.add_argument("--beta")
    c.add_argument("--degree", type=_nonneg, default=5, help="degree of the saturation targets")
    c.add_argument("--cap", type=_nonneg, default=None,
                   help="largest degree kept in the closure (default max(12, degree))")
    c.add_argument("--kmax", type=_nonneg, default=6)
    c.add_argument("--rounds", type=_nonneg, default=64)
    c.add_argument("--h-flag", action="store_true",
                   help="assert H^{n+1}(X, C) = 0 (used only for volume density, n > 0)")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--jobs", type=_positive, default=1)
    c.add_argument("--cert-dir", metavar="DIR", help="write saturation certificates here")
    output(c)

    e = sub.add_parser("explain", help="replay a certificate and print its derivation")
    e.add_argument("path")
    e.add_argument("--format", choices=("text", "json"), default="text")
    return p


# -- reports ----------------------------------------------------------------------------


def _dump(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _emit(text: str, out: Optional[str]):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _base(command: str) -> dict:
    return {"schema": SCHEMA, "tool": "dpcert", "version": __version__, "command": command}


def _md_suites(report: dict) -> str:
    lines = ["# dpcert suite", "", "| suite | status | checked |", "|---|---|---|"]
    for r in report["suites"]:
        lines.append(f"| {r['name']} | {r['status']} | {r['checked']} |")
    lines += ["", f"**Overall:** {report['overall']}"]
    for r in report["suites"]:
        for f in r["failures"]:
            lines.append(f"- {r['name']}: {f}")
    return "\n".join(lines) + "\n"


def _md_certify(report: dict) -> str:
    res = report["result"]
    surf = res["surface"]
    lines = ["# dpcert certify", "",
             f"Surface: `x^2*y = {surf['a']} + x*({surf['b']})`, n = {surf['n']}, "
             f"k_window = {surf['k_window']}", ""]
    lines += ["## Hypotheses", ""]
    lines += [f"- {k}: {v}" for k, v in sorted(res["hypotheses"].items())]
    tr = res["transitivity"]
    lines += ["", "## Transitivity", "", f"- {tr.get('summary', '')}"]
    for cond in ("condition_A", "condition_B"):
        if cond in tr:
            lines.append(f"- {cond}: {tr[cond]['status']} ({tr[cond]['reason']})")
    lines += ["", "## Checks", "", "| check | status | reason |", "|---|---|---|"]
    for c in res["checks"]:
        lines.append(f"| {c['name']} | {c['status']} | {c['reason']} |")
    lines += ["", "## Verdicts", "",
              f"- Density property: {res['density_property']['status']}: "
              f"{res['density_property']['reason']}",
              f"- Volume density property: {res['volume_density_property']['status']}: "
              f"{res['volume_density_property']['reason']}"]
    if res["assumptions"]:
        lines += ["", "Assumptions:"] + [f"- {a}" for a in res["assumptions"]]
    lines += ["", f"**Overall:** {report['overall']}"]
    return "\n".join(lines) + "\n"


# -- commands ---------------------------------------------------------------------------


def cmd_suite(args) -> int:
    opts = SuiteOptions(seed=args.seed, printed_vz=args.vz == "printed")
    try:
        results = run_suites(args.suite, opts)
    except UnknownSuite as exc:
        raise UsageError(f"unknown suite {exc.args[0]!r}; known: {', '.join(SUITES)}")
    ok = all(r.passed for r in results)
    report = _base("suite")
    report.update({"seed": args.seed, "vz": args.vz,
                   "suites": [r.to_dict(args.timings) for r in results],
                   "overall": "PASS" if ok else "FAIL"})
    _emit(_md_suites(report) if args.format == "md" else _dump(report), args.out)
    return 0 if ok else 1


def surface_from_args(args):
    poly_style = args.a is not None or args.b is not None or args.n is not None
    short_style = args.alpha is not None or args.beta is not None
    if poly_style and short_style:
        raise UsageError("give either --a/--b/--n or --alpha/--beta, not both")
    if short_style:
        if args.alpha is None or args.beta is None:
            raise UsageError("--alpha and --beta must be given together")
        return SurfabShorthand(args.alpha, args.beta)
    if args.a is None or args.b is None:
        raise UsageError("a surface needs --a and --b (or --alpha and --beta)")
    return SurfaceSpec.from_strings(args.a, args.b, args.n if args.n is not None else 0)


def _write_certificates(verdict, cert_dir: str):
    os.makedirs(cert_dir, exist_ok=True)
    written = []
    for name, certs in sorted(verdict.certificates().items()):
        for i, cert in enumerate(certs):
            path = os.path.join(cert_dir, f"{name}-{i:04d}.json")
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(cert.to_json() + "\n")
            written.append(os.path.basename(path))
    return written


def cmd_certify(args) -> int:
    surface = surface_from_args(args)
    cap = args.cap if args.cap is not None else max(12, args.degree)
    cfg = SaturationConfig(degree_target=args.degree, degree_cap=cap, k_max=args.kmax,
                           max_rounds=args.rounds, seed=args.seed, jobs=args.jobs)
    verdict = main_theorem_verdict(surface, h_flag=args.h_flag, cfg=cfg, jobs=args.jobs)
    report = _base("certify")
    report["result"] = verdict.to_dict(args.timings)
    report["overall"] = verdict.overall
    report["exit_code"] = EXIT[verdict.overall]
    if args.cert_dir:
        report["certificates"] = _write_certificates(verdict, args.cert_dir)
    _emit(_md_certify(report) if args.format == "md" else _dump(report), args.out)
    return EXIT[verdict.overall]


class ExplainError(Exception):
    """A well-formed certificate whose replay does not reproduce it."""


def explain_lines(cert: Certificate) -> list:
    """Replay ``cert`` and describe the derivation of every row it uses."""
    rp = Replayer(cert.surface, cert.engine, cert.config)
    st = rp.state
    images = {}
    for i, prov in enumerate(cert.rows):
        if isinstance(prov, Derived) and 0 <= prov.parent < len(st.rows) \
                and 0 <= prov.op < len(st.ops):
            images[i] = rp.fields.image(st.ops[prov.op], st.rows[prov.parent].poly)
        try:
            rp.extend(cert.rows[:i + 1])
        except ReplayError as exc:
            raise ExplainError(f"replay mismatch: {exc}")
    if not rp.check(cert):
        raise ExplainError("replay mismatch: the recorded combination does not give the target")

    needed, stack = set(), [rid for _, rid in cert.combination]
    while stack:
        rid = stack.pop()
        if rid in needed:
            continue
        needed.add(rid)
        if isinstance(cert.rows[rid], Derived):
            stack.append(cert.rows[rid].parent)

    cfg = cert.config
    label = cert.surface.label or cert.surface.describe()
    lines = [f"target {cert.target} on {label} ({cert.engine} closure, degree target "
             f"{cfg.degree_target}, cap {cfg.degree_cap}, k_max {cfg.k_max})"]
    if cert.source:
        lines.append(f"target is div({cert.source} * v_y)")
    for rid in sorted(needed):
        prov = cert.rows[rid]
        stored = st.rows[rid].poly
        if isinstance(prov, Derived):
            op = st.ops[prov.op].name()
            line = f"row {rid}: row {prov.parent} -{op}-> {images[rid]}"
            if images[rid] != stored:
                line += f", reduced to {stored}"
        else:
            line = f"row {rid}: seed {prov.name()} = {stored}"
        lines.append(line)
        lines.append(f"  word: {_word(cert, rid, st)}")
    combo = " + ".join(f"({c}) * row {rid}" for c, rid in cert.combination)
    lines.append(f"combination: {combo or 'none, the target is a constant'}")
    if cert.constant != 0:
        lines.append(f"constant: {cert.constant}")
    lines.append("replay: OK")
    return lines


def _word(cert: Certificate, rid: int, st) -> str:
    parts = []
    while isinstance(cert.rows[rid], Derived):
        parts.append(st.ops[cert.rows[rid].op].name())
        rid = cert.rows[rid].parent
    parts.append(f"seed {cert.rows[rid].name()}")
    return " . ".join(parts)


def cmd_explain(args) -> int:
    try:
        with open(args.path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {args.path}: {exc.strerror}")
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed certificate: {exc}")
    if not isinstance(data, dict):
        raise UsageError("malformed certificate: expected a JSON object")
    cert = Certificate.from_dict(data)
    try:
        lines = explain_lines(cert)
        ok, status = True, "OK"
    except ExplainError as exc:
        lines, ok, status = [str(exc)], False, "MISMATCH"
    if args.format == "json":
        sys.stdout.write(_dump({**_base("explain"), "replay": status, "lines": lines}))
    else:
        stream = sys.stdout if ok else sys.stderr
        stream.write("\n".join(lines) + "\n")
    return 0 if ok else 1


COMMANDS = {"suite": cmd_suite, "certify": cmd_certify, "explain": cmd_explain}
VALUE_OPTIONS = ("--a", "--b", "--alpha", "--beta")


def _glue_values(argv: list) -> list:
    """Attach the token after --a/--b/--alpha/--beta to the option, so that
    values such as ``-(z0^2+z1^3)`` are not mistaken for options."""
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in VALUE_OPTIONS and i + 1 < len(argv):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    try:
        argv = sys.argv[1:] if argv is None else list(argv)
        args = parser.parse_args(_glue_values(argv))
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"dpcert: error: {exc}", file=sys.stderr)
        return INPUT_ERROR
    except (InputError, PolySyntaxError, WindowError, ValueError, ZeroDivisionError) as exc:
        print(f"dpcert: input error: {exc}", file=sys.stderr)
        return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
