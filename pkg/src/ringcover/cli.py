"""Command-line front end.

Exit codes: 0 every requested check passed, 1 a mathematical check
failed, 2 usage or budget error.
"""
from __future__ import annotations

import argparse
import datetime as _dt
import json
import os
import sys
from pathlib import Path

from .gfq import BudgetExceeded, prime_power
from .ring import BoundExceeded, RingError, load_ring, save_ring

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class Report:
    """Ordered ``key: value`` lines plus an exit status."""

    def __init__(self, timestamp: bool):
        self.lines: list[str] = []
        self.failed = False
        if timestamp:
            self.lines.append(f"generated: {_dt.datetime.now(_dt.timezone.utc).isoformat(timespec='seconds')}")

    def add(self, line: str) -> None:
        self.lines.append(line)

    def check(self, name: str, ok, detail: str = "") -> None:
        status = "SKIP" if ok is None else ("PASS" if ok else "FAIL")
        if ok is False:
            self.failed = True
        self.lines.append(f"{status} {name}" + (f": {detail}" if detail else ""))

    def emit(self, out) -> int:
        out.write("\n".join(self.lines) + "\n")
        return EXIT_FAIL if self.failed else EXIT_OK


def _cmd_classify(args, rep: Report) -> None:
    from .catalog import identify
    from .covering import classify_good_rings

    classes = classify_good_rings(args.order, jobs=args.jobs)
    ids = [identify(c.ring) for c in classes]
    rep.add(f"order: {args.order}")
    rep.add(f"classes: {len(classes)}")
    out = Path(args.out or f"classified-{args.order}")
    out.mkdir(parents=True, exist_ok=True)
    for idx, (c, i) in enumerate(zip(classes, ids)):
        path = out / f"order{args.order}_class{idx}.ring"
        save_ring(c.ring, path)
        rep.add(f"class {idx}: tables {c.n_tables}, catalog {'2.' + str(i) if i else 'none'}, file {path.name}")
    expected = {4: [1, 2, 3, 4], 8: [5, 6, 7, 8, 9]}[args.order]
    matched = sorted(i for i in ids if i is not None)
    rep.check(
        "bijection with catalog",
        matched == expected,
        f"{len(classes)} classes, matched catalog 2.{expected[0]}-2.{expected[-1]}" if matched == expected else f"matched {matched}",
    )


def _cmd_sigma(args, rep: Report) -> None:
    if args.ring:
        from .covering import sigma_exact

        R = load_ring(args.ring)
        sol = sigma_exact(R)
        rep.add(f"ring: {args.ring} (order {R.order})")
        if not sol.coverable:
            rep.add("sigma: NotCoverable")
        else:
            rep.add(f"sigma: {sol.size}")
            for m in sol.members:
                rep.add(f"member: {sorted(i for i in range(R.order) if m >> i & 1)}")
        return
    from .matring import brute_force_sigma, sigma_formula

    n, q = args.matrix
    if n < 2:
        raise _Usage("n must be at least 2")
    try:
        prime_power(q)
    except ValueError as exc:
        raise _Usage(str(exc)) from exc
    formula = sigma_formula(n, q)
    try:
        brute = brute_force_sigma(n, q).size
    except BudgetExceeded:
        rep.add(f"M_{n}({q}): formula {formula}, brute-force skipped (budget)")
        return
    agree = brute == formula
    rep.add(f"M_{n}({q}): formula {formula}, brute-force {brute}, {'AGREE' if agree else 'DISAGREE'}")
    if not agree:
        rep.failed = True


class _Usage(Exception):
    pass


def _suite_examples(rep: Report) -> None:
    from .catalog import catalog
    from .covering import has_two_cover, is_good_tuple, sigma_exact

    for e in catalog():
        ok, reason = is_good_tuple(e.ring, *e.tuple.subrings)
        rep.check(f"Example 2.{e.id} good tuple", ok, reason or f"order {e.ring.order}")
        rep.check(f"Example 2.{e.id} sigma = 3", sigma_exact(e.ring).size == 3)
        rep.check(f"Example 2.{e.id} no two-cover", not has_two_cover(e.ring))


def _suite_section6(rep: Report) -> None:
    from .catalog import verify_section6

    for c in verify_section6():
        rep.check(c.name, c.passed, c.detail)


def _suite_theorem2(rep: Report, jobs: int) -> None:
    from .catalog import theorem2_corpus
    from .covering import has_two_cover, theorem2_decide

    for name, R in theorem2_corpus(jobs=jobs):
        r = theorem2_decide(R)
        target = f", factor 2.{r.target}" if r.target else ""
        rep.check(f"{name}", r.agree, f"three-cover {r.direct}, good factor {r.via_quotient}{target}")
        rep.check(f"{name} no two-cover", not has_two_cover(R))


def _suite_unbeatable(rep: Report, n: int, q: int) -> None:
    from .matring import centralizer_check, check_unbeatable, half_block_check, singer_uniqueness

    r = check_unbeatable(n, q)
    rep.add(f"M_{n}({q}) mode: {r.mode}")
    for key, c in r.conditions.items():
        rep.check(f"condition ({key})", c.passed, c.detail)
    for key, c in r.checks.items():
        rep.check(key, c.passed, c.detail)
    if r.mode == "elementwise":
        rep.check("Singer uniqueness", singer_uniqueness(n, q).passed, singer_uniqueness(n, q).detail)
        if any(p.kind == "Tk" for p in r.pi):
            c = centralizer_check(n, q)
            rep.check("Tk centralizer size", c.passed, c.detail)
        if n == 2:
            c = half_block_check(n, q)
            rep.check("T_{n/2} centralizer blocks", c.passed, c.detail)


def _suite_cover(rep: Report, n: int, q: int, cert_out) -> None:
    from .matring import VerificationBudgetExceeded, build_cover, save_certificate

    try:
        cert = build_cover(n, q)
    except VerificationBudgetExceeded as exc:
        rep.add(f"M_{n}({q}): |H| = {exc.certificate.size}, unverified ({exc})")
        if cert_out:
            save_certificate(exc.certificate, cert_out)
        raise
    rep.add(f"M_{n}({q}): |H| = {cert.size}, mode {cert.mode}")
    if cert.mode == "full-scan":
        rep.check("certificate verified", cert.verified, f"{cert.covered}/{cert.total} elements covered")
    else:
        cases = ", ".join(f"{k}: {v}" for k, v in cert.cases.items())
        rep.check("certificate verified", cert.verified, f"{sum(cert.cases.values())} characteristic polynomials; {cases}")
    if cert_out:
        save_certificate(cert, cert_out)
        rep.add(f"certificate: {cert_out}")


def _cmd_verify(args, rep: Report) -> None:
    suite, *rest = args.suite
    if suite in ("unbeatable", "cover"):
        if len(rest) != 2:
            raise _Usage(f"suite {suite} takes n and q")
        try:
            n, q = int(rest[0]), int(rest[1])
            prime_power(q)
        except ValueError as exc:
            raise _Usage(str(exc)) from exc
        if n < 2:
            raise _Usage("n must be at least 2")
        if suite == "unbeatable":
            _suite_unbeatable(rep, n, q)
        else:
            _suite_cover(rep, n, q, args.cert_out)
        return
    if rest:
        raise _Usage(f"suite {suite} takes no arguments")
    if suite == "examples":
        _suite_examples(rep)
    elif suite == "section6":
        _suite_section6(rep)
    elif suite == "theorem2":
        _suite_theorem2(rep, args.jobs)
    else:
        raise _Usage(f"unknown suite {suite!r}")


def _cmd_catalog(args, rep: Report) -> None:
    from .catalog import catalog

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for e in catalog():
        if args.id and e.id != args.id:
            continue
        path = out / f"example_2_{e.id}.ring"
        save_ring(e.ring, path)
        members = [sorted(i for i in range(e.ring.order) if m >> i & 1) for m in e.tuple.subrings]
        rep.add(
            f"Example 2.{e.id}: order {e.ring.order}, unital {e.unital}, commutative {e.commutative}, "
            f"ambient {e.ambient}, tuple {members}, file {path.name}"
        )


def _cmd_cert(args, rep: Report) -> None:
    from .covering import verify_certificate
    from .matring import verify_cover_certificate

    doc = json.loads(Path(args.file).read_text())
    checks = verify_cover_certificate(doc) if doc.get("kind") == "matrix_cover" else verify_certificate(doc)
    rep.add(f"certificate: {args.file} ({doc.get('kind')})")
    for name, ok in checks.items():
        rep.check(name, ok)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--no-timestamp", action="store_true", help="omit the timestamp line")
    common.add_argument("--jobs", type=int, default=os.cpu_count() or 1, help="worker processes")

    p = argparse.ArgumentParser(prog="ringcover", description="Covers of finite rings by proper subrings.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", parents=[common], help="enumerate good rings of order 4 or 8")
    c.add_argument("--order", type=int, choices=(4, 8), required=True)
    c.add_argument("--out", help="directory for ring files (default classified-<order>)")
    c.set_defaults(func=_cmd_classify)

    s = sub.add_parser("sigma", parents=[common], help="covering number of a ring or of M_n(q)")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--ring", help="ring file")
    g.add_argument("--matrix", nargs=2, type=int, metavar=("N", "Q"))
    s.set_defaults(func=_cmd_sigma)

    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument(
        "--suite", nargs="+", required=True, metavar="NAME",
        help="examples | section6 | theorem2 | unbeatable N Q | cover N Q",
    )
    v.add_argument("--cert-out", help="write the matrix cover certificate here (suite cover)")
    v.set_defaults(func=_cmd_verify)

    k = sub.add_parser("catalog", parents=[common], help="catalog operations")
    k.add_argument("action", choices=("dump",))
    k.add_argument("--id", type=int, choices=range(1, 11), help="only this example")
    k.add_argument("--out", default="catalog", help="directory for ring files")
    k.set_defaults(func=_cmd_catalog)

    r = sub.add_parser("cert", parents=[common], help="certificate operations")
    r.add_argument("action", choices=("reverify",))
    r.add_argument("file")
    r.set_defaults(func=_cmd_cert)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    if args.jobs < 1:
        sys.stderr.write("ringcover: --jobs must be positive\n")
        return EXIT_USAGE
    rep = Report(timestamp=not args.no_timestamp)
    try:
        args.func(args, rep)
    except _Usage as exc:
        sys.stderr.write(f"ringcover: {exc}\n")
        return EXIT_USAGE
    except (BudgetExceeded, BoundExceeded) as exc:
        rep.add(f"budget: {exc}")
        rep.emit(out)
        return EXIT_USAGE
    except (RingError, OSError, json.JSONDecodeError, KeyError) as exc:
        sys.stderr.write(f"ringcover: {type(exc).__name__}: {exc}\n")
        return EXIT_USAGE
    return rep.emit(out)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
