"""Command-line front end.

Subcommands::

    rate     single-point rate with the full factor breakdown
    scan     rate tables over a nuclear-charge range and a field grid
    compare  direct-vs-factored form equivalence report
    limits   weak-binding limit residuals of the tunneling exponent

Exit codes form a fixed contract: 0 success, 1 acceptance-tolerance
failure, 2 domain error, 3 strict-mode flagged result, 64 usage error,
73 unwritable output.  Results go to stdout (or ``--out``); diagnostics
go to stderr only.
"""

from __future__ import annotations

import argparse
import sys

try:
    import tomllib
except ImportError:  # Python < 3.11
    import tomli as tomllib

from . import output, refcheck, sweep
from .core import CustomState, DomainError, HydrogenicState, rate_factored, resolve_state

EXIT_OK = 0
EXIT_TOLERANCE = 1
EXIT_DOMAIN = 2
EXIT_STRICT_FLAGGED = 3
EXIT_USAGE = 64
EXIT_IO = 73

_DEFAULT_DELTAS = (1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8)


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that exits 64 on usage errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, "%s: error: %s\n" % (self.prog, message))


def build_parser() -> _Parser:
    p = _Parser(
        prog="crossfield",
        description="Tunnel-ionization rates of atomic ions in a constant crossed field.",
    )
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    rate = sub.add_parser("rate", help="single-point rate with full factor breakdown")
    rate.add_argument("--z", type=int, help="nuclear charge of a hydrogen-like ion")
    rate.add_argument("--epsilon", type=float, help="reduced energy of a custom state")
    rate.add_argument("--clambda2", type=float,
                      help="squared asymptotic coefficient of a custom state")
    rate.add_argument("--eta", type=float, help="Coulomb parameter of a custom state")
    rate.add_argument("--field", type=float, required=True,
                      help="reduced field f = E/E_S")
    rate.add_argument("--units", choices=("reduced", "si", "both"), default="both",
                      help="which rate units the human-readable output shows")
    rate.add_argument("--strict", action="store_true",
                      help="exit 3 when the result carries an under/overflow flag")
    rate.add_argument("--format", choices=("human", "csv", "json"), default="human")

    scan = sub.add_parser("scan", help="rate table over a Z range and a field grid")
    scan.add_argument("--z-range", dest="z_range",
                      help='inclusive nuclear-charge range "LO:HI"')
    scan.add_argument("--field-range", dest="field_range",
                      help='reduced-field range "LO:HI"')
    scan.add_argument("--points", type=int, help="number of field-grid points")
    scan.add_argument("--spacing", choices=sweep.SPACINGS,
                      help="field-grid spacing (default geometric)")
    scan.add_argument("--units", choices=sweep.OUTPUT_UNITS,
                      help="rate units in human-readable output (default reduced)")
    scan.add_argument("--format", choices=("human", "csv", "json"))
    scan.add_argument("--out", help="output path (default stdout)")
    scan.add_argument("--config",
                      help="TOML file with flat keys mirroring the flags; flags override")

    comp = sub.add_parser("compare", help="direct-vs-factored equivalence report")
    comp.add_argument("--zalpha-grid", dest="zalpha_grid",
                      help="comma-separated Z*alpha values (default: frozen grid)")
    comp.add_argument("--f-grid", dest="f_grid",
                      help="comma-separated reduced fields (default: frozen grid)")
    comp.add_argument("--precision", choices=("double", "extended"), default="extended")
    comp.add_argument("--format", choices=("human", "csv", "json"), default="human")
    comp.add_argument("--out", help="output path (default stdout)")
    comp.add_argument("--inject-fault", dest="inject_fault",
                      choices=refcheck.FAULT_NAMES, help=argparse.SUPPRESS)

    lim = sub.add_parser("limits", help="weak-binding limit residuals")
    lim.add_argument("--delta-seq", dest="delta_seq",
                     help="comma-separated 1-epsilon values "
                          "(default geometric 1e-2 .. 1e-8)")
    lim.add_argument("--format", choices=("human", "csv", "json"), default="human")
    lim.add_argument("--out", help="output path (default stdout)")

    return p


def _emit(text: str, out_path) -> None:
    if out_path:
        with open(out_path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_float_list(text: str, what: str) -> list[float]:
    try:
        values = [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise DomainError("invalid %s %r" % (what, text)) from None
    if not values:
        raise DomainError("empty %s %r" % (what, text))
    return values


def _parse_range(text: str, what: str, conv) -> tuple:
    parts = text.split(":")
    if len(parts) != 2:
        raise DomainError('%s must look like "LO:HI"; got %r' % (what, text))
    try:
        return conv(parts[0]), conv(parts[1])
    except ValueError:
        raise DomainError("invalid %s %r" % (what, text)) from None


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_rate(args) -> int:
    custom_flags = [args.epsilon, args.clambda2, args.eta]
    if args.z is not None and any(v is not None for v in custom_flags):
        print("crossfield rate: error: conflicting state flags "
              "(--z excludes --epsilon/--clambda2/--eta)", file=sys.stderr)
        return EXIT_USAGE
    if args.z is not None:
        state = HydrogenicState.from_z(args.z)
    elif all(v is not None for v in custom_flags):
        state = CustomState(epsilon=args.epsilon, c_lambda_sq=args.clambda2, eta=args.eta)
    else:
        print("crossfield rate: error: give --z or all of "
              "--epsilon/--clambda2/--eta", file=sys.stderr)
        return EXIT_USAGE

    rs = resolve_state(state)
    bd = rate_factored(state, args.field)
    if args.format == "json":
        doc = output.rate_to_json(rs.label, rs.zalpha, rs.epsilon, rs.eta, args.field, bd)
    elif args.format == "csv":
        doc = output.rate_to_csv(rs.label, rs.zalpha, rs.epsilon, rs.eta, args.field, bd)
    else:
        doc = output.rate_to_human(rs.label, rs.zalpha, rs.epsilon, rs.eta,
                                   args.field, bd, units=args.units)
    sys.stdout.write(doc)
    if args.strict and ("underflow" in bd.flags or "overflow" in bd.flags):
        print("strict mode: result carries %s" % ";".join(bd.flags), file=sys.stderr)
        return EXIT_STRICT_FLAGGED
    return EXIT_OK


def _load_scan_config(path: str) -> dict:
    with open(path, "rb") as fh:
        doc = tomllib.load(fh)
    allowed = {"z_range", "field_range", "points", "spacing", "units", "format", "out"}
    unknown = set(doc) - allowed
    if unknown:
        raise DomainError("unknown config keys: %s" % ", ".join(sorted(unknown)))
    return doc


def _cmd_scan(args) -> int:
    cfg = _load_scan_config(args.config) if args.config else {}

    def pick(flag_value, key, default=None):
        return flag_value if flag_value is not None else cfg.get(key, default)

    z_range = pick(args.z_range, "z_range")
    field_range = pick(args.field_range, "field_range")
    points = pick(args.points, "points")
    spacing = pick(args.spacing, "spacing", "geometric")
    units = pick(args.units, "units", "reduced")
    fmt = pick(args.format, "format", "human")
    out_path = pick(args.out, "out")

    if z_range is None or field_range is None or points is None:
        raise DomainError("scan spec incomplete: need --z-range, --field-range and --points "
                          "(from flags or --config)")
    z_lo, z_hi = _parse_range(str(z_range), "Z range", int)
    f_lo, f_hi = _parse_range(str(field_range), "field range", float)
    try:
        points = int(points)
    except (TypeError, ValueError):
        raise DomainError("invalid points count %r" % (points,)) from None
    spec = sweep.ScanSpec.from_z_range(z_lo, z_hi, f_lo, f_hi, points,
                                       spacing=spacing, output_units=units)
    table = sweep.scan_grid(spec)

    if fmt == "csv":
        doc = output.scan_to_csv(table)
    elif fmt == "json":
        doc = output.scan_to_json(table)
    else:
        doc = output.scan_to_human(table)
    _emit(doc, out_path)

    flagged = sum(1 for r in table.rows if r.flags)
    print("rows=%d flagged=%d" % (len(table.rows), flagged), file=sys.stderr)
    return EXIT_OK


def _cmd_compare(args) -> int:
    za_grid, f_grid, _ = refcheck.standard_grid()
    if args.zalpha_grid:
        za_grid = _parse_float_list(args.zalpha_grid, "zalpha grid")
    if args.f_grid:
        f_grid = _parse_float_list(args.f_grid, "f grid")
    fault = refcheck.Fault(args.inject_fault) if args.inject_fault else None
    rep = refcheck.compare_forms(za_grid, f_grid, precision=args.precision, fault=fault)

    if args.format == "json":
        doc = output.report_to_json(rep)
    elif args.format == "csv":
        doc = output.report_to_csv(rep)
    else:
        doc = output.report_to_human(rep)
    _emit(doc, args.out)
    return EXIT_OK if rep.passed else EXIT_TOLERANCE


def _cmd_limits(args) -> int:
    deltas = list(_DEFAULT_DELTAS)
    if args.delta_seq:
        deltas = _parse_float_list(args.delta_seq, "delta sequence")
    residuals = refcheck.nonrel_limit_residual(deltas)

    if args.format == "json":
        doc = output.limits_to_json(residuals)
    elif args.format == "csv":
        doc = output.limits_to_csv(residuals)
    else:
        doc = output.limits_to_human(residuals)
    _emit(doc, args.out)

    monotone = all(residuals[i + 1].residual <= residuals[i].residual
                   for i in range(len(residuals) - 1))
    anchor_ok = all(r.residual <= 1e-3 for r in residuals
                    if abs(r.delta - 1e-4) <= 1e-13)
    if not monotone:
        print("limit residuals are not monotone decreasing", file=sys.stderr)
    if not anchor_ok:
        print("residual at delta=1e-4 exceeds 1e-3", file=sys.stderr)
    return EXIT_OK if (monotone and anchor_ok) else EXIT_TOLERANCE


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    handlers = {
        "rate": _cmd_rate,
        "scan": _cmd_scan,
        "compare": _cmd_compare,
        "limits": _cmd_limits,
    }
    try:
        return handlers[args.command](args)
    except DomainError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
