"""Command line: ``mstable <subcommand> ...``.

Exit status: 0 success, 64 usage error, 65 domain error (the error code is
printed), 70 internal invariant breach.  ``check-positivity`` exits 0/1/2 for
ALL_POSITIVE / ALL_NONNEGATIVE / FAILS.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import chambers as ch
from .contraction import (
    ContractionMap,
    discrepancy_of_Ds,
    pullback,
    pushforward,
    smoothness_consistency,
)
from .dualgraph import DualGraph
from .errors import InvariantBreach, MStableError
from .picard import (
    MAX_N,
    DivisorClass,
    Space,
    as_rational,
    enum_cap,
    enumerate_basis,
    expand,
    format_rational,
    parse_taut,
)
from .positivity import verify_ample_range
from .reduction import mstable_reduce, phi_limit
from .strata import (
    curve_library,
    enumerate_components,
    esigma_fiber_curve,
    stratum_dimension,
)

EXIT_USAGE = 64
EXIT_DOMAIN = 65
EXIT_INTERNAL = 70


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass(frozen=True)
class CliConfig:
    n: int | None = None
    m: int | None = None
    s: Fraction | None = None
    format: str = "table"
    input: str | None = None
    output: str | None = None
    enum_cap: int = 16

    def __post_init__(self):
        if self.n is not None and not 1 <= self.n <= MAX_N:
            raise UsageError(f"--n must be in 1..{MAX_N}")
        if self.enum_cap < 1:
            raise UsageError("enumeration cap must be >= 1")


def _rational(text: str) -> Fraction:
    try:
        return as_rational(text)
    except (ValueError, ZeroDivisionError, MStableError) as exc:
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r}") from exc


def _dump(obj) -> str:
    return json.dumps(obj, indent=2)


def _read_json(path: str):
    if path == "-":
        return json.load(sys.stdin)
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _class_table(d: DivisorClass) -> str:
    lines = [f"# {d.space}", f"lambda\t{format_rational(d.lambda_coeff)}"]
    lines += [f"delta0_{s.key()}\t{format_rational(c)}" for s, c in d.boundary]
    return "\n".join(lines)


def _emit_class(d: DivisorClass, fmt: str) -> str:
    return _dump(d.to_json()) if fmt == "json" else _class_table(d)


def _load_class(args, space: Space) -> DivisorClass:
    if args.input:
        d = DivisorClass.from_json(_read_json(args.input))
        if d.space != space:
            raise UsageError(f"input class lives on {d.space}, expected {space}")
        return d
    if not args.cls:
        raise UsageError("give --class or --in")
    return expand(space, parse_taut(args.cls))


# -- subcommands ---------------------------------------------------------------

def cmd_expand(args, cfg: CliConfig) -> tuple[str, int]:
    space = Space(cfg.n, cfg.m or 0)
    if args.basis:
        return "\n".join(enumerate_basis(space)), 0
    d = expand(space, parse_taut(args.cls), stack=args.stack)
    return _emit_class(d, cfg.format), 0


def cmd_pushforward(args, cfg: CliConfig) -> tuple[str, int]:
    phi = ContractionMap.between(cfg.n, args.m_from, args.m_to)
    return _emit_class(pushforward(phi, _load_class(args, phi.source)), cfg.format), 0


def cmd_pullback(args, cfg: CliConfig) -> tuple[str, int]:
    phi = ContractionMap.between(cfg.n, args.m_from, args.m_to)
    return _emit_class(pullback(phi, _load_class(args, phi.target)), cfg.format), 0


def cmd_discrepancy(args, cfg: CliConfig) -> tuple[str, int]:
    rep = discrepancy_of_Ds(cfg.n, cfg.m, cfg.s)
    by_size = {str(k): format_rational(v) for k, v in rep.by_size().items()}
    if cfg.format == "json":
        return _dump({
            "n": rep.n, "m": rep.m, "s": format_rational(rep.s),
            "coefficients": {t.key(): format_rational(c) for t, c in rep.coefficients.items()},
            "by_size": by_size,
            "min_coefficient": None if rep.min_coefficient is None else format_rational(rep.min_coefficient),
            "section_rings_equal": rep.section_rings_equal,
        }), 0
    lines = [f"# D({format_rational(rep.s)}) - phi^*phi_*D on M1,{rep.n} -> M1,{rep.n}({rep.m})"]
    lines += [f"|S|={k}\t{v}" for k, v in by_size.items()]
    lines.append(f"section rings equal: {str(rep.section_rings_equal).lower()}")
    return "\n".join(lines), 0


def cmd_singularity(args, cfg: CliConfig) -> tuple[str, int]:
    chk = smoothness_consistency(cfg.n, args.m_from, args.m_to)
    if cfg.format == "json":
        return _dump({
            "n": chk.n, "from": chk.m_from, "to": chk.m_to,
            "discrepancy": chk.discrepancy.to_json(),
            "dim": chk.dim, "threshold": chk.threshold,
            "verdict": chk.verdict.value,
        }), 0
    return chk.summary(), 0


def cmd_chambers(args, cfg: CliConfig) -> tuple[str, int]:
    rows = ch.chamber_rows(cfg.n)
    if cfg.format == "json":
        return _dump(rows), 0
    if cfg.format == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=ch.CSV_COLUMNS, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        return buf.getvalue().rstrip("\n"), 0
    lines = [f"{'s':<12}{'alpha':<16}model"]
    for c in ch.chamber_table(cfg.n):
        lines.append(f"{c.interval():<12}{c.alpha_interval():<16}{c.model.label()}")
    return "\n".join(lines), 0


def cmd_strata(args, cfg: CliConfig) -> tuple[str, int]:
    ls = [args.l] if args.l is not None else list(range(1, cfg.m + 1))
    out = []
    for l in ls:
        comps = []
        for p in enumerate_components(cfg.n, cfg.m, l):
            entry = {"partition": [list(s.members) for s in p.parts]}
            if p.big:
                entry["dimension"] = stratum_dimension(cfg.n, p)
                try:
                    entry["test_curve"] = esigma_fiber_curve(cfg.n, cfg.m, p).to_json()
                except MStableError as exc:
                    entry["test_curve"] = None
                    entry["note"] = exc.code
            else:
                entry["dimension"] = None
                entry["note"] = "EMPTY_STRATUM"
            comps.append(entry)
        out.append({"l": l, "count": len(comps), "codimension": l + 1, "components": comps})
    if cfg.format == "json":
        return _dump({"n": cfg.n, "m": cfg.m, "strata": out}), 0
    lines = []
    for block in out:
        lines.append(f"E_{block['l']}: {block['count']} components, codimension {block['codimension']}")
        for c in block["components"]:
            parts = "|".join(",".join(map(str, s)) for s in c["partition"])
            dim = "empty" if c["dimension"] is None else f"dim {c['dimension']}"
            curve = "fiber curve" if c.get("test_curve") else c.get("note", "")
            lines.append(f"  {parts}\t{dim}\t{curve}")
    return "\n".join(lines), 0


def cmd_test_curves(args, cfg: CliConfig) -> tuple[str, int]:
    curves = [b.to_json() for b in curve_library(cfg.n, cfg.m)]
    if cfg.format == "json":
        return _dump(curves), 0
    lines = []
    for b in curves:
        bd = " ".join(f"d{k}:{v}" for k, v in b["boundary"].items())
        lines.append(f"{b['name']}\tlambda:{b['lambda']}\t{bd}".rstrip())
    return "\n".join(lines), 0


def cmd_reduce(args, cfg: CliConfig) -> tuple[str, int]:
    if not args.input:
        raise UsageError("reduce needs --in")
    g = DualGraph.from_json(_read_json(args.input))
    out, trace = mstable_reduce(g, cfg.m, keep_intermediates=args.trace)
    payload = {"graph": out.to_json(), "trace": trace.to_json()}
    if args.trace:
        payload["intermediates"] = [h.to_json() for h in trace.intermediates]
    return _dump(payload), 0


def cmd_phi_limit(args, cfg: CliConfig) -> tuple[str, int]:
    if not args.input:
        raise UsageError("phi-limit needs --in")
    g = DualGraph.from_json(_read_json(args.input))
    n = cfg.n if cfg.n is not None else g.n
    return _dump(phi_limit(g, n, cfg.m).to_json()), 0


def cmd_check_positivity(args, cfg: CliConfig) -> tuple[str, int]:
    rep = verify_ample_range(cfg.n, cfg.m, cfg.s)
    code = rep.verdict.exit_code
    if args.json or cfg.format == "json":
        return _dump(rep.to_json()), code
    return rep.summary(), code


def cmd_selfcheck(args, cfg: CliConfig) -> tuple[str, int]:
    from .selfcheck import run_selfcheck

    matrix = run_selfcheck(args.max_n)
    ns = sorted(next(iter(matrix.values())).keys())
    width = max(len(k) for k in matrix) + 2
    lines = [" " * width + " ".join(f"{n:>4}" for n in ns)]
    ok = True
    for name, row in matrix.items():
        ok &= all(row.values())
        lines.append(f"{name:<{width}}" + " ".join(f"{'pass' if row[n] else 'FAIL':>4}" for n in ns))
    lines.append("selfcheck: " + ("all passed" if ok else "FAILURES"))
    return "\n".join(lines), 0 if ok else EXIT_INTERNAL


# -- parser ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="mstable", description="Divisor classes and models of m-stable genus-one curves.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, n=True, m=False, s=False, n_required=True):
        if n:
            sp.add_argument("--n", type=int, required=n_required)
        if m:
            sp.add_argument("--m", type=int, required=True)
        if s:
            sp.add_argument("--s", type=_rational, required=True)
        sp.add_argument("--format", choices=("table", "json", "csv"), default="table")
        sp.add_argument("--out", help="write to this file instead of stdout")

    sp = sub.add_parser("expand", help="expand a tautological class in the basis")
    common(sp)
    sp.add_argument("--m", type=int, default=0)
    sp.add_argument("--class", dest="cls", default="lambda",
                    help="lambda, delta_irr, delta0, delta, psi, psi_I, delta0_1,2, K, Ds:P/Q")
    sp.add_argument("--stack", action="store_true", help="stack canonical class instead of coarse")
    sp.add_argument("--basis", action="store_true", help="list the basis instead")
    sp.set_defaults(func=cmd_expand)

    for name, fn in (("pushforward", cmd_pushforward), ("pullback", cmd_pullback)):
        sp = sub.add_parser(name, help=f"{name} along M1,n(from) --> M1,n(to)")
        common(sp)
        sp.add_argument("--from", dest="m_from", type=int, required=True)
        sp.add_argument("--to", dest="m_to", type=int, required=True)
        sp.add_argument("--class", dest="cls")
        sp.add_argument("--in", dest="input", help="divisor class JSON ('-' for stdin)")
        sp.set_defaults(func=fn)

    sp = sub.add_parser("discrepancy", help="D(s) - phi^*phi_*D(s) on M1,n")
    common(sp, m=True, s=True)
    sp.set_defaults(func=cmd_discrepancy)

    sp = sub.add_parser("singularity-check", help="canonical discrepancy test for singular targets")
    common(sp)
    sp.add_argument("--from", dest="m_from", type=int, required=True)
    sp.add_argument("--to", dest="m_to", type=int, required=True)
    sp.set_defaults(func=cmd_singularity)

    sp = sub.add_parser("chambers", help="Mori chambers of s lambda + psi - Delta")
    common(sp)
    sp.set_defaults(func=cmd_chambers)

    sp = sub.add_parser("strata", help="components of E_l and their fiber curves")
    common(sp, m=True)
    sp.add_argument("--l", type=int)
    sp.set_defaults(func=cmd_strata)

    sp = sub.add_parser("test-curves", help="dump the test-curve library on M1,n(m)")
    common(sp, m=True)
    sp.set_defaults(func=cmd_test_curves)

    sp = sub.add_parser("reduce", help="m-stable reduction of a dual graph")
    common(sp, m=True, n_required=False)
    sp.add_argument("--in", dest="input", help="dual graph JSON ('-' for stdin)")
    sp.add_argument("--trace", action="store_true", help="include intermediate graphs")
    sp.set_defaults(func=cmd_reduce)

    sp = sub.add_parser("phi-limit", help="image of a one-node fiber under phi")
    common(sp, m=True, n_required=False)
    sp.add_argument("--in", dest="input")
    sp.set_defaults(func=cmd_phi_limit)

    sp = sub.add_parser("check-positivity", help="psi - delta0 - s lambda against the library")
    common(sp, m=True, s=True)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_check_positivity)

    sp = sub.add_parser("selfcheck", help="run the invariant suite")
    sp.add_argument("--max-n", type=int, default=8)
    sp.add_argument("--format", choices=("table",), default="table")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_selfcheck)
    return p


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        cfg = CliConfig(
            n=getattr(args, "n", None),
            m=getattr(args, "m", None),
            s=getattr(args, "s", None),
            format=getattr(args, "format", "table"),
            input=getattr(args, "input", None),
            output=getattr(args, "out", None),
            enum_cap=enum_cap(),
        )
        text, code = args.func(args, cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=stderr)
        return EXIT_USAGE
    except (InvariantBreach, AssertionError) as exc:
        print(f"internal error: INVARIANT_BREACH: {exc}", file=stderr)
        return EXIT_INTERNAL
    except MStableError as exc:
        if exc.code == "USAGE":
            print(f"usage error: {exc}", file=stderr)
            return EXIT_USAGE
        print(f"error: {exc.code}: {exc}", file=stderr)
        return EXIT_DOMAIN
    except (OSError, json.JSONDecodeError) as exc:
        print(f"usage error: {exc}", file=stderr)
        return EXIT_USAGE
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text, file=stdout)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
