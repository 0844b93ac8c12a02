"""Command-line entry point: ``treenergy <command> ...``.

Exit status is 0 on success, 1 when a verification reports a failure and 2 for
usage or domain errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Sequence

from .charpoly import char_poly_pair
from .energy import DominanceResult, classify_dominance, energy
from .enumeration import DEFAULT_CAP, enumerate_trees
from .errors import InvalidSpec, TreeEnergyError
from .extremal import VERIFIERS, verify_all
from .graph import canonical_code, parse_forest, recognize, to_graph6
from .quasiorder import FamilyDominanceCertificate, Inconclusive, compare_forests, family_compare_double
from .ranking import EnergyCache, rank_by_energy, ranking_csv, ranking_json

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse exits 2 already; keep the usage line
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_edge(text: str) -> tuple[int, int]:
    """``"3-7"`` or ``"3,7"``."""
    for sep in ("-", ","):
        if sep in text:
            a, _, b = text.partition(sep)
            try:
                return int(a), int(b)
            except ValueError:
                break
    raise InvalidSpec(f"bad edge {text!r}; write it as u-v")


def _read_lines(path: str) -> list[str]:
    with open(path) as fh:
        return [ln.strip() for ln in fh if ln.strip() and not ln.lstrip().startswith("#")]


def _inputs(args: argparse.Namespace) -> list[str]:
    items = list(args.trees)
    if args.file:
        items.extend(_read_lines(args.file))
    if not items:
        raise InvalidSpec("no trees given (pass specs or --file)")
    return items


def _csv(rows: Sequence[Sequence[object]]) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue().rstrip("\n")


def _emit(args: argparse.Namespace, records: list[dict], text: str, rows: Sequence[Sequence[object]] | None = None) -> None:
    if getattr(args, "json", False):
        print(json.dumps(records if len(records) != 1 else records[0], indent=2))
    elif getattr(args, "csv", False) and rows is not None:
        print(_csv(rows))
    else:
        print(text)


# ---------------------------------------------------------------------------
# commands


def cmd_charpoly(args: argparse.Namespace) -> int:
    items = _inputs(args)
    records, lines, rows = [], [], [("tree", "phi", "phi_tilde")]
    for item in items:
        pair = char_poly_pair(parse_forest(item))
        records.append({"tree": item, "phi": str(pair.phi), "phi_tilde": str(pair.phi_tilde)})
        rows.append((item, str(pair.phi), str(pair.phi_tilde)))
        if len(items) > 1:
            lines.append(f"tree: {item}")
        lines += [f"phi: {pair.phi}", f"phi_tilde: {pair.phi_tilde}"]
    _emit(args, records, "\n".join(lines), rows)
    return EXIT_OK


def cmd_energy(args: argparse.Namespace) -> int:
    records, lines, rows = [], [], [("tree", "midpoint", "radius")]
    for item in _inputs(args):
        e = energy(parse_forest(item), args.tol)
        records.append({"tree": item, **e.to_record()})
        rows.append((item, repr(e.midpoint), repr(e.radius)))
        lines.append(f"{item}: {e}")
    _emit(args, records, "\n".join(lines), rows)
    return EXIT_OK


def cmd_compare(args: argparse.Namespace) -> int:
    pairs = []
    if args.a is not None or args.b is not None:
        if args.a is None or args.b is None:
            raise InvalidSpec("compare needs two trees")
        pairs.append((args.a, args.b))
    if args.file:
        for ln in _read_lines(args.file):
            parts = ln.split()
            if len(parts) != 2:
                raise InvalidSpec(f"expected two trees per line, got {ln!r}")
            pairs.append((parts[0], parts[1]))
    if not pairs:
        raise InvalidSpec("compare needs two trees")
    records, lines, rows = [], [], [("a", "b", "relation", "witness")]
    for a, b in pairs:
        v = compare_forests(parse_forest(a), parse_forest(b))
        records.append({"a": a, "b": b, **v.to_record()})
        rows.append((a, b, v.relation.value, " ".join(map(str, v.witness))))
        lines.append(str(v) if len(pairs) == 1 else f"{a} {v.relation.symbol} {b}: {v}")
    _emit(args, records, "\n".join(lines), rows)
    return EXIT_OK


def _dominance_text(r: DominanceResult) -> str:
    lines = [
        f"mode: {r.mode}",
        f"case: {r.case}",
        f"k range: {r.k_range}",
        f"w = h1*g0 - h0*g1: {r.w}",
        f"sign of w on (0, inf): {'zero' if r.profile is None else r.profile.kind}",
    ]
    for d in r.D:
        lines.append(f"D piece: ({d.lo:.9f} ± {d.lo_radius:.1e}, {d.hi:.9f} ± {d.hi_radius:.1e})")
    for k, v in r.energies.items():
        lines.append(f"E({k}) = {v}")
    lines.append(f"base gap E(H0)-E(G0) = {r.base_gap}")
    if r.alternate_bound is not None:
        lines.append(f"alternate bound = {r.alternate_bound}")
    lines.append(f"lower bound on E(H(k))-E(G(k)) = {r.lower_bound_on_gap}")
    if r.quadrature is not None:
        q = r.quadrature
        lines.append(f"quadrature: {q.rule}, {q.panels} panels, error estimate {q.error_estimate:.1e}")
    return "\n".join(lines)


def cmd_prove_dominance(args: argparse.Namespace) -> int:
    g, h = parse_forest(args.g), parse_forest(args.h)
    eg, eh = parse_edge(args.eg), parse_edge(args.eh)
    if args.double is None:
        r = classify_dominance(g, eg, h, eh, tol=args.tol)
        _emit(args, [r.to_record()], _dominance_text(r))
        return EXIT_OK
    e2, f2 = parse_edge(args.double[0]), parse_edge(args.double[1])
    cert = family_compare_double(g, eg, e2, h, eh, f2)
    if isinstance(cert, Inconclusive):
        _emit(args, [cert.to_record()], cert.to_text())
        return EXIT_OK
    assert isinstance(cert, FamilyDominanceCertificate)
    text = cert.to_text() + f"\nstrict_for_large_index {str(cert.strict_for_large_index).lower()}"
    _emit(args, [cert.to_record()], text)
    return EXIT_OK


def cmd_rank(args: argparse.Namespace) -> int:
    entries = rank_by_energy(
        args.n, top=args.top, tol=args.tol, jobs=args.jobs, cache=EnergyCache.from_env(), strict=args.strict
    )
    out = "csv" if args.csv else "json" if args.json else args.out
    if out == "csv":
        print(ranking_csv(entries), end="")
    elif out == "json":
        print(ranking_json(entries))
    else:
        for e in entries:
            tie = f"  [tie {e.tie_group}: {e.tie}]" if e.tie else ""
            print(f"{e.rank:>4}  {e.energy}  {e.spec or e.code}{tie}")
    return EXIT_OK


def cmd_enumerate(args: argparse.Namespace) -> int:
    for t in enumerate_trees(args.n, cap=args.cap):
        if args.format == "graph6":
            print(to_graph6(t))
        elif args.format == "code":
            print(canonical_code(t))
        else:
            spec = recognize(t)
            print(to_graph6(t) if spec is None else spec)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    try:
        reports = verify_all(args.theorem, args.n, jobs=args.jobs)
    except KeyError as exc:
        raise InvalidSpec(exc.args[0]) from exc
    ok = all(r.passed for r in reports)
    if args.json:
        print(json.dumps({"passed": ok, "reports": [r.to_record() for r in reports]}, indent=2))
    else:
        for r in reports:
            print(r.to_text())
        failed = sum(not r.passed for r in reports)
        print(f"\n{len(reports) - failed}/{len(reports)} reports passed: {'PASS' if ok else 'FAIL'}")
    return EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="treenergy", description="Exact polynomials and certified energies of trees.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def formats(sp: argparse.ArgumentParser, with_csv: bool = True) -> None:
        g = sp.add_mutually_exclusive_group()
        g.add_argument("--json", action="store_true", help="machine-readable output")
        if with_csv:
            g.add_argument("--csv", action="store_true", help="comma-separated output")

    sp = sub.add_parser("charpoly", help="characteristic and matching polynomials")
    sp.add_argument("trees", nargs="*", help="tree specs such as 'S(10;2,6,1)' or graph6 strings")
    sp.add_argument("--file", help="newline-delimited specs or graph6")
    formats(sp)
    sp.set_defaults(func=cmd_charpoly)

    sp = sub.add_parser("energy", help="certified energy")
    sp.add_argument("trees", nargs="*")
    sp.add_argument("--file")
    sp.add_argument("--tol", type=float, default=1e-10, help="radius bound (default 1e-10)")
    formats(sp)
    sp.set_defaults(func=cmd_energy)

    sp = sub.add_parser("compare", help="quasi-order verdict with witness")
    sp.add_argument("a", nargs="?")
    sp.add_argument("b", nargs="?")
    sp.add_argument("--file", help="lines holding two whitespace-separated trees")
    formats(sp)
    sp.set_defaults(func=cmd_compare)

    sp = sub.add_parser("prove-dominance", help="compare E(G(k)) and E(H(k)) for every k")
    sp.add_argument("g")
    sp.add_argument("eg", help="edge of G to subdivide, e.g. 0-1")
    sp.add_argument("h")
    sp.add_argument("eh", help="edge of H to subdivide")
    sp.add_argument("--double", nargs=2, metavar=("E2", "F2"), help="second edges of G and H (two-index family)")
    sp.add_argument("--tol", type=float, default=1e-9, help="quadrature tolerance")
    formats(sp, with_csv=False)
    sp.set_defaults(func=cmd_prove_dominance)

    sp = sub.add_parser("rank", help="exhaustive energy ranking of all trees of order n")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--top", type=int)
    sp.add_argument("--out", choices=("text", "csv", "json"), default="text")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--tol", type=float, default=1e-10)
    sp.add_argument("--strict", action="store_true", help="fail on ties that cannot be ordered")
    formats(sp)
    sp.set_defaults(func=cmd_rank)

    sp = sub.add_parser("enumerate", help="list the free trees of order n")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--format", choices=("graph6", "code", "spec"), default="graph6")
    sp.add_argument("--cap", type=int, default=DEFAULT_CAP)
    sp.set_defaults(func=cmd_enumerate)

    sp = sub.add_parser("verify-paper", help="re-run the extremal results")
    sp.add_argument("--theorem", choices=sorted(VERIFIERS), type=str.lower)
    sp.add_argument("--n", type=int)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (TreeEnergyError, ValueError, OSError) as exc:
        print(f"treenergy: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
