"""Command-line front end.

Subcommands: verify-table, witness, schur, product-identity, corollary-digits,
outside-limits, gg-explore. Exit codes: 0 all checks passed, 2 verification
failure, 1 usage/config error. With --out, reports are written as JSON or CSV
and the commands with natural figures render PNGs alongside (disable with
--no-plot).
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional

from mpmath import mp

from . import families as fam
from . import witness as wit
from .cf_engine import ELLIPTIC
from .errors import AdmissibilityError
from .reports import Report, decimal_str, residue_payload, write_gap_csv
from .rcf import tower_number

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFICATION = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        raise UsageError(message)


def build_parser() -> _Parser:
    parser = _Parser(prog="qcfkit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, family=False, m_range=False, stages=False, digits=False):
        p.add_argument("--precision", type=int, default=256, help="working precision in bits")
        p.add_argument("--out", type=Path, default=None, help="output file path")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--no-plot", action="store_true",
                       help="skip figure rendering next to --out")
        if family:
            p.add_argument("--family", default="K", help="K, S1, S2, S3, or GG")
        if m_range:
            p.add_argument("--m-min", type=int, default=1)
            p.add_argument("--m-max", type=int, default=50)
        if stages:
            p.add_argument("--stages", type=int, default=1)
        if digits:
            p.add_argument("--digits", type=int, default=110)

    common(sub.add_parser("verify-table", help="closed-form residues at roots of unity"),
           family=True, m_range=True)
    p = sub.add_parser("witness", help="build and certify divergence-witness stages")
    common(p, family=True, stages=True)
    common(sub.add_parser("schur", help="closed form vs periodic limits for K"), m_range=True)
    common(sub.add_parser("product-identity", help="prod (1+q^i) = 1 at odd orders"),
           m_range=True)
    common(sub.add_parser("corollary-digits", help="digits of the tower-quotient number"),
           digits=True)
    p = sub.add_parser("outside-limits", help="odd/even approximant limits for |q| > 1")
    common(p)
    p.add_argument("--q", action="append", type=str, default=None,
                   help="evaluation point (integer or fraction), repeatable")
    p.add_argument("--j-max", type=int, default=200)
    common(sub.add_parser("gg-explore", help="Goellnitz-Gordon vs S2 at roots of unity"),
           m_range=True)
    return parser


def _config_echo(args, keys) -> dict:
    out = {"precision_bits": args.precision,
           "value_format": "decimal strings rendered from the stated precision"}
    for k in keys:
        v = getattr(args, k, None)
        out[k] = str(v) if isinstance(v, Path) else v
    return out


def _emit(report: Report, args, figures: Optional[list] = None) -> None:
    if args.out is None:
        print(report.to_json())
        return
    text = report.to_json() if args.format == "json" else report.to_csv()
    args.out.write_text(text, encoding="utf-8")
    print(f"report written to {args.out}")
    for fig_path in figures or []:
        print(f"figure written to {fig_path}")


def _figure_base(args) -> Optional[Path]:
    if args.out is None or args.no_plot:
        return None
    return args.out.with_suffix("")


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_verify_table(args) -> int:
    family = fam.make_family(args.family)
    if not family.proved:
        raise UsageError(f"family {family.name} has no closed-form table data")
    report = Report("verify-table", _config_echo(args, ("family", "m_min", "m_max")))
    orders = family.admissible_orders(args.m_min, args.m_max)
    failed = 0
    for m in orders:
        row = fam.table_check(family, m)
        item = {
            "m": m,
            "n_star": row.n_star,
            "sign": row.sign,
            "q_power_mod_m": row.q_power_nm,
            "matches": row.matches,
        }
        if not row.matches:
            item["residue_prev"] = residue_payload(row.residue_prev)
            item["residue_at"] = residue_payload(row.residue_at)
            failed += 1
        report.items.append(item)
    report.finalize(passed=len(orders) - failed, failed=failed)
    _emit(report, args)
    return EXIT_OK if report.ok else EXIT_VERIFICATION


def cmd_witness(args) -> int:
    family = fam.make_family(args.family)
    if not family.proved:
        raise UsageError(f"family {family.name} is conjectural: no witness constants")
    plan = wit.WitnessPlan(family=family, stages=args.stages)
    construction = wit.build_witness(plan)
    report = Report("witness", _config_echo(args, ("family", "stages")))
    figures = []
    failed = 0
    skipped = 0
    for stage in construction.stages:
        if stage.verifiable:
            stage = wit.verify_stage(construction, stage.index, args.precision,
                                     collect_trajectory=True)
            if not stage.verified:
                failed += 1
        else:
            skipped += 1
        item = {
            "stage": stage.index,
            "d_odd": str(stage.d_odd),
            "n_star": str(stage.n_star),
            "kappa": None if stage.kappa is None else str(stage.kappa),
            "alpha": None if stage.alpha is None else str(stage.alpha),
            "bounds_are_exact": stage.bounds_are_exact,
            "e_bound": None if stage.e_bound is None else str(stage.e_bound),
            "e_next": None if stage.e_next is None else str(stage.e_next),
            "constructed": stage.constructed,
            "verifiable": stage.verifiable,
            "verified": stage.verified,
            "threshold": decimal_str(stage.threshold),
            "checks": stage.checks,
            "lemma_checks": stage.lemma_checks,
            "measured": {k: decimal_str(v, args.precision) for k, v in stage.measured.items()},
            "log2_e_required_lower": (
                None if stage.log2_e_required_lower is None
                else decimal_str(stage.log2_e_required_lower, 64)
            ),
            "notes": stage.notes,
        }
        report.items.append(item)
        if stage.verifiable and args.out is not None:
            gap_path = args.out.with_suffix(f".stage{stage.index}.gaps.csv")
            write_gap_csv(gap_path, stage.trajectory)
            print(f"gap trajectory written to {gap_path}")
            base = _figure_base(args)
            if base is not None and stage.trajectory:
                from .plots import plot_witness_gaps

                figures.append(
                    plot_witness_gaps(
                        stage.trajectory,
                        float(stage.threshold),
                        f"{family.name}: stage {stage.index} gap trajectory "
                        f"(d = {stage.d_odd}, n* = {stage.n_star})",
                        base.parent / f"{base.name}.stage{stage.index}.gaps.png",
                    )
                )
    report.config["quotient_prefix"] = [str(e) for e in construction.quotients]
    report.finalize(passed=len(construction.stages) - failed - skipped,
                    failed=failed, skipped=skipped)
    _emit(report, args, figures)
    return EXIT_OK if report.ok else EXIT_VERIFICATION


def cmd_schur(args) -> int:
    report = Report("schur", _config_echo(args, ("m_min", "m_max")))
    failed = 0
    ms, diffs, classes = [], [], []
    for m in range(max(1, args.m_min), args.m_max + 1):
        if m % 5 == 0:
            cmp = wit.schur_compare(m, args.precision)
            ok = cmp.classification == ELLIPTIC
            item = {
                "m": m,
                "expected": "classical divergence (elliptic)",
                "classification": cmp.classification,
                "ok": ok,
            }
            diffs.append(None)
        else:
            cmp = wit.schur_compare(m, args.precision)
            tol = mp.mpf(2) ** (-(args.precision // 4))
            ok = cmp.converges and cmp.diff is not None and cmp.diff <= tol
            item = {
                "m": m,
                "classification": cmp.classification,
                "limit": decimal_str(cmp.limit, args.precision),
                "closed_form": decimal_str(cmp.formula.value, args.precision),
                "difference": decimal_str(cmp.diff, args.precision),
                "ok": ok,
            }
            diffs.append(cmp.diff)
        ms.append(m)
        classes.append(cmp.classification)
        if not ok:
            failed += 1
        report.items.append(item)
    report.finalize(passed=len(ms) - failed, failed=failed)
    figures = []
    base = _figure_base(args)
    if base is not None:
        from .plots import plot_schur_sweep

        figures.append(plot_schur_sweep(
            ms, diffs, classes,
            "Rogers-Ramanujan fraction at m-th roots: periodic limit vs closed form",
            base.parent / f"{base.name}.schur.png",
        ))
    _emit(report, args, figures)
    return EXIT_OK if report.ok else EXIT_VERIFICATION


def cmd_product_identity(args) -> int:
    report = Report("product-identity", _config_echo(args, ("m_min", "m_max")))
    failed = 0
    orders = [m for m in range(max(3, args.m_min), args.m_max + 1) if m % 2 == 1]
    for m in orders:
        ok = fam.product_identity_check(m)
        report.items.append({"m": m, "ok": ok})
        if not ok:
            failed += 1
    report.finalize(passed=len(orders) - failed, failed=failed)
    _emit(report, args)
    return EXIT_OK if report.ok else EXIT_VERIFICATION


def cmd_corollary_digits(args) -> int:
    report = Report("corollary-digits", _config_echo(args, ("digits",)))
    cf = tower_number(5)
    digits = cf.decimal_digits(args.digits)
    conv = cf.convergents(3)
    report.items.append({
        "digits": digits,
        "certified_from_convergent": {"c": str(conv[3].c), "d": str(conv[3].d)},
        "quotients_used": [str(cf.quotient(i)) for i in (1, 2, 3)],
    })
    report.finalize(passed=1, failed=0)
    _emit(report, args)
    return EXIT_OK


def _parse_point(text: str):
    if "/" in text:
        return Fraction(text)
    return int(text)


def cmd_outside_limits(args) -> int:
    points = [_parse_point(s) for s in (args.q or ["2", "-3"])]
    report = Report("outside-limits", _config_echo(args, ("j_max",)))
    report.config["q_points"] = [str(p) for p in points]
    failed = 0
    figures = []
    base = _figure_base(args)
    tol = mp.mpf(10) ** (-(args.precision * 3 // 40))  # ~1e-19 at 256 bits
    for q in points:
        rep = wit.outside_circle_check(q, args.j_max, args.precision)
        ok = rep.diff_odd is not None and rep.diff_even is not None and (
            rep.diff_odd <= tol and rep.diff_even <= tol
        )
        report.items.append({
            "q": str(q),
            "diff_even_vs_inv_K_neg": decimal_str(rep.diff_even, args.precision),
            "diff_odd_vs_q_K_quarter": decimal_str(rep.diff_odd, args.precision),
            "diff_odd_printed_association": decimal_str(rep.diff_odd_printed, args.precision),
            "diff_even_printed_association": decimal_str(rep.diff_even_printed, args.precision),
            "even_limit": decimal_str(rep.even_limit_ref, args.precision),
            "odd_limit": decimal_str(rep.odd_limit_ref, args.precision),
            "worpitzky_tail_start": rep.worpitzky_tail_start,
            "ok": ok,
        })
        if not ok:
            failed += 1
        if base is not None:
            from .plots import plot_outside_limits

            figures.append(plot_outside_limits(
                rep.odd_diffs, rep.even_diffs,
                f"odd/even approximant limits at q = {q}",
                base.parent / f"{base.name}.outside.q{str(q).replace('/', '_')}.png",
            ))
    report.finalize(passed=len(points) - failed, failed=failed)
    _emit(report, args, figures)
    return EXIT_OK if report.ok else EXIT_VERIFICATION


def cmd_gg_explore(args) -> int:
    report = Report("gg-explore", _config_echo(args, ("m_min", "m_max")),
                    banner=wit.CONJECTURE_BANNER)
    sweep = wit.gg_explore(range(max(1, args.m_min), args.m_max + 1), args.precision)
    for e in sweep.entries:
        report.items.append({
            "m": e.m,
            "gg_classification": e.gg.kind,
            "gg_converges": e.gg.converges,
            "gg_limit": decimal_str(e.gg.limit, args.precision),
            "gg_note": e.gg.note,
            "s2_classification": e.s2.kind,
            "s2_converges": e.s2.converges,
            "s2_limit": decimal_str(e.s2.limit, args.precision),
            "s2_note": e.s2.note,
            "agree": e.agree,
            "expected": e.expected,
            "conjecture_consistent": e.consistent,
        })
    report.summary = {
        "total": len(sweep.entries),
        "consistent": sweep.n_consistent,
        "inconsistent": sweep.n_inconsistent,
        "undecided": sweep.n_undecided,
        "inconsistent_orders": sweep.inconsistent_orders,
        "failed": 0,  # exploration never fails the run
    }
    figures = []
    base = _figure_base(args)
    if base is not None:
        from .plots import plot_gg_classifications

        figures.append(plot_gg_classifications(
            sweep.entries,
            "Goellnitz-Gordon vs S2 at primitive m-th roots (conjecture exploration)",
            base.parent / f"{base.name}.gg.png",
        ))
    _emit(report, args, figures)
    return EXIT_OK


_COMMANDS = {
    "verify-table": cmd_verify_table,
    "witness": cmd_witness,
    "schur": cmd_schur,
    "product-identity": cmd_product_identity,
    "corollary-digits": cmd_corollary_digits,
    "outside-limits": cmd_outside_limits,
    "gg-explore": cmd_gg_explore,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "precision", 64) < 64:
            raise UsageError("--precision must be at least 64 bits")
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (AdmissibilityError, ValueError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
