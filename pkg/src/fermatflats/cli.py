"""Command-line front end.

Every subcommand builds a JSON-able report; ``--format plain`` renders the
same report as text.  Exit codes: 0 expected result, 1 deviation or
evidence only, 2 usage error, 3 budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import __version__
from .arrangement import (ConfigError, FermatConfig, enumerate_flats, flat_linear_forms,
                          generator_degree, generator_specs, ideal_generators,
                          verify_prop32_identities)
from .brackets import LEMMAS, lemma_sweep, substitution_report
from .containment import (check_noncontainment, cone_intersection_report, default_prime,
                          proof_trace, verify_generators_complete)
from .fields import CyclotomicField, FieldError, PrimeField, RationalField, parse_field
from .ideals import Budget, BudgetExceeded
from .poly import to_cas, to_json_obj, to_text

EXIT_OK, EXIT_DEVIATION, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        vals = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _config(args, theorem: bool = True) -> FermatConfig:
    try:
        return FermatConfig(args.N, args.n).check(theorem=theorem)
    except ConfigError as exc:
        raise UsageError(str(exc))


def _field(spec: str, n: int, roots: bool):
    try:
        f = parse_field(spec, n)
    except (FieldError, ValueError) as exc:
        raise UsageError(str(exc))
    if roots:
        if isinstance(f, RationalField):
            raise UsageError(f"the rationals do not contain primitive {n}-th roots of unity")
        if isinstance(f, PrimeField) and (f.p - 1) % n:
            raise UsageError(f"prime {f.p} is not 1 mod {n}; no primitive {n}-th root of unity")
        if isinstance(f, CyclotomicField) and f.n != n:
            raise UsageError(f"cyclotomic field of order {f.n} does not match n = {n}")
    return f


def _budget(args) -> Budget:
    return Budget.from_env(max_pairs=getattr(args, "max_pairs", None),
                           max_cells=getattr(args, "max_cells", None),
                           max_rational_cells=getattr(args, "max_rational_cells", None))


# ---------------------------------------------------------------------------
# subcommands: each returns (report, exit code, plain renderer)
# ---------------------------------------------------------------------------

def cmd_lemmas(args):
    if args.k_max < 1:
        raise UsageError("--k-max must be >= 1")
    if any(n < 1 for n in args.n):
        raise UsageError("--n values must be >= 1")
    t0 = time.perf_counter()
    sweep = lemma_sweep(args.k_max, args.n, jobs=args.jobs)
    rows = [{"lemma": name, "k": k, "n": n, "passed": ok}
            for (name, k, n), ok in sorted(sweep.items())]
    collisions = {str(n): {str(k): substitution_report(k, n)["collision"]
                           for k in range(1, args.k_max + 1)} for n in args.n}
    report = {
        "command": "lemmas", "k_max": args.k_max, "n": args.n, "results": rows,
        "substitution_with_repeated_index": {
            n: {k: {str(u): ok for u, ok in v.items()} for k, v in ks.items()}
            for n, ks in collisions.items()},
        "passed": all(r["passed"] for r in rows),
        "seconds": round(time.perf_counter() - t0, 4),
    }

    def plain(rep):
        ks = range(1, rep["k_max"] + 1)
        lines = ["lemma         n  " + "  ".join(f"k={k}" for k in ks)]
        table = {(r["lemma"], r["n"], r["k"]): r["passed"] for r in rep["results"]}
        for name in LEMMAS:
            for n in rep["n"]:
                cells = []
                for k in ks:
                    v = table.get((name, n, k))
                    cells.append(" -- " if v is None else (" ok " if v else "FAIL"))
                lines.append(f"{name:<13} {n:<2} " + " ".join(cells))
        lines.append("all identities hold" if rep["passed"] else "SOME IDENTITIES FAIL")
        return "\n".join(lines)

    return report, EXIT_OK if report["passed"] else EXIT_DEVIATION, plain


def cmd_flats(args):
    cfg = _config(args)
    flats = enumerate_flats(cfg)
    if args.format == "cas-export":
        field = _field(args.field or f"cyclotomic:{cfg.n}", cfg.n, roots=True)
        ring = cfg.ring(field)
        text = "".join(to_cas(list(flat_linear_forms(fl, ring, cfg.n)), args.cas,
                              name=f"P{idx}", header=idx == 0)
                       for idx, fl in enumerate(flats))
        return text, EXIT_OK, None
    report = {"command": "flats", "N": cfg.N, "n": cfg.n, "count": len(flats),
              "flats": [fl.to_json() for fl in flats]}

    def plain(rep):
        lines = [f"{rep['count']} flats of V_{{{rep['N']},{rep['n']}}}"]
        lines += [str(fl) for fl in flats]
        return "\n".join(lines)

    return report, EXIT_OK, plain


def cmd_gens(args):
    cfg = _config(args)
    field = _field(args.field or "rational", cfg.n, roots=False)
    ring = cfg.ring(field)
    gens = ideal_generators(cfg, ring)
    if args.format == "cas-export":
        return to_cas(gens, args.cas, name="I"), EXIT_OK, None
    specs = generator_specs(cfg.N)
    report = {
        "command": "gens", "N": cfg.N, "n": cfg.n, "field": field.spec(),
        "count": len(gens), "degree": generator_degree(cfg),
        "generators": [{"A": list(s.A), "B": list(s.B), "degree": g.degree(),
                        "terms": len(g.terms), "poly": to_json_obj(g)}
                       for s, g in zip(specs, gens)],
    }

    def plain(rep):
        lines = [f"{rep['count']} generators of degree {rep['degree']} over {rep['field']}"]
        for s, g in zip(specs, gens):
            lines.append(f"A={list(s.A)} B={list(s.B)}: {to_text(g)}")
        return "\n".join(lines)

    return report, EXIT_OK, plain


def cmd_contain(args):
    cfg = _config(args)
    spec = args.field.strip().lower()
    if spec.startswith("prime:"):
        try:
            for p in spec.split(":", 1)[1].split(","):
                PrimeField(int(p))
        except (FieldError, ValueError) as exc:
            raise UsageError(str(exc))
    elif spec not in ("rational", "q", "qq"):
        raise UsageError("--field must be rational or prime:p[,q...] for contain")
    if args.m < 1 or args.r < 1:
        raise UsageError("--m and --r must be >= 1")
    report = check_noncontainment(cfg, m=args.m, r=args.r, field=spec, budget=_budget(args),
                                  groebner_check=args.groebner_check, jobs=args.jobs,
                                  timings=not args.no_timings)
    report = {"command": "contain", **report}
    overall = report["overall"]
    code = {"CONFIRMED": EXIT_OK, "CONTAINMENT_GUARANTEED": EXIT_OK,
            "UNDECIDED": EXIT_BUDGET}.get(overall, EXIT_DEVIATION)

    def plain(rep):
        lines = [f"F_{{{cfg.N},{cfg.n}}}: I^({rep['m']}) vs I^{rep['r']}"]
        sym = rep.get("symbolic")
        if sym is None:
            lines.append(rep.get("note", ""))
        else:
            orders = [row["order"] for row in sym["per_flat_orders"]]
            lines.append(f"  symbolic: {sym['verdict']} (min order {min(orders)} over "
                         f"{len(orders)} flats, field {sym['field']})")
            o = rep["ordinary"]
            size = f", {o['rows']}x{o['columns']} rank {o['rank']}" if "rows" in o else ""
            lines.append(f"  ordinary: {o['verdict']} via {o['method']} over {o['field']}{size}"
                         f" [{o.get('status', '')}]")
            for pp in o.get("per_prime", []):
                lines.append(f"    {pp['field']}: {pp['verdict']}")
            if "cross_check" in o:
                lines.append(f"  groebner cross-check: {o['cross_check']}")
        lines.append(f"overall: {rep['overall']}")
        return "\n".join(lines)

    return report, code, plain


def cmd_structure(args):
    cfg = _config(args)
    report: dict = {"command": "structure", "N": cfg.N, "n": cfg.n}
    budget = _budget(args)
    if cfg.N >= 3:
        field = _field(args.field or f"prime:{default_prime(cfg.n)}", cfg.n, roots=False)
        report["cone_intersection"] = cone_intersection_report(cfg, field, budget.max_pairs)
        if args.no_timings:
            report["cone_intersection"].pop("seconds", None)
        ids = verify_prop32_identities(cfg)
        report["identities"] = {"passed": ids["passed"],
                                "checks": [{k: v for k, v in c.items() if k != "difference"}
                                           for c in ids["checks"]]}
        ok = report["cone_intersection"]["equal"] and ids["passed"]
    else:
        field = _field(args.field or f"cyclotomic:{cfg.n}", cfg.n, roots=True)
        complete = verify_generators_complete(cfg, field, budget.max_pairs)
        report["generators_complete"] = {"field": field.spec(), "equal": complete}
        ok = complete
    report["passed"] = ok

    def plain(rep):
        lines = []
        if "cone_intersection" in rep:
            ci = rep["cone_intersection"]
            lines.append(f"cone intersection over {ci['field']}: "
                         f"{'equal' if ci['equal'] else 'DIFFERENT'}")
            for c in rep["identities"]["checks"]:
                lines.append(f"  {c['identity']:<22} {c['instance']:<6} "
                             f"{'ok' if c['passed'] else 'FAIL'}")
        if "generators_complete" in rep:
            gc = rep["generators_complete"]
            lines.append(f"generators vs union of flats over {gc['field']}: "
                         f"{'equal' if gc['equal'] else 'DIFFERENT'}")
        lines.append("pass" if rep["passed"] else "FAIL")
        return "\n".join(lines)

    return report, EXIT_OK if ok else EXIT_DEVIATION, plain


def cmd_prooftrace(args):
    cfg = _config(args)
    trace = proof_trace(cfg, scan=args.scan)
    report = {"command": "prooftrace", **trace.to_json()}

    def plain(rep):
        lines = [f"N={rep['N']} n={rep['n']} ({rep['parity']}), generator A={rep['steps'][0]['generator_A']}"]
        lines.append("mod   coefficient  expected  sq-coeff  h(p)  expected  unique")
        for s in rep["steps"]:
            u = s["uniqueness"]
            uniq = "-" if u is None else ("yes" if u["unique"] else "NO")
            lines.append(f"x{s['reduced_variable']:<4} {s['coefficient']:>11}  {s['expected_coefficient']:>8}"
                         f"  {s['square_coefficient']:>8}  {s['h_coefficient']:>4}  {s['expected_h']:>8}  {uniq:>6}")
        if rep.get("literal_m_prime"):
            lit = rep["literal_m_prime"]
            lines.append(f"literal m' (x_1^{lit['x1_exponent']}, x_{lit['last_variable']}) is not "
                         f"representable; variant coefficient {lit['variant_coefficient']}")
        lines.append("contradiction reached" if rep["contradiction"] else "no contradiction")
        lines.append("pass" if rep["passed"] else "FAIL")
        return "\n".join(lines)

    return report, EXIT_OK if trace.passed else EXIT_DEVIATION, plain


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fermatflats",
                                description="Fermat arrangements of codimension-2 flats: "
                                            "exact verification runs.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, nN=True, formats=("plain", "json")):
        if nN:
            sp.add_argument("--N", type=int, required=True, help="projective dimension")
            sp.add_argument("--n", type=int, required=True, help="Fermat degree")
        sp.add_argument("--format", choices=formats, default="plain")
        sp.add_argument("--output", help="write to this file instead of stdout")
        sp.add_argument("--no-timings", action="store_true", help="omit wall-clock fields")
        sp.add_argument("--jobs", type=int, default=1, help="worker processes")

    def budgets(sp):
        sp.add_argument("--max-pairs", type=int, help="S-pair budget for Groebner runs")
        sp.add_argument("--max-cells", type=int, help="matrix-cell budget over prime fields")
        sp.add_argument("--max-rational-cells", type=int, help="matrix-cell budget over Q")

    sp = sub.add_parser("lemmas", help="check the bracket identities")
    sp.add_argument("--k-max", type=int, default=4)
    common(sp, nN=False)
    sp.add_argument("--n", type=_int_list, default=[3, 4, 5], help="comma-separated n values")
    sp.set_defaults(func=cmd_lemmas)

    for name, fn, hlp in (("flats", cmd_flats, "list the flats of the arrangement"),
                          ("gens", cmd_gens, "list the ideal generators")):
        sp = sub.add_parser(name, help=hlp)
        common(sp, formats=("plain", "json", "cas-export"))
        sp.add_argument("--field", help="rational | prime:P | cyclotomic[:N]")
        sp.add_argument("--cas", choices=("singular", "macaulay2"), default="singular")
        sp.set_defaults(func=fn)

    sp = sub.add_parser("contain", help="certify I^(3) not inside I^2")
    common(sp)
    budgets(sp)
    sp.add_argument("--field", default="rational", help="rational | prime:P[,Q...]")
    sp.add_argument("--m", type=int, default=3)
    sp.add_argument("--r", type=int, default=2)
    sp.add_argument("--groebner-check", action="store_true",
                    help="cross-check the ordinary-power verdict with a Groebner normal form")
    sp.set_defaults(func=cmd_contain)

    sp = sub.add_parser("structure", help="cone decomposition and generator identities")
    common(sp)
    budgets(sp)
    sp.add_argument("--field", help="field for the ideal computations")
    sp.set_defaults(func=cmd_structure)

    sp = sub.add_parser("prooftrace", help="coefficient bookkeeping of the non-containment argument")
    common(sp)
    sp.add_argument("--scan", action=argparse.BooleanOptionalAction, default=None,
                    help="exhaustive generator-pair uniqueness scan (default: N <= 3)")
    sp.set_defaults(func=cmd_prooftrace)
    return p


def dump_json(report) -> str:
    return json.dumps(report, indent=2, sort_keys=True, default=str) + "\n"


def _strip_timings(obj):
    if isinstance(obj, dict):
        return {k: _strip_timings(v) for k, v in obj.items() if k not in ("timings", "seconds")}
    if isinstance(obj, list):
        return [_strip_timings(v) for v in obj]
    return obj


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if getattr(args, "jobs", 1) < 1:
        print("error: --jobs must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        report, code, plain = args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"undecided: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    if isinstance(report, str):
        text = report
    else:
        if args.no_timings:
            report = _strip_timings(report)
        text = dump_json(report) if args.format == "json" or plain is None else plain(report) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
