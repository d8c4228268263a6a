"""Command line front end: ``linelab analyze | counterexample | kopell | tower | measure``.

Exit codes: 0 clean result, 2 analysis ran but the outcome is negative
(unclassified action, failed verification), 1 input error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import __version__
from .config import Budget
from .errors import LinelabError, SpecError
from .intervals import IntervalQ

EXIT_OK, EXIT_INPUT, EXIT_NEGATIVE = 0, 1, 2


class InputError(Exception):
    pass


def _load_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def _load_spec(path, args=None):
    from .groupspec import GroupSpec

    obj = _load_json(path)
    try:
        spec = GroupSpec.from_json(obj)
    except (SpecError, ValueError, KeyError, TypeError) as exc:
        raise InputError(f"{path}: {exc}") from None
    if args is not None:
        if getattr(args, "window", None):
            try:
                spec = spec.with_window(IntervalQ(*args.window))
            except (ValueError, LinelabError) as exc:
                raise InputError(f"--window: {exc}") from None
        if getattr(args, "budget_words", None):
            b = spec.budget.to_json()
            b["word_len"] = args.budget_words
            spec = spec.with_budget(Budget.from_json(b))
    return spec


def _out_dir(path):
    if path:
        os.makedirs(path, exist_ok=True)
    return path


def _emit(text):
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


# ---------------------------------------------------------------- analyze


def run_analysis(spec):
    """Crossings, tower search and classification for a GroupSpec."""
    from .errors import BudgetExhausted, Inconclusive, NoSeedElement, SeriesViolation
    from .measure import classify_action
    from .parallel import pmap
    from .report import AnalysisReport
    from .structure import fixed_set, is_crossed
    from .tower import search_tower, search_tower_nilpotent, validate_tower

    t0 = time.perf_counter()
    gens = spec.generators
    names = list(gens)
    tol = spec.tolerances
    reps = dict(zip(names, pmap(lambda n: fixed_set(gens[n], spec.window, tol=tol), names)))
    t1 = time.perf_counter()

    pairs = [(u, v) for i, u in enumerate(names) for v in names[i + 1 :]]

    def cross(pair):
        u, v = pair
        try:
            w = is_crossed(gens[u], gens[v], spec.window, names=pair, tol=tol, reports=(reps[u], reps[v]))
            return {"pair": [u, v], "crossed": w is not None, "witness": None if w is None else w.to_json(), "note": ""}
        except Inconclusive as exc:
            return {"pair": [u, v], "crossed": None, "witness": None, "note": f"inconclusive: {exc}"}

    crossings = pmap(cross, pairs)
    t2 = time.perf_counter()

    tower = validation = None
    if any(r["crossed"] for r in crossings):
        note = "crossed elements present"
    else:
        note = ""
        try:
            if spec.subgroups.get("A") or spec.series:
                try:
                    tower = search_tower_nilpotent(spec, spec.window, spec.budget, tol=tol)
                except (SeriesViolation, NoSeedElement, SpecError) as exc:
                    note = f"nilpotent search skipped: {exc}; "
                    tower = search_tower(spec, spec.window, spec.budget, tol=tol)
            else:
                tower = search_tower(spec, spec.window, spec.budget, tol=tol)
            validation = validate_tower(tower, tol=tol)
        except NoSeedElement as exc:
            note += f"no seed element: {exc}"
        except BudgetExhausted as exc:
            note += f"budget exhausted: {exc}"
    t3 = time.perf_counter()
    cls = classify_action(spec)
    t4 = time.perf_counter()
    timings = {"fixed_sets_s": t1 - t0, "crossings_s": t2 - t1, "tower_s": t3 - t2, "classify_s": t4 - t3}
    return AnalysisReport(spec.name, spec.window, spec.budget, tol, reps, crossings, tower, validation, note.strip(), cls, timings)


def cmd_analyze(args):
    from .report import dumps, write_csv, write_json

    spec = _load_spec(args.spec, args)
    rep = run_analysis(spec)
    if args.out:
        _out_dir(args.out)
        write_json(os.path.join(args.out, "report.json"), rep.to_json(args.timings))
        write_csv(
            os.path.join(args.out, "crossings.csv"),
            ["f", "g", "crossed", "note"],
            [(r["pair"][0], r["pair"][1], "inconclusive" if r["crossed"] is None else r["crossed"], r["note"]) for r in rep.crossings],
        )
        c = rep.classification
        write_csv(
            os.path.join(args.out, "residuals.csv"),
            ["generator", "residual", "tolerance", "pass"],
            [(n, r, spec.tolerances.tau_meas, r <= spec.tolerances.tau_meas) for n, r in sorted(c.residuals.items())],
        )
    if args.json:
        _emit(dumps(rep.to_json(args.timings)))
    else:
        _emit("\n".join(rep.summary_lines()))
    return rep.exit_code


# ---------------------------------------------------------------- counterexample


def cmd_counterexample_build(args):
    from .report import write_json
    from .yoccoz import build_counterexample

    if args.stages < 2:
        raise InputError("--stages must be at least 2")
    if not args.exponent > 0:
        raise InputError("--exponent must be positive")
    b = build_counterexample(args.stages, args.exponent)
    write_json(args.out, b.to_json())
    _emit(f"wrote {args.out}: {len(b.maps)} stage maps on [-{b.K}, {b.K}]")
    return EXIT_OK


def cmd_counterexample_verify(args):
    from .report import write_csv, write_json
    from .yoccoz import CounterexampleBuild, sweep_rows, verify_counterexample

    obj = _load_json(args.build)
    try:
        b = CounterexampleBuild.from_json(obj)
    except (SpecError, ValueError, KeyError, TypeError) as exc:
        raise InputError(f"{args.build}: {exc}") from None
    rep = verify_counterexample(b, samples=args.samples, n_check=args.n_check, seed=args.seed)
    if args.report:
        write_json(args.report, rep.to_json())
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            fh.write(rep.to_csv())
    if args.sweep:
        write_csv(args.sweep, ["map", "x", "f", "df"], sweep_rows(b))
    for check, s in sorted(rep.to_json()["summary"].items()):
        status = "ok" if s["failed"] == 0 else f"FAILED {s['failed']}/{s['rows']}"
        _emit(f"{check:24s} worst {s['worst']!s:>22s}  tol {s['tolerance']!s:>8s}  {status}")
    _emit("verification " + ("passed" if rep.passed else "failed"))
    return EXIT_OK if rep.passed else EXIT_NEGATIVE


# ---------------------------------------------------------------- kopell


def cmd_kopell(args):
    from .tower import kopell_alpha_threshold, kopell_min_k, kopell_residual

    if args.k is not None:
        if args.k < 3:
            raise InputError("--k must be at least 3")
        a = kopell_alpha_threshold(args.k)
        _emit(f"{a:.12f}")
        if args.verbose:
            _emit(f"residual {kopell_residual(a, args.k):.3e}")
    else:
        if not args.alpha > 0:
            raise InputError("--alpha must be positive")
        _emit(str(kopell_min_k(args.alpha)))
    return EXIT_OK


# ---------------------------------------------------------------- tower


def cmd_tower_find(args):
    from .errors import BudgetExhausted, NoSeedElement
    from .report import dumps, write_json
    from .tower import search_tower, search_tower_nilpotent, validate_tower

    spec = _load_spec(args.spec, args)
    try:
        if args.nilpotent:
            t = search_tower_nilpotent(spec, spec.window, spec.budget, tol=spec.tolerances)
        else:
            t = search_tower(spec, spec.window, spec.budget, tol=spec.tolerances)
    except (NoSeedElement, BudgetExhausted) as exc:
        _emit(f"no tower: {exc}")
        return EXIT_NEGATIVE
    rep = validate_tower(t, tol=spec.tolerances)
    doc = {"tower": t.to_json(), "validation": rep.to_json()}
    if args.out:
        write_json(args.out, t.to_json())
    if args.json:
        _emit(dumps(doc))
    else:
        _emit(f"tower with {len(t)} levels: " + " < ".join(f"{lv.name} {lv.interval}" for lv in t.levels))
        _emit("validation " + ("passed" if rep.passed else "failed"))
    return EXIT_OK if rep.passed else EXIT_NEGATIVE


def cmd_tower_verify(args):
    from .report import dumps, write_json
    from .tower import Tower, mass_pump, validate_tower

    obj = _load_json(args.tower)
    try:
        t = Tower.from_json(obj.get("tower", obj))
    except (SpecError, ValueError, KeyError, TypeError) as exc:
        raise InputError(f"{args.tower}: {exc}") from None
    rep = validate_tower(t)
    doc = {"validation": rep.to_json()}
    ok = rep.passed
    if args.pump_level:
        try:
            cert = mass_pump(t, args.pump_level, args.iterates)
            doc["mass_pump"] = cert.to_json()
        except (LinelabError, ValueError) as exc:
            doc["mass_pump"] = {"error": str(exc)}
            ok = False
    if args.report:
        write_json(args.report, doc)
    if args.json:
        _emit(dumps(doc))
    else:
        for c in rep.checks:
            _emit(f"level {c.index} {c.name} {c.interval}: " + ("ok" if c.passed else "; ".join(c.reasons)))
        if "mass_pump" in doc:
            mp = doc["mass_pump"]
            _emit(mp.get("claim", mp.get("error", "")))
        _emit("tower " + ("valid" if ok else "invalid"))
    return EXIT_OK if ok else EXIT_NEGATIVE


# ---------------------------------------------------------------- measure


def cmd_measure_estimate(args):
    from .measure import classify_action
    from .report import dumps, write_csv, write_json

    spec = _load_spec(args.spec, args)
    c = classify_action(spec)
    doc = {"schema": 1, "spec": spec.name, "case": c.case, "reason": c.reason,
           "measure": None if c.measure is None else c.measure.to_json(), "residuals": c.residuals,
           "tau_meas": spec.tolerances.tau_meas}
    if args.out:
        write_json(args.out, doc)
    if args.csv:
        write_csv(args.csv, ["generator", "residual", "tolerance", "pass"],
                  [(n, r, spec.tolerances.tau_meas, r <= spec.tolerances.tau_meas) for n, r in sorted(c.residuals.items())])
    if args.json:
        _emit(dumps(doc))
    else:
        _emit(f"case: {c.case} ({c.reason})")
        if c.measure is not None:
            _emit(f"measure: {c.measure.kind}")
        for n, r in sorted(c.residuals.items()):
            _emit(f"  {n}: residual {r:.3e}")
    return EXIT_OK if c.measure is not None else EXIT_NEGATIVE


def cmd_measure_verify(args):
    from .measure import _residuals, measure_from_json
    from .report import dumps, write_csv

    spec = _load_spec(args.spec, args)
    obj = _load_json(args.measure)
    try:
        mu = measure_from_json(obj.get("measure", obj) if "kind" not in obj else obj)
    except (SpecError, ValueError, KeyError, TypeError) as exc:
        raise InputError(f"{args.measure}: {exc}") from None
    atoms = getattr(mu, "points", ())
    res = _residuals(mu, spec.generators, spec.window, atoms, 0.25 * spec.tolerances.eps_sep if atoms else 0.0, args.probes, args.seed)
    tau = spec.tolerances.tau_meas
    ok = all(r <= tau for r in res.values())
    if args.csv:
        write_csv(args.csv, ["generator", "residual", "tolerance", "pass"], [(n, r, tau, r <= tau) for n, r in sorted(res.items())])
    if args.json:
        _emit(dumps({"residuals": res, "tau_meas": tau, "passed": ok}))
    else:
        for n, r in sorted(res.items()):
            _emit(f"{n}: residual {r:.3e} ({'ok' if r <= tau else 'FAIL'})")
        _emit("measure " + ("invariant" if ok else "not invariant") + f" at tau_meas {tau:g}")
    return EXIT_OK if ok else EXIT_NEGATIVE


# ---------------------------------------------------------------- parser


def build_parser():
    p = argparse.ArgumentParser(prog="linelab", description="Group actions on the line: structure, towers, invariant measures.")
    p.add_argument("--version", action="version", version=f"linelab {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def spec_flags(sp):
        sp.add_argument("--window", nargs=2, type=float, metavar=("A", "B"), help="override the window of the group document")
        sp.add_argument("--budget-words", type=int, metavar="N", help="override the word-length budget")
        sp.add_argument("--json", action="store_true", help="print the JSON document instead of a summary")

    a = sub.add_parser("analyze", help="crossings, tower search and classification")
    a.add_argument("spec")
    a.add_argument("--out", help="directory for report.json, crossings.csv, residuals.csv")
    a.add_argument("--timings", action="store_true", help="include wall-clock timings in the JSON report")
    spec_flags(a)
    a.set_defaults(func=cmd_analyze)

    c = sub.add_parser("counterexample", help="build or verify the commuting stage family")
    csub = c.add_subparsers(dest="action", required=True)
    cb = csub.add_parser("build")
    cb.add_argument("--stages", type=int, required=True)
    cb.add_argument("--exponent", type=float, default=1.0, help="ladder exponent q in (n+1)^-q")
    cb.add_argument("--out", default="build.json")
    cb.set_defaults(func=cmd_counterexample_build)
    cv = csub.add_parser("verify")
    cv.add_argument("build")
    cv.add_argument("--report")
    cv.add_argument("--csv")
    cv.add_argument("--sweep", help="CSV of x, f(x), f'(x) for every map")
    cv.add_argument("--samples", type=int, default=1000)
    cv.add_argument("--n-check", type=int, default=40)
    cv.add_argument("--seed", type=int, default=0)
    cv.set_defaults(func=cmd_counterexample_verify)

    k = sub.add_parser("kopell", help="threshold alpha*(k) or the least k for an alpha")
    g = k.add_mutually_exclusive_group(required=True)
    g.add_argument("--k", type=int)
    g.add_argument("--alpha", type=float)
    k.add_argument("--verbose", action="store_true")
    k.set_defaults(func=cmd_kopell)

    t = sub.add_parser("tower", help="find or verify infinite towers")
    tsub = t.add_subparsers(dest="action", required=True)
    tf = tsub.add_parser("find")
    tf.add_argument("spec")
    tf.add_argument("--nilpotent", action="store_true", help="use the declared A <| B pair or series")
    tf.add_argument("--out")
    spec_flags(tf)
    tf.set_defaults(func=cmd_tower_find)
    tv = tsub.add_parser("verify")
    tv.add_argument("tower")
    tv.add_argument("--pump-level", type=int, default=0)
    tv.add_argument("--iterates", type=int, default=100)
    tv.add_argument("--report")
    tv.add_argument("--json", action="store_true")
    tv.set_defaults(func=cmd_tower_verify)

    m = sub.add_parser("measure", help="estimate or verify invariant measures")
    msub = m.add_subparsers(dest="action", required=True)
    me = msub.add_parser("estimate")
    me.add_argument("spec")
    me.add_argument("--out")
    me.add_argument("--csv")
    spec_flags(me)
    me.set_defaults(func=cmd_measure_estimate)
    mv = msub.add_parser("verify")
    mv.add_argument("spec")
    mv.add_argument("measure")
    mv.add_argument("--probes", type=int, default=64)
    mv.add_argument("--seed", type=int, default=0)
    mv.add_argument("--csv")
    spec_flags(mv)
    mv.set_defaults(func=cmd_measure_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except InputError as exc:
        print(f"linelab: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SpecError as exc:
        print(f"linelab: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
