"""Command-line front end.

Every subcommand writes a JSON report (stable key order) and exits 0 when
all checks pass, 1 when a check fails and 2 on bad input.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import __version__
from .errors import LineSchemeError, NonGenericError, ParseError, ResourceLimit
from .fixtures import (
    A_ALPHA,
    LINE_GOLDEN,
    POINT_GOLDEN,
    data_path,
    format_poly_list,
    load_poly_list,
)
from .multipoly import GREVLEX, ORDERS

log = logging.getLogger("lineschemes")

THREADS_ENV = "LINESCHEMES_THREADS"


class InputError(Exception):
    """Bad command-line input; maps to exit status 2."""


# ---------------------------------------------------------------------------
# configuration and reports


@dataclass
class RunConfig:
    subcommand: str
    input: Path | None
    alpha: Fraction | None  # None means symbolic
    order: str = "grevlex"
    output: Path | None = None
    text_output: Path | None = None
    golden: Path | None = None
    budget: int = 200_000
    timings: bool = True
    delta: Fraction = Fraction(-1)
    epsilon: Fraction = Fraction(1)

    @property
    def alpha_label(self):
        return "symbolic" if self.alpha is None else str(self.alpha)


@dataclass
class Check:
    name: str
    passed: bool
    details: dict = field(default_factory=dict)
    witness: object = None
    seconds: float = 0.0

    def as_dict(self, timings=True):
        out = {"name": self.name, "status": "pass" if self.passed else "fail", "details": self.details}
        if self.witness is not None:
            out["witness"] = self.witness
        if timings:
            out["seconds"] = round(self.seconds, 3)
        return out


@dataclass
class Report:
    subcommand: str
    input_digest: str
    alpha: str
    checks: list = field(default_factory=list)

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def as_dict(self, timings=True):
        return {
            "tool": "lineschemes",
            "version": __version__,
            "subcommand": self.subcommand,
            "input_digest": self.input_digest,
            "alpha": self.alpha,
            "passed": self.passed,
            "checks": [c.as_dict(timings) for c in self.checks],
        }

    def to_json(self, timings=True):
        return json.dumps(self.as_dict(timings), indent=2, sort_keys=True) + "\n"


def _digest(paths):
    h = hashlib.sha256()
    for p in paths:
        if p is not None:
            h.update(Path(p).read_bytes())
    return h.hexdigest()


def timed(name, fn):
    """Run ``fn`` (returning ``(passed, details, witness)``) into a :class:`Check`."""
    start = time.perf_counter()
    passed, details, witness = fn()
    return Check(name, bool(passed), details, witness, time.perf_counter() - start)


def _threads():
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def run_checks(jobs):
    """Run ``(name, fn)`` jobs, in parallel if requested, keeping input order."""
    threads = _threads()
    if threads == 1 or len(jobs) == 1:
        return [timed(name, fn) for name, fn in jobs]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(timed, name, fn) for name, fn in jobs]
        return [f.result() for f in futures]


# ---------------------------------------------------------------------------
# shared pipeline pieces


class Pipeline:
    """Lazily computed artifacts shared by the checks of one run."""

    def __init__(self, config):
        from .ncalg import load_presentation

        self.config = config
        self.input_path = config.input or data_path(A_ALPHA)
        self.bundled = config.input is None
        alg = load_presentation(self.input_path)
        if config.alpha is not None and alg.field == "Q(alpha)":
            alg = alg.specialize(config.alpha)
        self.alg = alg
        self._cache = {}

    def _get(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    def specialize(self, polys):
        if self.config.alpha is None:
            return polys
        return [p.specialize(self.config.alpha) for p in polys]

    def golden(self, name):
        path = self.config.golden if self.config.golden else data_path(name)
        return self.specialize(load_poly_list(path)[1])

    def raw_minors(self):
        from .pointscheme import raw_minors

        return self._get("minors", lambda: raw_minors(self.alg))

    def system(self):
        from .linescheme import line_scheme_system

        return self._get("system", lambda: line_scheme_system(self.alg))


def _poly_strs(polys, limit=None):
    polys = polys if limit is None else polys[:limit]
    return [p.to_str(GREVLEX) for p in polys]


# ---------------------------------------------------------------------------
# point scheme


def point_scheme_checks(pipe, with_golden=True, with_points=True):
    from .linescheme import set_equal_up_to_scalar

    def minors():
        ms = pipe.raw_minors()
        zeros = sum(1 for m in ms if m.is_zero())
        details = {"minors": len(ms), "zero_minors": zeros}
        if zeros == len(ms):
            details["note"] = "point scheme = P^3"
        return len(ms) == 15, details, None

    jobs = [("point-scheme/minors", minors)]
    if with_golden:
        def golden():
            gold = pipe.golden(POINT_GOLDEN)
            ms = [m for m in pipe.raw_minors() if not m.is_zero()]
            ok = set_equal_up_to_scalar(ms, gold)
            return ok, {"computed": len(ms), "golden": len(gold)}, None if ok else _poly_strs(ms)
        jobs.append(("point-scheme/golden", golden))
    if with_points and pipe.config.alpha is None:
        jobs.append(("point-scheme/points-and-sigma", lambda: _points_check(pipe)))
    return jobs


def _points_check(pipe):
    from .pointscheme import enumerate_points, pairwise_distinct, sigma_report

    pts = enumerate_points(pipe.alg, generators=pipe.raw_minors())
    bad = pairwise_distinct(pts)
    sig = sigma_report(pipe.alg, pts)
    details = {
        "points": len(pts),
        "undistinguished_pairs": bad,
        "sigma_images": sig.images,
        "sigma_matches_closed_form": all(sig.matches_closed_form),
        "sigma_involution": sig.involution,
        "sigma_orbits": sig.orbit_count,
        "families_preserved": sig.families_preserved,
    }
    ok = len(pts) == 20 and not bad and sig.ok and sig.orbit_count == 10
    return ok, details, None


# ---------------------------------------------------------------------------
# line scheme


def line_scheme_checks(pipe, with_golden=True):
    from .linescheme import compare_up_to_scalar, default_rewriter
    from .multipoly import scalar_equal_up_to_unit

    def roundtrip():
        sysm = pipe.system()
        rw = default_rewriter()
        failed = [k for k, (b, m) in enumerate(zip(sysm.brackets, sysm.minors)) if rw.expand(b) != m]
        ok = len(sysm.minors) == 45 and not failed
        return ok, {"minors": len(sysm.minors), "exact_round_trips": len(sysm.minors) - len(failed)}, failed or None

    jobs = [("line-scheme/bracket-round-trip", roundtrip)]
    if with_golden:
        def golden():
            sysm = pipe.system()
            gold = pipe.golden(LINE_GOLDEN)
            polys = sysm.polynomials()
            cmp = compare_up_to_scalar(polys, gold, modulus=[sysm.pluecker])
            p_first = scalar_equal_up_to_unit(gold[0], sysm.pluecker)
            ok = cmp["match"] and p_first
            details = dict(cmp)
            details["pluecker_first"] = p_first
            witness = None if ok else {
                "unmatched_computed": [polys[k].to_str() for k in cmp["unmatched_computed"]],
                "unmatched_golden": [gold[k].to_str() for k in cmp["unmatched_golden"]],
            }
            return ok, details, witness
        jobs.append(("line-scheme/golden", golden))
    return jobs


# ---------------------------------------------------------------------------
# geometry


def verify_checks(pipe):
    from . import geometry as G

    def components():
        rep = G.verify_components(pipe.system().polynomials())
        d = rep.as_dict()
        return rep.ok, d, [c.witness for c in rep.checks if c.witness] or None

    def intersections():
        rep = G.intersection_report()
        return rep.ok, rep.as_dict(), rep.mismatches and [list(k) for k in rep.mismatches] or None

    def incidence():
        reps, distinct = G.incidence_summary(system_polys=pipe.system().polynomials())
        ok = distinct
        for r in reps:
            fam = r.point.family
            if fam == "Z0":
                ok = ok and r.infinite
            elif fam in ("Z1", "Z2"):
                ok = ok and r.count == 6
            else:
                ok = ok and r.count == 4 and sum(1 for lab in r.labels() if len(lab) == 2) == 2
        return ok, {"points": [r.as_dict() for r in reps], "distinct_after_specialization": distinct}, None

    def jacobians():
        rep = G.jacobian_checks()
        return rep.ok, rep.as_dict(), None

    def birational():
        rep = G.birational_check()
        return rep.ok, rep.as_dict(), None

    return [
        ("verify/components", components),
        ("verify/intersections", intersections),
        ("verify/incidence", incidence),
        ("verify/jacobians", jacobians),
        ("verify/birational", birational),
    ]


def ideal_dim_checks(pipe):
    from .geometry import ideal_intersection_report

    def report():
        rep = ideal_intersection_report(pipe.alg, pipe.config.delta, pipe.config.epsilon)
        return rep.ok, rep.as_dict(), None

    return [("ideal-dim/intersections", report)]


def degree_checks(pipe, values=(3, 5), budget=200_000):
    from .groebner import buchberger, hilbert_data
    from .pointscheme import point_ideal

    def make(label, polys_fn, expected):
        def run():
            out = {}
            ok = True
            for v in values:
                polys = [p.specialize(v) for p in polys_fn()]
                gb = buchberger(polys, GREVLEX, budget=budget)
                hd = hilbert_data(gb, len(polys[0].varset))
                out[str(v)] = {"dimension": hd.dimension, "degree": hd.degree, "basis_size": len(gb.basis)}
                ok = ok and (hd.dimension, hd.degree) == expected
            return ok, out, None
        return (f"degrees/{label}", run)

    return [
        make("point-ideal", lambda: point_ideal(pipe.alg), (0, 20)),
        make("line-ideal", lambda: pipe.system().polynomials(), (1, 20)),
    ]


# ---------------------------------------------------------------------------
# groebner on a polynomial file


def groebner_report(config):
    from .groebner import buchberger, hilbert_data

    if config.input is None:
        raise InputError("groebner needs an input polynomial file")
    _, polys = load_poly_list(config.input, alpha=config.alpha)
    report = Report("groebner", _digest([config.input]), config.alpha_label)

    def run():
        gb = buchberger(polys, ORDERS[config.order], budget=config.budget)
        details = {"order": config.order, "basis": _poly_strs(gb.basis), "stats": gb.stats}
        if all(p.is_homogeneous() for p in polys):
            details["hilbert"] = hilbert_data(gb, len(polys[0].varset)).as_dict()
        else:
            details["hilbert"] = None
        return True, details, None

    report.checks.append(timed("groebner/basis", run))
    return report, None


# ---------------------------------------------------------------------------
# dispatch


def _safe(job):
    """Turn library exceptions raised inside a check into a failing check."""
    name, fn = job

    def wrapped():
        try:
            return fn()
        except ResourceLimit as exc:
            return False, {"error": str(exc)}, exc.progress
        except LineSchemeError as exc:
            witness = getattr(exc, "witness", None)
            return False, {"error": f"{type(exc).__name__}: {exc}"}, _jsonable(witness)
    return name, wrapped


def _jsonable(x):
    try:
        json.dumps(x)
        return x
    except TypeError:
        return str(x)


def build_report(config):
    if config.subcommand == "groebner":
        return groebner_report(config)
    pipe = Pipeline(config)
    paths = [pipe.input_path] + ([config.golden] if config.golden else [])
    report = Report(config.subcommand, _digest(paths), config.alpha_label)
    sub = config.subcommand
    golden = pipe.bundled or config.golden is not None
    jobs = []
    text = None
    if sub in ("point-scheme", "all"):
        jobs += point_scheme_checks(pipe, with_golden=golden, with_points=pipe.bundled)
        if sub == "point-scheme":
            text = lambda: format_poly_list(pipe.raw_minors(), header="4x4 minors of the relation matrix")
    if sub in ("line-scheme", "all"):
        jobs += line_scheme_checks(pipe, with_golden=golden)
        if sub == "line-scheme":
            text = lambda: format_poly_list(pipe.system().polynomials(), header="Pluecker quadric and quartics")
    if sub in ("verify", "all"):
        jobs += verify_checks(pipe)
    if sub in ("ideal-dim", "all"):
        jobs += ideal_dim_checks(pipe)
    if sub == "all":
        jobs += degree_checks(pipe, budget=config.budget)
    # the shared pipeline is computed once up front so parallel checks only read it
    if sub in ("line-scheme", "verify", "all"):
        pipe.system()
    report.checks = run_checks([_safe(j) for j in jobs])
    return report, text


def _parse_alpha(raw, allow_degenerate):
    from .scalars import check_generic

    if raw is None or raw == "symbolic":
        return None
    try:
        value = Fraction(raw)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad --alpha value {raw!r}") from exc
    if not allow_degenerate:
        check_generic(value)
    return value


def make_parser():
    parser = argparse.ArgumentParser(
        prog="lineschemes",
        description="Point schemes, line schemes and their geometry for quadratic algebras on four generators.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    subs = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, input_help):
        p.add_argument("input", nargs="?", type=Path, help=input_help)
        p.add_argument("--alpha", default=None, help="'symbolic' (default) or a rational value")
        p.add_argument("--allow-degenerate", action="store_true", help="accept alpha with alpha*(1-alpha^2) = 0")
        p.add_argument("--output", "-o", type=Path, help="write the JSON report here (default stdout)")
        p.add_argument("--budget", type=int, default=200_000, help="S-pair budget for Groebner runs")
        p.add_argument("--no-timings", action="store_true", help="omit timings for byte-stable reports")

    presentation = "algebra presentation file (default: the bundled A(alpha))"
    p = subs.add_parser("point-scheme", help="4x4 minors, golden match, points and sigma")
    common(p, presentation)
    p.add_argument("--golden", type=Path, help="polynomial list to compare against")
    p.add_argument("--text", type=Path, help="also write the minors as a polynomial list")

    p = subs.add_parser("line-scheme", help="Koszul dual, 45 quartics, golden match")
    common(p, presentation)
    p.add_argument("--golden", type=Path, help="polynomial list to compare against")
    p.add_argument("--text", type=Path, help="also write the polynomials as a list")

    p = subs.add_parser("verify", help="components, intersections, incidence, Jacobians, birational maps")
    common(p, presentation)

    p = subs.add_parser("groebner", help="Groebner basis and Hilbert data of a polynomial list")
    common(p, "polynomial list file with a 'vars:' line")
    p.add_argument("--order", choices=sorted(ORDERS), default="grevlex")

    p = subs.add_parser("ideal-dim", help="dim(J_2 and K_p) at the intersection points")
    common(p, presentation)
    p.add_argument("--delta", default="-1")
    p.add_argument("--epsilon", default="1")

    p = subs.add_parser("all", help="every check above in one report")
    common(p, presentation)
    return parser


def config_from_args(args):
    alpha = _parse_alpha(args.alpha, args.allow_degenerate)
    cfg = RunConfig(
        subcommand=args.subcommand,
        input=args.input,
        alpha=alpha,
        order=getattr(args, "order", "grevlex"),
        output=args.output,
        text_output=getattr(args, "text", None),
        golden=getattr(args, "golden", None),
        budget=args.budget,
        timings=not args.no_timings,
    )
    if args.subcommand == "ideal-dim":
        try:
            cfg.delta = Fraction(args.delta)
            cfg.epsilon = Fraction(args.epsilon)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
    for path in (cfg.input, cfg.golden):
        if path is not None and not Path(path).is_file():
            raise InputError(f"no such file: {path}")
    return cfg


def main(argv=None):
    parser = make_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        config = config_from_args(args)
        report, text = build_report(config)
    except (InputError, ParseError, NonGenericError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except LineSchemeError as exc:
        # errors raised while reading or preparing the input
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    out = report.to_json(config.timings)
    if config.output:
        Path(config.output).write_text(out)
    else:
        sys.stdout.write(out)
    if config.text_output and text is not None:
        Path(config.text_output).write_text(text())
    for c in report.checks:
        log.info("%s: %s", c.name, "pass" if c.passed else "FAIL")
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
