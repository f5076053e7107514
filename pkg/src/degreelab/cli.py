"""Batch front door: load models and sequences, run verdicts, emit reports.

Exit codes: 0 all verdicts pass / computation succeeded; 1 a counterexample
or violation was found (witness in the report); 2 invalid input.  Reports
are deterministic: identical invocation bytes in, identical report bytes out.
"""

from __future__ import annotations

import argparse
import math
import random
import sys
import time
from fractions import Fraction

from . import __version__
from . import corpus
from . import envelope as env_mod
from . import linalg as la
from . import model as md
from . import modelfile as mf
from . import spectral
from . import twist
from .constructions import (
    abelian_model,
    blowup_model,
    hilb2_model,
    product_model,
    random_semisimple_model,
)
from .degrees import IterateSystem, endo_degrees
from .errors import InputError, LabError

EXIT_PASS = 0
EXIT_VIOLATION = 1
EXIT_BAD_INPUT = 2


def _fmt(x):
    if isinstance(x, Fraction):
        return mf.encode_scalar(x)
    if isinstance(x, float):
        return float(f"{x:.12g}")
    return x


def make_report(command, seed=None, **sections):
    report = {
        "command": command,
        "version": __version__,
        "seed": seed,
        "verdicts": sections.pop("verdicts", {}),
        "tables": sections.pop("tables", {}),
        "witnesses": sections.pop("witnesses", []),
        "diagnostics": sections.pop("diagnostics", {}),
    }
    report.update(sections)
    return report


def render(report, fmt="json"):
    if fmt == "json":
        return mf.dump(report)
    lines = [f"{report['command']} (degreelab {report['version']})"]
    if report.get("seed") is not None:
        lines.append(f"seed: {report['seed']}")
    for key, value in sorted(report["verdicts"].items()):
        lines.append(f"{key}: {value}")
    for name, table in sorted(report["tables"].items()):
        lines.append(f"-- {name} --")
        if isinstance(table, dict):
            for k, v in table.items():
                lines.append(f"  {k:>12}  {v}")
        else:
            for row in table:
                lines.append("  " + "  ".join(str(c) for c in row))
    if report["witnesses"]:
        lines.append("-- witnesses --")
        for w in report["witnesses"]:
            lines.append(f"  {w}")
    for key, value in sorted(report["diagnostics"].items()):
        lines.append(f"{key}: {value}")
    return "\n".join(lines) + "\n"


def _emit(report, args):
    text = render(report, args.format)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- commands -----------------------------------------------------------------

def cmd_degrees(args):
    model = mf.load_model(args.input)
    name, fmap = model.pick_map(args.map)
    lambdas, chis = endo_degrees(fmap, model.numerical)
    report = make_report(
        "degrees",
        tables={
            "lambda": {f"j={j}": _fmt(v) for j, v in enumerate(lambdas)},
            "chi": {f"k={k}": _fmt(v) for k, v in enumerate(chis)},
        },
        verdicts={"map": name},
    )
    return EXIT_PASS, report


def cmd_envelope(args):
    seq = mf.load_sequence(args.input)
    if "points" in seq:
        points = seq["points"]
    elif "a" in seq:
        points = [(2 * j, v) for j, v in enumerate(seq["a"])]
    else:
        raise InputError("need 'points' or 'a'", field="a")
    env = env_mod.upper_log_envelope(points)
    report = make_report(
        "envelope",
        tables={"breakpoints": [[_fmt(x), _fmt(v)] for x, v in env.breakpoints]},
        verdicts={"zero": env.is_zero()},
    )
    return EXIT_PASS, report


def cmd_prop1(args):
    seq = mf.load_sequence(args.input)
    if "a" not in seq or "b" not in seq:
        raise InputError("prop1 needs both 'a' and 'b'", field="b")
    verdict = env_mod.prop1_verdict(seq["a"], seq["b"], placement=args.placement)
    n = len(seq["a"]) - 1
    witnesses = [f"cond1 fails at j={j}" for j in verdict.conditions.cond1_witnesses]
    witnesses += [f"cond2 fails at k={k}" + (f" (grid r={_fmt(r)})" if r is not None else "")
                  for k, r in verdict.conditions.cond2_witnesses]
    if verdict.counterexample is not None:
        witnesses.append(f"envelopes differ at x={_fmt(verdict.counterexample)}")
    report = make_report(
        "prop1",
        verdicts={"status": verdict.status,
                  "domain": f"[0, {2 * n}]"},
        tables={
            "a_breakpoints": [[_fmt(x), _fmt(v)] for x, v in verdict.a_breakpoints],
            "b_breakpoints": [[_fmt(x), _fmt(v)] for x, v in verdict.b_breakpoints],
        },
        witnesses=witnesses,
    )
    return (EXIT_PASS if verdict.status == "equal" else EXIT_VIOLATION), report


def cmd_eq1_scan(args):
    model = mf.load_model(args.input)
    name, fmap = model.pick_map(args.map)
    grid = tuple(Fraction(2) ** i for i in range(args.rmin, args.rmax + 1))
    base = model.map_attrs.get(name, {}).get("base") or model.flags.get("weil_base")
    rep = twist.eq1_scan(fmap, model.numerical, r_grid=grid, tol=args.tol, base=base)
    witnesses = [f"r={_fmt(r)} k={k}: {lhs:.6g} > {rhs:.6g}"
                 for r, k, lhs, rhs in rep.violations]
    report = make_report(
        "eq1-scan",
        verdicts={"violations": len(rep.violations), "map": name},
        tables={
            "lambda": {f"j={j}": _fmt(v) for j, v in enumerate(rep.lambdas)},
            "chi": {f"k={k}": _fmt(v) for k, v in enumerate(rep.chis)},
        },
        witnesses=witnesses,
        diagnostics={"max_log_margin": _fmt(rep.max_margin), **rep.diagnostics},
    )
    return (EXIT_VIOLATION if rep.violations else EXIT_PASS), report


def cmd_claim1(args):
    model = mf.load_model(args.input)
    name, fmap = model.pick_map(args.map)
    base_name = args.polarized or name
    _, base_map = model.pick_map(base_name)
    attrs = model.map_attrs.get(base_name, {})
    if attrs.get("base") is None:
        raise InputError(f"map {base_name!r} carries no polarization base",
                         field=f"maps.{base_name}.base")
    polar = twist.PolarizedModel(a=int(attrs["base"]), map=base_map,
                                 weil_rh=attrs.get("weil_rh", True),
                                 semisimple=attrs.get("semisimple", False),
                                 gram=attrs.get("gram"))
    sys_ = IterateSystem.power(fmap, numerical=model.numerical)
    rep = twist.claim1_check(sys_, polar, args.k, args.s, args.t)
    report = make_report(
        "claim1",
        verdicts={"k": rep.k, "s": rep.s, "t": rep.t},
        tables={"sides": {"lhs": _fmt(rep.lhs), "rhs": _fmt(rep.rhs),
                          "implied_c": _fmt(rep.implied_c)}},
        diagnostics={"sigma_min": _fmt(rep.sigma_min),
                     "h_norm": _fmt(rep.h_norm),
                     "numerical_norms": [_fmt(v) for v in rep.numerical_norms]},
    )
    return EXIT_PASS, report


def cmd_jordan(args):
    model = mf.load_model(args.input)
    names = [s.strip() for s in args.pair.split(",")]
    if len(names) != 2:
        raise InputError("--pair needs two comma-separated map names", field="pair")
    models = []
    for name in names:
        _, m = model.pick_map(name)
        attrs = model.map_attrs.get(name, {})
        if attrs.get("base") is None:
            raise InputError(f"map {name!r} carries no polarization base",
                             field=f"maps.{name}.base")
        models.append(twist.PolarizedModel(
            a=int(attrs["base"]), map=m, weil_rh=attrs.get("weil_rh", True),
            semisimple=attrs.get("semisimple", False)))
    rep = twist.jordan_compare(models[0], models[1], args.k)
    report = make_report(
        "jordan",
        verdicts={"b1": rep.b1, "b2": rep.b2, "equal": rep.equal},
        diagnostics={"theta": _fmt(rep.theta) if rep.theta else None,
                     "certificate_head": [_fmt(v) for v in rep.certificate[:12]]},
        witnesses=([] if rep.equal else
                   [f"largest Jordan sizes differ at degree {args.k}: "
                    f"{rep.b1} vs {rep.b2}"]),
    )
    return (EXIT_PASS if rep.equal else EXIT_VIOLATION), report


def cmd_kronecker(args):
    theta = Fraction(args.theta) if "/" in args.theta else float(args.theta)
    res = twist.kronecker_approx(theta, args.epsilon)
    report = make_report(
        "kronecker",
        verdicts={"s": res.s, "t": res.t, "rational": res.rational},
        diagnostics={"residual": _fmt(res.residual), "epsilon": args.epsilon},
    )
    return EXIT_PASS, report


def cmd_construct(args):
    rng = random.Random(args.seed)
    kind = args.what
    if kind == "abelian":
        polys = None
        if args.weil_poly:
            poly = [Fraction(c) for c in args.weil_poly.split(",")]
            m1 = la.companion(la.poly_monic(tuple(poly)))
        else:
            m1, polys = corpus.random_weil_frobenius(rng, args.g, args.q)
        endo = None
        if args.with_endo:
            if polys is None:
                endo = la.mat_add(la.identity(2 * args.g), m1)
            else:
                endo = corpus.random_commuting_endo(rng, polys, args.q)
        bundle = abelian_model(args.g, args.q, frobenius_h1=m1, endo_h1=endo)
    elif kind == "product":
        paths = (args.inputs or "").split(",")
        if len(paths) != 2:
            raise InputError("construct product needs --inputs A,B", field="inputs")
        bundle = product_model(_load_bundle(paths[0]), _load_bundle(paths[1]))
    elif kind == "blowup":
        paths = (args.inputs or "").split(",")
        if len(paths) != 2:
            raise InputError("construct blowup needs --inputs X,CENTER", field="inputs")
        bundle = blowup_model(_load_bundle(paths[0]), _load_bundle(paths[1]),
                              args.codim)
    elif kind == "hilb2":
        if not args.input:
            raise InputError("construct hilb2 needs --input", field="input")
        bundle = hilb2_model(_load_bundle(args.input))
    else:
        dims = tuple(int(d) for d in args.dims.split(","))
        bundle = random_semisimple_model(args.n, dims, args.base, args.seed)
    doc = mf.bundle_to_dict(bundle)
    text = mf.dump(doc, args.output)
    if not args.output:
        sys.stdout.write(text)
        return EXIT_PASS, None
    report = make_report("construct", seed=args.seed,
                         verdicts={"kind": kind, "dims": list(bundle.space.dims),
                                   "output": args.output})
    args.output = None      # model file already written; report goes to stdout
    return EXIT_PASS, report


def _load_bundle(path):
    """Rebuild a ModelBundle from a model file (Frobenius map required)."""
    from .constructions import ModelBundle
    from .twist import FrobeniusModel

    model = mf.load_model(path)
    if "frobenius" not in model.maps:
        raise InputError("bundle file needs a 'frobenius' map", field="maps")
    attrs = model.map_attrs["frobenius"]
    frob = FrobeniusModel(q=int(attrs["base"]), map=model.maps["frobenius"],
                          gram=attrs.get("gram"))
    endos = {k: v for k, v in model.maps.items() if k != "frobenius"}
    over = tuple(sorted(k for k in endos if model.map_attrs[k].get("over_fq")))
    return ModelBundle(
        space=model.space,
        numerical=model.numerical,
        frobenius=frob,
        endos=endos,
        over_fq=over,
        semisimple=model.flags.get("semisimple", False),
        conjecture_d=model.flags.get("conjectureD", True),
        provenance=model.provenance,
    ).validate()


# -- verify suites ---------------------------------------------------------------

def _verify_lieberman(seed, count, tol):
    rng = random.Random(seed)
    witnesses = []
    for i in range(count):
        space = corpus.random_space(rng)
        phi = corpus.random_correspondence(rng, space)
        psi = corpus.random_correspondence(rng, space)
        f = corpus.random_correspondence(rng, space)
        push = md.product_pushforward(phi, psi, f)
        lhs = md.correspondence_action(push)
        phi_star = md.correspondence_action(md.transpose(phi))
        f_star = md.correspondence_action(f)
        psi_star = md.correspondence_action(psi)
        for k in range(2 * space.n + 1):
            if not space.dims[k]:
                continue
            rhs = la.mat_mul(la.mat_mul(phi_star.blocks[k], f_star.blocks[k]),
                             psi_star.blocks[k])
            if not la.mat_eq(lhs.blocks[k], rhs):
                witnesses.append(f"instance {i}: pushforward identity fails at k={k}")
            if md.trace_component(phi, k) != md.class_pairing(
                    phi, md.diagonal_class(space), k):
                witnesses.append(f"instance {i}: trace identity fails at k={k}")
    return witnesses, {"instances": count}


def _verify_norms(seed, count, tol):
    rng = random.Random(seed)
    witnesses = []
    for i, (a, b) in enumerate(corpus.norm_sandwich_pairs(seed, count)):
        smin, smax = spectral.singular_extremes(a)
        nb = spectral.frobenius_norm(b)
        nab = spectral.frobenius_norm(la.mat_mul(a, b))
        if not (smin * nb <= nab * (1 + tol) and nab <= smax * nb * (1 + tol)):
            witnesses.append(f"pair {i}: sandwich fails "
                             f"({smin * nb:.6g} <= {nab:.6g} <= {smax * nb:.6g})")
    eq_count = max(count // 10, 1)
    for i in range(eq_count):
        d = rng.randint(1, 8)
        u = corpus.scaled_unitary(rng, d)
        b = corpus.random_float_matrix(rng, d)
        smin, smax = spectral.singular_extremes(u)
        nb = spectral.frobenius_norm(b)
        nab = spectral.frobenius_norm(la.mat_mul(u, b))
        sigma = 0.5 * (smin + smax)
        if abs(nab - sigma * nb) > 1e-9 * max(sigma * nb, 1.0):
            witnesses.append(f"unitary {i}: equality clause fails")
    return witnesses, {"pairs": count, "unitary": eq_count}


def _verify_yamamoto(seed, count, tol):
    rng = random.Random(seed)
    witnesses = []
    ms = [2 ** i for i in range(4, 13)]
    for i in range(count):
        m = corpus.random_float_matrix(rng, 6)
        radius = spectral.spectral_radius(m).value
        if radius < 1e-9:
            continue
        rep = spectral.yamamoto_sequence(m, ms, radius=radius)
        errs = [abs(v - radius) / radius for _, v in rep.estimates]
        if errs[-1] > 1e-2:
            witnesses.append(f"matrix {i}: final error {errs[-1]:.3g} > 1e-2")
        if any(b > a * 1.10 + 1e-12 for a, b in zip(errs, errs[1:])):
            witnesses.append(f"matrix {i}: errors not within 10% of monotone")
    return witnesses, {"matrices": count, "m_values": ms}


def _verify_prop1_suite(seed, count, tol):
    rng = random.Random(seed)
    witnesses = []
    t0 = time.perf_counter()
    for i in range(count):
        a, b = corpus.prop1_instance(rng)
        verdict = env_mod.prop1_verdict(a, b)
        if verdict.status != "equal":
            witnesses.append(f"instance {i}: status {verdict.status}")
    elapsed = time.perf_counter() - t0
    return witnesses, {"instances": count, "elapsed_s": round(elapsed, 3)}


def _verify_ddc_suite(seed, count, tol):
    witnesses = []
    models = corpus.abelian_corpus(seed, count)
    for i, bundle in enumerate(models):
        fmap = bundle.endos.get("endo", bundle.frobenius.map)
        lambdas, chis = endo_degrees(fmap, bundle.numerical)
        for k in range(bundle.space.n + 1):
            denom = max(lambdas[k], 1e-300)
            if abs(chis[2 * k] - lambdas[k]) / denom > 1e-6:
                witnesses.append(f"model {i}: chi_{2 * k} != lambda_{k}")
        for k in range(bundle.space.n):
            bound = math.sqrt(lambdas[k] * lambdas[k + 1])
            if chis[2 * k + 1] > bound * (1 + 1e-9):
                witnesses.append(f"model {i}: odd-degree bound fails at k={k}")
    return witnesses, {"models": count}


VERIFY_SUITES = {
    "lieberman": _verify_lieberman,
    "norms": _verify_norms,
    "yamamoto": _verify_yamamoto,
    "prop1-suite": _verify_prop1_suite,
    "ddc-suite": _verify_ddc_suite,
}


def cmd_verify(args):
    suite = VERIFY_SUITES[args.suite]
    witnesses, diagnostics = suite(args.seed, args.count, args.tol)
    report = make_report(
        "verify",
        seed=args.seed,
        verdicts={"suite": args.suite,
                  "status": "pass" if not witnesses else "fail",
                  "failures": len(witnesses)},
        witnesses=witnesses[:50],
        diagnostics=diagnostics,
    )
    return (EXIT_PASS if not witnesses else EXIT_VIOLATION), report


# -- parser ------------------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(
        prog="lab",
        description="Exact verification lab for graded correspondence models.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, input_required=True):
        if input_required:
            p.add_argument("--input", required=True, help="model or sequence file")
        p.add_argument("--tmax", type=int, default=None)
        p.add_argument("--tol", type=float, default=1e-9)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--format", choices=("json", "table"), default="json")
        p.add_argument("--output", default=None)

    p = sub.add_parser("degrees", help="dynamical degree tables for a model")
    common(p)
    p.add_argument("--map", default=None)
    p.set_defaults(func=cmd_degrees)

    p = sub.add_parser("envelope", help="log-concave envelope of a sequence")
    common(p)
    p.set_defaults(func=cmd_envelope)

    p = sub.add_parser("prop1", help="envelope-equality verdict for (a, b)")
    common(p)
    p.add_argument("--placement", choices=("double", "literal"), default="double")
    p.set_defaults(func=cmd_prop1)

    p = sub.add_parser("eq1-scan", help="scan r^k chi_k <= max r^(2j) lambda_j")
    common(p)
    p.add_argument("--map", default=None)
    p.add_argument("--rmin", type=int, default=-10)
    p.add_argument("--rmax", type=int, default=10)
    p.set_defaults(func=cmd_eq1_scan)

    p = sub.add_parser("claim1", help="twisted norm inequality instance")
    common(p)
    p.add_argument("--map", default=None)
    p.add_argument("--polarized", default=None)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--t", type=int, default=1)
    p.set_defaults(func=cmd_claim1)

    p = sub.add_parser("jordan", help="largest dominant Jordan sizes of two maps")
    common(p)
    p.add_argument("--pair", required=True, help="two map names, comma separated")
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_jordan)

    p = sub.add_parser("kronecker", help="integer pair with |theta s + t| < eps")
    common(p, input_required=False)
    p.add_argument("--theta", required=True)
    p.add_argument("--epsilon", type=float, required=True)
    p.set_defaults(func=cmd_kronecker)

    p = sub.add_parser("construct", help="build a model bundle file")
    p.add_argument("what", choices=("abelian", "product", "blowup", "hilb2", "random"))
    common(p, input_required=False)
    p.add_argument("--input", default=None)
    p.add_argument("--inputs", default=None)
    p.add_argument("--g", type=int, default=1)
    p.add_argument("--q", type=int, default=3)
    p.add_argument("--weil-poly", default=None)
    p.add_argument("--with-endo", action="store_true")
    p.add_argument("--codim", type=int, default=1)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--dims", default="1,2,1")
    p.add_argument("--base", type=int, default=4)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="seeded verification suites")
    p.add_argument("suite", choices=sorted(VERIFY_SUITES))
    common(p, input_required=False)
    p.add_argument("--count", type=int, default=100)
    p.set_defaults(func=cmd_verify)

    return parser


def run(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code, report = args.func(args)
    except InputError as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return EXIT_BAD_INPUT, None
    except LabError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_BAD_INPUT, None
    if report is not None:
        _emit(report, args)
    return code, report


def main(argv=None):
    code, _ = run(argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
